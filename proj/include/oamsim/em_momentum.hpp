// Copyright The oamsim Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef OAMSIM_EM_MOMENTUM_HPP
#define OAMSIM_EM_MOMENTUM_HPP

#include "oamsim/array_model.hpp"
#include "oamsim/core.hpp"
#include "oamsim/field_engine.hpp"
#include "oamsim/quadrature.hpp"
#include "oamsim/radiators.hpp"

#include <array>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

// All quantities in this header are time averages over one period of the phasor fields,
// i.e. <a(t) b(t)> = 1/2 Re(a conj(b)). Terms that are total time derivatives average to zero,
// so the force on enclosed sources reduces to the stress-tensor surface integral.

namespace oamsim
{

/// <S> = 1/2 Re(E x conj(H)), W/m^2.
inline Vec3 poynting_avg(const ComplexVec3 &E, const ComplexVec3 &H) { return 0.5 * real(cross(E, conj(H))); }

/// <g> = 1/2 eps0 Re(E x conj(B)), kg m^-2 s^-1.
inline Vec3 momentum_density(const ComplexVec3 &E, const ComplexVec3 &B)
{
    return (0.5 * constants::eps0) * real(cross(E, conj(B)));
}

/// (r - origin) x g.
inline Vec3 angular_momentum_density(const Position3 &r, const Vec3 &g, const Position3 &origin = {})
{
    return cross(r - origin, g);
}

struct StressTensor
{
    std::array<std::array<double, 3>, 3> t{};

    double operator()(int i, int j) const { return t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
    double trace() const { return t[0][0] + t[1][1] + t[2][2]; }
    // T . n
    Vec3 apply(const Vec3 &n) const
    {
        return {t[0][0] * n.x + t[0][1] * n.y + t[0][2] * n.z, t[1][0] * n.x + t[1][1] * n.y + t[1][2] * n.z,
                t[2][0] * n.x + t[2][1] * n.y + t[2][2] * n.z};
    }
};

/// Time-averaged Maxwell stress tensor, N/m^2:
///   T_ij = 1/2 Re[eps0 (E_i E_j* - d_ij |E|^2 / 2) + (B_i B_j* - d_ij |B|^2 / 2) / mu0]
inline StressTensor maxwell_stress_avg(const ComplexVec3 &E, const ComplexVec3 &B)
{
    const std::array<cplx, 3> e{E.x, E.y, E.z};
    const std::array<cplx, 3> b{B.x, B.y, B.z};
    const double e2 = norm_sq(E);
    const double b2 = norm_sq(B);
    StressTensor T;
    for (std::size_t i = 0; i < 3; ++i)
    {
        for (std::size_t j = i; j < 3; ++j)
        {
            const double ee = e[i].real() * e[j].real() + e[i].imag() * e[j].imag();
            const double bb = b[i].real() * b[j].real() + b[i].imag() * b[j].imag();
            double v = constants::eps0 * ee + bb / constants::mu0;
            if (i == j)
                v -= 0.5 * (constants::eps0 * e2 + b2 / constants::mu0);
            T.t[i][j] = T.t[j][i] = 0.5 * v;
        }
    }
    return T;
}

/// Time-averaged energy density 1/4 (eps0 |E|^2 + |B|^2 / mu0), J/m^3.
inline double energy_density_avg(const ComplexVec3 &E, const ComplexVec3 &B)
{
    return 0.25 * (constants::eps0 * norm_sq(E) + norm_sq(B) / constants::mu0);
}

// ------------------------------------------------------------------------
// Closed surfaces

struct ClosedSurface
{
    std::vector<Position3> points;
    std::vector<Vec3> normals; // outward, unit
    std::vector<double> weights; // area, m^2

    double total_area() const
    {
        double a = 0.0;
        for (double w : weights)
            a += w;
        return a;
    }

    // |sum_k n_k w_k|, zero for an exactly closed surface.
    double closure_error() const
    {
        Vec3 s{};
        for (std::size_t k = 0; k < points.size(); ++k)
            s += normals[k] * weights[k];
        return norm(s);
    }

    void validate() const
    {
        if (points.empty() || points.size() != normals.size() || points.size() != weights.size())
            throw Error(ErrorKind::invalid_spec, "surface arrays are empty or inconsistent");
        if (closure_error() > 1e-8 * total_area())
            throw Error(ErrorKind::invalid_spec, "surface is not closed");
    }
};

/// Sphere: Gauss-Legendre in cos(theta), uniform in phi.
inline ClosedSurface make_sphere(const Position3 &center, double radius, int n_theta, int n_phi)
{
    if (!(radius > 0.0) || n_theta < 1 || n_phi < 3)
        throw Error(ErrorKind::invalid_spec, "sphere needs radius > 0, n_theta >= 1, n_phi >= 3");
    const QuadratureRule gl = gauss_legendre(n_theta);
    ClosedSurface s;
    const double dphi = two_pi / n_phi;
    for (int i = 0; i < n_theta; ++i)
    {
        const double ct = gl.nodes[static_cast<std::size_t>(i)];
        const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        for (int j = 0; j < n_phi; ++j)
        {
            const double ph = dphi * j;
            const Vec3 n{st * std::cos(ph), st * std::sin(ph), ct};
            s.points.push_back(center + radius * n);
            s.normals.push_back(n);
            s.weights.push_back(radius * radius * gl.weights[static_cast<std::size_t>(i)] * dphi);
        }
    }
    return s;
}

/// Axis-aligned box, midpoint rule with n x n cells per face.
inline ClosedSurface make_box(const Position3 &center, const Vec3 &half, int n)
{
    if (!(half.x > 0.0 && half.y > 0.0 && half.z > 0.0) || n < 1)
        throw Error(ErrorKind::invalid_spec, "box needs positive half-sizes and n >= 1");
    ClosedSurface s;
    const std::array<double, 3> h{half.x, half.y, half.z};
    for (int axis = 0; axis < 3; ++axis)
    {
        const int a1 = (axis + 1) % 3;
        const int a2 = (axis + 2) % 3;
        const double d1 = 2.0 * h[static_cast<std::size_t>(a1)] / n;
        const double d2 = 2.0 * h[static_cast<std::size_t>(a2)] / n;
        for (int sign : {-1, 1})
        {
            for (int i = 0; i < n; ++i)
            {
                for (int j = 0; j < n; ++j)
                {
                    std::array<double, 3> p{};
                    std::array<double, 3> nv{};
                    p[static_cast<std::size_t>(axis)] = sign * h[static_cast<std::size_t>(axis)];
                    p[static_cast<std::size_t>(a1)] = -h[static_cast<std::size_t>(a1)] + (i + 0.5) * d1;
                    p[static_cast<std::size_t>(a2)] = -h[static_cast<std::size_t>(a2)] + (j + 0.5) * d2;
                    nv[static_cast<std::size_t>(axis)] = sign;
                    s.points.push_back(center + Vec3{p[0], p[1], p[2]});
                    s.normals.push_back({nv[0], nv[1], nv[2]});
                    s.weights.push_back(d1 * d2);
                }
            }
        }
    }
    return s;
}

/// Hemispherical cap over z > center.z closed by a flat disk at z = center.z (normal -z).
inline ClosedSurface make_capped_disk(const Position3 &center, double radius, int n_radial, int n_phi)
{
    if (!(radius > 0.0) || n_radial < 1 || n_phi < 3)
        throw Error(ErrorKind::invalid_spec, "capped disk needs radius > 0, n_radial >= 1, n_phi >= 3");
    ClosedSurface s;
    const double dphi = two_pi / n_phi;
    const QuadratureRule rr = gauss_legendre(n_radial, 0.0, radius);
    const QuadratureRule cu = gauss_legendre(n_radial, 0.0, 1.0);
    for (int i = 0; i < n_radial; ++i)
    {
        const double rho = rr.nodes[static_cast<std::size_t>(i)];
        const double ct = cu.nodes[static_cast<std::size_t>(i)];
        const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        for (int j = 0; j < n_phi; ++j)
        {
            const double ph = dphi * j;
            s.points.push_back(center + Vec3{rho * std::cos(ph), rho * std::sin(ph), 0.0});
            s.normals.push_back({0.0, 0.0, -1.0});
            s.weights.push_back(rho * rr.weights[static_cast<std::size_t>(i)] * dphi);

            const Vec3 n{st * std::cos(ph), st * std::sin(ph), ct};
            s.points.push_back(center + radius * n);
            s.normals.push_back(n);
            s.weights.push_back(radius * radius * cu.weights[static_cast<std::size_t>(i)] * dphi);
        }
    }
    return s;
}

struct FieldSample
{
    ComplexVec3 E; // V/m
    ComplexVec3 B; // T
};

using FieldSampler = std::function<FieldSample(const Position3 &)>;

/// Time-averaged force on whatever the surface encloses: sum_k (T . n_k) w_k, Newtons.
inline Vec3 surface_force(const FieldSampler &sampler, const ClosedSurface &surface)
{
    surface.validate();
    Vec3 force{};
    for (std::size_t k = 0; k < surface.points.size(); ++k)
    {
        FieldSample f;
        try
        {
            f = sampler(surface.points[k]);
        }
        catch (const Error &e)
        {
            if (e.kind() != ErrorKind::singularity)
                throw;
            const Position3 &p = surface.points[k];
            char buf[160];
            std::snprintf(buf, sizeof buf, "field singular at surface sample %zu (%.6g, %.6g, %.6g)", k, p.x, p.y, p.z);
            throw Error(ErrorKind::singularity, buf);
        }
        if (!is_finite(f.E) || !is_finite(f.B))
        {
            throw Error(ErrorKind::singularity, "non-finite field at surface sample " + std::to_string(k));
        }
        force += maxwell_stress_avg(f.E, f.B).apply(surface.normals[k]) * surface.weights[k];
    }
    return force;
}

// ------------------------------------------------------------------------
// Angular momentum carried by an array's radiation

struct FarSphereSpec
{
    std::optional<double> radius; // m; default 100 wavelengths
    int n_theta = 128;
    int n_phi = 256;
};

struct OamFlux
{
    double power = 0.0;        // W, outward
    double angular_flux = 0.0; // N m, outward rate of L_z
    double ratio = 0.0;        // omega * angular_flux / power
};

/// Outward power and axial angular-momentum flux through a far sphere centered at the origin.
/// The angular flux is -sum (r x (T . n))_z dA; the ratio omega * L_z' / P is the mean charge.
inline OamFlux oam_flux(const ArrayLayout &layout, const RadiatorModel &model, const Wave &wave,
                        const FarSphereSpec &sphere = {})
{
    if (!is_vectorial(model))
        throw Error(ErrorKind::unsupported_model, "angular-momentum flux needs a vector (dipole) radiator model");
    validate(std::get<Dipole>(model), wave);
    if (const auto l = layout.mode(); l && static_cast<int>(layout.size()) < min_elements(*l))
        throw Error(ErrorKind::invalid_spec, "layout has fewer than 2|l|+1 elements");
    const double R = sphere.radius.value_or(100.0 * wave.wavelength());
    if (R < 100.0 * wave.wavelength() * (1.0 - 1e-12))
        throw Error(ErrorKind::invalid_spec, "far sphere radius must be >= 100 wavelengths");

    const ClosedSurface s = make_sphere({}, R, sphere.n_theta, sphere.n_phi);
    OamFlux out;
    for (std::size_t k = 0; k < s.points.size(); ++k)
    {
        const NodeField f = field_at(layout, model, s.points[k], wave);
        if (!f.valid)
            throw Error(ErrorKind::singularity, "far sphere touches a radiator");
        const ComplexVec3 B = f.H * cplx(constants::mu0);
        out.power += dot(poynting_avg(f.E, f.H), s.normals[k]) * s.weights[k];
        const Vec3 tn = maxwell_stress_avg(f.E, B).apply(s.normals[k]);
        out.angular_flux -= cross(s.points[k], tn).z * s.weights[k];
    }
    out.ratio = wave.omega() * out.angular_flux / out.power;
    return out;
}

inline double oam_flux_ratio(const ArrayLayout &layout, const RadiatorModel &model, const Wave &wave,
                             const FarSphereSpec &sphere = {})
{
    return oam_flux(layout, model, wave, sphere).ratio;
}

} // namespace oamsim

#endif
