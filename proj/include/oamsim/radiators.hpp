// Copyright The oamsim Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef OAMSIM_RADIATORS_HPP
#define OAMSIM_RADIATORS_HPP

#include "oamsim/array_model.hpp"
#include "oamsim/core.hpp"

#include <string>
#include <utility>
#include <variant>

namespace oamsim
{

// Monochromatic wave in vacuum. Time dependence exp(+i w t); outgoing waves exp(-i k R).
class Wave
{
public:
    explicit Wave(double frequency) : frequency_(frequency)
    {
        if (!(frequency > 0.0) || !std::isfinite(frequency))
            throw Error(ErrorKind::invalid_spec, "frequency must be > 0");
    }

    double frequency() const noexcept { return frequency_; }
    double wavelength() const noexcept { return constants::c0 / frequency_; }
    double wavenumber() const noexcept { return two_pi / wavelength(); }
    double omega() const noexcept { return two_pi * frequency_; }

private:
    double frequency_;
};

struct PointSource
{
};

// Center-fed thin dipole of half-length h with sinusoidal current, unit feed current.
struct Dipole
{
    double half_length = 0.0;  // m
    Vec3 axis{0.0, 0.0, 1.0};  // unit vector
    double max_half_length_wavelengths = 10.0;
};

using RadiatorModel = std::variant<PointSource, Dipole>;

inline bool is_vectorial(const RadiatorModel &model) { return std::holds_alternative<Dipole>(model); }

inline std::string describe(const RadiatorModel &model)
{
    if (const auto *d = std::get_if<Dipole>(&model))
        return "dipole(h=" + std::to_string(d->half_length) + ")";
    return "point-source";
}

// Observation closer than this many wavelengths to a source counts as coincident.
inline constexpr double singular_distance_wavelengths = 1e-9;

inline void validate(const Dipole &d, const Wave &wave)
{
    if (!(d.half_length > 0.0) || !std::isfinite(d.half_length))
        throw Error(ErrorKind::invalid_spec, "dipole half-length must be > 0");
    if (!(d.half_length < d.max_half_length_wavelengths * wave.wavelength()))
        throw Error(ErrorKind::invalid_spec, "dipole half-length exceeds the configured bound");
    if (!is_finite(d.axis) || !(norm(d.axis) > 0.0))
        throw Error(ErrorKind::invalid_spec, "dipole axis must be a nonzero vector");
    // Unit feed current needs sin(kh) != 0 (no antiresonant lengths).
    if (std::abs(std::sin(wave.wavenumber() * d.half_length)) < 1e-9)
        throw Error(ErrorKind::invalid_spec, "dipole half-length is a multiple of half a wavelength");
}

/// Scalar kernel exp(-ikR)/R between two points.
inline cplx green(const Position3 &from, const Position3 &to, const Wave &wave)
{
    const double R = norm(to - from);
    if (!(R > singular_distance_wavelengths * wave.wavelength()))
        throw Error(ErrorKind::singularity, "observation point coincides with a source");
    return std::polar(1.0 / R, -wave.wavenumber() * R);
}

/// Field of an isotropic point source: a e^{i psi} e^{-ikR} / R.
inline cplx eval_point_source(const ArrayElement &element, const Position3 &obs, const Wave &wave)
{
    return element.excitation.phasor() * green(element.position, obs, wave);
}

struct EHField
{
    ComplexVec3 E; // V/m
    ComplexVec3 H; // A/m
};

/// Exact field of a sinusoidal-current dipole, written as three spherical waves from the two
/// tips and the feed point. Unit feed current, scaled by the element excitation.
inline EHField eval_dipole_field(const Dipole &dipole, const ArrayElement &element, const Position3 &obs,
                                 const Wave &wave)
{
    const double k = wave.wavenumber();
    const double h = dipole.half_length;
    const Vec3 w = normalized(dipole.axis);
    const Vec3 d = obs - element.position;
    const double z = dot(d, w);
    const Vec3 rho_vec = d - z * w;
    const double rho = norm(rho_vec);
    const double tol = singular_distance_wavelengths * wave.wavelength();
    if (rho <= tol && std::abs(z) <= h + tol)
        throw Error(ErrorKind::singularity, "observation point lies on the dipole segment");

    const double R1 = std::sqrt(rho * rho + (z - h) * (z - h));
    const double R2 = std::sqrt(rho * rho + (z + h) * (z + h));
    const double r = std::sqrt(rho * rho + z * z);
    const cplx e1 = std::polar(1.0, -k * R1);
    const cplx e2 = std::polar(1.0, -k * R2);
    const cplx e0 = std::polar(1.0, -k * r);
    const double ckh = std::cos(k * h);
    const double Im = 1.0 / std::sin(k * h);
    const cplx j(0.0, 1.0);
    const double eta = constants::eta0;

    const cplx Ez = -j * eta * Im / (4.0 * pi) * (e1 / R1 + e2 / R2 - 2.0 * ckh * e0 / r);

    ComplexVec3 E = to_complex(w) * Ez;
    ComplexVec3 H{};
    // On the axis beyond the tips the transverse parts vanish by symmetry.
    if (rho > 1e-7 * wave.wavelength())
    {
        const Vec3 rho_hat = rho_vec * (1.0 / rho);
        const Vec3 phi_hat = cross(w, rho_hat);
        const cplx Erho =
            j * eta * Im / (4.0 * pi * rho) * ((z - h) * e1 / R1 + (z + h) * e2 / R2 - 2.0 * z * ckh * e0 / r);
        const cplx Hphi = j * Im / (4.0 * pi * rho) * (e1 + e2 - 2.0 * ckh * e0);
        E += to_complex(rho_hat) * Erho;
        H = to_complex(phi_hat) * Hphi;
    }
    const cplx drive = element.excitation.phasor();
    return {E * drive, H * drive};
}

/// Normalized far-zone pattern [cos(kh cos t) - cos(kh)] / sin t, zero on the axis.
inline double dipole_far_pattern(double half_length, double theta, const Wave &wave)
{
    const double s = std::sin(theta);
    if (std::abs(s) < 1e-12)
        return 0.0;
    const double kh = wave.wavenumber() * half_length;
    return (std::cos(kh * std::cos(theta)) - std::cos(kh)) / s;
}

} // namespace oamsim

#endif
