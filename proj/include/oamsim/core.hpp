// Copyright The oamsim Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef OAMSIM_CORE_HPP
#define OAMSIM_CORE_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace oamsim
{

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Vacuum constants. eps0 is derived from mu0 and c so that eps0 * mu0 * c^2 == 1
// holds to rounding; the momentum identities rely on it.
namespace constants
{
inline constexpr double c0 = 299792458.0;        // m/s
inline constexpr double mu0 = 4.0e-7 * std::numbers::pi; // H/m
inline constexpr double eps0 = 1.0 / (mu0 * c0 * c0);     // F/m
inline constexpr double eta0 = mu0 * c0;                   // Ohm
} // namespace constants

// ------------------------------------------------------------------------
// Errors

enum class ErrorKind
{
    invalid_spec,
    singularity,
    not_found,
    aliasing,
    undefined_phase,
    unsupported_model,
    degenerate_mode,
};

inline const char *to_string(ErrorKind kind)
{
    switch (kind)
    {
    case ErrorKind::invalid_spec:
        return "invalid-spec";
    case ErrorKind::singularity:
        return "singularity";
    case ErrorKind::not_found:
        return "not-found";
    case ErrorKind::aliasing:
        return "aliasing";
    case ErrorKind::undefined_phase:
        return "undefined-phase";
    case ErrorKind::unsupported_model:
        return "unsupported-model";
    case ErrorKind::degenerate_mode:
        return "degenerate-mode";
    }
    return "unknown";
}

class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// ------------------------------------------------------------------------
// Real 3-vectors

struct Vec3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 &operator+=(const Vec3 &o)
    {
        x += o.x, y += o.y, z += o.z;
        return *this;
    }
    constexpr Vec3 &operator-=(const Vec3 &o)
    {
        x -= o.x, y -= o.y, z -= o.z;
        return *this;
    }
    constexpr Vec3 &operator*=(double s)
    {
        x *= s, y *= s, z *= s;
        return *this;
    }

    friend constexpr Vec3 operator+(Vec3 a, const Vec3 &b) { return a += b; }
    friend constexpr Vec3 operator-(Vec3 a, const Vec3 &b) { return a -= b; }
    friend constexpr Vec3 operator-(const Vec3 &a) { return {-a.x, -a.y, -a.z}; }
    friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
    friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
    friend constexpr bool operator==(const Vec3 &, const Vec3 &) = default;
};

// Positions share the representation; the alias documents intent (meters).
using Position3 = Vec3;

constexpr double dot(const Vec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3 &a, const Vec3 &b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3 &a) { return std::sqrt(dot(a, a)); }

inline bool is_finite(const Vec3 &a)
{
    return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

inline Vec3 normalized(const Vec3 &a)
{
    const double n = norm(a);
    if (!(n > 0.0) || !std::isfinite(n))
        throw Error(ErrorKind::invalid_spec, "cannot normalize a zero or non-finite vector");
    return a * (1.0 / n);
}

// ------------------------------------------------------------------------
// Complex 3-vectors (field phasors)

struct ComplexVec3
{
    cplx x{};
    cplx y{};
    cplx z{};

    ComplexVec3 &operator+=(const ComplexVec3 &o)
    {
        x += o.x, y += o.y, z += o.z;
        return *this;
    }
    ComplexVec3 &operator*=(cplx s)
    {
        x *= s, y *= s, z *= s;
        return *this;
    }

    friend ComplexVec3 operator+(ComplexVec3 a, const ComplexVec3 &b) { return a += b; }
    friend ComplexVec3 operator-(const ComplexVec3 &a, const ComplexVec3 &b)
    {
        return {a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend ComplexVec3 operator*(ComplexVec3 a, cplx s) { return a *= s; }
    friend ComplexVec3 operator*(cplx s, ComplexVec3 a) { return a *= s; }
};

inline ComplexVec3 to_complex(const Vec3 &v) { return {v.x, v.y, v.z}; }

inline ComplexVec3 conj(const ComplexVec3 &a) { return {std::conj(a.x), std::conj(a.y), std::conj(a.z)}; }

inline ComplexVec3 cross(const ComplexVec3 &a, const ComplexVec3 &b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// Bilinear (no conjugation) dot product.
inline cplx dot(const ComplexVec3 &a, const ComplexVec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline cplx dot(const ComplexVec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 real(const ComplexVec3 &a) { return {a.x.real(), a.y.real(), a.z.real()}; }

inline double norm_sq(const ComplexVec3 &a) { return std::norm(a.x) + std::norm(a.y) + std::norm(a.z); }

inline double norm(const ComplexVec3 &a) { return std::sqrt(norm_sq(a)); }

inline bool is_finite(const ComplexVec3 &a)
{
    return std::isfinite(a.x.real()) && std::isfinite(a.x.imag()) && std::isfinite(a.y.real()) &&
           std::isfinite(a.y.imag()) && std::isfinite(a.z.real()) && std::isfinite(a.z.imag());
}

// ------------------------------------------------------------------------
// Angles

// Maps any finite angle into (-pi, pi].
inline double wrap_phase(double phase)
{
    double p = std::remainder(phase, two_pi);
    if (p <= -pi)
        p += two_pi;
    return p;
}

// arg() with the branch cut placed so that the result lies in (-pi, pi].
inline double phase_of(cplx v)
{
    const double p = std::arg(v);
    return p <= -pi ? p + two_pi : p;
}

} // namespace oamsim

#endif
