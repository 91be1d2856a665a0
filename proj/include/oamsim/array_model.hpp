// Copyright The oamsim Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef OAMSIM_ARRAY_MODEL_HPP
#define OAMSIM_ARRAY_MODEL_HPP

#include "oamsim/core.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

namespace oamsim
{

// Drive of one element. The phase is kept in (-pi, pi].
class Excitation
{
public:
    Excitation() = default;
    Excitation(double amplitude, double phase) : amplitude_(amplitude), phase_(wrap_phase(phase))
    {
        if (!std::isfinite(amplitude) || amplitude < 0.0)
            throw Error(ErrorKind::invalid_spec, "excitation amplitude must be finite and >= 0");
        if (!std::isfinite(phase))
            throw Error(ErrorKind::invalid_spec, "excitation phase must be finite");
    }

    double amplitude() const noexcept { return amplitude_; }
    double phase() const noexcept { return phase_; }
    cplx phasor() const { return std::polar(amplitude_, phase_); }

private:
    double amplitude_ = 1.0;
    double phase_ = 0.0;
};

struct ArrayElement
{
    Position3 position;
    Excitation excitation;
};

struct UcaSpec
{
    int count = 1;          // N
    double radius = 0.0;    // a, meters
    int mode = 0;           // l
    Position3 center{};
    Vec3 normal{0.0, 0.0, 1.0};
};

enum class Placement
{
    regular,
    irregular,
};

struct SmartphoneSpec
{
    double width = 0.075;  // m
    double height = 0.150; // m
    Placement placement = Placement::regular;
    int mode = 1;
    static constexpr int element_count = 4;
};

class ArrayLayout
{
public:
    ArrayLayout(std::vector<ArrayElement> elements, std::optional<int> mode = std::nullopt)
        : elements_(std::move(elements)), mode_(mode)
    {
        if (elements_.empty())
            throw Error(ErrorKind::invalid_spec, "layout needs at least one element");
        for (std::size_t i = 0; i < elements_.size(); ++i)
        {
            if (!is_finite(elements_[i].position))
                throw Error(ErrorKind::invalid_spec, "element " + std::to_string(i) + " has a non-finite position");
            for (std::size_t j = 0; j < i; ++j)
                if (elements_[i].position == elements_[j].position)
                    throw Error(ErrorKind::invalid_spec, "elements " + std::to_string(j) + " and " +
                                                             std::to_string(i) + " share a position");
        }
    }

    const std::vector<ArrayElement> &elements() const noexcept { return elements_; }
    std::size_t size() const noexcept { return elements_.size(); }
    const ArrayElement &operator[](std::size_t i) const { return elements_[i]; }
    std::optional<int> mode() const noexcept { return mode_; }

    // Returns a copy with every amplitude multiplied by `s`.
    ArrayLayout scaled(double s) const
    {
        auto e = elements_;
        for (auto &el : e)
            el.excitation = Excitation(el.excitation.amplitude() * s, el.excitation.phase());
        return ArrayLayout(std::move(e), mode_);
    }

private:
    std::vector<ArrayElement> elements_;
    std::optional<int> mode_;
};

namespace detail
{
// Orthonormal in-plane basis (u, v) with u x v = n. For n = +z this is exactly (x, y).
inline std::pair<Vec3, Vec3> plane_basis(const Vec3 &normal)
{
    const Vec3 n = normalized(normal);
    const Vec3 ref = std::abs(n.x) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
    const Vec3 u = normalized(ref - n * dot(ref, n));
    const Vec3 v = cross(n, u);
    return {u, v};
}

// Phase -2*pi*l*n/N reduced through integer arithmetic, so aliased modes get bit-identical phases.
inline double uca_phase(int mode, int index, int count)
{
    const long long q = (-static_cast<long long>(mode) * index) % count;
    const long long k = q < 0 ? q + count : q;
    return wrap_phase(two_pi * static_cast<double>(k) / count);
}
} // namespace detail

/// Uniform circular array fed with the OAM progression: element n sits at azimuth
/// 2*pi*n/N (element 0 on the local +x axis) and carries phase -l * 2*pi*n/N.
inline ArrayLayout build_uca(const UcaSpec &spec)
{
    if (spec.count < 1)
        throw Error(ErrorKind::invalid_spec, "UCA element count must be >= 1");
    if (!(spec.radius > 0.0) || !std::isfinite(spec.radius))
        throw Error(ErrorKind::invalid_spec, "UCA radius must be > 0");
    if (!is_finite(spec.center))
        throw Error(ErrorKind::invalid_spec, "UCA center must be finite");

    const auto [u, v] = detail::plane_basis(spec.normal);
    std::vector<ArrayElement> elements;
    elements.reserve(static_cast<std::size_t>(spec.count));
    for (int n = 0; n < spec.count; ++n)
    {
        const double az = two_pi * n / spec.count;
        const Position3 p = spec.center + spec.radius * (std::cos(az) * u + std::sin(az) * v);
        elements.push_back({p, Excitation(1.0, detail::uca_phase(spec.mode, n, spec.count))});
    }
    return ArrayLayout(std::move(elements), spec.mode);
}

/// Four-element handset array on the large face (z = 0, centered at the origin, height along y).
/// Regular: corners of a width x width square. Irregular: midpoints of the four face edges.
/// Elements are ordered counterclockwise by azimuth and fed with the mode-l progression.
inline ArrayLayout build_smartphone_layout(const SmartphoneSpec &spec)
{
    if (!(spec.width > 0.0) || !(spec.height > 0.0))
        throw Error(ErrorKind::invalid_spec, "handset dimensions must be positive");
    if (!(spec.width < spec.height))
        throw Error(ErrorKind::invalid_spec, "handset width must be smaller than its height");

    const double hw = 0.5 * spec.width;
    const double hh = 0.5 * spec.height;
    std::vector<Position3> pts;
    if (spec.placement == Placement::regular)
        pts = {{hw, hw, 0.0}, {-hw, hw, 0.0}, {-hw, -hw, 0.0}, {hw, -hw, 0.0}};
    else
        pts = {{hw, 0.0, 0.0}, {0.0, hh, 0.0}, {-hw, 0.0, 0.0}, {0.0, -hh, 0.0}};

    // Counterclockwise from azimuth 0, measured about the face center.
    std::stable_sort(pts.begin(), pts.end(), [](const Position3 &a, const Position3 &b) {
        auto az = [](const Position3 &p) {
            const double t = std::atan2(p.y, p.x);
            return t < 0.0 ? t + two_pi : t;
        };
        return az(a) < az(b);
    });

    constexpr int n = SmartphoneSpec::element_count;
    std::vector<ArrayElement> elements;
    for (int i = 0; i < n; ++i)
        elements.push_back({pts[static_cast<std::size_t>(i)], Excitation(1.0, detail::uca_phase(spec.mode, i, n))});
    return ArrayLayout(std::move(elements), spec.mode);
}

/// Minimum element count of a circular array that can radiate mode l: 2|l| + 1.
constexpr int min_elements(int mode) { return 2 * (mode < 0 ? -mode : mode) + 1; }

} // namespace oamsim

#endif
