// Copyright The oamsim Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef OAMSIM_FIELD_ENGINE_HPP
#define OAMSIM_FIELD_ENGINE_HPP

#include "oamsim/array_model.hpp"
#include "oamsim/core.hpp"
#include "oamsim/radiators.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace oamsim
{

struct Cylindrical
{
    double r = 0.0;
    double phi = 0.0;
    double z = 0.0;
};

inline Position3 to_cartesian(const Cylindrical &c) { return {c.r * std::cos(c.phi), c.r * std::sin(c.phi), c.z}; }

/// Element-to-observer distance in the ring form
///   R = sqrt(a^2 + r^2 - 2 a r cos(phi - phi_n) + (z - z_n)^2),
/// with a and phi_n taken from the element position. The cosine term is evaluated as
/// (a - r)^2 + 4 a r sin^2((phi - phi_n)/2), which is the same expression without the
/// cancellation near coincidence.
inline double compute_range(const Position3 &element, const Cylindrical &obs)
{
    const double a = std::hypot(element.x, element.y);
    const double phi_n = std::atan2(element.y, element.x);
    const double s = std::sin(0.5 * (obs.phi - phi_n));
    const double dz = obs.z - element.z;
    return std::sqrt((a - obs.r) * (a - obs.r) + 4.0 * a * obs.r * s * s + dz * dz);
}

// Square observation plane normal to z, centered on the z axis.
struct PlaneGrid
{
    double z = 0.0;
    double half_extent = 0.0;
    int samples = 2;

    void validate() const
    {
        if (!(half_extent > 0.0) || !std::isfinite(half_extent) || !std::isfinite(z))
            throw Error(ErrorKind::invalid_spec, "plane half-extent must be > 0");
        if (samples < 2)
            throw Error(ErrorKind::invalid_spec, "plane needs at least 2 samples per axis");
    }
    double coordinate(int i) const { return -half_extent + 2.0 * half_extent * i / (samples - 1); }
    double spacing() const { return 2.0 * half_extent / (samples - 1); }
    std::size_t node_count() const { return static_cast<std::size_t>(samples) * static_cast<std::size_t>(samples); }
    // Row-major from minimum y.
    Position3 node(std::size_t idx) const
    {
        const int n = samples;
        return {coordinate(static_cast<int>(idx % n)), coordinate(static_cast<int>(idx / n)), z};
    }
};

// Coaxial ring of M samples at theta_m = 2 pi m / M.
struct RingProbe
{
    double radius = 0.0;
    double z = 0.0;
    int samples = 2;

    void validate() const
    {
        if (!(radius > 0.0) || !std::isfinite(radius) || !std::isfinite(z))
            throw Error(ErrorKind::invalid_spec, "ring radius must be > 0");
        if (samples < 2)
            throw Error(ErrorKind::invalid_spec, "ring needs at least 2 samples");
    }
    double angle(int m) const { return two_pi * m / samples; }
    Position3 node(int m) const { return to_cartesian({radius, angle(m), z}); }
};

struct NodeField
{
    cplx scalar{};   // point-source value, or E projected on the dipole axis
    ComplexVec3 E{};
    ComplexVec3 H{};
    bool valid = true;
};

/// Sum of all element fields at one point, in element-index order.
inline NodeField field_at(const ArrayLayout &layout, const RadiatorModel &model, const Position3 &obs,
                          const Wave &wave)
{
    NodeField out;
    try
    {
        if (const auto *d = std::get_if<Dipole>(&model))
        {
            const Vec3 axis = normalized(d->axis);
            for (const auto &el : layout.elements())
            {
                const EHField f = eval_dipole_field(*d, el, obs, wave);
                out.E += f.E;
                out.H += f.H;
            }
            out.scalar = dot(out.E, axis);
        }
        else
        {
            for (const auto &el : layout.elements())
                out.scalar += eval_point_source(el, obs, wave);
        }
    }
    catch (const Error &e)
    {
        if (e.kind() != ErrorKind::singularity)
            throw;
        const double nan = std::numeric_limits<double>::quiet_NaN();
        return {cplx(nan, nan), {}, {}, false};
    }
    return out;
}

struct FieldMap
{
    PlaneGrid grid;
    double frequency = 0.0;
    std::vector<cplx> values;          // scalar (co-polarized) field per node
    std::vector<ComplexVec3> vectors;  // full E per node; empty for scalar models
    std::vector<std::uint8_t> valid;   // 0 marks a singular node
    std::string layout_id;
    std::string radiator;

    std::size_t invalid_count() const
    {
        return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{0}));
    }
};

struct RingSamples
{
    RingProbe probe;
    std::vector<cplx> values;
    std::vector<std::uint8_t> valid;
};

inline FieldMap superpose(const ArrayLayout &layout, const RadiatorModel &model, const PlaneGrid &grid,
                          const Wave &wave, std::string layout_id = {})
{
    grid.validate();
    if (const auto *d = std::get_if<Dipole>(&model))
        validate(*d, wave);

    FieldMap map;
    map.grid = grid;
    map.frequency = wave.frequency();
    map.layout_id = std::move(layout_id);
    map.radiator = describe(model);
    const std::size_t n = grid.node_count();
    map.values.resize(n);
    map.valid.resize(n);
    if (is_vectorial(model))
        map.vectors.resize(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const NodeField f = field_at(layout, model, grid.node(i), wave);
        map.values[i] = f.scalar;
        map.valid[i] = f.valid ? 1 : 0;
        if (!map.vectors.empty())
            map.vectors[i] = f.E;
    }
    return map;
}

inline RingSamples superpose(const ArrayLayout &layout, const RadiatorModel &model, const RingProbe &probe,
                             const Wave &wave)
{
    probe.validate();
    if (const auto *d = std::get_if<Dipole>(&model))
        validate(*d, wave);

    RingSamples ring;
    ring.probe = probe;
    ring.values.resize(static_cast<std::size_t>(probe.samples));
    ring.valid.resize(static_cast<std::size_t>(probe.samples));
    for (int m = 0; m < probe.samples; ++m)
    {
        const NodeField f = field_at(layout, model, probe.node(m), wave);
        ring.values[static_cast<std::size_t>(m)] = f.scalar;
        ring.valid[static_cast<std::size_t>(m)] = f.valid ? 1 : 0;
    }
    return ring;
}

// Per-node phase in (-pi, pi]; NaN at invalid nodes.
inline std::vector<double> extract_phase_map(const FieldMap &map)
{
    std::vector<double> out(map.values.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = map.valid[i] ? phase_of(map.values[i]) : std::numeric_limits<double>::quiet_NaN();
    return out;
}

inline std::vector<double> extract_magnitude_map(const FieldMap &map)
{
    std::vector<double> out(map.values.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = map.valid[i] ? std::abs(map.values[i]) : std::numeric_limits<double>::quiet_NaN();
    return out;
}

// Largest finite magnitude over valid nodes.
inline double max_magnitude(const FieldMap &map)
{
    double m = 0.0;
    for (std::size_t i = 0; i < map.values.size(); ++i)
        if (map.valid[i])
            m = std::max(m, std::abs(map.values[i]));
    return m;
}

} // namespace oamsim

#endif
