// Copyright The oamsim Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef OAMSIM_OAM_ANALYSIS_HPP
#define OAMSIM_OAM_ANALYSIS_HPP

#include "oamsim/array_model.hpp"
#include "oamsim/core.hpp"
#include "oamsim/field_engine.hpp"
#include "oamsim/radiators.hpp"

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <vector>

namespace oamsim
{

// Mode labelling convention.
//
// With exp(+i w t) time dependence, a beam carrying orbital angular momentum l (per photon,
// in units of hbar) has the transverse phase factor exp(-i l theta). The circular-array feed
// law phase_n = -l phi_n produces exactly that factor, so "mode l" below always means the
// physical charge: a ring field E(theta) = exp(-i l theta) is pure mode l and winds by +l.
inline cplx mode_phasor(int mode, double theta) { return std::polar(1.0, -mode * theta); }

/// Discrete inner product sum_m e^{i l1 t_m} conj(e^{i l2 t_m}) (2 pi / M), t_m = 2 pi m / M.
inline cplx orthogonality_integral(int l1, int l2, int quadrature_points)
{
    if (quadrature_points < 2)
        throw Error(ErrorKind::invalid_spec, "orthogonality quadrature needs M >= 2");
    const int M = quadrature_points;
    cplx sum{};
    for (int m = 0; m < M; ++m)
    {
        // Reduce (l1 - l2) m modulo M in integers so the angle stays exact.
        const long long q = (static_cast<long long>(l1) - l2) * m % M;
        sum += std::polar(1.0, two_pi * static_cast<double>(q) / M);
    }
    return sum * (two_pi / M);
}

struct ModeSpectrum
{
    int l_max = 0;
    std::vector<cplx> coefficients; // index l + l_max
    std::vector<double> power;      // fractions, sum to 1 unless the ring is field-free

    int size() const { return 2 * l_max + 1; }
    bool contains(int l) const { return l >= -l_max && l <= l_max; }
    cplx coefficient(int l) const { return coefficients.at(static_cast<std::size_t>(l + l_max)); }
    double fraction(int l) const { return power.at(static_cast<std::size_t>(l + l_max)); }
};

/// c_l = (1/M) sum_m E(theta_m) conj(mode_phasor(l, theta_m)) for l in [-l_max, l_max].
inline ModeSpectrum mode_decompose(const RingSamples &samples, int l_max)
{
    const int M = static_cast<int>(samples.values.size());
    if (l_max < 0)
        throw Error(ErrorKind::invalid_spec, "l_max must be >= 0");
    if (M < 2 * l_max + 2)
        throw Error(ErrorKind::aliasing, "ring has " + std::to_string(M) + " samples, need >= " +
                                             std::to_string(2 * l_max + 2) + " for l_max " +
                                             std::to_string(l_max));
    for (std::size_t m = 0; m < samples.valid.size(); ++m)
        if (!samples.valid[m])
            throw Error(ErrorKind::singularity, "ring sample " + std::to_string(m) + " is singular");

    ModeSpectrum spec;
    spec.l_max = l_max;
    spec.coefficients.resize(static_cast<std::size_t>(2 * l_max + 1));
    spec.power.resize(spec.coefficients.size());
    double total = 0.0;
    for (int l = -l_max; l <= l_max; ++l)
    {
        cplx c{};
        for (int m = 0; m < M; ++m)
        {
            const long long q = (static_cast<long long>(l) * m) % M;
            c += samples.values[static_cast<std::size_t>(m)] * std::polar(1.0, two_pi * static_cast<double>(q) / M);
        }
        c /= static_cast<double>(M);
        spec.coefficients[static_cast<std::size_t>(l + l_max)] = c;
        total += std::norm(c);
    }
    for (std::size_t i = 0; i < spec.power.size(); ++i)
        spec.power[i] = total > 0.0 ? std::norm(spec.coefficients[i]) / total : 0.0;
    return spec;
}

// Powers within this relative distance of the maximum are treated as tied.
inline constexpr double mode_tie_tolerance = 1e-9;

struct PurityReport
{
    int target = 0;
    int dominant = 0;
    double purity = 0.0;        // fraction in the dominant mode
    double target_purity = 0.0; // fraction in the target mode
    bool unique = true;         // false when another mode ties the dominant one
};

/// Dominant mode with tie-break: smallest |l|, then negative before positive.
inline PurityReport purity(const ModeSpectrum &spectrum, int target)
{
    if (!spectrum.contains(target))
        throw Error(ErrorKind::invalid_spec, "target mode outside the spectrum range");
    double pmax = 0.0;
    for (double p : spectrum.power)
        pmax = std::max(pmax, p);

    PurityReport rep;
    rep.target = target;
    rep.target_purity = spectrum.fraction(target);
    int ties = 0;
    bool have = false;
    auto better = [](int a, int b) { return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b; };
    for (int l = -spectrum.l_max; l <= spectrum.l_max; ++l)
    {
        if (spectrum.fraction(l) >= pmax * (1.0 - mode_tie_tolerance))
        {
            ++ties;
            if (!have || better(l, rep.dominant))
                rep.dominant = l, have = true;
        }
    }
    rep.purity = spectrum.fraction(rep.dominant);
    rep.unique = ties == 1;
    return rep;
}

struct WindingResult
{
    int winding = 0;
    double residual = 0.0; // accumulated phase (in mode convention) minus 2 pi winding
};

inline constexpr double winding_magnitude_floor = 1e-12;

/// Net phase winding around the ring, reported in the mode convention (exp(-i l theta) -> l).
inline WindingResult winding_number(const RingSamples &samples)
{
    const auto &v = samples.values;
    if (v.size() < 2)
        throw Error(ErrorKind::invalid_spec, "ring needs at least 2 samples");
    double vmax = 0.0;
    for (std::size_t m = 0; m < v.size(); ++m)
    {
        if (!samples.valid.empty() && !samples.valid[m])
            throw Error(ErrorKind::undefined_phase, "ring sample " + std::to_string(m) + " is singular");
        vmax = std::max(vmax, std::abs(v[m]));
    }
    const double floor = winding_magnitude_floor * vmax;
    for (std::size_t m = 0; m < v.size(); ++m)
        if (!(std::abs(v[m]) > floor))
            throw Error(ErrorKind::undefined_phase, "ring sample " + std::to_string(m) + " has vanishing magnitude");

    double total = 0.0;
    for (std::size_t m = 0; m < v.size(); ++m)
    {
        const cplx next = v[(m + 1) % v.size()];
        total += phase_of(next * std::conj(v[m]));
    }
    const double turns = -total;
    WindingResult res;
    res.winding = static_cast<int>(std::lround(turns / two_pi));
    res.residual = turns - two_pi * res.winding;
    return res;
}

// ------------------------------------------------------------------------
// Analysis geometry

inline constexpr double default_analysis_distance_wavelengths = 10.0;
inline constexpr double default_analysis_extent_wavelengths = 10.0;
inline constexpr int default_radial_scan_steps = 128;

inline int default_ring_samples(int l_max) { return 8 * l_max + 8; }

/// Analysis ring at z = 10 lambda whose radius sits on the peak of the azimuthally averaged
/// magnitude, scanned outward over the default observation half-extent.
inline RingProbe default_analysis_ring(const ArrayLayout &layout, const RadiatorModel &model, const Wave &wave,
                                       int l_max)
{
    const double lambda = wave.wavelength();
    const double z = default_analysis_distance_wavelengths * lambda;
    const double extent = default_analysis_extent_wavelengths * lambda;
    const int steps = default_radial_scan_steps;
    const int M = default_ring_samples(l_max);

    double best_r = extent / steps;
    double best_mean = -1.0;
    for (int j = 1; j <= steps; ++j)
    {
        const RingProbe probe{extent * j / steps, z, M};
        const RingSamples ring = superpose(layout, model, probe, wave);
        double sum = 0.0;
        int n = 0;
        for (std::size_t m = 0; m < ring.values.size(); ++m)
            if (ring.valid[m])
                sum += std::abs(ring.values[m]), ++n;
        const double mean = n > 0 ? sum / n : 0.0;
        if (mean > best_mean)
            best_mean = mean, best_r = probe.radius;
    }
    return {best_r, z, M};
}

struct EmpiricalCriteria
{
    std::optional<RingProbe> ring;       // fixed ring; default: per-candidate analysis ring
    std::optional<double> purity_floor;  // additionally require target purity >= floor
    std::optional<double> radius;        // array radius, default one wavelength
    int l_max = 0;                       // 0 selects max(8, 2|l| + 2)
    int sweep_cap = 64;
};

struct EmpiricalResult
{
    int elements = 0;
    PurityReport report;
};

/// Smallest N for which a point-source circular array fed for mode l is detected as mode l
/// (unique dominant mode, plus the optional purity floor).
inline EmpiricalResult find_min_elements_empirical(int mode, const Wave &wave, const EmpiricalCriteria &criteria = {})
{
    if (mode == 0)
        throw Error(ErrorKind::invalid_spec, "empirical sweep needs |l| >= 1");
    const int l_max = criteria.l_max > 0 ? criteria.l_max : std::max(8, 2 * std::abs(mode) + 2);
    if (std::abs(mode) > l_max)
        throw Error(ErrorKind::invalid_spec, "analysis range does not cover the target mode");
    const double radius = criteria.radius.value_or(wave.wavelength());
    const RadiatorModel model = PointSource{};

    for (int n = 1; n <= criteria.sweep_cap; ++n)
    {
        const ArrayLayout layout = build_uca({n, radius, mode, {}, {0.0, 0.0, 1.0}});
        const RingProbe probe = criteria.ring ? *criteria.ring : default_analysis_ring(layout, model, wave, l_max);
        const ModeSpectrum spec = mode_decompose(superpose(layout, model, probe, wave), l_max);
        const PurityReport rep = purity(spec, mode);
        const bool floor_ok = !criteria.purity_floor || rep.target_purity >= *criteria.purity_floor;
        if (rep.dominant == mode && rep.unique && floor_ok)
            return {n, rep};
    }
    throw Error(ErrorKind::not_found, "no element count up to " + std::to_string(criteria.sweep_cap) +
                                          " produced mode " + std::to_string(mode));
}

} // namespace oamsim

#endif
