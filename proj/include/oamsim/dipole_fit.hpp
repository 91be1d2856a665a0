// Copyright The oamsim Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef OAMSIM_DIPOLE_FIT_HPP
#define OAMSIM_DIPOLE_FIT_HPP

#include "oamsim/array_model.hpp"
#include "oamsim/core.hpp"
#include "oamsim/field_engine.hpp"
#include "oamsim/oam_analysis.hpp"
#include "oamsim/radiators.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>
#include <span>
#include <string>

namespace oamsim
{

/// min over complex beta of mean|ref - beta * test|^2 / mean|ref|^2, i.e. one minus the squared
/// normalized correlation. Insensitive to the absolute level of either field.
inline double normalized_shape_mse(std::span<const cplx> reference, std::span<const cplx> test)
{
    if (reference.size() != test.size() || reference.empty())
        throw Error(ErrorKind::invalid_spec, "sample sets differ in size");
    double rr = 0.0, tt = 0.0;
    cplx rt{};
    for (std::size_t i = 0; i < reference.size(); ++i)
    {
        rr += std::norm(reference[i]);
        tt += std::norm(test[i]);
        rt += std::conj(test[i]) * reference[i];
    }
    if (!(rr > 0.0))
        throw Error(ErrorKind::invalid_spec, "reference field vanishes on the comparison ring");
    if (!(tt > 0.0))
        return 1.0;
    return std::clamp(1.0 - std::norm(rt) / (rr * tt), 0.0, 1.0);
}

struct DipoleFitOptions
{
    double min_half_length_wavelengths = 0.001;
    double max_half_length_wavelengths = 0.95;
    int steps = 96;
    Vec3 axis{1.0, 0.0, 0.0};
    std::optional<RingProbe> ring; // default: analysis ring of the point-source layout
};

class DipoleFitError : public Error
{
public:
    DipoleFitError(const std::string &what, double best_mse) : Error(ErrorKind::not_found, what), best_mse_(best_mse) {}
    double best_mse() const noexcept { return best_mse_; }

private:
    double best_mse_;
};

struct DipoleFit
{
    double half_length = 0.0; // m
    double mse = 0.0;
};

/// Longest dipole (on a uniform grid of half-lengths) whose array field matches the point-source
/// array field on the reference ring to within `tolerance` normalized MSE. Dipoles are compared
/// through their co-polarized component.
inline DipoleFit fit_dipole_length(const ArrayLayout &reference, const Wave &wave, double tolerance,
                                   const DipoleFitOptions &opt = {})
{
    if (!(tolerance > 0.0 && tolerance <= 1.0))
        throw Error(ErrorKind::invalid_spec, "tolerance must lie in (0, 1]");
    if (opt.steps < 2 || !(opt.min_half_length_wavelengths > 0.0) ||
        !(opt.max_half_length_wavelengths > opt.min_half_length_wavelengths))
        throw Error(ErrorKind::invalid_spec, "invalid dipole search range");

    const double lambda = wave.wavelength();
    const RingProbe probe = opt.ring ? *opt.ring : default_analysis_ring(reference, PointSource{}, wave, 8);
    const RingSamples ref = superpose(reference, PointSource{}, probe, wave);

    std::optional<DipoleFit> best_ok;
    double best_mse = 2.0;
    for (int i = 0; i < opt.steps; ++i)
    {
        const double hw = opt.min_half_length_wavelengths +
                          (opt.max_half_length_wavelengths - opt.min_half_length_wavelengths) * i / (opt.steps - 1);
        Dipole d;
        d.half_length = hw * lambda;
        d.axis = opt.axis;
        // Antiresonant lengths cannot carry a unit feed current.
        if (std::abs(std::sin(wave.wavenumber() * d.half_length)) < 1e-9)
            continue;
        const RingSamples got = superpose(reference, d, probe, wave);
        const double mse = normalized_shape_mse(ref.values, got.values);
        best_mse = std::min(best_mse, mse);
        if (mse <= tolerance)
            best_ok = DipoleFit{d.half_length, mse};
    }
    if (!best_ok)
    {
        char buf[128];
        std::snprintf(buf, sizeof buf, "no dipole length meets MSE <= %g (best %.6g)", tolerance, best_mse);
        throw DipoleFitError(buf, best_mse);
    }
    return *best_ok;
}

} // namespace oamsim

#endif
