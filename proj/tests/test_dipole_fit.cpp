// Copyright The oamsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "oamsim/dipole_fit.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace oamsim;

TEST(ShapeMse, ScaleInvariantAndBounded)
{
    const std::vector<cplx> a{{1.0, 0.0}, {0.0, 2.0}, {-1.0, 1.0}};
    std::vector<cplx> b;
    for (const cplx &v : a)
        b.push_back(v * cplx(-0.3, 4.0));
    EXPECT_NEAR(normalized_shape_mse(a, b), 0.0, 1e-15);
    const std::vector<cplx> c{{0.0, 1.0}, {1.0, 0.0}, {0.0, 0.0}};
    const double m = normalized_shape_mse(a, c);
    EXPECT_GT(m, 0.0);
    EXPECT_LE(m, 1.0);
    EXPECT_EQ(normalized_shape_mse(a, std::vector<cplx>(3)), 1.0);
    EXPECT_THROW(normalized_shape_mse(std::vector<cplx>(3), a), Error);
    EXPECT_THROW(normalized_shape_mse(a, std::vector<cplx>(2)), Error);
}

// Direct minimisation over beta on a grid agrees with the closed form.
TEST(ShapeMse, MatchesExplicitMinimisation)
{
    const std::vector<cplx> ref{{1.0, 0.5}, {-0.2, 1.0}, {0.3, -0.7}, {0.9, 0.1}};
    const std::vector<cplx> test{{0.8, 0.4}, {0.1, 1.2}, {0.2, -0.5}, {1.1, -0.3}};
    double rr = 0.0;
    for (const cplx &v : ref)
        rr += std::norm(v);
    double best = 1e9;
    for (double re = -2.0; re <= 2.0; re += 0.002)
        for (double im = -2.0; im <= 2.0; im += 0.002)
        {
            double e = 0.0;
            for (std::size_t i = 0; i < ref.size(); ++i)
                e += std::norm(ref[i] - cplx(re, im) * test[i]);
            best = std::min(best, e / rr);
        }
    EXPECT_NEAR(normalized_shape_mse(ref, test), best, 1e-5);
}

TEST(DipoleFit, TenPercentToleranceSucceeds)
{
    const Wave w(3e9);
    const auto ref = build_uca({8, w.wavelength(), 1});
    const DipoleFit f = fit_dipole_length(ref, w, 0.10);
    EXPECT_LE(f.mse, 0.10);
    EXPECT_GT(f.half_length, 0.0);
    EXPECT_LT(f.half_length, w.wavelength());
}

TEST(DipoleFit, LooseToleranceReturnsRangeMaximum)
{
    const Wave w(3e9);
    const auto ref = build_uca({5, w.wavelength(), 2});
    DipoleFitOptions opt;
    opt.max_half_length_wavelengths = 0.9;
    opt.steps = 10;
    const DipoleFit f = fit_dipole_length(ref, w, 1.0, opt);
    EXPECT_NEAR(f.half_length, 0.9 * w.wavelength(), 1e-15);
}

TEST(DipoleFit, TightToleranceIsNotFound)
{
    const Wave w(3e9);
    const auto ref = build_uca({8, w.wavelength(), 1});
    DipoleFitOptions opt;
    opt.steps = 4;
    try
    {
        fit_dipole_length(ref, w, 1e-6, opt);
        FAIL();
    }
    catch (const DipoleFitError &e)
    {
        EXPECT_EQ(e.kind(), ErrorKind::not_found);
        EXPECT_GT(e.best_mse(), 1e-6);
    }
    EXPECT_THROW(fit_dipole_length(ref, w, 0.0), Error);
    EXPECT_THROW(fit_dipole_length(ref, w, 1.5), Error);
}

// Longer dipoles deviate more from the point-source field (within the first lobe).
TEST(DipoleFit, TighterToleranceGivesShorterDipole)
{
    const Wave w(3e9);
    const auto ref = build_uca({8, w.wavelength(), 1});
    const double h10 = fit_dipole_length(ref, w, 0.10).half_length;
    const double h02 = fit_dipole_length(ref, w, 0.02).half_length;
    EXPECT_LE(h02, h10);
}
