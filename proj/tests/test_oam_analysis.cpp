// Copyright The oamsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include "oamsim/oam_analysis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

using namespace oamsim;

namespace
{
RingSamples synthetic(int M, const std::function<cplx(double)> &f)
{
    RingSamples s;
    s.probe = {1.0, 0.0, M};
    for (int m = 0; m < M; ++m)
    {
        s.values.push_back(f(s.probe.angle(m)));
        s.valid.push_back(1);
    }
    return s;
}
} // namespace

TEST(Orthogonality, EqualAndDistinctModes)
{
    EXPECT_NEAR(std::abs(orthogonality_integral(3, 3, 64) - cplx(two_pi)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(orthogonality_integral(2, -1, 64)), 0.0, 1e-12);
    // Quadrature alias: l2 = M looks like l2 = 0.
    EXPECT_NEAR(std::abs(orthogonality_integral(0, 64, 64) - cplx(two_pi)), 0.0, 1e-12);
}

TEST(Orthogonality, ConjugateSymmetry)
{
    for (int a = -6; a <= 6; ++a)
        for (int b = -6; b <= 6; ++b)
            for (int M : {5, 16, 64})
                EXPECT_EQ(orthogonality_integral(a, b, M), std::conj(orthogonality_integral(b, a, M)));
}

TEST(ModeDecompose, PureModeConcentratesPower)
{
    // exp(-2i theta) is mode 2 in the library's labeling.
    const auto s = synthetic(64, [](double t) { return std::polar(1.0, -2.0 * t); });
    const ModeSpectrum spec = mode_decompose(s, 8);
    EXPECT_NEAR(spec.fraction(2), 1.0, 1e-12);
    for (int l = -8; l <= 8; ++l)
        if (l != 2)
        {
            EXPECT_LT(spec.fraction(l), 1e-12);
        }
    EXPECT_EQ(purity(spec, 2).dominant, 2);
    EXPECT_NEAR(purity(spec, 2).purity, 1.0, 1e-12);
}

TEST(ModeDecompose, RequiresEnoughSamples)
{
    const auto s = synthetic(17, [](double) { return cplx(1.0); });
    try
    {
        mode_decompose(s, 8);
        FAIL();
    }
    catch (const Error &e)
    {
        EXPECT_EQ(e.kind(), ErrorKind::aliasing);
    }
    EXPECT_NO_THROW(mode_decompose(synthetic(18, [](double) { return cplx(1.0); }), 8));
}

TEST(ModeDecompose, ParsevalInequalityAndEquality)
{
    const auto f = [](double t) { return std::polar(1.0, -t) + 0.5 * std::polar(1.0, 3.0 * t) + 0.2 * std::polar(1.0, -9.0 * t); };
    const int M = 40;
    const auto s = synthetic(M, f);
    double energy = 0.0;
    for (const cplx &v : s.values)
        energy += std::norm(v);
    energy /= M;
    double within = 0.0;
    const ModeSpectrum narrow = mode_decompose(s, 4);
    for (const cplx &c : narrow.coefficients)
        within += std::norm(c);
    EXPECT_LE(within, energy * (1.0 + 1e-12));
    EXPECT_NEAR(within, 1.0 + 0.25, 1e-12);
    double all = 0.0;
    for (const cplx &c : mode_decompose(s, 12).coefficients)
        all += std::norm(c);
    EXPECT_NEAR(all, energy, 1e-12 * energy);
}

TEST(ModeDecompose, UcaSpectrumSupportedOnAliasLattice)
{
    const Wave w(10e9);
    const double lam = w.wavelength();
    for (auto [N, l] : {std::pair{5, 1}, {7, -2}, {4, 1}, {3, 2}})
    {
        const auto L = build_uca({N, lam, l});
        const int l_max = 12;
        const RingSamples r = superpose(L, PointSource{}, RingProbe{2.0 * lam, 10.0 * lam, 8 * l_max + 8}, w);
        const ModeSpectrum spec = mode_decompose(r, l_max);
        double cmax = 0.0;
        for (const cplx &c : spec.coefficients)
            cmax = std::max(cmax, std::abs(c));
        for (int q = -l_max; q <= l_max; ++q)
            if (((q - l) % N + N) % N != 0)
            {
                EXPECT_LT(std::abs(spec.coefficient(q)), 1e-10 * cmax) << N << ' ' << l << ' ' << q;
            }
    }
}

TEST(ModeDecompose, AgreesWithBruteForceDft)
{
    const Wave w(10e9);
    const double lam = w.wavelength();
    const auto L = build_uca({8, lam, 1});
    const RingSamples r = superpose(L, PointSource{}, RingProbe{3.0 * lam, 10.0 * lam, 72}, w);
    const ModeSpectrum spec = mode_decompose(r, 8);
    EXPECT_EQ(purity(spec, 1).dominant, 1);
    const auto p = oracle::ring_mode_power(L, w.wavenumber(), 3.0 * lam, 10.0 * lam, 720, 8);
    EXPECT_EQ(oracle::dominant(p, 8), 1);
    double tot = 0.0;
    for (double v : p)
        tot += v;
    for (int l = -8; l <= 8; ++l)
        EXPECT_NEAR(spec.fraction(l), p[static_cast<std::size_t>(l + 8)] / tot, 1e-9);
}

TEST(Purity, TieBreakPrefersSmallMagnitudeThenNegative)
{
    const auto two = synthetic(32, [](double t) { return std::polar(1.0, -t) + std::polar(1.0, -3.0 * t); });
    const PurityReport a = purity(mode_decompose(two, 4), 3);
    EXPECT_EQ(a.dominant, 1);
    EXPECT_NEAR(a.purity, 0.5, 1e-12);
    EXPECT_FALSE(a.unique);
    const auto pm = synthetic(32, [](double t) { return std::polar(1.0, -2.0 * t) + std::polar(1.0, 2.0 * t); });
    EXPECT_EQ(purity(mode_decompose(pm, 4), 2).dominant, -2);
    EXPECT_THROW(purity(mode_decompose(pm, 4), 5), Error);
}

TEST(Purity, BoundsHoldOnRandomFields)
{
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 50; ++trial)
    {
        const auto s = synthetic(40, [&](double) { return cplx(g(rng), g(rng)); });
        const ModeSpectrum spec = mode_decompose(s, 6);
        double sum = 0.0;
        for (double p : spec.power)
            sum += p;
        EXPECT_NEAR(sum, 1.0, 1e-12);
        const PurityReport r = purity(spec, 0);
        EXPECT_GE(r.purity, 0.0);
        EXPECT_LE(r.purity, 1.0);
        EXPECT_GE(r.purity, r.target_purity);
    }
}

TEST(Winding, SyntheticModes)
{
    const auto four = synthetic(64, [](double t) { return std::polar(2.0, -4.0 * t); });
    const WindingResult r = winding_number(four);
    EXPECT_EQ(r.winding, 4);
    EXPECT_LT(std::abs(r.residual), 1e-9);
    EXPECT_EQ(winding_number(synthetic(16, [](double) { return cplx(1.0, 1.0); })).winding, 0);
    EXPECT_EQ(winding_number(synthetic(64, [](double t) { return std::polar(1.0, 3.0 * t); })).winding, -3);
}

TEST(Winding, VanishingSampleIsUndefined)
{
    auto s = synthetic(16, [](double t) { return std::polar(1.0, -t); });
    s.values[5] = 0.0;
    try
    {
        winding_number(s);
        FAIL();
    }
    catch (const Error &e)
    {
        EXPECT_EQ(e.kind(), ErrorKind::undefined_phase);
    }
}

TEST(Winding, UcaElevenElementsModeFive)
{
    const Wave w(10e9);
    const auto L = build_uca({11, w.wavelength(), 5});
    const RingSamples r = superpose(L, PointSource{}, default_analysis_ring(L, PointSource{}, w, 8), w);
    EXPECT_EQ(winding_number(r).winding, 5);
}

// Where the target mode carries over 90% of the ring power, winding and dominant mode agree.
TEST(Winding, MatchesDominantModeWhenPure)
{
    const Wave w(10e9);
    int checked = 0;
    for (int l = -5; l <= 5; ++l)
    {
        for (int N = min_elements(l); N <= min_elements(l) + 6; ++N)
        {
            const auto L = build_uca({N, w.wavelength(), l});
            const RingSamples r = superpose(L, PointSource{}, default_analysis_ring(L, PointSource{}, w, 8), w);
            const PurityReport p = purity(mode_decompose(r, 8), l);
            if (p.target_purity > 0.9)
            {
                EXPECT_EQ(winding_number(r).winding, p.dominant) << N << ' ' << l;
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 20);
}

TEST(Empirical, SweepReproducesRule)
{
    const Wave w(10e9);
    for (int l : {1, 2, 5, -2})
        EXPECT_EQ(find_min_elements_empirical(l, w).elements, min_elements(l)) << l;
    EXPECT_THROW(find_min_elements_empirical(0, w), Error);
}

TEST(Empirical, PurityFloorIsStricter)
{
    const Wave w(10e9);
    EmpiricalCriteria c;
    c.purity_floor = 0.999;
    const int n = find_min_elements_empirical(2, w, c).elements;
    EXPECT_GT(n, min_elements(2));
    c.sweep_cap = 5;
    try
    {
        find_min_elements_empirical(2, w, c);
        FAIL();
    }
    catch (const Error &e)
    {
        EXPECT_EQ(e.kind(), ErrorKind::not_found);
    }
}

TEST(Aliasing, ThreeElementsModeTwoLooksLikeMinusOne)
{
    const Wave w(10e9);
    const auto L = build_uca({3, w.wavelength(), 2});
    const RingProbe ring = default_analysis_ring(L, PointSource{}, w, 8);
    const PurityReport p = purity(mode_decompose(superpose(L, PointSource{}, ring, w), 8), 2);
    EXPECT_EQ(p.dominant, -1);
    const auto bf = oracle::ring_mode_power(L, w.wavenumber(), ring.radius, ring.z, 10 * ring.samples, 8);
    EXPECT_EQ(oracle::dominant(bf, 8), -1);
}
