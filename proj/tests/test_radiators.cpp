// Copyright The oamsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include "oamsim/radiators.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace oamsim;

namespace
{
double rel_err(const ComplexVec3 &got, const std::complex<double> (&want)[3])
{
    const ComplexVec3 w{want[0], want[1], want[2]};
    return norm(got - w) / norm(w);
}
} // namespace

TEST(Wave, DerivedQuantities)
{
    const Wave w(10e9);
    EXPECT_NEAR(w.wavelength(), 0.0299792458, 1e-17);
    EXPECT_NEAR(w.wavenumber() * w.wavelength(), two_pi, 1e-14);
    EXPECT_THROW(Wave(0.0), Error);
    EXPECT_THROW(Wave(-1.0), Error);
}

TEST(PointSource, OnAxisValue)
{
    const Wave w(3e9);
    const ArrayElement el{{0.0, 0.0, 0.0}, {}};
    const double z = 1.234;
    const cplx v = eval_point_source(el, {0.0, 0.0, z}, w);
    EXPECT_NEAR(std::abs(v), 1.0 / z, 1e-15);
    EXPECT_NEAR(wrap_phase(std::arg(v) + w.wavenumber() * z), 0.0, 1e-12);
}

TEST(PointSource, InverseDistanceLaw)
{
    const Wave w(3e9);
    const double lam = w.wavelength();
    const ArrayElement el{{0.1, 0.2, 0.3}, {}};
    const cplx a = eval_point_source(el, el.position + Vec3{lam, 0.0, 0.0}, w);
    const cplx b = eval_point_source(el, el.position + Vec3{0.0, 2.0 * lam, 0.0}, w);
    EXPECT_NEAR(std::abs(a) / std::abs(b), 2.0, 1e-14);
}

TEST(PointSource, CoincidentPointIsSingular)
{
    const Wave w(3e9);
    const ArrayElement el{{0.1, 0.2, 0.3}, {}};
    try
    {
        eval_point_source(el, el.position, w);
        FAIL();
    }
    catch (const Error &e)
    {
        EXPECT_EQ(e.kind(), ErrorKind::singularity);
    }
}

TEST(PointSource, SphericalSymmetryAndReciprocity)
{
    const Wave w(5e9);
    const Vec3 c{0.01, -0.02, 0.03};
    const ArrayElement el{c, {}};
    const cplx ref = eval_point_source(el, c + Vec3{0.5, 0.0, 0.0}, w);
    for (int i = 0; i < 20; ++i)
    {
        const double t = 0.3 * i, p = 0.7 * i;
        const Vec3 d{0.5 * std::sin(t) * std::cos(p), 0.5 * std::sin(t) * std::sin(p), 0.5 * std::cos(t)};
        EXPECT_NEAR(std::abs(eval_point_source(el, c + d, w) - ref), 0.0, 1e-13);
    }
    const Vec3 p{0.3, 0.1, -0.2}, q{-0.4, 0.5, 1.0};
    EXPECT_EQ(green(p, q, w), green(q, p, w));
}

// A very short dipole has a triangular current; its moment is I_feed * h.
TEST(Dipole, ShortDipoleMatchesHertzianClosedForm)
{
    const Wave w(3e9);
    const double lam = w.wavelength();
    Dipole d;
    d.half_length = lam / 1000.0;
    const ArrayElement el{{}, {}};
    for (int i = 0; i < 20; ++i)
    {
        const double th = pi * (i + 0.5) / 20.0;
        const double ph = 2.399963 * i;
        const Vec3 p{2.0 * lam * std::sin(th) * std::cos(ph), 2.0 * lam * std::sin(th) * std::sin(ph),
                     2.0 * lam * std::cos(th)};
        const EHField f = eval_dipole_field(d, el, p, w);
        const auto o = oracle::hertzian(d.half_length, p, w.wavenumber());
        EXPECT_LT(rel_err(f.E, o.E), 1e-3) << "theta=" << th;
        EXPECT_LT(rel_err(f.H, o.H), 1e-3) << "theta=" << th;
    }
}

TEST(Dipole, FarZoneImpedance)
{
    const Wave w(3e9);
    const double lam = w.wavelength();
    for (double h : {lam / 1000.0, lam / 4.0, 0.7 * lam})
    {
        Dipole d;
        d.half_length = h;
        for (double th : {0.3, 0.9, pi / 2.0, 2.2})
        {
            const Vec3 p{100.0 * lam * std::sin(th), 0.0, 100.0 * lam * std::cos(th)};
            const EHField f = eval_dipole_field(d, {{}, {}}, p, w);
            EXPECT_NEAR(norm(f.E) / norm(f.H) / constants::eta0, 1.0, 0.01) << h << ' ' << th;
        }
    }
}

TEST(Dipole, FarPatternAgreesWithFieldRatios)
{
    const Wave w(3e9);
    const double lam = w.wavelength();
    Dipole d;
    d.half_length = 0.3 * lam;
    const double r = 100.0 * lam;
    const double ref_th = pi / 2.0;
    const auto mag = [&](double th) {
        return norm(eval_dipole_field(d, {{}, {}}, {r * std::sin(th), 0.0, r * std::cos(th)}, w).E);
    };
    for (double th : {0.4, 0.8, 1.2, 2.0, 2.6})
    {
        const double want = dipole_far_pattern(d.half_length, th, w) / dipole_far_pattern(d.half_length, ref_th, w);
        EXPECT_NEAR(mag(th) / mag(ref_th), std::abs(want), 0.01 * std::abs(want)) << th;
    }
}

TEST(Dipole, FarPatternValues)
{
    const Wave w(3e9);
    const double lam = w.wavelength();
    EXPECT_EQ(dipole_far_pattern(lam / 4.0, 0.0, w), 0.0);
    EXPECT_EQ(dipole_far_pattern(lam / 4.0, pi, w), 0.0);
    EXPECT_NEAR(dipole_far_pattern(lam / 4.0, pi / 2.0, w), 1.0, 1e-15);
}

TEST(Dipole, MirrorSymmetryAboutEquatorialPlane)
{
    const Wave w(3e9);
    const double lam = w.wavelength();
    Dipole d;
    d.half_length = 0.2 * lam;
    for (double r : {0.5 * lam, 3.0 * lam})
    {
        for (double th : {0.2, 0.7, 1.3})
        {
            const Vec3 p{r * std::sin(th), 0.0, r * std::cos(th)};
            const Vec3 q{p.x, 0.0, -p.z};
            const EHField a = eval_dipole_field(d, {{}, {}}, p, w);
            const EHField b = eval_dipole_field(d, {{}, {}}, q, w);
            const double s = norm(a.E);
            EXPECT_NEAR(std::abs(a.E.z - b.E.z), 0.0, 1e-12 * s);
            EXPECT_NEAR(std::abs(a.E.x + b.E.x), 0.0, 1e-12 * s);
            EXPECT_NEAR(std::abs(a.H.y - b.H.y), 0.0, 1e-12 * norm(a.H));
        }
    }
}

TEST(Dipole, LinearInExcitation)
{
    const Wave w(3e9);
    const double lam = w.wavelength();
    Dipole d;
    d.half_length = 0.1 * lam;
    d.axis = normalized(Vec3{1.0, 2.0, 0.5});
    const Vec3 pos{0.01, 0.02, 0.0};
    const Vec3 p{0.3, -0.2, 0.5};
    const EHField base = eval_dipole_field(d, {pos, Excitation(1.0, 0.0)}, p, w);
    const EHField got = eval_dipole_field(d, {pos, Excitation(2.5, 0.8)}, p, w);
    const cplx s = std::polar(2.5, 0.8);
    EXPECT_LT(norm(got.E - base.E * s), 1e-14 * norm(got.E));
    EXPECT_LT(norm(got.H - base.H * s), 1e-14 * norm(got.H));
}

TEST(Dipole, RotatedAxisMatchesRotatedField)
{
    const Wave w(3e9);
    Dipole dz;
    dz.half_length = 0.02;
    Dipole dx = dz;
    dx.axis = {1.0, 0.0, 0.0};
    const EHField a = eval_dipole_field(dz, {{}, {}}, {0.1, 0.2, 0.3}, w);
    // Rotation z->x, x->y, y->z maps (0.1, 0.2, 0.3) to (0.3, 0.1, 0.2).
    const EHField b = eval_dipole_field(dx, {{}, {}}, {0.3, 0.1, 0.2}, w);
    EXPECT_NEAR(std::abs(a.E.z - b.E.x), 0.0, 1e-12 * norm(a.E));
    EXPECT_NEAR(std::abs(a.E.x - b.E.y), 0.0, 1e-12 * norm(a.E));
    EXPECT_NEAR(std::abs(a.H.y - b.H.z), 0.0, 1e-12 * norm(a.H));
}

TEST(Dipole, SegmentIsSingularAndAxisBeyondTipIsNot)
{
    const Wave w(3e9);
    Dipole d;
    d.half_length = 0.02;
    EXPECT_THROW(eval_dipole_field(d, {{}, {}}, {0.0, 0.0, 0.01}, w), Error);
    const EHField f = eval_dipole_field(d, {{}, {}}, {0.0, 0.0, 0.5}, w);
    EXPECT_TRUE(is_finite(f.E));
    EXPECT_EQ(norm(f.H), 0.0);
}

TEST(Dipole, Validation)
{
    const Wave w(3e9);
    const double lam = w.wavelength();
    Dipole d;
    d.half_length = 0.5 * lam;
    EXPECT_THROW(validate(d, w), Error);
    d.half_length = 11.0 * lam;
    EXPECT_THROW(validate(d, w), Error);
    d.half_length = 0.0;
    EXPECT_THROW(validate(d, w), Error);
    d.half_length = 0.1 * lam;
    d.axis = {};
    EXPECT_THROW(validate(d, w), Error);
}
