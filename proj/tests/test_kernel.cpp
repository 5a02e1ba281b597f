#include "heatlab/kernel.hpp"

#include <cmath>

#include "doctest.h"
#include "heatlab/errors.hpp"
#include "heatlab/rng.hpp"
#include "oracles.hpp"

using namespace heatlab;

namespace {
constexpr double kTol = 1e-12;

// Frozen against the dual-representation oracle (both series summed wide and
// cross-checked).
constexpr double kPhi01At0 = 1.0385928831070669;      // phi_0.1(0), n = 1
constexpr double kPhiSelfDualAt0 = 1.0864348112133080;  // t = 1/(4 pi)
constexpr double kWgAt0 = 0.92648930480797704;        // n = m = 1, t = 0.1, z = 0
}  // namespace

TEST_CASE("torus point reduction") {
    CHECK(reduce_to_cell(0.75) == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(reduce_to_cell(0.5) == -0.5);   // half-open: +1/2 maps to -1/2
    CHECK(reduce_to_cell(-0.5) == -0.5);
    // integer shifts of dyadic points are exact
    for (int j = 0; j < 64; ++j) {
        const double x = -0.5 + j / 64.0;
        CHECK(reduce_to_cell(x + 3.0) == x);
        CHECK(reduce_to_cell(x - 7.0) == x);
    }
    // idempotence
    SplitMix64 rng(11);
    for (int i = 0; i < 1000; ++i) {
        const double r = reduce_to_cell(rng.uniform(-20.0, 20.0));
        CHECK(r >= -0.5);
        CHECK(r < 0.5);
        CHECK(reduce_to_cell(r) == r);
    }
    // rounding edges: the doubles bracketing +-1/2 stay inside the cell
    for (double edge : {std::nextafter(0.5, 0.0), std::nextafter(-0.5, -1.0),
                        std::nextafter(0.5, 1.0), std::nextafter(-0.5, 0.0)}) {
        const double r = reduce_to_cell(edge);
        CHECK(r >= -0.5);
        CHECK(r < 0.5);
        CHECK(reduce_to_cell(r) == r);
    }
}

TEST_CASE("time validation") {
    CHECK_THROWS_AS(Time(0.0), NonPositiveTime);
    CHECK_THROWS_AS(Time(-1.0), NonPositiveTime);
    CHECK(Time(0.25).value() == 0.25);
}

TEST_CASE("gaussian sum against frozen oracle values") {
    const KernelValue a = eval_gaussian(TorusPoint{0.0}, Time(0.1), kTol);
    CHECK(a.value == doctest::Approx(kPhi01At0).epsilon(1e-14));
    CHECK(a.error_bound <= kTol);

    const double t_sd = 1.0 / (4.0 * M_PI);
    const KernelValue b = eval_gaussian(TorusPoint{0.0}, Time(t_sd), kTol);
    CHECK(b.value == doctest::Approx(kPhiSelfDualAt0).epsilon(1e-14));

    // phi_t(0) >= (4 pi t)^{-1/2}: the k = 0 term alone
    for (double t : {1e-4, 1e-2, 0.5, 3.0}) {
        const KernelValue v = eval_gaussian(TorusPoint{0.0}, Time(t), kTol);
        CHECK(v.value >= 1.0 / std::sqrt(4.0 * M_PI * t));
    }
}

TEST_CASE("fourier sum basics") {
    // t = 10: only l = 0 survives
    const KernelValue a = eval_fourier(TorusPoint{0.3}, Time(10.0), kTol);
    CHECK(a.value == doctest::Approx(1.0).epsilon(1e-12));

    // agreement with the gaussian sum at small t
    const KernelValue g = eval_gaussian(TorusPoint{0.0}, Time(0.1), kTol);
    const KernelValue f = eval_fourier(TorusPoint{0.0}, Time(0.1), kTol);
    CHECK(std::abs(g.value - f.value) <= 2.0 * kTol);

    // product structure: n = 2 at the origin equals the 1-D value squared
    const double one_d = eval_fourier(TorusPoint{0.0}, Time(1.0), kTol).value;
    const double two_d = eval_fourier(TorusPoint{0.0, 0.0}, Time(1.0), kTol).value;
    CHECK(two_d == doctest::Approx(one_d * one_d).epsilon(1e-13));
}

TEST_CASE("dual representation agreement on a sweep") {
    SplitMix64 rng(2024);
    for (int n = 1; n <= 2; ++n) {
        for (int i = 0; i < 12; ++i) {
            const double t = std::pow(10.0, rng.uniform(-4.0, 1.0));
            std::vector<double> coords(n);
            for (double& c : coords) c = rng.uniform(-0.5, 0.5);
            const TorusPoint x(coords);
            const KernelValue g = eval_gaussian(x, Time(t), kTol);
            const KernelValue f = eval_fourier(x, Time(t), kTol);
            CHECK(std::abs(g.value - f.value) <= 2.0 * kTol);
            CHECK(std::abs(g.value - oracle::phi(t, coords)) <= 1e-11 * (1.0 + g.value));
        }
    }
}

TEST_CASE("dispatch honors switch time and forced representations") {
    KernelConfig cfg;
    const TorusPoint x{0.3};

    // t below the switch: bitwise identical to the gaussian path
    KernelValue v = eval(x, Time(1e-4), cfg);
    KernelValue g = eval_gaussian(x, Time(1e-4), cfg.tol);
    CHECK(v.value == g.value);
    CHECK(v.error_bound == g.error_bound);

    // t above: fourier path
    v = eval(x, Time(5.0), cfg);
    KernelValue f = eval_fourier(x, Time(5.0), cfg.tol);
    CHECK(v.value == f.value);

    // tie at switch_t goes to fourier
    v = eval(x, Time(cfg.switch_t), cfg);
    f = eval_fourier(x, Time(cfg.switch_t), cfg.tol);
    CHECK(v.value == f.value);

    cfg.representation = Representation::GaussianSum;
    v = eval(x, Time(5.0), cfg);
    g = eval_gaussian(x, Time(5.0), cfg.tol);
    CHECK(v.value == g.value);
}

TEST_CASE("tolerance too tight signals the other representation") {
    CHECK_THROWS_AS(eval_gaussian(TorusPoint{0.0, 0.0}, Time(1e9), 1e-12),
                    ToleranceTooTight);
    CHECK_THROWS_AS(eval_fourier(TorusPoint{0.0}, Time(1e-9), 1e-12),
                    ToleranceTooTight);
}

TEST_CASE("evenness and periodicity") {
    SplitMix64 rng(5);
    for (int i = 0; i < 50; ++i) {
        const double t = std::pow(10.0, rng.uniform(-3.0, 0.5));
        const double x = rng.uniform(0.0, 0.5);
        const KernelValue a = eval(TorusPoint{x}, Time(t));
        const KernelValue b = eval(TorusPoint{-x}, Time(t));
        CHECK(std::abs(a.value - b.value) <=
              a.error_bound + b.error_bound + 1e-13 * (1.0 + a.value));
    }
}

TEST_CASE("waveguide kernel") {
    const KernelConfig cfg;
    // y = 0: the Gaussian factor is (4 pi t)^{-m/2}
    const double t = 0.1;
    const KernelValue torus = eval(TorusPoint{0.2}, Time(t), cfg);
    const KernelValue wg =
        eval_waveguide(WaveguidePoint(TorusPoint{0.2}, {0.0}), Time(t), cfg);
    CHECK(wg.value ==
          doctest::Approx(torus.value / std::sqrt(4.0 * M_PI * t)).epsilon(1e-14));

    // frozen oracle product at the origin
    const KernelValue at0 =
        eval_waveguide(WaveguidePoint(TorusPoint{0.0}, {0.0}), Time(0.1), cfg);
    CHECK(at0.value == doctest::Approx(kWgAt0).epsilon(1e-13));

    // monotone decay in |y|
    double prev = at0.value;
    for (double y : {0.5, 1.0, 2.0, 4.0}) {
        const double cur =
            eval_waveguide(WaveguidePoint(TorusPoint{0.0}, {y}), Time(0.1), cfg).value;
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("closed-form sandwich bounds") {
    SplitMix64 rng(77);
    for (int n = 1; n <= 2; ++n) {
        for (int i = 0; i < 60; ++i) {
            const double t = std::pow(10.0, rng.uniform(-4.0, 1.0));
            std::vector<double> coords(n);
            for (double& c : coords) c = rng.uniform(-0.5, 0.5);
            const TorusPoint x(coords);
            const KernelValue v = eval(x, Time(t));
            const double slack = v.error_bound + 1e-12;
            CHECK(lower_bound(x, Time(t)) - slack <= v.value);
            CHECK(v.value <= upper_bound(x, Time(t)) + slack);
        }
    }

    // x = 0 closed forms
    const double t = 0.07;
    CHECK(lower_bound(TorusPoint{0.0}, Time(t)) ==
          doctest::Approx(std::pow(4.0 * M_PI * t, -0.5)));
    CHECK(upper_bound(TorusPoint{0.0}, Time(t)) ==
          doctest::Approx(2.0 * (1.0 + std::sqrt(M_PI / t))));

    // n = 2 bounds factor as squares of the 1-D bounds at (x1, x1)
    const TorusPoint p1{0.31};
    const TorusPoint p2{0.31, 0.31};
    CHECK(lower_bound(p2, Time(t)) ==
          doctest::Approx(std::pow(lower_bound(p1, Time(t)), 2)).epsilon(1e-13));
    CHECK(upper_bound(p2, Time(t)) ==
          doctest::Approx(std::pow(upper_bound(p1, Time(t)), 2)).epsilon(1e-13));
}

TEST_CASE("one-dimensional proof ladder") {
    SplitMix64 rng(13);
    for (int i = 0; i < 200; ++i) {
        const double t = std::pow(10.0, rng.uniform(-4.0, 1.0));
        const double x = rng.uniform(-0.5, 0.5);
        const double phi0 = eval(TorusPoint{0.0}, Time(t)).value;
        const double phix = eval(TorusPoint{x}, Time(t)).value;
        const double env = std::exp(-x * x / (4.0 * t));
        const double slack = 3e-12 * (1.0 + phi0);
        CHECK(std::pow(4.0 * M_PI * t, -0.5) * env <= phi0 * env + slack);
        CHECK(phi0 * env <= phix + slack);
        CHECK(phix <= 2.0 * phi0 * env + slack);
        CHECK(phi0 <= 1.0 + std::sqrt(M_PI / t) + slack);
    }
}

TEST_CASE("waveguide sandwich") {
    SplitMix64 rng(99);
    for (int i = 0; i < 80; ++i) {
        const double t = std::pow(10.0, rng.uniform(-3.0, 1.0));
        const WaveguidePoint z(TorusPoint{rng.uniform(-0.5, 0.5)},
                               {rng.uniform(-2.0, 2.0)});
        const KernelValue v = eval_waveguide(z, Time(t));
        const auto [lo, hi] = waveguide_bounds(z, Time(t));
        CHECK(lo <= hi);
        CHECK(lo - v.error_bound - 1e-12 <= v.value);
        CHECK(v.value <= hi + v.error_bound + 1e-12);
    }
    // closed form at the origin
    const double t = 0.3;
    const auto [lo, hi] = waveguide_bounds(WaveguidePoint(TorusPoint{0.0}, {0.0}), Time(t));
    CHECK(lo == doctest::Approx(std::pow(4.0 * M_PI * t, -1.0)));
    CHECK(hi == doctest::Approx(2.0 * (1.0 + std::sqrt(M_PI / t)) *
                                std::pow(4.0 * M_PI * t, -0.5)));
}

TEST_CASE("near/far split") {
    const double R = 0.1;
    const Time t(0.05);
    // |x| <= sqrt(2R) = 0.447: near part carries the value
    auto [near1, far1] = split(TorusPoint{0.2}, t, R);
    CHECK(far1 == 0.0);
    CHECK(near1 == doctest::Approx(eval(TorusPoint{0.2}, t).value));
    // |x| > sqrt(2R)
    auto [near2, far2] = split(TorusPoint{0.46}, t, R);
    CHECK(near2 == 0.0);
    CHECK(far2 > 0.0);

    SplitMix64 rng(31);
    for (int i = 0; i < 100; ++i) {
        const double x = rng.uniform(-0.5, 0.5);
        auto [a, b] = split(TorusPoint{x}, t, R);
        CHECK((a == 0.0 || b == 0.0));
        const KernelValue v = eval(TorusPoint{x}, t);
        CHECK(std::abs(a + b - v.value) <= v.error_bound + 1e-15);
    }

    CHECK_THROWS_AS(split(TorusPoint{0.1}, Time(0.2), 0.1), InvalidWindow);
    CHECK_THROWS_AS(split(TorusPoint{0.1}, Time(0.2), 0.6), InvalidWindow);
}

TEST_CASE("tail mass") {
    // delta = 0: total mass is 1
    for (double t : {0.01, 0.1, 1.0}) {
        CHECK(tail_mass(1, 0.0, Time(t), 1e-10) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(tail_mass(2, 0.0, Time(t), 1e-10) == doctest::Approx(1.0).epsilon(1e-9));
    }

    // Gaussian-tail oracle: at t = 1e-4 the mass beyond 0.1 is erfc-small
    const double tm = tail_mass(1, 0.1, Time(1e-4), 1e-13);
    CHECK(tm < 1e-10);
    CHECK(tm == doctest::Approx(std::erfc(0.1 / (2.0 * std::sqrt(1e-4)))).epsilon(1e-3));

    // nonincreasing along t = 2^-j
    double prev = tail_mass(1, 0.1, Time(std::pow(2.0, -4)), 1e-13);
    for (int j = 5; j <= 14; ++j) {
        const double cur = tail_mass(1, 0.1, Time(std::pow(2.0, -j)), 1e-13);
        CHECK(cur <= prev);
        prev = cur;
    }

    // n = 2 tails against an independent Riemann sum, including a delta
    // beyond 1/2 where the excluded disk is clipped by the square
    const double t2 = 0.05;
    for (double delta : {0.3, 0.55}) {
        const double tail = tail_mass(2, delta, Time(t2), 1e-8);
        const int M = 400;
        double riemann = 0.0;
        KernelConfig cfg;
        cfg.tol = 1e-10;
        std::vector<double> axis(M);
        for (int i = 0; i < M; ++i)
            axis[i] = eval(TorusPoint{-0.5 + (i + 0.5) / M}, Time(t2), cfg).value;
        for (int i = 0; i < M; ++i) {
            const double x = -0.5 + (i + 0.5) / M;
            for (int j = 0; j < M; ++j) {
                const double y = -0.5 + (j + 0.5) / M;
                if (x * x + y * y >= delta * delta) riemann += axis[i] * axis[j];
            }
        }
        riemann /= M * M;
        CHECK(tail == doctest::Approx(riemann).epsilon(2e-2));
        CHECK(tail > 0.0);
        CHECK(tail < 1.0);
    }

    CHECK_THROWS_AS(tail_mass(1, -0.1, Time(0.1), 1e-8), InvalidDelta);
    CHECK_THROWS_AS(tail_mass(1, 0.5, Time(0.1), 1e-8), InvalidDelta);
    CHECK_THROWS_AS(tail_mass(2, 0.71, Time(0.1), 1e-8), InvalidDelta);
}

TEST_CASE("far part grows with t and scaling inequality") {
    SplitMix64 rng(404);
    int nontrivial = 0;
    for (int i = 0; i < 2000; ++i) {
        const double R = rng.uniform(0.01, 0.49);
        const double t2 = rng.uniform(0.0, 1.0) * R * 0.999;
        const double t1 = rng.uniform(0.0, 1.0) * t2;
        if (t1 <= 0.0 || t2 <= 0.0) continue;
        const double x = rng.uniform(-0.5, 0.5);

        // far-part time monotonicity
        const auto [n1, f1] = split(TorusPoint{x}, Time(t1), R);
        const auto [n2, f2] = split(TorusPoint{x}, Time(t2), R);
        if (f1 > 0.0 || f2 > 0.0) ++nontrivial;
        CHECK(f1 <= f2 + 3e-12);

        // phi_t <= (R/t1)^{n/2} phi_R for t1 <= t <= R
        const double phi_t = eval(TorusPoint{x}, Time(t2)).value;
        const double phi_R = eval(TorusPoint{x}, Time(R)).value;
        CHECK(phi_t <= std::sqrt(R / t1) * phi_R + 3e-12);
    }
    CHECK(nontrivial > 50);
}

TEST_CASE("far-field comparison dominated by the quarter-time kernel") {
    // Whenever |x-y| > |x| on Q_n representatives, phi_t(x-y) stays below
    // 2^n phi_4t(y): the even-sublattice terms of the right side already
    // dominate the left side term by term.
    SplitMix64 rng(606);
    for (int n = 1; n <= 2; ++n) {
        int checked = 0;
        for (int i = 0; i < 1200 && checked < 300; ++i) {
            const double t = std::pow(10.0, rng.uniform(-3.0, 0.0));
            std::vector<double> xc(n), yc(n), uc(n);
            for (int a = 0; a < n; ++a) {
                xc[a] = rng.uniform(-0.5, 0.5);
                yc[a] = rng.uniform(-0.5, 0.5);
                uc[a] = reduce_to_cell(xc[a] - yc[a]);
            }
            const TorusPoint x(xc), y(yc), u(uc);
            if (u.norm_sq() <= x.norm_sq()) continue;
            ++checked;
            const double lhs = eval(u, Time(t)).value;
            const double rhs = eval(y, Time(4.0 * t)).value;
            CHECK(lhs <= std::pow(2.0, n) * rhs + 1e-11);
        }
        CHECK(checked == 300);
    }
}

TEST_CASE("halved-argument comparison holds in the inequality direction") {
    // phi_{t/4}(x/2) <= 2^n phi_t(x): the halved argument reaches only the
    // even sublattice, so it is dominated, not equal.
    SplitMix64 rng(707);
    for (int i = 0; i < 300; ++i) {
        const double t = std::pow(10.0, rng.uniform(-3.0, 0.5));
        const double x = rng.uniform(-0.5, 0.5);
        const double lhs = eval(TorusPoint{x / 2.0}, Time(t / 4.0)).value;
        const double rhs = eval(TorusPoint{x}, Time(t)).value;
        CHECK(lhs <= 2.0 * rhs + 1e-11);
    }
}

TEST_CASE("monotone decay along an axis on the fundamental domain") {
    for (double t : {0.001, 0.05, 0.3}) {
        double prev = eval(TorusPoint{0.0}, Time(t)).value;
        for (int j = 1; j < 32; ++j) {
            const double x = j / 64.0;
            const double cur = eval(TorusPoint{x}, Time(t)).value;
            CHECK(cur <= prev + 3e-12);
            prev = cur;
        }
    }
}
