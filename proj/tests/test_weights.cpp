#include "heatlab/weights.hpp"

#include <cmath>

#include "doctest.h"
#include "heatlab/errors.hpp"
#include "heatlab/kernel.hpp"
#include "heatlab/quadrature.hpp"
#include "heatlab/rng.hpp"

using namespace heatlab;

TEST_CASE("conjugate exponents") {
    const ConjugateExponent a(2.0);
    CHECK(a.p_prime == 2.0);
    const ConjugateExponent b(1.5);
    CHECK(1.0 / b.p + 1.0 / b.p_prime == doctest::Approx(1.0).epsilon(1e-15));
    const ConjugateExponent c(1.0);
    CHECK(std::isinf(c.p_prime));
    CHECK_THROWS_AS(ConjugateExponent(0.9), InvalidExponent);
}

TEST_CASE("torus membership: constants and powers") {
    const Time t0(0.05);
    const double tol = 1e-8;

    CHECK(check_Dp_T(parse_weight_spec("const:1"), 2.0, t0, tol).status ==
          Membership::Member);
    CHECK(check_Dp_T(parse_weight_spec("const:1"), 1.0, t0, tol).status ==
          Membership::Member);

    // |x|^{1/2} at p = 2: integrand |x|^{-1/2} (bounded)^2, integrable
    CHECK(check_Dp_T(parse_weight_spec("powx:0.5"), 2.0, t0, tol).status ==
          Membership::Member);
    // |x| at p = 2: integrand |x|^{-1}, log-divergent
    CHECK(check_Dp_T(parse_weight_spec("powx:1"), 2.0, t0, tol).status ==
          Membership::NonMember);
    CHECK(check_Dp_T(parse_weight_spec("powx:2"), 2.0, t0, tol).status ==
          Membership::NonMember);
    // negative power: v blows up at 0, v^{-1/p} vanishes, fine
    CHECK(check_Dp_T(parse_weight_spec("powx:-0.5"), 2.0, t0, tol).status ==
          Membership::Member);
    // log-perturbed pair
    CHECK(check_Dp_T(parse_weight_spec("powxlog:0.5,2"), 2.0, t0, tol).status ==
          Membership::Member);
    CHECK(check_Dp_T(parse_weight_spec("powxlog:1,1"), 2.0, t0, tol).status ==
          Membership::NonMember);

    // p = 1 switches to essential boundedness of v^{-1} phi
    CHECK(check_Dp_T(parse_weight_spec("powx:0.5"), 1.0, t0, tol).status ==
          Membership::NonMember);
    CHECK(check_Dp_T(parse_weight_spec("powx:-0.5"), 1.0, t0, tol).status ==
          Membership::Member);
}

TEST_CASE("member estimates agree with direct quadrature") {
    // For v = 1 the defining integral is int phi_t0(x)^2 dx; check the
    // shell-based estimate against the general-purpose integrator.
    const Time t0(0.05);
    const Verdict v = check_Dp_T(parse_weight_spec("const:1"), 2.0, t0, 1e-9);
    KernelConfig cfg;
    cfg.tol = 1e-14;
    const QuadResult direct = integrate(
        [&](double x) {
            const double phi = eval(TorusPoint{x}, t0, cfg).value;
            return phi * phi;
        },
        -0.5, 0.5, 1e-12);
    CHECK(v.estimate == doctest::Approx(direct.value).epsilon(1e-7));
    CHECK(v.tail_bound < 1e-7);
}

TEST_CASE("membership is monotone from t0 down to t0/4") {
    const double tol = 1e-8;
    for (const char* spec : {"const:1", "powx:0.5", "powxlog:0.5,2"}) {
        const WeightSpec w = parse_weight_spec(spec);
        REQUIRE(check_Dp_T(w, 2.0, Time(0.05), tol).status == Membership::Member);
        for (double t0p : {0.05 / 4, 0.05 / 2}) {
            CHECK(check_Dp_T(w, 2.0, Time(t0p), tol).status == Membership::Member);
        }
    }
}

TEST_CASE("undeclared singular weight stays inconclusive") {
    // Same evaluator as powx:1 but with the declaration stripped: quadrature
    // alone may never certify divergence.
    WeightSpec w;
    w.name = "undeclared";
    w.torus_factor = [](double x) { return std::abs(x); };
    const Verdict v = check_Dp_T(w, 2.0, Time(0.05), 1e-8);
    CHECK(v.status == Membership::Inconclusive);
}

TEST_CASE("waveguide membership: gaussian rate threshold") {
    const double tol = 1e-8;
    const double Ymax = 8.0;
    const Time t0(0.05);
    // threshold at rate -p/(4 t0) = -10 for p = 2, t0 = 0.05
    CHECK(check_Dp_WG(parse_weight_spec("gaussy:-5"), 2.0, t0, tol, Ymax).status ==
          Membership::Member);
    CHECK(check_Dp_WG(parse_weight_spec("gaussy:-15"), 2.0, t0, tol, Ymax).status ==
          Membership::NonMember);
    // exactly at the threshold the integrand is constant in y: divergent
    CHECK(check_Dp_WG(parse_weight_spec("gaussy:-10"), 2.0, t0, tol, Ymax).status ==
          Membership::NonMember);
    // growing gaussian weight is always fine
    CHECK(check_Dp_WG(parse_weight_spec("gaussy:2"), 2.0, t0, tol, Ymax).status ==
          Membership::Member);
    // same weight, smaller t0: membership flips for the -15 rate
    CHECK(check_Dp_WG(parse_weight_spec("gaussy:-15"), 2.0, Time(0.01), tol, Ymax).status ==
          Membership::Member);

    // superexponential envelopes
    CHECK(check_Dp_WG(parse_weight_spec("cubey:-1"), 2.0, t0, tol, Ymax).status ==
          Membership::NonMember);
    CHECK(check_Dp_WG(parse_weight_spec("cubey:1"), 2.0, t0, tol, Ymax).status ==
          Membership::Member);
    CHECK(check_Dp_WG(parse_weight_spec("cubey:-1"), 2.0, Time(0.4), tol, Ymax).status ==
          Membership::NonMember);

    // torus-only weight treated as constant in y
    CHECK(check_Dp_WG(parse_weight_spec("const:1"), 2.0, t0, tol, Ymax).status ==
          Membership::Member);
}

TEST_CASE("catalog matches its analytic classification") {
    const double tol = 1e-8;
    for (const CatalogEntry& entry : catalog()) {
        for (double p : {1.0, 2.0}) {
            for (double t0 : {0.01, 0.05}) {
                const Membership expected = entry.expected(p, t0);
                const Verdict got =
                    entry.waveguide
                        ? check_Dp_WG(entry.weight, p, Time(t0), tol, 8.0)
                        : check_Dp_T(entry.weight, p, Time(t0), tol);
                INFO(entry.weight.name, " p=", p, " t0=", t0);
                CHECK(got.status == expected);
            }
        }
    }
}

TEST_CASE("companion weight for the constant weight") {
    // v = 1, p = 2: g^t(x) = int phi_t(y)^2 dy, independent of x.
    const Time t(0.1);
    const WeightSpec v = parse_weight_spec("const:1");
    const double at0 = companion_weight_T(v, 2.0, t, TorusPoint{0.0}, 1e-9);
    // frozen: sum over modes of exp(-8 pi^2 l^2 t)
    CHECK(at0 == doctest::Approx(1.0007446946121059).epsilon(1e-8));
    for (double x : {-0.37, 0.11, 0.499}) {
        CHECK(companion_weight_T(v, 2.0, t, TorusPoint{x}, 1e-9) ==
              doctest::Approx(at0).epsilon(1e-7));
    }
    // periodicity through reduction
    CHECK(companion_weight_T(v, 2.0, t, TorusPoint{1.25}, 1e-9) ==
          doctest::Approx(companion_weight_T(v, 2.0, t, TorusPoint{0.25}, 1e-9))
              .epsilon(1e-9));
    // u = min(1, 1/g)
    CHECK(companion_u_T(v, 2.0, t, TorusPoint{0.0}, 1e-9) ==
          doctest::Approx(std::min(1.0, 1.0 / at0)).epsilon(1e-8));
}

TEST_CASE("companion weight rejects certified divergence") {
    CHECK_THROWS_AS(
        companion_weight_T(parse_weight_spec("powx:2"), 2.0, Time(0.1), TorusPoint{0.2}, 1e-8),
        DivergentIntegral);
    CHECK_THROWS_AS(
        companion_weight_T(parse_weight_spec("const:1"), 1.0, Time(0.1), TorusPoint{0.0}, 1e-8),
        InvalidExponent);
}

TEST_CASE("waveguide companion weight") {
    const Time t(0.1);
    const WeightSpec v = parse_weight_spec("const:1");
    const WaveguidePoint z0(TorusPoint{0.0}, {0.0});
    const double h0 = companion_weight_WG(v, 2.0, t, z0, 1e-9);
    // separable: (int phi^2) * (int gaussian^2) with the gaussian factor
    //   int ((4 pi t)^{-1/2} e^{-u^2/4t})^2 du = (8 pi t)^{-1/2}
    const double torus_part = 1.0007446946121059;
    const double euclid_part = 1.0 / std::sqrt(8.0 * M_PI * t.value());
    CHECK(h0 == doctest::Approx(torus_part * euclid_part).epsilon(1e-7));

    // u(z) <= e^{-|z|^2} wherever h >= 1
    SplitMix64 rng(17);
    for (int i = 0; i < 5; ++i) {
        const WaveguidePoint z(TorusPoint{rng.uniform(-0.5, 0.5)}, {rng.uniform(-1.5, 1.5)});
        const double h = companion_weight_WG(v, 2.0, t, z, 1e-8);
        const double u = companion_u_WG(v, 2.0, t, z, 1e-8);
        if (h >= 1.0) CHECK(u <= std::exp(-z.norm_sq()) + 1e-12);
        CHECK(u <= 1.0);
    }
}

TEST_CASE("companion-weight norm inequality on the grid") {
    // || phi_t * f ||_{L^p_u}^p <= || f ||_{L^p_v}^p * int g^t u, with
    // u = min(1, 1/g^t).
    const Time t(0.1);
    const double p = 2.0;
    const Grid grid(1, 0, 64);
    for (const char* spec : {"const:1", "powx:0.5"}) {
        const WeightSpec vw = parse_weight_spec(spec);
        const GridFunction v_grid = sample_with_clipping(
            grid, [&](double x) { return vw.torus_factor(x); }, {0.0});
        std::vector<double> u_vals(grid.size()), gu_vals(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double g =
                companion_weight_T(vw, p, t, TorusPoint{grid.coordinate(0, static_cast<int>(i))}, 1e-7);
            u_vals[i] = std::min(1.0, 1.0 / g);
            gu_vals[i] = std::min(g, 1.0);  // g * u
        }
        const GridFunction u_grid(grid, std::move(u_vals));
        double int_gu = 0.0;
        for (double gu : gu_vals) int_gu += gu * grid.cell_measure();

        SplitMix64 rng(808);
        for (int trial = 0; trial < 4; ++trial) {
            std::vector<double> fv(grid.size());
            for (double& x : fv) x = rng.uniform(-1.0, 1.0);
            const GridFunction f(grid, std::move(fv));
            const GridFunction conv = evolve_torus(f, t);
            const double lhs = std::pow(weighted_norm(conv, u_grid, p).value, p);
            const double rhs =
                std::pow(weighted_norm(f, v_grid, p).value, p) * int_gu;
            CHECK(lhs <= rhs * (1.0 + 1e-4) + 1e-6 + 8.0 * grid.spacing(0) * rhs);
        }
    }
}

TEST_CASE("weight mini-language") {
    CHECK(parse_weight_spec("const:2.5").torus_factor(0.3) == 2.5);
    CHECK(parse_weight_spec("powx:2").torus_factor(-0.25) == doctest::Approx(0.0625));
    const WeightSpec wl = parse_weight_spec("powxlog:1,2");
    CHECK(wl.torus_factor(0.1) ==
          doctest::Approx(0.1 * std::pow(std::log(std::exp(1.0) / 0.1), 2.0)));
    CHECK(parse_weight_spec("gaussy:-3").euclid_factor(1.5) ==
          doctest::Approx(std::exp(-3.0 * 2.25)));
    CHECK(parse_weight_spec("cubey:0.5").euclid_factor(-2.0) ==
          doctest::Approx(std::exp(0.5 * 8.0)));
    CHECK_THROWS(parse_weight_spec("nope:1"));
    CHECK_THROWS(parse_weight_spec("const"));
    CHECK_THROWS_AS(parse_weight_spec("const:-1"), NonPositiveWeight);
}

TEST_CASE("divergence spike datum") {
    CHECK(divergence_spike(0.3) == 0.0);
    CHECK(divergence_spike(0.1) ==
          doctest::Approx(1.0 / (0.1 * std::pow(std::log(std::exp(1.0) / 0.1), 2.0))));
    // singular-node clipping: node at 0 takes the value at h/2
    const Grid g(1, 0, 64);
    const GridFunction f = sample_with_clipping(g, divergence_spike, {0.0});
    const std::size_t zero_node = periodic_extension_index({0.0}, g);
    CHECK(f[zero_node] == doctest::Approx(divergence_spike(1.0 / 128)));
}

TEST_CASE("finite weighted data evolves to finite values; paired witness diverges") {
    // Member side: catalog members applied to bounded data stay finite.
    const Grid g(1, 0, 256);
    const GridFunction f = GridFunction::sample(g, [](const std::vector<double>& x) {
        return std::cos(2.0 * M_PI * x[0]) + 1.2;
    });
    const GridFunction u = evolve_torus(f, Time(0.05));
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(std::isfinite(u[i]));

    // NonMember showcase: v = |x|^2 fails at p = 2, and f = |x|^{-1.45} has
    // finite v-weighted norm while phi_t0 * f blows up at the origin under
    // refinement.
    const WeightSpec v = parse_weight_spec("powx:2");
    auto witness = [](double x) {
        const double ax = std::abs(x);
        return ax < 0.25 ? std::pow(ax, -1.45) : 0.0;
    };
    double prev_probe = 0.0, prev_norm = -1.0;
    for (int logN : {8, 10, 12}) {
        const int N = 1 << logN;
        const Grid gg(1, 0, N);
        const GridFunction fw = sample_with_clipping(gg, witness, {0.0});
        const GridFunction vg = sample_with_clipping(
            gg, [&](double x) { return v.torus_factor(x); }, {0.0});
        const double norm = weighted_norm(fw, vg, 2.0).value;
        if (prev_norm >= 0.0) CHECK(norm <= prev_norm * 1.2 + 0.1);  // stays bounded
        prev_norm = norm;

        // quadrature of phi_t0 * f at the probe node grows without bound
        KernelConfig cfg;
        cfg.tol = 1e-10;
        double probe = 0.0;
        for (std::size_t j = 0; j < gg.size(); ++j)
            probe += eval(TorusPoint{-gg.coordinate(0, static_cast<int>(j))}, Time(0.05), cfg)
                         .value *
                     fw[j] * gg.cell_measure();
        CHECK(probe > prev_probe);
        prev_probe = probe;
    }
}

TEST_CASE("file-backed weights") {
    const Grid g(1, 0, 32);
    const GridFunction w = GridFunction::sample(g, [](const std::vector<double>& x) {
        return 2.0 + std::sin(2.0 * M_PI * x[0]);
    });
    write_csv_file(w, "file_weight_tmp.csv");
    const WeightSpec spec = parse_weight_spec("file:file_weight_tmp.csv");
    CHECK(spec.torus_factor(g.coordinate(0, 5)) == w[5]);
    // nearest-node lookup through the periodic extension
    CHECK(spec.torus_factor(g.coordinate(0, 5) + 1.0) == w[5]);
    // bounded positive grid data is always a member
    CHECK(check_Dp_T(spec, 2.0, Time(0.05), 1e-7).status == Membership::Member);

    const GridFunction bad = GridFunction::constant(g, -1.0);
    write_csv_file(bad, "file_weight_bad_tmp.csv");
    CHECK_THROWS_AS(parse_weight_spec("file:file_weight_bad_tmp.csv"), NonPositiveWeight);
}

TEST_CASE("constant weight is a member for any exponent") {
    const WeightSpec one = parse_weight_spec("const:1");
    for (double p : {1.0, 1.5, 3.0, 7.0})
        CHECK(check_Dp_T(one, p, Time(0.2), 1e-8).status == Membership::Member);
}
