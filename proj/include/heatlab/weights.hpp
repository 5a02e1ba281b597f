#ifndef HEATLAB_WEIGHTS_HPP
#define HEATLAB_WEIGHTS_HPP

// Weight classes for which the heat semigroup converges pointwise: a weight v
// on the torus belongs to the class at time t0 when v^{-1/p} phi_t0 lies in
// L^{p'}; on the waveguide the kernel factor is the Euclidean Gaussian
// exp(-|y|^2/(4 t0)). Membership is decided by certified quadrature plus
// analytic certificates from the declared singular/growth classes; divergence
// is never concluded from floating-point quadrature alone.
//
// Numerical domains are T^1 and T^1 x R; certificates are stated for n = 1.

#include <functional>
#include <string>
#include <vector>

#include "heatlab/grid.hpp"
#include "heatlab/point.hpp"

namespace heatlab {

/** Declared local behavior v(x) ~ c |x-where|^power (ln(e/|x-where|))^log_power. */
struct Singularity {
    double where = 0.0;
    double power = 0.0;
    double log_power = 0.0;
};

enum class EuclidGrowth {
    Bounded,           // v bounded below by `rate` for large |y|
    Polynomial,        // v ~ |y|^rate
    Gaussian,          // v ~ exp(rate * |y|^2), rate signed
    Superexponential,  // v ~ exp(rate * |y|^3), rate signed
    Undeclared,
};

struct GrowthClass {
    EuclidGrowth kind = EuclidGrowth::Bounded;
    double rate = 1.0;
};

// Strictly positive weight, separable as torus_factor(x) * euclid_factor(y).
// The declarations are metadata used only for tail and divergence
// certificates; the evaluators are the ground truth elsewhere.
struct WeightSpec {
    std::string name;
    int dim_euclid = 0;  // 0: weight on T^1; 1: weight on T^1 x R
    std::function<double(double)> torus_factor = [](double) { return 1.0; };
    std::function<double(double)> euclid_factor = [](double) { return 1.0; };
    std::vector<Singularity> singularities;
    GrowthClass euclid_growth;
    // Points where the torus factor is merely continuous or jumps (grid cell
    // edges of file-backed weights); quadrature panels never straddle them.
    std::vector<double> smoothness_breaks;

    double operator()(double x) const { return torus_factor(x); }
    double operator()(double x, double y) const {
        return torus_factor(x) * euclid_factor(y);
    }
};

enum class Membership { Member, NonMember, Inconclusive };

const char* to_string(Membership m);

struct Verdict {
    Membership status = Membership::Inconclusive;
    double estimate = 0.0;    // quadrature value of the defining integral
    double tail_bound = 0.0;  // certified or extrapolated remainder
    int refinement_levels = 0;
};

/** Exponent pair with 1/p + 1/p' = 1; p = 1 pairs with p' = infinity. */
struct ConjugateExponent {
    double p;
    double p_prime;
    explicit ConjugateExponent(double p_in);
};

// Membership of v in the torus class at time t0: adaptively integrates
// (v^{-1/p} phi_t0)^{p'} over Q_1 with dyadic shells toward each declared
// singularity. Member once increments fall below tol; NonMember only on an
// analytic power-counting certificate; Inconclusive otherwise. For p = 1
// tests essential boundedness of v^{-1} phi_t0 instead.
Verdict check_Dp_T(const WeightSpec& v, double p, Time t0, double tol);

// Waveguide analogue over Q_1 x [-Y, Y] with Y grown geometrically to Ymax;
// the tail beyond Y is certified from the declared growth class.
Verdict check_Dp_WG(const WeightSpec& v, double p, Time t0, double tol, double Ymax);

// Companion weight from the boundedness construction:
//   g^t(x) = || phi_t(x - .) v^{-1/p}(.) ||_{L^{p'}(T^1)}^p,
// by certified quadrature. Throws DivergentIntegral when the declared
// behavior certifies divergence or refinement grows without bound.
double companion_weight_T(const WeightSpec& v, double p, Time t, const TorusPoint& x,
                          double tol);
// u(x) = min(1, 1/g^t(x)).
double companion_u_T(const WeightSpec& v, double p, Time t, const TorusPoint& x,
                     double tol);

// Waveguide companion h^t(z) = || phi^WG_t(z - .) v^{-1/p}(.) ||_{L^{p'}}^p and
// its damped companion u(z) = min(1, exp(-|z|^2)/h^t(z)).
double companion_weight_WG(const WeightSpec& v, double p, Time t,
                           const WaveguidePoint& z, double tol);
double companion_u_WG(const WeightSpec& v, double p, Time t, const WaveguidePoint& z,
                      double tol);

/** Catalog entry: a weight plus its analytic classification per (p, t0). */
struct CatalogEntry {
    WeightSpec weight;
    bool waveguide = false;  // classification refers to the waveguide class
    std::function<Membership(double p, double t0)> expected;
};

// Analytically classified example weights: constants, torus powers across
// the power-counting threshold, log-perturbed powers, Euclidean Gaussians on
// both sides of the rate threshold, and cubic-exponential envelopes.
const std::vector<CatalogEntry>& catalog();

// Mini-language: const:c | powx:beta | powxlog:beta,gamma | gaussy:a |
// cubey:a | file:<path>. gaussy:a means exp(a*|y|^2) with signed a; cubey:a
// means exp(a*|y|^3). file: weights use nearest-node lookup on a stored
// 1-D torus GridFunction and carry no declarations.
WeightSpec parse_weight_spec(const std::string& spec);

// Integrable spike whose maximal function fails to be locally integrable:
//   f(x) = |x|^{-1} (ln(e/|x|))^{-2} on |x| < 1/4, else 0.
// A test datum for divergence experiments, not a weight.
double divergence_spike(double x);

// Sample a function with declared singular points on a grid; a node landing
// on a singular point takes the value at offset h/2 in that direction.
GridFunction sample_with_clipping(const Grid& grid,
                                  const std::function<double(double)>& f,
                                  const std::vector<double>& singular_points);

}  // namespace heatlab

#endif
