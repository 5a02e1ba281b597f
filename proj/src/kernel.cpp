#include "heatlab/kernel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "heatlab/quadrature.hpp"

namespace heatlab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Compensated (Kahan) accumulator; summation order is fixed by the caller.
struct KahanSum {
    double sum = 0.0;
    double c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

// Per-axis truncation radius cap, sized so the full box stays below ~2^26
// terms. Exceeding it raises ToleranceTooTight.
int axis_cap(int n) {
    switch (n) {
        case 1: return 1 << 25;
        case 2: return 4095;
        default: return 201;
    }
}

// Pi(S_i + tau_i) - Pi(S_i), expanded telescopically so no cancellation
// occurs: sum_i tau_i * prod_{j<i}(S_j+tau_j) * prod_{j>i} S_j.
double product_tail(const std::vector<double>& s, const std::vector<double>& tau) {
    const int n = static_cast<int>(s.size());
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        double term = tau[i];
        for (int j = 0; j < i; ++j) term *= s[j] + tau[j];
        for (int j = i + 1; j < n; ++j) term *= s[j];
        total += term;
    }
    return total;
}

struct GaussianAxes {
    std::vector<std::vector<double>> terms;  // terms[i][k+K] = exp(-(x_i+k)^2/4t)
    std::vector<double> sums;                // per-axis compensated sums
    std::vector<double> tails;               // certified per-axis tails
    int K = 0;
};

// Tail of one axis beyond |k| <= K: for k >= K+1 and |x| <= 1/2 the terms are
// dominated by b_k = exp(-(k-1/2)^2/4t), whose consecutive ratio is at most
// q = exp(-(K+1)/2t), so both sides together stay below 2 b_{K+1} / (1-q).
double gaussian_axis_tail(int K, double t) {
    const double q = std::exp(-(K + 1) / (2.0 * t));
    if (q >= 1.0) return std::numeric_limits<double>::infinity();
    const double lead = std::exp(-(K + 0.5) * (K + 0.5) / (4.0 * t));
    return 2.0 * lead / (1.0 - q);
}

GaussianAxes build_gaussian_axes(const TorusPoint& x, double t, int K) {
    const std::size_t n = x.dim();
    GaussianAxes ax;
    ax.K = K;
    ax.terms.resize(n);
    ax.sums.resize(n);
    ax.tails.assign(n, gaussian_axis_tail(K, t));
    for (std::size_t i = 0; i < n; ++i) {
        ax.terms[i].resize(2 * K + 1);
        KahanSum s;
        for (int k = -K; k <= K; ++k) {
            const double d = x[i] + k;
            const double v = std::exp(-d * d / (4.0 * t));
            ax.terms[i][k + K] = v;
            s.add(v);
        }
        ax.sums[i] = s.sum;
    }
    return ax;
}

// Lexicographic sum of prod_i terms[i][k_i] over the full box.
double box_sum(const GaussianAxes& ax) {
    const std::size_t n = ax.terms.size();
    const std::size_t width = 2 * ax.K + 1;
    KahanSum s;
    std::vector<std::size_t> idx(n, 0);
    for (;;) {
        double term = 1.0;
        for (std::size_t i = 0; i < n; ++i) term *= ax.terms[i][idx[i]];
        s.add(term);
        std::size_t axis = n;
        while (axis > 0 && ++idx[axis - 1] == width) {
            idx[axis - 1] = 0;
            --axis;
        }
        if (axis == 0) break;
    }
    return s.sum;
}

// cos(2 pi l x) with the phase reduced to [-1/2, 1/2] before scaling by
// 2 pi. fma splits l*x into an exact sum p + e, and p - nearbyint(p) is
// exact, so the reduced phase carries no l-proportional rounding error.
double cos_two_pi(long l, double x) {
    const double p = static_cast<double>(l) * x;
    const double e = std::fma(static_cast<double>(l), x, -p);
    const double r = (p - std::nearbyint(p)) + e;
    return std::cos(2.0 * kPi * r);
}

// Frequency-side tail of one axis beyond |l| <= L: ratio between consecutive
// coefficients is at most exp(-4 pi^2 (2L+3) t).
double fourier_axis_tail(int L, double t) {
    const double a = 4.0 * kPi * kPi * t;
    const double q = std::exp(-a * (2 * L + 3));
    const double lead = std::exp(-a * (L + 1) * (L + 1));
    return 2.0 * lead / (1.0 - q);
}

}  // namespace

KernelValue eval_gaussian(const TorusPoint& x, Time t, double tol) {
    if (!(tol > 0.0)) throw Error("eval_gaussian: tol must be > 0");
    const int n = static_cast<int>(x.dim());
    if (n == 0) throw Error("eval_gaussian: zero-dimensional point");
    const double tv = t.value();
    const double pref = std::pow(4.0 * kPi * tv, -0.5 * n);
    const int cap = axis_cap(n);

    // Initial radius from the tail formula, then verify and grow.
    const double axis_scale = std::max(1.0, std::sqrt(4.0 * kPi * tv));
    const double log_arg =
        std::max(2.0, 4.0 * n * pref * std::pow(axis_scale, n - 1) / tol);
    int K = static_cast<int>(
        std::ceil(0.5 + std::sqrt(std::max(0.0, 4.0 * tv * std::log(log_arg)))));
    if (K < 1) K = 1;

    GaussianAxes ax;
    double trunc = 0.0;
    const double target = 0.5 * tol;
    for (;;) {
        if (K > cap)
            throw ToleranceTooTight(
                "eval_gaussian: truncation radius exceeds cap; use the Fourier "
                "representation");
        ax = build_gaussian_axes(x, tv, K);
        trunc = pref * product_tail(ax.sums, ax.tails);
        if (trunc <= target) break;
        ++K;
    }

    KernelValue out;
    out.value = pref * box_sum(ax);
    double axes_product = 1.0;
    for (double s : ax.sums) axes_product *= s;
    const double fp = 2.0 * n * kEps * pref * axes_product;
    out.error_bound = trunc + fp;
    return out;
}

KernelValue eval_fourier(const TorusPoint& x, Time t, double tol) {
    if (!(tol > 0.0)) throw Error("eval_fourier: tol must be > 0");
    const int n = static_cast<int>(x.dim());
    if (n == 0) throw Error("eval_fourier: zero-dimensional point");
    const double tv = t.value();
    const double a = 4.0 * kPi * kPi * tv;
    const int cap = axis_cap(n);

    // Roundoff floor of the cancelling cosine sums; if it cannot fit inside
    // tol no L will help and the Gaussian representation must take over.
    const double axis_abs = std::max(1.0, std::sqrt(kPi / a));
    const double fp_est = 2.0 * n * kEps * std::pow(axis_abs, n);
    if (fp_est > 0.75 * tol)
        throw ToleranceTooTight(
            "eval_fourier: roundoff floor exceeds tol; use the Gaussian "
            "representation");
    const double target = 0.9 * (tol - fp_est);

    int L = static_cast<int>(std::ceil(std::sqrt(
        std::max(0.0, std::log(std::max(2.0, 4.0 * n * std::pow(axis_abs, n - 1) /
                                                 target)) /
                          a))));
    if (L < 1) L = 1;

    std::vector<double> value_sums(n);
    std::vector<double> abs_sums(n);
    std::vector<double> tails(n);
    double trunc = 0.0;
    for (;;) {
        if (L > cap)
            throw ToleranceTooTight(
                "eval_fourier: frequency radius exceeds cap; use the Gaussian "
                "representation");
        for (int i = 0; i < n; ++i) {
            KahanSum s, sa;
            s.add(1.0);
            sa.add(1.0);
            for (long l = 1; l <= L; ++l) {
                const double w = std::exp(-a * static_cast<double>(l * l));
                s.add(2.0 * w * cos_two_pi(l, x[i]));
                sa.add(2.0 * w);
            }
            value_sums[i] = s.sum;
            abs_sums[i] = sa.sum;
            tails[i] = fourier_axis_tail(L, tv);
        }
        trunc = product_tail(abs_sums, tails);
        if (trunc <= target) break;
        ++L;
    }

    KernelValue out;
    out.value = 1.0;
    for (double s : value_sums) out.value *= s;
    double abs_product = 1.0;
    for (double s : abs_sums) abs_product *= s;
    out.error_bound = trunc + 2.0 * n * kEps * abs_product;
    // The kernel is positive; cancellation noise below the error bound may
    // land marginally negative and is clamped.
    if (out.value < 0.0 && -out.value <= out.error_bound) out.value = 0.0;
    return out;
}

KernelValue eval(const TorusPoint& x, Time t, const KernelConfig& cfg) {
    if (!(cfg.tol > 0.0)) throw Error("eval: cfg.tol must be > 0");
    if (!(cfg.switch_t > 0.0)) throw Error("eval: cfg.switch_t must be > 0");
    switch (cfg.representation) {
        case Representation::GaussianSum:
            return eval_gaussian(x, t, cfg.tol);
        case Representation::FourierSum:
            return eval_fourier(x, t, cfg.tol);
        case Representation::Auto:
        default:
            return t.value() < cfg.switch_t ? eval_gaussian(x, t, cfg.tol)
                                            : eval_fourier(x, t, cfg.tol);
    }
}

KernelValue eval_waveguide(const WaveguidePoint& z, Time t, const KernelConfig& cfg) {
    const int m = static_cast<int>(z.euclid_dim());
    const double tv = t.value();
    KernelValue torus = eval(z.torus_part(), t, cfg);
    double y_sq = 0.0;
    for (double y : z.euclid_part()) y_sq += y * y;
    const double gauss_factor =
        std::pow(4.0 * kPi * tv, -0.5 * m) * std::exp(-y_sq / (4.0 * tv));
    return {torus.value * gauss_factor, torus.error_bound * gauss_factor};
}

double lower_bound(const TorusPoint& x, Time t) {
    const int n = static_cast<int>(x.dim());
    const double tv = t.value();
    return std::pow(4.0 * kPi * tv, -0.5 * n) * std::exp(-x.norm_sq() / (4.0 * tv));
}

double upper_bound(const TorusPoint& x, Time t) {
    const int n = static_cast<int>(x.dim());
    const double tv = t.value();
    return std::pow(2.0 * (1.0 + std::sqrt(kPi / tv)), n) *
           std::exp(-x.norm_sq() / (4.0 * tv));
}

std::pair<double, double> waveguide_bounds(const WaveguidePoint& z, Time t) {
    const int n = static_cast<int>(z.torus_dim());
    const int m = static_cast<int>(z.euclid_dim());
    const double tv = t.value();
    const double decay = std::exp(-z.norm_sq() / (4.0 * tv));
    const double lower = std::pow(4.0 * kPi * tv, -0.5 * (n + m)) * decay;
    const double upper = std::pow(2.0 * (1.0 + std::sqrt(kPi / tv)), n) *
                         std::pow(4.0 * kPi * tv, -0.5 * m) * decay;
    return {lower, upper};
}

std::pair<double, double> split(const TorusPoint& x, Time t, double R,
                                const KernelConfig& cfg) {
    if (!(t.value() < R && R < 0.5))
        throw InvalidWindow("split: requires 0 < t < R < 1/2");
    const double n = static_cast<double>(x.dim());
    const KernelValue v = eval(x, t, cfg);
    if (x.norm_sq() <= 2.0 * n * R) return {v.value, 0.0};
    return {0.0, v.value};
}

double tail_mass(int n, double delta, Time t, double tol) {
    if (n != 1 && n != 2) throw Error("tail_mass: supported dimensions are 1 and 2");
    const double reach = 0.5 * std::sqrt(static_cast<double>(n));
    if (!(delta >= 0.0) || delta >= reach)
        throw InvalidDelta("tail_mass: delta must lie in [0, sqrt(n)/2)");
    if (!(tol > 0.0)) throw Error("tail_mass: tol must be > 0");

    KernelConfig cfg;
    cfg.tol = std::min(1e-13, tol * 1e-3);
    if (cfg.tol < 1e-15) cfg.tol = 1e-15;
    auto phi1 = [&](double u) {
        return eval(TorusPoint{u}, t, cfg).value;
    };

    if (n == 1) {
        // phi_t is even, so the tail is twice the one-sided integral.
        return 2.0 * integrate(phi1, delta, 0.5, 0.25 * tol).value;
    }

    // n = 2: full mass factorizes; the excluded disk (clipped to the square
    // for delta > 1/2) is integrated in polar coordinates using the
    // eight-fold symmetry of the integrand.
    const double one_dim = 2.0 * integrate(phi1, 0.0, 0.5, 0.125 * tol).value;
    const double full = one_dim * one_dim;
    if (delta == 0.0) return full;

    auto wedge = [&](double theta) {
        const double r_hi = std::min(delta, 0.5 / std::cos(theta));
        auto radial = [&](double r) {
            return phi1(r * std::cos(theta)) * phi1(r * std::sin(theta)) * r;
        };
        return integrate(radial, 0.0, r_hi, tol / 64.0).value;
    };
    const double disk = 8.0 * integrate(wedge, 0.0, 0.25 * kPi, tol / 32.0).value;
    return full - disk;
}

}  // namespace heatlab
