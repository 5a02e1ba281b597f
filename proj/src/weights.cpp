#include "heatlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "heatlab/errors.hpp"
#include "heatlab/kernel.hpp"

namespace heatlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Divergence of \int_0 x^{-q} (ln(e/x))^{-r} dx near the singularity.
bool power_log_divergent(double q, double r) {
    if (q > 1.0) return true;
    if (q == 1.0) return r <= 1.0;
    return false;
}

// v -> 0 at the singular point, so v^{-1} is essentially unbounded there.
bool weight_vanishes(const Singularity& s) {
    return s.power > 0.0 || (s.power == 0.0 && s.log_power < 0.0);
}

double midpoint_panel(const std::function<double(double)>& F, double a, double b,
                      int m) {
    const double h = (b - a) / m;
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += F(a + (i + 0.5) * h);
    return s * h;
}

struct PanelValue {
    double value = 0.0;
    double last_change = 0.0;
    bool converged = false;
};

// Composite midpoint with panel doubling until the update stalls below tol.
PanelValue refined_panel(const std::function<double(double)>& F, double a, double b,
                         double tol) {
    int m = 16;
    double prev = midpoint_panel(F, a, b, m);
    PanelValue out;
    while (m < 4096) {
        m *= 2;
        const double cur = midpoint_panel(F, a, b, m);
        out.last_change = std::abs(cur - prev);
        if (out.last_change <= tol) {
            out.value = cur;
            out.converged = true;
            return out;
        }
        prev = cur;
    }
    out.value = prev;
    return out;
}

struct UnitResult {
    double value = 0.0;
    double last_increment = 0.0;
    double tail = 0.0;
    int levels = 0;
    bool converged = false;
    bool finite = true;
};

// Dyadic shells from `far` toward the singular endpoint `sing`; level k
// covers the points at distance (|far-sing|) * [2^-k-1, 2^-k]. Descend until
// the level contribution drops below tol.
UnitResult shells_toward(const std::function<double(double)>& F, double sing,
                         double far, double tol, int max_levels) {
    UnitResult out;
    const double w = far - sing;
    double prev_inc = kInf;
    for (int k = 0; k < max_levels; ++k) {
        const double e1 = sing + w * std::pow(0.5, k + 1);
        const double e2 = sing + w * std::pow(0.5, k);
        const double lo = std::min(e1, e2), hi = std::max(e1, e2);
        const PanelValue inc = refined_panel(F, lo, hi, std::max(tol * 0.01, 1e-17));
        out.levels = k + 1;
        if (!std::isfinite(inc.value)) {
            out.finite = false;
            return out;
        }
        out.value += inc.value;
        out.last_increment = std::abs(inc.value);
        if (out.last_increment < tol) {
            out.converged = true;
            // Geometric extrapolation of what the deeper shells still hold.
            const double ratio =
                prev_inc > 0.0 ? std::min(out.last_increment / prev_inc, 0.9) : 0.5;
            out.tail = out.last_increment * ratio / (1.0 - ratio);
            return out;
        }
        prev_inc = std::max(out.last_increment, 1e-300);
    }
    out.tail = out.last_increment;
    return out;
}

UnitResult smooth_panel(const std::function<double(double)>& F, double a, double b,
                        double tol) {
    const PanelValue pv = refined_panel(F, a, b, tol * 0.1);
    UnitResult out;
    out.value = pv.value;
    out.last_increment = pv.last_change;
    out.levels = 1;
    out.finite = std::isfinite(pv.value);
    out.converged = pv.converged && out.finite;
    return out;
}

struct IntegralSummary {
    double value = 0.0;
    double increment = 0.0;
    double tail = 0.0;
    int levels = 0;
    bool converged = true;
    bool finite = true;

    void absorb(const UnitResult& u) {
        value += u.value;
        increment = std::max(increment, u.last_increment);
        tail += u.tail;
        levels = std::max(levels, u.levels);
        converged = converged && u.converged;
        finite = finite && u.finite;
    }
};

// Integral of F over Q_1 split at the declared singular points and
// smoothness breaks, dyadic shells on every singular side, plain refined
// panels elsewhere.
IntegralSummary integrate_torus_shells(const std::function<double(double)>& F,
                                       std::vector<double> sing,
                                       std::vector<double> breaks, double tol,
                                       int max_levels) {
    std::sort(sing.begin(), sing.end());
    sing.erase(std::unique(sing.begin(), sing.end()), sing.end());

    std::vector<double> cuts = {-0.5};
    for (double s : sing)
        if (s > -0.5 && s < 0.5) cuts.push_back(s);
    for (double b : breaks)
        if (b > -0.5 && b < 0.5) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    cuts.push_back(0.5);

    // Count tolerance units: one per shell side, one per smooth panel.
    auto is_sing = [&](double x) {
        return std::find(sing.begin(), sing.end(), x) != sing.end();
    };
    int units = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const bool ls = is_sing(cuts[i]), rs = is_sing(cuts[i + 1]);
        units += (ls && rs) ? 2 : 1;
    }
    const double share = tol / std::max(1, units);

    IntegralSummary total;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        const bool ls = is_sing(a), rs = is_sing(b);
        if (ls && rs) {
            const double mid = 0.5 * (a + b);
            total.absorb(shells_toward(F, a, mid, share, max_levels));
            total.absorb(shells_toward(F, b, mid, share, max_levels));
        } else if (ls) {
            total.absorb(shells_toward(F, a, b, share, max_levels));
        } else if (rs) {
            total.absorb(shells_toward(F, b, a, share, max_levels));
        } else {
            total.absorb(smooth_panel(F, a, b, share));
        }
    }
    return total;
}

// Geometric panels in the Euclidean variable: integrate H (already folded to
// u >= 0) over [0, cap] with edges 0,1,2,4,8,... until increments stall.
IntegralSummary integrate_euclid_panels(const std::function<double(double)>& H,
                                        double cap, double tol) {
    IntegralSummary total;
    double lo = 0.0, hi = 1.0;
    int used = 0;
    while (lo < cap) {
        const double b = std::min(hi, cap);
        const PanelValue inc = refined_panel(H, lo, b, std::max(tol * 0.01, 1e-17));
        ++used;
        total.levels = used;
        if (!std::isfinite(inc.value)) {
            total.finite = false;
            total.converged = false;
            return total;
        }
        total.value += inc.value;
        total.increment = std::abs(inc.value);
        if (total.increment < tol && b >= std::min(4.0, cap)) {
            total.converged = true;
            return total;
        }
        lo = b;
        hi *= 2.0;
    }
    total.converged = total.increment < tol;
    total.tail = total.increment;
    return total;
}

enum class TailKind { Finite, Infinite, Unknown };

struct TailBound {
    TailKind kind = TailKind::Unknown;
    double bound = 0.0;
};

// Bound on \int_{|y| >= Y} (v_y^{-1/p}(y) e^{-y^2/(4 t0)})^{p'} dy.
TailBound euclid_tail(const GrowthClass& gc, double p, double p_prime, double t0,
                      double Y, const std::function<double(double)>& vy) {
    const double q0 = p_prime / (4.0 * t0);
    auto mills = [&](double c) { return std::exp(-c * Y * Y) / (c * Y); };
    switch (gc.kind) {
        case EuclidGrowth::Gaussian: {
            const double c = p_prime * gc.rate / p + q0;
            if (c <= 0.0) return {TailKind::Infinite, kInf};
            return {TailKind::Finite, mills(c)};
        }
        case EuclidGrowth::Superexponential: {
            if (gc.rate < 0.0) return {TailKind::Infinite, kInf};
            return {TailKind::Finite, mills(q0)};
        }
        case EuclidGrowth::Bounded: {
            if (!(gc.rate > 0.0)) return {TailKind::Unknown, 0.0};
            return {TailKind::Finite, std::pow(gc.rate, -p_prime / p) * mills(q0)};
        }
        case EuclidGrowth::Polynomial: {
            const double v_at_Y = vy(Y);
            if (!(v_at_Y > 0.0)) return {TailKind::Unknown, 0.0};
            const double scale = std::pow(v_at_Y, -p_prime / p);
            const double s = -gc.rate * p_prime / p;  // growth of v^{-p'/p}
            if (s <= 0.0) return {TailKind::Finite, scale * mills(q0)};
            const double u_star = std::sqrt(s / q0);
            const double peak = u_star <= Y
                                    ? std::exp(-0.5 * q0 * Y * Y)
                                    : std::pow(u_star / Y, s) * std::exp(-0.5 * s);
            return {TailKind::Finite,
                    scale * peak * std::exp(-0.5 * q0 * Y * Y) / (0.5 * q0 * Y)};
        }
        case EuclidGrowth::Undeclared:
        default:
            return {TailKind::Unknown, 0.0};
    }
}

KernelConfig kernel_config_for(double tol) {
    KernelConfig cfg;
    cfg.tol = std::clamp(tol * 1e-3, 1e-15, 1e-12);
    return cfg;
}

Verdict check_T_p1(const WeightSpec& v, Time t0, double /*tol*/) {
    Verdict out;
    for (const Singularity& s : v.singularities) {
        if (weight_vanishes(s)) {
            out.status = Membership::NonMember;
            out.estimate = kInf;
            return out;
        }
    }
    // Essential sup of v^{-1} phi_t0 by dense sampling plus geometric probes
    // toward each declared singularity.
    const KernelConfig kcfg = kernel_config_for(1e-8);
    auto probe = [&](double x) {
        const double w = v.torus_factor(x);
        if (!(w > 0.0)) throw NonPositiveWeight("check_Dp_T: weight not positive");
        return eval(TorusPoint{x}, t0, kcfg).value / w;
    };
    double sup = 0.0;
    const int M = 4096;
    for (int i = 0; i < M; ++i) sup = std::max(sup, probe(-0.5 + (i + 0.5) / M));
    for (const Singularity& s : v.singularities)
        for (int j = 1; j <= 48; ++j) {
            const double d = std::pow(0.5, j);
            sup = std::max(sup, probe(reduce_to_cell(s.where + d)));
            sup = std::max(sup, probe(reduce_to_cell(s.where - d)));
        }
    out.status = Membership::Member;
    out.estimate = sup;
    out.refinement_levels = 48;
    return out;
}

}  // namespace

const char* to_string(Membership m) {
    switch (m) {
        case Membership::Member: return "Member";
        case Membership::NonMember: return "NonMember";
        default: return "Inconclusive";
    }
}

ConjugateExponent::ConjugateExponent(double p_in) : p(p_in) {
    if (!(p >= 1.0)) throw InvalidExponent("ConjugateExponent: p must be >= 1");
    p_prime = p == 1.0 ? kInf : p / (p - 1.0);
}

Verdict check_Dp_T(const WeightSpec& v, double p, Time t0, double tol) {
    if (v.dim_euclid != 0) throw Error("check_Dp_T: expected a torus weight");
    if (!(tol > 0.0)) throw Error("check_Dp_T: tol must be > 0");
    const ConjugateExponent pe(p);
    if (p == 1.0) return check_T_p1(v, t0, tol);

    const double ratio = pe.p_prime / p;
    bool divergent = false;
    for (const Singularity& s : v.singularities)
        divergent = divergent ||
                    power_log_divergent(s.power * ratio, s.log_power * ratio);

    const KernelConfig kcfg = kernel_config_for(tol);
    auto F = [&](double x) {
        const double w = v.torus_factor(x);
        if (!(w > 0.0)) throw NonPositiveWeight("check_Dp_T: weight not positive");
        const double phi = eval(TorusPoint{x}, t0, kcfg).value;
        return std::pow(w, -ratio) * std::pow(phi, pe.p_prime);
    };
    std::vector<double> sing;
    for (const Singularity& s : v.singularities) sing.push_back(s.where);

    // A certified divergence still gets a shallow evidence pass.
    const IntegralSummary I =
        integrate_torus_shells(F, sing, v.smoothness_breaks, tol, divergent ? 8 : 60);

    Verdict out;
    out.estimate = I.value;
    out.tail_bound = I.tail;
    out.refinement_levels = I.levels;
    if (divergent)
        out.status = Membership::NonMember;
    else if (I.converged && I.finite)
        out.status = Membership::Member;
    else
        out.status = Membership::Inconclusive;
    return out;
}

Verdict check_Dp_WG(const WeightSpec& v, double p, Time t0, double tol, double Ymax) {
    if (v.dim_euclid != 0 && v.dim_euclid != 1)
        throw Error("check_Dp_WG: unsupported Euclidean dimension");
    if (!(Ymax > 0.0)) throw Error("check_Dp_WG: Ymax must be > 0");
    const ConjugateExponent pe(p);
    const double tv = t0.value();

    const GrowthClass growth =
        v.dim_euclid == 1 ? v.euclid_growth : GrowthClass{EuclidGrowth::Bounded, 1.0};
    auto vy = [&](double y) { return v.dim_euclid == 1 ? v.euclid_factor(y) : 1.0; };

    if (p == 1.0) {
        // Essential boundedness of v^{-1}(x,y) e^{-y^2/(4 t0)}.
        Verdict out;
        for (const Singularity& s : v.singularities)
            if (weight_vanishes(s)) {
                out.status = Membership::NonMember;
                out.estimate = kInf;
                return out;
            }
        bool y_bounded = true;
        switch (growth.kind) {
            case EuclidGrowth::Gaussian: y_bounded = growth.rate >= -1.0 / (4.0 * tv); break;
            case EuclidGrowth::Superexponential: y_bounded = growth.rate >= 0.0; break;
            case EuclidGrowth::Bounded:
            case EuclidGrowth::Polynomial:
            case EuclidGrowth::Undeclared: y_bounded = true; break;
        }
        if (!y_bounded) {
            out.status = Membership::NonMember;
            out.estimate = kInf;
            return out;
        }
        double sup_x = 0.0;
        const int M = 4096;
        for (int i = 0; i < M; ++i) {
            const double x = -0.5 + (i + 0.5) / M;
            sup_x = std::max(sup_x, 1.0 / v.torus_factor(x));
        }
        double sup_y = 0.0;
        for (int i = 0; i <= 2048; ++i) {
            const double y = Ymax * i / 2048.0;
            const double g = std::exp(-y * y / (4.0 * tv));
            sup_y = std::max(sup_y, std::max(g / vy(y), g / vy(-y)));
        }
        out.status = Membership::Member;
        out.estimate = sup_x * sup_y;
        return out;
    }

    const double ratio = pe.p_prime / p;
    bool divergent = false;
    for (const Singularity& s : v.singularities)
        divergent = divergent ||
                    power_log_divergent(s.power * ratio, s.log_power * ratio);
    const TailBound tail = euclid_tail(growth, p, pe.p_prime, tv, Ymax, vy);
    divergent = divergent || tail.kind == TailKind::Infinite;

    auto Fx = [&](double x) {
        const double w = v.torus_factor(x);
        if (!(w > 0.0)) throw NonPositiveWeight("check_Dp_WG: weight not positive");
        return std::pow(w, -ratio);
    };
    std::vector<double> sing;
    for (const Singularity& s : v.singularities) sing.push_back(s.where);
    const IntegralSummary Ix =
        integrate_torus_shells(Fx, sing, v.smoothness_breaks, tol, divergent ? 8 : 60);

    auto Hy = [&](double u) {
        const double g = std::exp(-pe.p_prime * u * u / (4.0 * tv));
        return g * (std::pow(vy(u), -ratio) + std::pow(vy(-u), -ratio));
    };
    const double y_cap = divergent ? std::min(2.0, Ymax) : Ymax;
    const IntegralSummary Iy = integrate_euclid_panels(Hy, y_cap, tol);

    Verdict out;
    out.estimate = Ix.value * Iy.value;
    out.refinement_levels = std::max(Ix.levels, Iy.levels);
    out.tail_bound = Ix.tail * Iy.value +
                     (tail.kind == TailKind::Finite ? tail.bound : Iy.tail) * Ix.value;
    if (divergent)
        out.status = Membership::NonMember;
    else if (Ix.converged && Ix.finite && Iy.converged && Iy.finite)
        out.status = Membership::Member;
    else
        out.status = Membership::Inconclusive;
    return out;
}

double companion_weight_T(const WeightSpec& v, double p, Time t, const TorusPoint& x,
                          double tol) {
    if (v.dim_euclid != 0) throw Error("companion_weight_T: expected a torus weight");
    if (!(p > 1.0)) throw InvalidExponent("companion_weight_T: p must be > 1");
    if (x.dim() != 1) throw Error("companion_weight_T: 1-D torus only");
    const ConjugateExponent pe(p);
    const double ratio = pe.p_prime / p;

    for (const Singularity& s : v.singularities)
        if (power_log_divergent(s.power * ratio, s.log_power * ratio))
            throw DivergentIntegral(
                "companion_weight_T: declared singularity certifies divergence");

    const KernelConfig kcfg = kernel_config_for(tol);
    auto F = [&](double y) {
        const double w = v.torus_factor(y);
        if (!(w > 0.0)) throw NonPositiveWeight("companion_weight_T: weight not positive");
        const double phi = eval(TorusPoint{x[0] - y}, t, kcfg).value;
        return std::pow(phi, pe.p_prime) * std::pow(w, -ratio);
    };
    std::vector<double> sing;
    for (const Singularity& s : v.singularities) sing.push_back(s.where);
    const IntegralSummary I =
        integrate_torus_shells(F, sing, v.smoothness_breaks, tol, 60);
    if (!I.converged || !I.finite)
        throw DivergentIntegral("companion_weight_T: refinement did not converge");
    return std::pow(I.value, p / pe.p_prime);
}

double companion_u_T(const WeightSpec& v, double p, Time t, const TorusPoint& x,
                     double tol) {
    return std::min(1.0, 1.0 / companion_weight_T(v, p, t, x, tol));
}

double companion_weight_WG(const WeightSpec& v, double p, Time t,
                           const WaveguidePoint& z, double tol) {
    if (v.dim_euclid != 0 && v.dim_euclid != 1)
        throw Error("companion_weight_WG: unsupported Euclidean dimension");
    if (!(p > 1.0)) throw InvalidExponent("companion_weight_WG: p must be > 1");
    if (z.torus_dim() != 1 || z.euclid_dim() != 1)
        throw Error("companion_weight_WG: T^1 x R only");
    const ConjugateExponent pe(p);
    const double ratio = pe.p_prime / p;
    const double tv = t.value();

    for (const Singularity& s : v.singularities)
        if (power_log_divergent(s.power * ratio, s.log_power * ratio))
            throw DivergentIntegral(
                "companion_weight_WG: declared singularity certifies divergence");
    const GrowthClass growth =
        v.dim_euclid == 1 ? v.euclid_growth : GrowthClass{EuclidGrowth::Bounded, 1.0};
    if (growth.kind == EuclidGrowth::Gaussian && growth.rate <= -p / (4.0 * tv))
        throw DivergentIntegral("companion_weight_WG: Gaussian growth certifies divergence");
    if (growth.kind == EuclidGrowth::Superexponential && growth.rate < 0.0)
        throw DivergentIntegral(
            "companion_weight_WG: superexponential growth certifies divergence");

    auto vy = [&](double y) { return v.dim_euclid == 1 ? v.euclid_factor(y) : 1.0; };
    const KernelConfig kcfg = kernel_config_for(tol);
    const double x0 = z.torus_part()[0];
    auto Fx = [&](double y) {
        const double w = v.torus_factor(y);
        if (!(w > 0.0))
            throw NonPositiveWeight("companion_weight_WG: weight not positive");
        const double phi = eval(TorusPoint{x0 - y}, t, kcfg).value;
        return std::pow(phi, pe.p_prime) * std::pow(w, -ratio);
    };
    std::vector<double> sing;
    for (const Singularity& s : v.singularities) sing.push_back(s.where);
    const IntegralSummary Ix =
        integrate_torus_shells(Fx, sing, v.smoothness_breaks, tol, 60);

    const double y0 = z.euclid_part()[0];
    const double gauss_pref = std::pow(4.0 * std::numbers::pi * tv, -0.5);
    auto Hy = [&](double u) {
        auto G = [&](double yp) {
            const double d = y0 - yp;
            return std::pow(gauss_pref * std::exp(-d * d / (4.0 * tv)), pe.p_prime) *
                   std::pow(vy(yp), -ratio);
        };
        return G(y0 + u) + G(y0 - u);
    };
    // Panels reach far enough that the Gaussian factor is dead and growth-side
    // contributions have stalled.
    const double reach = std::abs(y0) + 8.0 + 16.0 * std::sqrt(tv);
    const IntegralSummary Iy = integrate_euclid_panels(Hy, reach, tol);
    if (!Ix.converged || !Ix.finite || !Iy.converged || !Iy.finite)
        throw DivergentIntegral("companion_weight_WG: refinement did not converge");
    return std::pow(Ix.value * Iy.value, p / pe.p_prime);
}

double companion_u_WG(const WeightSpec& v, double p, Time t, const WaveguidePoint& z,
                      double tol) {
    const double h = companion_weight_WG(v, p, t, z, tol);
    return std::min(1.0, std::exp(-z.norm_sq()) / h);
}

namespace {

Membership classify_power_log_T(double beta, double gamma, double p) {
    if (p == 1.0)
        return (beta > 0.0 || (beta == 0.0 && gamma < 0.0)) ? Membership::NonMember
                                                            : Membership::Member;
    const double ratio = 1.0 / (p - 1.0);  // p'/p
    return power_log_divergent(beta * ratio, gamma * ratio) ? Membership::NonMember
                                                            : Membership::Member;
}

Membership classify_gaussian_WG(double a, double p, double t0) {
    if (p == 1.0) return a >= -1.0 / (4.0 * t0) ? Membership::Member : Membership::NonMember;
    return (a / p + 1.0 / (4.0 * t0)) > 0.0 ? Membership::Member : Membership::NonMember;
}

WeightSpec make_const(double c) {
    if (!(c > 0.0)) throw NonPositiveWeight("const weight must be positive");
    WeightSpec w;
    std::ostringstream name;
    name << "const:" << c;
    w.name = name.str();
    w.torus_factor = [c](double) { return c; };
    w.euclid_growth = {EuclidGrowth::Bounded, c};
    return w;
}

WeightSpec make_powx(double beta) {
    WeightSpec w;
    std::ostringstream name;
    name << "powx:" << beta;
    w.name = name.str();
    w.torus_factor = [beta](double x) { return std::pow(std::abs(x), beta); };
    w.singularities = {{0.0, beta, 0.0}};
    return w;
}

WeightSpec make_powxlog(double beta, double gamma) {
    WeightSpec w;
    std::ostringstream name;
    name << "powxlog:" << beta << ',' << gamma;
    w.name = name.str();
    w.torus_factor = [beta, gamma](double x) {
        const double ax = std::abs(x);
        return std::pow(ax, beta) * std::pow(std::log(std::exp(1.0) / ax), gamma);
    };
    w.singularities = {{0.0, beta, gamma}};
    return w;
}

WeightSpec make_gaussy(double a) {
    WeightSpec w;
    std::ostringstream name;
    name << "gaussy:" << a;
    w.name = name.str();
    w.dim_euclid = 1;
    w.euclid_factor = [a](double y) { return std::exp(a * y * y); };
    w.euclid_growth = {EuclidGrowth::Gaussian, a};
    return w;
}

WeightSpec make_cubey(double a) {
    WeightSpec w;
    std::ostringstream name;
    name << "cubey:" << a;
    w.name = name.str();
    w.dim_euclid = 1;
    w.euclid_factor = [a](double y) {
        return std::exp(a * std::abs(y) * y * y);
    };
    w.euclid_growth = {EuclidGrowth::Superexponential, a};
    return w;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = [] {
        std::vector<CatalogEntry> c;
        auto power_entry = [&](double beta, double gamma) {
            c.push_back({gamma == 0.0 ? make_powx(beta) : make_powxlog(beta, gamma),
                         false,
                         [beta, gamma](double p, double) {
                             return classify_power_log_T(beta, gamma, p);
                         }});
        };
        c.push_back({make_const(1.0), false,
                     [](double, double) { return Membership::Member; }});
        power_entry(0.5, 0.0);
        power_entry(1.0, 0.0);
        power_entry(2.0, 0.0);
        power_entry(-0.5, 0.0);
        power_entry(0.5, 2.0);
        power_entry(1.0, 1.0);
        c.push_back({make_const(1.0), true,
                     [](double, double) { return Membership::Member; }});
        for (double a : {2.0, -5.0, -15.0})
            c.push_back({make_gaussy(a), true, [a](double p, double t0) {
                             return classify_gaussian_WG(a, p, t0);
                         }});
        for (double a : {1.0, -1.0})
            c.push_back({make_cubey(a), true, [a](double, double) {
                             return a < 0.0 ? Membership::NonMember : Membership::Member;
                         }});
        return c;
    }();
    return entries;
}

WeightSpec parse_weight_spec(const std::string& spec) {
    const std::size_t colon = spec.find(':');
    if (colon == std::string::npos)
        throw Error("weight spec must look like kind:args, got '" + spec + "'");
    const std::string kind = spec.substr(0, colon);
    const std::string args = spec.substr(colon + 1);
    auto parse_double = [&](const std::string& s) {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw Error("bad number '" + s + "' in weight spec");
        return v;
    };
    if (kind == "const") return make_const(parse_double(args));
    if (kind == "powx") return make_powx(parse_double(args));
    if (kind == "powxlog") {
        const std::size_t comma = args.find(',');
        if (comma == std::string::npos) throw Error("powxlog needs beta,gamma");
        return make_powxlog(parse_double(args.substr(0, comma)),
                            parse_double(args.substr(comma + 1)));
    }
    if (kind == "gaussy") return make_gaussy(parse_double(args));
    if (kind == "cubey") return make_cubey(parse_double(args));
    if (kind == "file") {
        auto gf = std::make_shared<GridFunction>(read_csv_file(args));
        if (gf->grid().dim_euclid() != 0 || gf->grid().dim_torus() != 1)
            throw Error("file weight must be a 1-D torus GridFunction");
        for (std::size_t i = 0; i < gf->size(); ++i)
            if (!((*gf)[i] > 0.0))
                throw NonPositiveWeight("file weight must be strictly positive");
        WeightSpec w;
        w.name = "file:" + args;
        w.torus_factor = [gf](double x) {
            return (*gf)[periodic_extension_index({x}, gf->grid())];
        };
        w.euclid_growth = {EuclidGrowth::Undeclared, 0.0};
        const int N = gf->grid().points_per_axis();
        for (int j = 0; j < N; ++j) w.smoothness_breaks.push_back(-0.5 + static_cast<double>(j) / N);
        return w;
    }
    throw Error("unknown weight kind '" + kind + "'");
}

double divergence_spike(double x) {
    const double ax = std::abs(x);
    if (ax >= 0.25) return 0.0;
    const double l = std::log(std::exp(1.0) / ax);
    return 1.0 / (ax * l * l);
}

GridFunction sample_with_clipping(const Grid& grid,
                                  const std::function<double(double)>& f,
                                  const std::vector<double>& singular_points) {
    if (grid.dim() != 1 || grid.dim_euclid() != 0)
        throw Error("sample_with_clipping: 1-D torus grids only");
    const double h = grid.spacing(0);
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double x = grid.coordinate(0, static_cast<int>(i));
        for (double s : singular_points)
            if (std::abs(x - s) < 1e-9 * h) x = s + 0.5 * h;
        vals[i] = f(x);
    }
    return GridFunction(grid, std::move(vals));
}

}  // namespace heatlab
