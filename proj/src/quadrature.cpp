#include "heatlab/quadrature.hpp"

#include <cmath>

namespace heatlab {
namespace {

// Gauss-Kronrod 7/15 pair on [-1, 1].
constexpr double kKronrodNodes[15] = {
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};

constexpr double kKronrodWeights[15] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

// Gauss-7 weights attach to the odd Kronrod nodes.
constexpr double kGaussWeights[7] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

struct PanelEstimate {
    double kronrod;
    double discrepancy;
};

PanelEstimate estimate_panel(const std::function<double(double)>& f, double a,
                             double b, int* evals) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double fk = 0.0, fg = 0.0;
    for (int i = 0; i < 15; ++i) {
        const double v = f(mid + half * kKronrodNodes[i]);
        fk += kKronrodWeights[i] * v;
        if (i % 2 == 1) fg += kGaussWeights[i / 2] * v;
    }
    *evals += 15;
    return {fk * half, std::abs((fk - fg) * half)};
}

void integrate_rec(const std::function<double(double)>& f, double a, double b,
                   double tol, int depth, int max_depth, QuadResult* acc) {
    PanelEstimate e = estimate_panel(f, a, b, &acc->evaluations);
    if (e.discrepancy <= tol || depth >= max_depth) {
        acc->value += e.kronrod;
        acc->error += e.discrepancy;
        return;
    }
    const double mid = 0.5 * (a + b);
    integrate_rec(f, a, mid, 0.5 * tol, depth + 1, max_depth, acc);
    integrate_rec(f, mid, b, 0.5 * tol, depth + 1, max_depth, acc);
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double tol, int max_depth) {
    QuadResult acc;
    if (a == b) return acc;
    integrate_rec(f, a, b, tol, 0, max_depth, &acc);
    return acc;
}

}  // namespace heatlab
