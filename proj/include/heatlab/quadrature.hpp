#ifndef HEATLAB_QUADRATURE_HPP
#define HEATLAB_QUADRATURE_HPP

#include <functional>

namespace heatlab {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;   // accumulated error estimate
    int evaluations = 0;
};

// Adaptive Gauss-Legendre quadrature of f over [a, b]. Each panel is
// estimated with a 7/15-point pair; panels whose discrepancy exceeds their
// share of tol are bisected, depth-first in a fixed left-to-right order so
// results are deterministic. tol is an absolute target for the estimate.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double tol, int max_depth = 48);

}  // namespace heatlab

#endif
