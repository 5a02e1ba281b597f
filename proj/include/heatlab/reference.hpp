#ifndef HEATLAB_REFERENCE_HPP
#define HEATLAB_REFERENCE_HPP

// Naive reference implementations used as oracles: plain nested loops over
// every candidate offset, no shared code with the production paths. Both
// sides follow the same documented traversal order (offset boxes in
// lexicographic order, last axis fastest, plain accumulation), so the
// outputs must agree bit for bit.

#include "heatlab/grid.hpp"
#include "heatlab/maximal.hpp"

namespace heatlab::reference {

// Supports grids with one or two axes (T^1, T^2, T^1 x R).
double ball_average(const GridFunction& f, std::size_t center, double r);
GridFunction local_max_op(const GridFunction& f, const RadiiSet& radii);
GridFunction torus_max_op(const GridFunction& f, const RadiiSet& radii);
GridFunction waveguide_max_op(const GridFunction& f, const RadiiSet& radii);

// Direct quadrature convolution sum_y phi_t(x - y) f(y) h^n on a torus grid,
// the slow-path check for the spectral evolution.
GridFunction convolve_with_kernel(const GridFunction& f, Time t, double kernel_tol);

}  // namespace heatlab::reference

#endif
