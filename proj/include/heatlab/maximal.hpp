#ifndef HEATLAB_MAXIMAL_HPP
#define HEATLAB_MAXIMAL_HPP

// Discrete maximal operators over grid functions: the local Hardy-Littlewood
// operator over a finite radii net, its torus and waveguide versions taken
// through the periodic extension, and the heat maximal operator over a
// geometric time net. Plus the annulus/ball geometry used to localize the
// waveguide boundedness argument.

#include <cstddef>
#include <vector>

#include "heatlab/grid.hpp"
#include "heatlab/point.hpp"

namespace heatlab {

/** Finite discretization of sup over ball radii 0 < r <= cap. */
class RadiiSet {
  public:
    RadiiSet(std::vector<double> radii, double cap);
    // Default net {h/2 + j*h} clipped to (0, cap], with cap appended.
    static RadiiSet default_net(double h, double cap);
    // Same, with h taken as the grid's coarsest axis spacing.
    static RadiiSet default_net(const Grid& grid, double cap);
    const std::vector<double>& radii() const { return radii_; }
    double cap() const { return cap_; }

  private:
    std::vector<double> radii_;
    double cap_;
};

/** Geometric time net t_j = R * 2^-j, j = 0..levels, for sup over 0 < t < R. */
class TimeSet {
  public:
    TimeSet(double R, int levels);
    const std::vector<double>& times() const { return times_; }
    double cap() const { return R_; }

  private:
    std::vector<double> times_;
    double R_;
};

// Mean of |f| over the sample points within squared distance <= r^2 of the
// center sample. Torus axes reach through the periodic extension (points of
// the extension lattice, with multiplicity); Euclidean axes extend by zero
// but still count toward the ball measure. r below half the coarsest axis
// spacing is an error (the ball convention keeps the center inside).
double ball_average(const GridFunction& f, std::size_t center, double r);

// max over the radii net of ball_average at one node.
double max_at_index(const GridFunction& f, const RadiiSet& radii, std::size_t center);

// Pointwise maximum of ball_average over the radii net.
GridFunction local_max_op(const GridFunction& f, const RadiiSet& radii);

// Torus maximal operator: local_max_op through the 1-periodic extension.
// Requires a pure torus grid and radii cap exactly 1/2.
GridFunction torus_max_op(const GridFunction& f, const RadiiSet& radii);

// Waveguide maximal operator: periodic on torus axes, plain extension on
// Euclidean axes. The support of f must keep a margin of at least the radii
// cap from the Euclidean boundary so the zero extension is exact.
GridFunction waveguide_max_op(const GridFunction& f, const RadiiSet& radii);

// Heat maximal operator: pointwise max of |evolve(f, t_j)| over the net.
// Dispatches to evolve_torus or evolve_waveguide by grid type.
GridFunction heat_max_op(const GridFunction& f, const TimeSet& times);

/** Index of the radial annulus of Q_n x R^m containing z. */
struct AnnulusIndex {
    int k = 0;
};

// k = 0 when |z| < 1/2, else the unique k >= 1 with k - 1/2 <= |z| < k + 1/2.
AnnulusIndex annulus_index(const WaveguidePoint& z);

/** The open ball B_k = { |z| < k + 3/2 } containing annulus A_k. */
struct BallSpec {
    int k = 0;
    double radius = 1.5;
    bool contains(const WaveguidePoint& z) const { return z.norm() < radius; }
};

BallSpec ball_index_set(int k);

// The constant C'_n dominating the near part of the heat maximal operator by
// the Hardy-Littlewood operator:
//   C'_n = 2^n (sqrt(R) + sqrt(pi))^n * ( (2n)^{n/2} + sum_j C_{n,j} ),
//   C_{n,j} = (2n 2^{j+1})^{n/2} exp(-(n/2) 2^j),
// with the dyadic sum taken to convergence.
double domination_constant(int n, double R);

}  // namespace heatlab

#endif
