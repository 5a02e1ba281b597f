#ifndef HEATLAB_GRID_HPP
#define HEATLAB_GRID_HPP

// Uniform grids over Q_n (optionally times a truncated box [-Y,Y]^m),
// sampled scalar functions, weighted L^p norms, and the heat semigroup
// applied as a spectral multiplier.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "heatlab/point.hpp"

namespace heatlab {

// Torus axes sample {-1/2 + j/N : 0 <= j < N}; Euclidean axes sample
// {-Y + j*(2Y/N)}. Both follow the half-open convention of Q_n.
class Grid {
  public:
    Grid(int dim_torus, int dim_euclid, int points_per_axis,
         double euclid_halfwidth = 0.0);

    int dim_torus() const { return n_; }
    int dim_euclid() const { return m_; }
    int dim() const { return n_ + m_; }
    int points_per_axis() const { return N_; }
    double euclid_halfwidth() const { return Y_; }

    bool is_torus_axis(int axis) const { return axis < n_; }
    double spacing(int axis) const;
    double coordinate(int axis, int index) const;
    std::vector<double> point(std::size_t flat) const;

    std::size_t size() const { return size_; }
    double cell_measure() const;

    std::size_t flat_index(const std::vector<int>& multi) const;
    std::vector<int> multi_index(std::size_t flat) const;

    bool operator==(const Grid& other) const = default;

  private:
    int n_ = 0;
    int m_ = 0;
    int N_ = 0;
    double Y_ = 0.0;
    std::size_t size_ = 0;
};

/** Scalar samples on a Grid, immutable after construction. */
class GridFunction {
  public:
    GridFunction(Grid grid, std::vector<double> values);

    static GridFunction constant(const Grid& grid, double c);
    static GridFunction sample(const Grid& grid,
                               const std::function<double(const std::vector<double>&)>& f);

    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

  private:
    Grid grid_;
    std::vector<double> values_;
};

struct WeightedNorm {
    double p = 1.0;
    double value = 0.0;
};

// Riemann approximation of (integral |f|^p v)^{1/p} with the grid's cell
// measure. Requires matching grids, v > 0 everywhere, p >= 1.
WeightedNorm weighted_norm(const GridFunction& f, const GridFunction& v, double p);

// Heat semigroup on a pure torus grid: DFT, multiply mode l by
// exp(-4 pi^2 |l|^2 t) with frequencies folded to [-N/2, N/2), inverse DFT.
// The imaginary residue must stay below 1e-12 or the call fails loudly.
GridFunction evolve_torus(const GridFunction& f, Time t);

struct WaveguideEvolution {
    GridFunction values;
    // Certified bound on the error from treating the Euclidean axes as a
    // period-2Y box: the Gaussian mass leaking across the support margin.
    double periodization_bound = 0.0;
};

// Spectral evolution with Euclidean axes treated as a large periodic box.
// The sampled data must keep a margin of at least 4 sqrt(t) between its
// support and the Euclidean boundary.
WaveguideEvolution evolve_waveguide(const GridFunction& f, Time t);

// Flat index of the sample representing x once reduced mod 1 to Q_n.
// Implements the 1-periodic extension lookup without materializing copies.
// Torus axes only (the grid must have dim_euclid == 0).
std::size_t periodic_extension_index(const std::vector<double>& x, const Grid& grid);

// CSV round-trip. Header lines carry the grid metadata, then one row per
// sample: index,coord_1,...,coord_d,value with 17 significant digits so the
// round trip is bit-exact.
void write_csv(const GridFunction& f, std::ostream& os);
void write_csv_file(const GridFunction& f, const std::string& path);
GridFunction read_csv(std::istream& is);
GridFunction read_csv_file(const std::string& path);

}  // namespace heatlab

#endif
