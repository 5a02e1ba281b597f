#ifndef HEATLAB_POINT_HPP
#define HEATLAB_POINT_HPP

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "heatlab/errors.hpp"

namespace heatlab {

// Canonical representative of a coordinate on the unit-period circle,
// in the half-open fundamental cell [-1/2, 1/2).  +1/2 maps to -1/2.
inline double reduce_to_cell(double c) {
    double r = c - std::floor(c + 0.5);
    // Rounding in c + 0.5 can push r onto +1/2 or just below -1/2.
    if (r >= 0.5) r -= 1.0;
    if (r < -0.5) r += 1.0;
    return r;
}

/** Point on the n-torus, stored as its representative in Q_n = [-1/2,1/2)^n. */
class TorusPoint {
  public:
    TorusPoint() = default;
    explicit TorusPoint(std::vector<double> coords) : coords_(std::move(coords)) {
        for (double& c : coords_) c = reduce_to_cell(c);
    }
    TorusPoint(std::initializer_list<double> coords)
        : TorusPoint(std::vector<double>(coords)) {}

    std::size_t dim() const { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }
    const std::vector<double>& coords() const { return coords_; }

    double norm_sq() const {
        double s = 0.0;
        for (double c : coords_) s += c * c;
        return s;
    }
    double norm() const { return std::sqrt(norm_sq()); }

  private:
    std::vector<double> coords_;
};

/** Point on the waveguide T^n x R^m: torus part reduced, Euclidean part free. */
class WaveguidePoint {
  public:
    WaveguidePoint() = default;
    WaveguidePoint(TorusPoint torus_part, std::vector<double> euclid_part)
        : torus_(std::move(torus_part)), euclid_(std::move(euclid_part)) {}

    const TorusPoint& torus_part() const { return torus_; }
    const std::vector<double>& euclid_part() const { return euclid_; }
    std::size_t torus_dim() const { return torus_.dim(); }
    std::size_t euclid_dim() const { return euclid_.size(); }

    double norm_sq() const {
        double s = torus_.norm_sq();
        for (double y : euclid_) s += y * y;
        return s;
    }
    double norm() const { return std::sqrt(norm_sq()); }

  private:
    TorusPoint torus_;
    std::vector<double> euclid_;
};

/** Strictly positive diffusion time. Construction validates t > 0. */
class Time {
  public:
    explicit Time(double t) : t_(t) {
        if (!(t > 0.0)) throw NonPositiveTime(t);
    }
    double value() const { return t_; }

  private:
    double t_;
};

}  // namespace heatlab

#endif
