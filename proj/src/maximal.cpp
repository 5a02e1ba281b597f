#include "heatlab/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "heatlab/errors.hpp"

namespace heatlab {
namespace {

double max_spacing(const Grid& g) {
    double h = 0.0;
    for (int a = 0; a < g.dim(); ++a) h = std::max(h, g.spacing(a));
    return h;
}

// Smallest support margin of f to the Euclidean boundary, with the same
// relative floor as evolve_waveguide.
double euclid_support_margin(const GridFunction& f) {
    const Grid& g = f.grid();
    const int N = g.points_per_axis();
    double max_abs = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) max_abs = std::max(max_abs, std::abs(f[i]));
    if (max_abs == 0.0) return 2.0 * g.euclid_halfwidth();
    const double floor_v = 1e-13 * max_abs;
    std::vector<int> lo(g.dim_euclid(), N), hi(g.dim_euclid(), -1);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (std::abs(f[i]) <= floor_v) continue;
        const std::vector<int> multi = g.multi_index(i);
        for (int a = 0; a < g.dim_euclid(); ++a) {
            const int j = multi[g.dim_torus() + a];
            lo[a] = std::min(lo[a], j);
            hi[a] = std::max(hi[a], j);
        }
    }
    const double hE = 2.0 * g.euclid_halfwidth() / N;
    double margin = 2.0 * g.euclid_halfwidth();
    for (int a = 0; a < g.dim_euclid(); ++a)
        margin = std::min(margin, std::min(lo[a] * hE, (N - hi[a]) * hE));
    return margin;
}

}  // namespace

RadiiSet::RadiiSet(std::vector<double> radii, double cap)
    : radii_(std::move(radii)), cap_(cap) {
    if (radii_.empty()) throw Error("RadiiSet: empty");
    if (!(cap_ > 0.0) || cap_ > 0.5) throw Error("RadiiSet: cap must lie in (0, 1/2]");
    double prev = 0.0;
    for (double r : radii_) {
        if (!(r > prev)) throw Error("RadiiSet: radii must be strictly increasing and > 0");
        prev = r;
    }
    if (radii_.back() > cap_) throw Error("RadiiSet: radii must not exceed the cap");
}

RadiiSet RadiiSet::default_net(double h, double cap) {
    if (!(h > 0.0) || h / 2.0 > cap)
        throw Error("RadiiSet: default net needs h/2 <= cap");
    std::vector<double> radii;
    for (double r = h / 2.0; r <= cap; r += h) radii.push_back(r);
    if (radii.back() < cap) radii.push_back(cap);
    return RadiiSet(std::move(radii), cap);
}

RadiiSet RadiiSet::default_net(const Grid& grid, double cap) {
    return default_net(max_spacing(grid), cap);
}

TimeSet::TimeSet(double R, int levels) : R_(R) {
    if (!(R > 0.0) || R >= 0.5) throw Error("TimeSet: R must lie in (0, 1/2)");
    if (levels < 1) throw Error("TimeSet: need at least one level");
    times_.reserve(levels + 1);
    for (int j = 0; j <= levels; ++j) times_.push_back(R * std::pow(2.0, -j));
}

double ball_average(const GridFunction& f, std::size_t center, double r) {
    const Grid& g = f.grid();
    const int d = g.dim();
    const int N = g.points_per_axis();
    if (r < 0.5 * max_spacing(g))
        throw EmptyBall("ball_average: r below half the grid spacing");

    const std::vector<int> c = g.multi_index(center);
    std::vector<int> reach(d);
    for (int a = 0; a < d; ++a)
        reach[a] = static_cast<int>(std::floor(r / g.spacing(a))) + 1;

    const double r_sq = r * r;
    double sum = 0.0;
    long count = 0;
    std::vector<int> off(d);
    for (int a = 0; a < d; ++a) off[a] = -reach[a];
    for (;;) {
        double dist_sq = 0.0;
        for (int a = 0; a < d; ++a) {
            const double dx = off[a] * g.spacing(a);
            dist_sq += dx * dx;
        }
        if (dist_sq <= r_sq) {
            ++count;
            bool inside = true;
            std::vector<int> multi(d);
            for (int a = 0; a < d; ++a) {
                int j = c[a] + off[a];
                if (g.is_torus_axis(a)) {
                    j = ((j % N) + N) % N;
                } else if (j < 0 || j >= N) {
                    inside = false;
                }
                multi[a] = j;
            }
            if (inside) sum += std::abs(f[g.flat_index(multi)]);
        }
        int axis = d - 1;
        while (axis >= 0 && ++off[axis] > reach[axis]) {
            off[axis] = -reach[axis];
            --axis;
        }
        if (axis < 0) break;
    }
    return sum / static_cast<double>(count);
}

double max_at_index(const GridFunction& f, const RadiiSet& radii, std::size_t center) {
    double best = 0.0;
    for (double r : radii.radii()) best = std::max(best, ball_average(f, center, r));
    return best;
}

GridFunction local_max_op(const GridFunction& f, const RadiiSet& radii) {
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = max_at_index(f, radii, i);
    return GridFunction(f.grid(), std::move(out));
}

GridFunction torus_max_op(const GridFunction& f, const RadiiSet& radii) {
    if (f.grid().dim_euclid() != 0)
        throw NotTorusGrid("torus_max_op: grid has Euclidean axes");
    if (radii.cap() != 0.5) throw Error("torus_max_op: radii cap must be 1/2");
    return local_max_op(f, radii);
}

GridFunction waveguide_max_op(const GridFunction& f, const RadiiSet& radii) {
    if (f.grid().dim_euclid() < 1)
        throw Error("waveguide_max_op: grid has no Euclidean axes");
    if (euclid_support_margin(f) < radii.cap())
        throw SupportTooCloseToBoundary(
            "waveguide_max_op: support margin below the radii cap");
    return local_max_op(f, radii);
}

GridFunction heat_max_op(const GridFunction& f, const TimeSet& times) {
    std::vector<double> out(f.size(), 0.0);
    const bool torus = f.grid().dim_euclid() == 0;
    for (double t : times.times()) {
        const GridFunction u =
            torus ? evolve_torus(f, Time(t)) : evolve_waveguide(f, Time(t)).values;
        for (std::size_t i = 0; i < f.size(); ++i)
            out[i] = std::max(out[i], std::abs(u[i]));
    }
    return GridFunction(f.grid(), std::move(out));
}

AnnulusIndex annulus_index(const WaveguidePoint& z) {
    const double r = z.norm();
    if (r < 0.5) return {0};
    return {static_cast<int>(std::floor(r + 0.5))};
}

BallSpec ball_index_set(int k) {
    if (k < 0) throw Error("ball_index_set: k must be >= 0");
    return {k, k + 1.5};
}

double domination_constant(int n, double R) {
    if (n < 1) throw Error("domination_constant: n must be >= 1");
    if (!(R > 0.0) || R >= 0.5) throw Error("domination_constant: R must lie in (0, 1/2)");
    const double front = std::pow(2.0 * (std::sqrt(R) + std::sqrt(std::numbers::pi)), n);
    double dyadic = std::pow(2.0 * n, 0.5 * n);
    for (int j = 0;; ++j) {
        const double term =
            std::pow(2.0 * n * std::pow(2.0, j + 1), 0.5 * n) * std::exp(-0.5 * n * std::pow(2.0, j));
        dyadic += term;
        if (term < 1e-18) break;
    }
    return front * dyadic;
}

}  // namespace heatlab
