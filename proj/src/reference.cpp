#include "heatlab/reference.hpp"

#include <cmath>

#include "heatlab/errors.hpp"
#include "heatlab/kernel.hpp"

namespace heatlab::reference {

double ball_average(const GridFunction& f, std::size_t center, double r) {
    const Grid& g = f.grid();
    const int d = g.dim();
    const int N = g.points_per_axis();
    if (d > 2) throw Error("reference::ball_average: at most two axes");

    double coarsest = 0.0;
    for (int a = 0; a < d; ++a) coarsest = std::max(coarsest, g.spacing(a));
    if (r < 0.5 * coarsest)
        throw EmptyBall("reference::ball_average: r below half the grid spacing");

    const int c0 = static_cast<int>(d == 1 ? center : center / static_cast<std::size_t>(N));
    const int c1 = static_cast<int>(d == 1 ? 0 : center % static_cast<std::size_t>(N));
    const double h0 = g.spacing(0);
    const double h1 = d > 1 ? g.spacing(1) : 1.0;
    const int reach0 = static_cast<int>(std::floor(r / h0)) + 1;
    const int reach1 = d > 1 ? static_cast<int>(std::floor(r / h1)) + 1 : 0;
    const double r_sq = r * r;

    double sum = 0.0;
    long count = 0;
    for (int o0 = -reach0; o0 <= reach0; ++o0) {
        for (int o1 = -reach1; o1 <= reach1; ++o1) {
            double dist_sq = 0.0;
            const double dx0 = o0 * h0;
            dist_sq += dx0 * dx0;
            if (d > 1) {
                const double dx1 = o1 * h1;
                dist_sq += dx1 * dx1;
            }
            if (dist_sq > r_sq) continue;
            ++count;
            int j0 = c0 + o0;
            if (g.is_torus_axis(0)) {
                j0 = ((j0 % N) + N) % N;
            } else if (j0 < 0 || j0 >= N) {
                continue;
            }
            if (d == 1) {
                sum += std::abs(f[static_cast<std::size_t>(j0)]);
                continue;
            }
            int j1 = c1 + o1;
            if (g.is_torus_axis(1)) {
                j1 = ((j1 % N) + N) % N;
            } else if (j1 < 0 || j1 >= N) {
                continue;
            }
            sum += std::abs(f[static_cast<std::size_t>(j0) * N + j1]);
        }
    }
    return sum / static_cast<double>(count);
}

GridFunction local_max_op(const GridFunction& f, const RadiiSet& radii) {
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        double best = 0.0;
        for (double r : radii.radii()) best = std::max(best, reference::ball_average(f, i, r));
        out[i] = best;
    }
    return GridFunction(f.grid(), std::move(out));
}

GridFunction torus_max_op(const GridFunction& f, const RadiiSet& radii) {
    if (f.grid().dim_euclid() != 0)
        throw NotTorusGrid("reference::torus_max_op: grid has Euclidean axes");
    if (radii.cap() != 0.5) throw Error("reference::torus_max_op: radii cap must be 1/2");
    return reference::local_max_op(f, radii);
}

GridFunction waveguide_max_op(const GridFunction& f, const RadiiSet& radii) {
    if (f.grid().dim_euclid() < 1)
        throw Error("reference::waveguide_max_op: grid has no Euclidean axes");
    return reference::local_max_op(f, radii);
}

GridFunction convolve_with_kernel(const GridFunction& f, Time t, double kernel_tol) {
    const Grid& g = f.grid();
    if (g.dim_euclid() != 0)
        throw NotTorusGrid("reference::convolve_with_kernel: torus grids only");
    const double cell = g.cell_measure();
    KernelConfig cfg;
    cfg.tol = kernel_tol;
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const std::vector<double> xi = g.point(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < f.size(); ++j) {
            const std::vector<double> yj = g.point(j);
            std::vector<double> diff(xi.size());
            for (std::size_t a = 0; a < xi.size(); ++a) diff[a] = xi[a] - yj[a];
            acc += eval(TorusPoint(diff), t, cfg).value * f[j];
        }
        out[i] = acc * cell;
    }
    return GridFunction(g, std::move(out));
}

}  // namespace heatlab::reference
