#include "heatlab/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>

#include "heatlab/errors.hpp"

namespace heatlab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kImagResidueLimit = 1e-12;

// Frequency of DFT bin j, folded to [-N/2, N/2).
int folded_frequency(int j, int N) {
    return j < (N + 1) / 2 ? j : j - N;
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// RAII wrapper for an FFTW complex buffer.
struct FftwBuffer {
    fftw_complex* data;
    explicit FftwBuffer(std::size_t count)
        : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * count))) {
        if (data == nullptr) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
};

// The FFTW planner is not thread-safe; executing plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_plan make_plan(int d, const int* dims, fftw_complex* in, fftw_complex* out,
                    int sign) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    return fftw_plan_dft(d, dims, in, out, sign, FFTW_ESTIMATE);
}

void drop_plan(fftw_plan plan) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
}

// Forward transform, per-mode multiply, inverse transform, residue check.
// The multiplier receives the per-axis folded frequencies.
GridFunction spectral_multiply(
    const GridFunction& f,
    const std::function<double(const std::vector<int>&)>& multiplier) {
    const Grid& g = f.grid();
    const int d = g.dim();
    const int N = g.points_per_axis();
    const std::size_t total = g.size();

    FftwBuffer in(total), out(total);
    for (std::size_t i = 0; i < total; ++i) {
        in.data[i][0] = f[i];
        in.data[i][1] = 0.0;
    }

    std::vector<int> dims(d, N);
    fftw_plan fwd = make_plan(d, dims.data(), in.data, out.data, FFTW_FORWARD);
    fftw_execute(fwd);
    drop_plan(fwd);

    const double norm = 1.0 / static_cast<double>(total);
    std::vector<int> freqs(d, 0);
    for (std::size_t j = 0; j < total; ++j) {
        std::size_t rest = j;
        for (int a = d - 1; a >= 0; --a) {
            freqs[a] = folded_frequency(static_cast<int>(rest % N), N);
            rest /= N;
        }
        const double m = multiplier(freqs) * norm;
        out.data[j][0] *= m;
        out.data[j][1] *= m;
    }

    fftw_plan bwd = make_plan(d, dims.data(), out.data, in.data, FFTW_BACKWARD);
    fftw_execute(bwd);
    drop_plan(bwd);

    std::vector<double> result(total);
    double max_imag = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
        result[i] = in.data[i][0];
        max_imag = std::max(max_imag, std::abs(in.data[i][1]));
    }
    if (max_imag > kImagResidueLimit)
        throw Error("spectral evolution: imaginary residue " +
                    std::to_string(max_imag) + " exceeds 1e-12");
    return GridFunction(g, std::move(result));
}

}  // namespace

Grid::Grid(int dim_torus, int dim_euclid, int points_per_axis, double euclid_halfwidth)
    : n_(dim_torus), m_(dim_euclid), N_(points_per_axis), Y_(euclid_halfwidth) {
    if (n_ < 0 || m_ < 0 || n_ + m_ < 1) throw Error("Grid: invalid dimensions");
    if (N_ < 2) throw Error("Grid: points_per_axis must be at least 2");
    if (m_ > 0 && !(Y_ > 0.0)) throw Error("Grid: euclid_halfwidth must be > 0");
    if (m_ == 0) Y_ = 0.0;
    size_ = 1;
    for (int a = 0; a < n_ + m_; ++a) size_ *= static_cast<std::size_t>(N_);
}

double Grid::spacing(int axis) const {
    return is_torus_axis(axis) ? 1.0 / N_ : 2.0 * Y_ / N_;
}

double Grid::coordinate(int axis, int index) const {
    return is_torus_axis(axis) ? -0.5 + index * (1.0 / N_)
                               : -Y_ + index * (2.0 * Y_ / N_);
}

std::vector<double> Grid::point(std::size_t flat) const {
    const std::vector<int> multi = multi_index(flat);
    std::vector<double> p(multi.size());
    for (std::size_t a = 0; a < multi.size(); ++a)
        p[a] = coordinate(static_cast<int>(a), multi[a]);
    return p;
}

double Grid::cell_measure() const {
    double h = 1.0;
    for (int a = 0; a < dim(); ++a) h *= spacing(a);
    return h;
}

std::size_t Grid::flat_index(const std::vector<int>& multi) const {
    std::size_t idx = 0;
    for (int a = 0; a < dim(); ++a) idx = idx * N_ + static_cast<std::size_t>(multi[a]);
    return idx;
}

std::vector<int> Grid::multi_index(std::size_t flat) const {
    std::vector<int> multi(dim());
    for (int a = dim() - 1; a >= 0; --a) {
        multi[a] = static_cast<int>(flat % N_);
        flat /= N_;
    }
    return multi;
}

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw GridMismatch("GridFunction: value count does not match grid size");
    for (double v : values_)
        if (!std::isfinite(v)) throw Error("GridFunction: values must be finite");
}

GridFunction GridFunction::constant(const Grid& grid, double c) {
    return GridFunction(grid, std::vector<double>(grid.size(), c));
}

GridFunction GridFunction::sample(
    const Grid& grid, const std::function<double(const std::vector<double>&)>& f) {
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = f(grid.point(i));
    return GridFunction(grid, std::move(vals));
}

WeightedNorm weighted_norm(const GridFunction& f, const GridFunction& v, double p) {
    if (!(f.grid() == v.grid()))
        throw GridMismatch("weighted_norm: f and v live on different grids");
    if (!(p >= 1.0)) throw InvalidExponent("weighted_norm: p must be >= 1");
    const double cell = f.grid().cell_measure();
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!(v[i] > 0.0))
            throw NonPositiveWeight("weighted_norm: weight must be strictly positive");
        acc += std::pow(std::abs(f[i]), p) * v[i] * cell;
    }
    return {p, std::pow(acc, 1.0 / p)};
}

GridFunction evolve_torus(const GridFunction& f, Time t) {
    const Grid& g = f.grid();
    if (g.dim_euclid() != 0)
        throw NotTorusGrid("evolve_torus: grid has Euclidean axes");
    const double tv = t.value();
    return spectral_multiply(f, [tv](const std::vector<int>& l) {
        double l_sq = 0.0;
        for (int li : l) l_sq += static_cast<double>(li) * li;
        return std::exp(-4.0 * kPi * kPi * l_sq * tv);
    });
}

WaveguideEvolution evolve_waveguide(const GridFunction& f, Time t) {
    const Grid& g = f.grid();
    if (g.dim_euclid() < 1)
        throw Error("evolve_waveguide: grid has no Euclidean axes");
    const double tv = t.value();
    const int N = g.points_per_axis();
    const double Y = g.euclid_halfwidth();

    // Support margins on the Euclidean axes, using a relative floor so the
    // output of a previous evolution still counts as compactly supported.
    double max_abs = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) max_abs = std::max(max_abs, std::abs(f[i]));
    const double support_floor = 1e-13 * max_abs;

    std::vector<double> margins(g.dim_euclid(), 2.0 * Y);
    if (max_abs > 0.0) {
        std::vector<int> lo(g.dim_euclid(), N), hi(g.dim_euclid(), -1);
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (std::abs(f[i]) <= support_floor) continue;
            const std::vector<int> multi = g.multi_index(i);
            for (int a = 0; a < g.dim_euclid(); ++a) {
                const int j = multi[g.dim_torus() + a];
                lo[a] = std::min(lo[a], j);
                hi[a] = std::max(hi[a], j);
            }
        }
        const double hE = 2.0 * Y / N;
        for (int a = 0; a < g.dim_euclid(); ++a)
            margins[a] = std::min(lo[a] * hE, (N - hi[a]) * hE);
        const double needed = 4.0 * std::sqrt(tv);
        for (double m : margins)
            if (m < needed)
                throw SupportTooCloseToBoundary(
                    "evolve_waveguide: support margin " + std::to_string(*std::min_element(margins.begin(), margins.end())) +
                    " below 4*sqrt(t) = " + std::to_string(needed));
    }

    const int n = g.dim_torus();
    GridFunction evolved = spectral_multiply(f, [&](const std::vector<int>& l) {
        double exponent = 0.0;
        for (int a = 0; a < n; ++a)
            exponent += 4.0 * kPi * kPi * static_cast<double>(l[a]) * l[a];
        for (int a = n; a < g.dim(); ++a) {
            const double xi = kPi * l[a] / Y;  // continuous frequency on period 2Y
            exponent += xi * xi;
        }
        return std::exp(-exponent * tv);
    });

    // Alias mass that wraps across the box: product over Euclidean axes of
    // erfc tails across the margin, one term per wrap count.
    double bound_product = 1.0;
    for (double m : margins) {
        double G = 0.0;
        for (int j = 1; j <= 64; ++j) {
            const double term = std::erfc((m + 2.0 * Y * (j - 1)) / (2.0 * std::sqrt(tv)));
            G += term;
            if (term < 1e-300) break;
        }
        bound_product *= 1.0 + G;
    }
    return {std::move(evolved), max_abs * (bound_product - 1.0)};
}

std::size_t periodic_extension_index(const std::vector<double>& x, const Grid& grid) {
    if (grid.dim_euclid() != 0)
        throw NotTorusGrid("periodic_extension_index: torus axes only");
    if (static_cast<int>(x.size()) != grid.dim_torus())
        throw GridMismatch("periodic_extension_index: dimension mismatch");
    const int N = grid.points_per_axis();
    std::vector<int> multi(x.size());
    for (std::size_t a = 0; a < x.size(); ++a) {
        const double r = reduce_to_cell(x[a]);
        int j = static_cast<int>(std::floor((r + 0.5) * N));
        j = std::clamp(j, 0, N - 1);
        multi[a] = j;
    }
    return grid.flat_index(multi);
}

void write_csv(const GridFunction& f, std::ostream& os) {
    const Grid& g = f.grid();
    os << "# dim_torus,dim_euclid,N,Y\n";
    os << "# " << g.dim_torus() << ',' << g.dim_euclid() << ',' << g.points_per_axis()
       << ',' << format_value(g.euclid_halfwidth()) << '\n';
    for (std::size_t i = 0; i < f.size(); ++i) {
        os << i;
        const std::vector<double> p = g.point(i);
        for (double c : p) os << ',' << format_value(c);
        os << ',' << format_value(f[i]) << '\n';
    }
}

void write_csv_file(const GridFunction& f, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    write_csv(f, os);
}

GridFunction read_csv(std::istream& is) {
    std::string line;
    bool have_meta = false;
    int n = 0, m = 0, N = 0;
    double Y = 0.0;
    std::vector<double> values;
    std::size_t expected_index = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            // The first metadata-shaped comment line carries the grid.
            if (!have_meta) {
                int pn, pm, pN;
                double pY;
                if (std::sscanf(line.c_str(), "# %d,%d,%d,%lf", &pn, &pm, &pN, &pY) == 4) {
                    n = pn;
                    m = pm;
                    N = pN;
                    Y = pY;
                    have_meta = true;
                }
            }
            continue;
        }
        if (!have_meta) throw Error("GridFunction CSV: data before metadata header");
        std::istringstream row(line);
        std::string field;
        if (!std::getline(row, field, ',')) throw Error("GridFunction CSV: bad row");
        const std::size_t idx = std::strtoull(field.c_str(), nullptr, 10);
        if (idx != expected_index)
            throw Error("GridFunction CSV: rows must be in index order");
        // Skip the coordinate fields; the last field is the value.
        std::string last;
        while (std::getline(row, field, ',')) last = field;
        if (last.empty()) throw Error("GridFunction CSV: missing value field");
        values.push_back(std::strtod(last.c_str(), nullptr));
        ++expected_index;
    }
    if (!have_meta) throw Error("GridFunction CSV: missing metadata header");
    Grid grid(n, m, N, Y);
    return GridFunction(grid, std::move(values));
}

GridFunction read_csv_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open " + path);
    return read_csv(is);
}

}  // namespace heatlab
