// Experiment runner: kernel verification sweeps, semigroup convergence runs,
// maximal-operator computations, and weight-class certification, all emitted
// as CSV with the resolved configuration in the header.
//
// Exit codes: 0 all checks passed, 1 mathematical violation detected,
// 2 usage or I/O error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "heatlab/errors.hpp"
#include "heatlab/grid.hpp"
#include "heatlab/kernel.hpp"
#include "heatlab/maximal.hpp"
#include "heatlab/point.hpp"
#include "heatlab/reference.hpp"
#include "heatlab/rng.hpp"
#include "heatlab/version.hpp"
#include "heatlab/weights.hpp"

using namespace heatlab;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Every output starts with the artifact version and the resolved settings.
void write_header(std::ostream& os, const std::string& cmd,
                  const std::vector<std::pair<std::string, std::string>>& cfg) {
    os << "# lab version=" << kVersion << '\n';
    os << "# cmd=" << cmd << '\n';
    for (const auto& [k, v] : cfg) os << "# " << k << '=' << v << '\n';
}

std::ofstream open_output(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open output file " + path);
    return os;
}

struct FunctionSpec {
    std::string name;
    std::function<double(double)> f;
    std::vector<double> singular;
};

// const:c | cosk:k | bump:center,width | spike | file:<path>
FunctionSpec parse_function_spec(const std::string& s) {
    FunctionSpec out;
    out.name = s;
    if (s == "spike") {
        out.f = divergence_spike;
        out.singular = {0.0};
        return out;
    }
    const std::size_t colon = s.find(':');
    if (colon == std::string::npos)
        throw Error("function spec must look like kind:args, got '" + s + "'");
    const std::string kind = s.substr(0, colon);
    const std::string args = s.substr(colon + 1);
    if (kind == "const") {
        const double c = std::stod(args);
        out.f = [c](double) { return c; };
    } else if (kind == "cosk") {
        const double k = std::stod(args);
        out.f = [k](double x) { return std::cos(2.0 * M_PI * k * x); };
    } else if (kind == "bump") {
        const std::size_t comma = args.find(',');
        if (comma == std::string::npos) throw Error("bump needs center,width");
        const double c = std::stod(args.substr(0, comma));
        const double w = std::stod(args.substr(comma + 1));
        out.f = [c, w](double x) {
            const double u = reduce_to_cell(x - c) / w;
            return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0;
        };
    } else if (kind == "file") {
        auto gf = std::make_shared<GridFunction>(read_csv_file(args));
        if (gf->grid().dim_euclid() != 0 || gf->grid().dim_torus() != 1)
            throw Error("file function must be a 1-D torus GridFunction");
        out.f = [gf](double x) {
            return (*gf)[periodic_extension_index({x}, gf->grid())];
        };
    } else {
        throw Error("unknown function kind '" + kind + "'");
    }
    return out;
}

// ---------------------------------------------------------------- kernel

struct KernelVerifyOpts {
    std::vector<int> dims = {1, 2};
    double t_min = 1e-4;
    double t_max = 10.0;
    int t_points = 25;
    int samples = 50;
    double tol = 1e-12;
    double slack = 1e-12;
    std::uint64_t seed = 1;
    std::string out = "kernel_verify.csv";
};

int run_kernel_verify(const KernelVerifyOpts& o) {
    std::ofstream os = open_output(o.out);
    std::string dims_list;
    for (int n : o.dims) dims_list += (dims_list.empty() ? "" : ";") + std::to_string(n);
    write_header(os, "kernel verify",
                 {{"dims", dims_list},
                  {"t_min", fmt(o.t_min)},
                  {"t_max", fmt(o.t_max)},
                  {"t_points", std::to_string(o.t_points)},
                  {"samples", std::to_string(o.samples)},
                  {"tol", fmt(o.tol)},
                  {"slack", fmt(o.slack)},
                  {"seed", std::to_string(o.seed)}});
    os << "n,t,x,phi,lower,upper,err_bound,ok\n";

    SplitMix64 rng(o.seed);
    bool all_ok = true;
    double max_dual_gap = 0.0;
    for (int n : o.dims) {
        for (int ti = 0; ti < o.t_points; ++ti) {
            const double t =
                o.t_points == 1
                    ? o.t_min
                    : o.t_min * std::pow(o.t_max / o.t_min,
                                         static_cast<double>(ti) / (o.t_points - 1));
            for (int s = 0; s < o.samples; ++s) {
                std::vector<double> coords(n);
                for (double& c : coords) c = rng.uniform(-0.5, 0.5);
                const TorusPoint x(coords);
                const KernelValue g = eval_gaussian(x, Time(t), o.tol);
                const KernelValue f = eval_fourier(x, Time(t), o.tol);
                max_dual_gap = std::max(max_dual_gap, std::abs(g.value - f.value));
                const double lo = lower_bound(x, Time(t));
                const double hi = upper_bound(x, Time(t));
                const double slack = g.error_bound + o.slack;
                const bool ok = lo - slack <= g.value && g.value <= hi + slack;
                all_ok = all_ok && ok;
                os << n << ',' << fmt(t);
                for (double c : coords) os << ',' << fmt(c);
                os << ',' << fmt(g.value) << ',' << fmt(lo) << ',' << fmt(hi) << ','
                   << fmt(g.error_bound) << ',' << (ok ? 1 : 0) << '\n';
            }
        }
    }
    os << "# max_dual_gap=" << fmt(max_dual_gap) << '\n';
    const bool dual_ok = max_dual_gap <= 2.0 * o.tol;
    os << "# sandwich_ok=" << (all_ok ? 1 : 0) << " dual_ok=" << (dual_ok ? 1 : 0)
       << '\n';
    return all_ok && dual_ok ? 0 : 1;
}

struct KernelEvalOpts {
    double t = 0.1;
    std::vector<double> x = {0.0};
    double tol = 1e-12;
    std::string rep = "auto";
    std::string out;
};

int run_kernel_eval(const KernelEvalOpts& o) {
    KernelConfig cfg;
    cfg.tol = o.tol;
    if (o.rep == "gaussian")
        cfg.representation = Representation::GaussianSum;
    else if (o.rep == "fourier")
        cfg.representation = Representation::FourierSum;
    else if (o.rep != "auto")
        throw Error("--rep must be auto, gaussian, or fourier");
    const TorusPoint x(o.x);
    const KernelValue v = eval(x, Time(o.t), cfg);

    std::ostringstream row;
    row << o.x.size() << ',' << fmt(o.t);
    for (double c : x.coords()) row << ',' << fmt(c);
    row << ',' << fmt(v.value) << ',' << fmt(v.error_bound) << ',' << o.rep << '\n';
    if (o.out.empty()) {
        std::cout << "n,t,x,value,error_bound,rep\n" << row.str();
    } else {
        std::ofstream os = open_output(o.out);
        write_header(os, "kernel eval", {{"tol", fmt(o.tol)}, {"rep", o.rep}});
        os << "n,t,x,value,error_bound,rep\n" << row.str();
    }
    return 0;
}

// --------------------------------------------------------------- converge

struct ConvergeOpts {
    std::string f_spec = "cosk:1";
    std::string v_spec = "const:1";
    double p = 2.0;
    int grid_n = 256;
    double t_start = 0.25;
    int levels = 12;
    std::vector<double> probes;
    std::string dump_f;
    std::string out = "converge.csv";
};

int run_converge(const ConvergeOpts& o) {
    if (!(o.t_start > 0.0 && o.t_start < 0.5))
        throw Error("converge: t-start must lie in (0, 1/2)");
    const FunctionSpec fs = parse_function_spec(o.f_spec);
    const WeightSpec vs = parse_weight_spec(o.v_spec);
    if (vs.dim_euclid != 0) throw Error("converge: torus weights only");

    const Grid grid(1, 0, o.grid_n);
    const GridFunction f = sample_with_clipping(grid, fs.f, fs.singular);
    std::vector<double> v_sing;
    for (const Singularity& s : vs.singularities) v_sing.push_back(s.where);
    const GridFunction v = sample_with_clipping(grid, vs.torus_factor, v_sing);

    std::vector<std::size_t> probe_idx;
    for (double pr : o.probes) probe_idx.push_back(periodic_extension_index({pr}, grid));
    if (!o.dump_f.empty()) write_csv_file(f, o.dump_f);

    std::ofstream os = open_output(o.out);
    std::vector<std::pair<std::string, std::string>> cfg = {
        {"f", fs.name},       {"v", vs.name},
        {"p", fmt(o.p)},      {"grid_N", std::to_string(o.grid_n)},
        {"t_start", fmt(o.t_start)}, {"levels", std::to_string(o.levels)}};
    for (double pr : o.probes) cfg.push_back({"probe", fmt(pr)});
    write_header(os, "converge run", cfg);
    os << "t,sup_err,Lp_v_err";
    for (std::size_t i = 0; i < probe_idx.size(); ++i) os << ",probe_" << i + 1 << "_err";
    os << '\n';

    std::vector<double> probe_heat_max(probe_idx.size(), 0.0);
    for (int j = 0; j <= o.levels; ++j) {
        const double t = o.t_start * std::pow(2.0, -j);
        const GridFunction u = evolve_torus(f, Time(t));
        double sup = 0.0;
        std::vector<double> diff(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            diff[i] = u[i] - f[i];
            sup = std::max(sup, std::abs(diff[i]));
        }
        const double lp = weighted_norm(GridFunction(grid, std::move(diff)), v, o.p).value;
        os << fmt(t) << ',' << fmt(sup) << ',' << fmt(lp);
        for (std::size_t k = 0; k < probe_idx.size(); ++k) {
            const std::size_t pi = probe_idx[k];
            probe_heat_max[k] = std::max(probe_heat_max[k], std::abs(u[pi]));
            os << ',' << fmt(std::abs(u[pi] - f[pi]));
        }
        os << '\n';
    }
    // sup over the computed times of |phi_t * f| at each probe
    for (std::size_t k = 0; k < probe_heat_max.size(); ++k)
        os << "# probe_" << k + 1 << "_heat_max=" << fmt(probe_heat_max[k]) << '\n';
    return 0;
}

// ---------------------------------------------------------------- maximal

struct MaximalOpts {
    std::string input;
    std::string op = "torus";
    double R = 0.5;
    int levels = 40;
    bool oracle = false;
    bool check_domination = false;
    std::string out = "maximal.csv";
};

int run_maximal(const MaximalOpts& o) {
    const GridFunction f = read_csv_file(o.input);
    const Grid& g = f.grid();

    if (o.check_domination) {
        if (g.dim_euclid() != 0) throw Error("--check-domination: torus grids only");
        const int n = g.dim_torus();
        if (!(o.R < 1.0 / (8.0 * n)))
            throw Error("--check-domination needs R < 1/(8n)");
        for (std::size_t i = 0; i < f.size(); ++i)
            if (f[i] < 0.0) throw Error("--check-domination needs nonnegative data");

        const double Cp = domination_constant(n, o.R);
        const GridFunction hstar = heat_max_op(f, TimeSet(o.R, o.levels));
        const GridFunction mt = torus_max_op(f, RadiiSet::default_net(g.spacing(0), 0.5));
        const GridFunction phi_r_f = evolve_torus(f, Time(o.R));
        double max_abs = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
            max_abs = std::max(max_abs, std::abs(f[i]));
        // Discretization allowance: ball-measure resolution at grid scale
        // plus spectral roundoff.
        const double estimate = max_abs * (4.0 * g.spacing(0) + 1e-12);

        std::ofstream os = open_output(o.out);
        write_header(os, "maximal compute",
                     {{"input", o.input},
                      {"op", "heat"},
                      {"R", fmt(o.R)},
                      {"levels", std::to_string(o.levels)},
                      {"C_prime", fmt(Cp)},
                      {"discretization_estimate", fmt(estimate)}});
        os << "index,hstar,mt,phi_R_f,slack\n";
        double min_slack = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double slack = Cp * mt[i] + phi_r_f[i] - hstar[i];
            min_slack = std::min(min_slack, slack);
            os << i << ',' << fmt(hstar[i]) << ',' << fmt(mt[i]) << ','
               << fmt(phi_r_f[i]) << ',' << fmt(slack) << '\n';
        }
        os << "# min_slack=" << fmt(min_slack) << '\n';
        return min_slack >= -estimate ? 0 : 1;
    }

    GridFunction result = [&] {
        if (o.op == "heat") return heat_max_op(f, TimeSet(o.R, o.levels));
        const RadiiSet net = RadiiSet::default_net(g, o.R);
        if (o.op == "torus") return torus_max_op(f, net);
        if (o.op == "waveguide") return waveguide_max_op(f, net);
        if (o.op == "local") return local_max_op(f, net);
        throw Error("--op must be torus, waveguide, heat, or local");
    }();

    if (o.oracle && o.op == "heat")
        throw Error("--oracle applies to the ball-average operators only");
    if (o.oracle) {
        const RadiiSet net = RadiiSet::default_net(g, o.R);
        const GridFunction check = o.op == "torus"
                                       ? reference::torus_max_op(f, net)
                                       : o.op == "waveguide"
                                             ? reference::waveguide_max_op(f, net)
                                             : reference::local_max_op(f, net);
        for (std::size_t i = 0; i < result.size(); ++i) {
            if (result[i] != check[i]) {
                std::cerr << "oracle mismatch at index " << i << '\n';
                return 1;
            }
        }
    }

    std::ofstream os = open_output(o.out);
    write_header(os, "maximal compute",
                 {{"input", o.input},
                  {"op", o.op},
                  {"R", fmt(o.R)},
                  {"levels", std::to_string(o.levels)},
                  {"oracle", o.oracle ? "1" : "0"}});
    write_csv(result, os);
    return 0;
}

// ---------------------------------------------------------------- weights

struct WeightsCheckOpts {
    std::string weight;
    double p = 2.0;
    double t0 = 0.05;
    double tol = 1e-8;
    bool wg = false;
    double y_max = 8.0;
    std::string out;
};

void emit_verdict(std::ostream& os, const std::string& name, double p, double t0,
                  const Verdict& v) {
    os << name << ',' << fmt(p) << ',' << fmt(t0) << ',' << to_string(v.status) << ','
       << fmt(v.estimate) << ',' << fmt(v.tail_bound) << ',' << v.refinement_levels
       << '\n';
}

int run_weights_check(const WeightsCheckOpts& o) {
    const WeightSpec w = parse_weight_spec(o.weight);
    const Verdict v = o.wg ? check_Dp_WG(w, o.p, Time(o.t0), o.tol, o.y_max)
                           : check_Dp_T(w, o.p, Time(o.t0), o.tol);
    std::ostringstream body;
    body << "weight,p,t0,status,estimate,tail_bound,levels\n";
    emit_verdict(body, w.name, o.p, o.t0, v);
    if (o.out.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream os = open_output(o.out);
        write_header(os, "weights check",
                     {{"weight", w.name},
                      {"p", fmt(o.p)},
                      {"t0", fmt(o.t0)},
                      {"tol", fmt(o.tol)},
                      {"class", o.wg ? "waveguide" : "torus"},
                      {"Ymax", fmt(o.y_max)}});
        os << body.str();
    }
    return 0;
}

struct WeightsCatalogOpts {
    double tol = 1e-8;
    std::string out = "catalog.csv";
};

int run_weights_catalog(const WeightsCatalogOpts& o) {
    std::ofstream os = open_output(o.out);
    write_header(os, "weights catalog", {{"tol", fmt(o.tol)}});
    os << "weight,class,p,t0,status,expected,match\n";
    bool all_match = true;
    for (const CatalogEntry& entry : catalog()) {
        for (double p : {1.0, 2.0}) {
            for (double t0 : {0.01, 0.05}) {
                const Membership expected = entry.expected(p, t0);
                const Verdict got =
                    entry.waveguide
                        ? check_Dp_WG(entry.weight, p, Time(t0), o.tol, 8.0)
                        : check_Dp_T(entry.weight, p, Time(t0), o.tol);
                const bool match = got.status == expected;
                all_match = all_match && match;
                os << entry.weight.name << ',' << (entry.waveguide ? "WG" : "T") << ','
                   << fmt(p) << ',' << fmt(t0) << ',' << to_string(got.status) << ','
                   << to_string(expected) << ',' << (match ? 1 : 0) << '\n';
            }
        }
    }
    return all_match ? 0 : 1;
}

struct WeightsCompanionOpts {
    std::string weight = "const:1";
    double p = 2.0;
    double t = 0.1;
    double tol = 1e-8;
    bool wg = false;
    std::vector<std::string> at = {"0"};
    std::string out;
};

int run_weights_companion(const WeightsCompanionOpts& o) {
    const WeightSpec w = parse_weight_spec(o.weight);
    std::ostringstream body;
    body << (o.wg ? "weight,p,t,x,y,h,u\n" : "weight,p,t,x,g,u\n");
    for (const std::string& at : o.at) {
        if (o.wg) {
            const std::size_t comma = at.find(',');
            if (comma == std::string::npos) throw Error("--at needs x,y for the waveguide");
            const double x = std::stod(at.substr(0, comma));
            const double y = std::stod(at.substr(comma + 1));
            const WaveguidePoint z(TorusPoint{x}, {y});
            const double h = companion_weight_WG(w, o.p, Time(o.t), z, o.tol);
            const double u = std::min(1.0, std::exp(-z.norm_sq()) / h);
            body << w.name << ',' << fmt(o.p) << ',' << fmt(o.t) << ','
                 << fmt(z.torus_part()[0]) << ',' << fmt(y) << ',' << fmt(h) << ','
                 << fmt(u) << '\n';
        } else {
            const double x = std::stod(at);
            const TorusPoint xp{x};
            const double g = companion_weight_T(w, o.p, Time(o.t), xp, o.tol);
            const double u = std::min(1.0, 1.0 / g);
            body << w.name << ',' << fmt(o.p) << ',' << fmt(o.t) << ',' << fmt(xp[0])
                 << ',' << fmt(g) << ',' << fmt(u) << '\n';
        }
    }
    if (o.out.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream os = open_output(o.out);
        write_header(os, "weights companion",
                     {{"weight", w.name},
                      {"p", fmt(o.p)},
                      {"t", fmt(o.t)},
                      {"tol", fmt(o.tol)},
                      {"class", o.wg ? "waveguide" : "torus"}});
        os << body.str();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"periodic heat kernel laboratory"};
    app.set_config("--config", "", "key=value file; command-line flags override");
    app.require_subcommand(1);

    int rc = 0;

    // kernel
    auto* kernel = app.add_subcommand("kernel", "kernel evaluation and verification");
    kernel->require_subcommand(1);

    KernelVerifyOpts kv;
    auto* verify = kernel->add_subcommand("verify", "sandwich + dual-representation sweep");
    verify->add_option("--dims", kv.dims, "torus dimensions to sweep");
    verify->add_option("--t-min", kv.t_min);
    verify->add_option("--t-max", kv.t_max);
    verify->add_option("--t-points", kv.t_points);
    verify->add_option("--samples", kv.samples, "x samples per time");
    verify->add_option("--tol", kv.tol);
    verify->add_option("--slack", kv.slack, "sandwich slack added to the error bound");
    verify->add_option("--seed", kv.seed);
    verify->add_option("--out", kv.out);
    verify->callback([&] { rc = run_kernel_verify(kv); });

    KernelEvalOpts ke;
    auto* keval = kernel->add_subcommand("eval", "evaluate the kernel at one point");
    keval->add_option("--t", ke.t)->required();
    keval->add_option("--x", ke.x, "torus coordinates")->required();
    keval->add_option("--tol", ke.tol);
    keval->add_option("--rep", ke.rep, "auto | gaussian | fourier");
    keval->add_option("--out", ke.out);
    keval->callback([&] { rc = run_kernel_eval(ke); });

    // converge
    auto* converge = app.add_subcommand("converge", "semigroup convergence experiments");
    converge->require_subcommand(1);
    ConvergeOpts co;
    auto* crun = converge->add_subcommand("run", "evolve and report errors for t descending");
    crun->add_option("--f", co.f_spec, "initial data (const:c|cosk:k|bump:c,w|spike|file:p)");
    crun->add_option("--v", co.v_spec, "weight for the L^p_v error column");
    crun->add_option("--p", co.p);
    crun->add_option("--grid-N", co.grid_n);
    crun->add_option("--t-start", co.t_start);
    crun->add_option("--levels", co.levels);
    crun->add_option("--probe", co.probes, "probe coordinates (repeatable)");
    crun->add_option("--dump-f", co.dump_f, "also write the sampled f as GridFunction CSV");
    crun->add_option("--out", co.out);
    crun->callback([&] { rc = run_converge(co); });

    // maximal
    MaximalOpts mo;
    auto* maximal = app.add_subcommand("maximal", "maximal-operator computations");
    auto* mcompute = maximal->add_subcommand("compute", "apply an operator to a CSV grid function");
    mcompute->add_option("--input", mo.input)->required();
    mcompute->add_option("--op", mo.op, "torus | waveguide | local | heat");
    mcompute->add_option("--R", mo.R, "radii cap / time cap");
    mcompute->add_option("--levels", mo.levels, "time net levels for heat");
    mcompute->add_flag("--oracle", mo.oracle, "compare against the naive reference");
    mcompute->add_flag("--check-domination", mo.check_domination,
                       "verify H*_R <= C'_n M^T + phi_R * f + slack");
    mcompute->add_option("--out", mo.out);
    mcompute->callback([&] { rc = run_maximal(mo); });

    // weights
    auto* weights = app.add_subcommand("weights", "weight-class certification");
    weights->require_subcommand(1);

    WeightsCheckOpts wc;
    auto* wcheck = weights->add_subcommand("check", "decide membership for one weight");
    wcheck->add_option("weight", wc.weight, "weight spec")->required();
    wcheck->add_option("--p", wc.p);
    wcheck->add_option("--t0", wc.t0);
    wcheck->add_option("--tol", wc.tol);
    wcheck->add_flag("--wg", wc.wg, "check the waveguide class");
    wcheck->add_option("--Ymax", wc.y_max);
    wcheck->add_option("--out", wc.out);
    wcheck->callback([&] { rc = run_weights_check(wc); });

    WeightsCatalogOpts wcat;
    auto* wcatalog = weights->add_subcommand("catalog", "run every catalog entry against its classification");
    wcatalog->add_option("--tol", wcat.tol);
    wcatalog->add_option("--out", wcat.out);
    wcatalog->callback([&] { rc = run_weights_catalog(wcat); });

    WeightsCompanionOpts wcomp;
    auto* wcompanion = weights->add_subcommand("companion", "companion weights g^t / h^t and u");
    wcompanion->add_option("weight", wcomp.weight, "weight spec");
    wcompanion->add_option("--p", wcomp.p);
    wcompanion->add_option("--t", wcomp.t);
    wcompanion->add_option("--tol", wcomp.tol);
    wcompanion->add_flag("--wg", wcomp.wg, "waveguide companion h^t");
    wcompanion->add_option("--at", wcomp.at, "evaluation point x (torus) or x,y (waveguide)");
    wcompanion->add_option("--out", wcomp.out);
    wcompanion->callback([&] { rc = run_weights_companion(wcomp); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return rc;
}
