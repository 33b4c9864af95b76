#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dppmom/bounds.hpp"
#include "dppmom/cyclebasis.hpp"
#include "dppmom/errors.hpp"
#include "dppmom/estimator.hpp"
#include "dppmom/experiments.hpp"
#include "dppmom/sampler.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using nlohmann::json;

void write_json_file(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw dppmom::input_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

/// Grid syntax: "v", "v1,v2,v3", "lo:hi" (step 1), "lo:hi:step",
/// "lo:hi:log" (1-2-5 series).
std::vector<long> parse_grid(const std::string& spec) {
    std::vector<long> out;
    if (spec.find(',') != std::string::npos) {
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(std::stol(item));
        return out;
    }
    const auto c1 = spec.find(':');
    if (c1 == std::string::npos) {
        out.push_back(std::stol(spec));
        return out;
    }
    const auto c2 = spec.find(':', c1 + 1);
    const long lo = std::stol(spec.substr(0, c1));
    const long hi = std::stol(spec.substr(c1 + 1, c2 == std::string::npos ? std::string::npos
                                                                          : c2 - c1 - 1));
    if (c2 == std::string::npos) {
        for (long v = lo; v <= hi; ++v) out.push_back(v);
        return out;
    }
    const std::string tail = spec.substr(c2 + 1);
    if (tail == "log") {
        // 1-2-5 series: 1000, 2000, 5000, 10000, ...
        static const long mult[3] = {1, 2, 5};
        long decade = 1;
        while (decade <= hi) {
            for (long m : mult) {
                const long v = m * decade;
                if (v >= lo && v <= hi) out.push_back(v);
            }
            decade *= 10;
        }
        if (out.empty()) throw dppmom::input_error("empty log grid: " + spec);
        return out;
    }
    const long step = std::stol(tail);
    if (step < 1) throw dppmom::input_error("grid step must be >= 1: " + spec);
    for (long v = lo; v <= hi; v += step) out.push_back(v);
    return out;
}

int cmd_sample(const std::string& kernel_file, long n, std::uint64_t seed, std::uint64_t stream,
               const std::string& method, const std::string& out_path) {
    auto m = dppmom::linalg::load_kernel_csv(kernel_file, true);
    auto k = dppmom::kernel::Kernel::checked(std::move(m));
    const dppmom::rng::RngSeed rs{seed, stream};
    dppmom::sampler::SampleSet s;
    if (method == "spectral")
        s = dppmom::sampler::sample_spectral(k, int(n), rs);
    else if (method == "bruteforce")
        s = dppmom::sampler::sample_bruteforce(k, int(n), rs);
    else
        throw dppmom::input_error("unknown sampling method: " + method);
    dppmom::sampler::save_samples(s, out_path);

    json side{{"tool", "dppmom"},
              {"version", kVersion},
              {"subcommand", "sample"},
              {"kernel", kernel_file},
              {"n", n},
              {"seed", seed},
              {"stream", stream},
              {"method", method}};
    write_json_file(side, out_path + ".json");
    std::cout << "sample: n=" << n << " method=" << method << " seed=" << seed
              << " stream=" << stream << " -> " << out_path << "\n";
    return 0;
}

json estimate_report(const dppmom::estimator::EstimateResult& r) {
    json edges = json::array();
    for (const auto& e : r.ghat.edges()) edges.push_back({e.u + 1, e.v + 1});
    json hist = json::array();
    {
        // 16-bin histogram of the raw B^ values; plumbing to help pick alpha.
        std::vector<double> b;
        for (int i = 0; i < r.ghat.vertex_count(); ++i)
            for (int j = i + 1; j < r.ghat.vertex_count(); ++j)
                b.push_back(r.bhat_raw(i, j));
        double lo = 0.0, hi = 0.0;
        for (double v : b) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double width = (hi > lo) ? (hi - lo) / 16.0 : 1.0;
        std::vector<int> bins(16, 0);
        for (double v : b) {
            int idx = int((v - lo) / width);
            if (idx > 15) idx = 15;
            if (idx < 0) idx = 0;
            ++bins[idx];
        }
        for (int i = 0; i < 16; ++i)
            hist.push_back({{"lo", lo + i * width}, {"hi", lo + (i + 1) * width}, {"count", bins[i]}});
    }
    return json{
        {"lhat", r.sparsity_estimate},
        {"path", r.path == dppmom::estimator::EstimatePath::chordal ? "chordal" : "general"},
        {"sign_system_status",
         r.sign_system_status == dppmom::estimator::SignSystemStatus::solved ? "solved"
                                                                             : "fallback_all_ones"},
        {"warnings",
         {{"near_zero_h", r.near_zero_h_warning}, {"chorded_basis", r.chorded_basis_warning}}},
        {"n", r.sample_count},
        {"alpha", r.alpha},
        {"ghat_edges", edges},
        {"bhat_histogram", hist},
    };
}

int cmd_estimate(const std::string& samples_file, double alpha, bool force_general, int ndim,
                 const std::string& out_path, const std::string& format) {
    const auto samples = dppmom::sampler::load_samples(samples_file, ndim);
    const dppmom::estimator::EstimateOptions opts{.force_general = force_general};
    const auto r = dppmom::estimator::estimate(samples, alpha, opts);

    json report = estimate_report(r);
    report["tool"] = "dppmom";
    report["version"] = kVersion;
    report["subcommand"] = "estimate";
    report["samples"] = samples_file;

    if (format == "csv") {
        dppmom::linalg::save_kernel_csv(r.khat.matrix(), out_path);
        write_json_file(report, out_path + ".json");
    } else if (format == "json") {
        json mat = json::array();
        for (int i = 0; i < r.khat.size(); ++i) {
            json row = json::array();
            for (int j = 0; j < r.khat.size(); ++j) row.push_back(r.khat(i, j));
            mat.push_back(row);
        }
        report["khat"] = mat;
        write_json_file(report, out_path);
    } else {
        throw dppmom::input_error("unknown format: " + format);
    }
    std::cout << "estimate: N=" << r.khat.size() << " lhat=" << r.sparsity_estimate << " path="
              << (r.path == dppmom::estimator::EstimatePath::chordal ? "chordal" : "general")
              << " -> " << out_path << "\n";
    return 0;
}

int cmd_cyclebasis(const std::string& graph_file, const std::string& out_path) {
    const auto g = dppmom::graph::load_edge_list(graph_file);
    const auto basis = dppmom::cyclebasis::shortest_maximal_cycle_basis(g);
    std::ofstream out(out_path);
    if (!out) throw dppmom::input_error("cannot write " + out_path);
    out << "nu " << basis.nu << "\n";
    out << "sparsity " << basis.sparsity << "\n";
    for (const auto& c : basis.cycles) {
        for (std::size_t i = 0; i < c.vertices.size(); ++i)
            out << c.vertices[i] + 1 << (i + 1 == c.vertices.size() ? "" : " ");
        out << "\n";
    }
    if (basis.chorded_fallback)
        std::cerr << "warning: basis contains a chorded cycle (candidate pool fallback)\n";
    std::cout << "cyclebasis: nu=" << basis.nu << " sparsity=" << basis.sparsity << " -> "
              << out_path << "\n";
    return 0;
}

int cmd_bounds(const std::string& mode, int N, int ell, double alpha, double eps, double delta,
               double C, const std::string& out_path) {
    json j{{"tool", "dppmom"}, {"version", kVersion}, {"subcommand", "bounds"}, {"mode", mode}};
    if (mode == "recovery") {
        dppmom::bounds::ComplexityQuery q;
        q.N = N;
        q.ell = ell;
        q.alpha = alpha;
        q.delta = delta;
        const auto b = dppmom::bounds::sample_bound_recovery(q);
        j["samples"] = b.samples;
        j["raw"] = b.raw;
        std::cout << b.samples << "\n";
    } else if (mode == "estimation") {
        dppmom::bounds::ComplexityQuery q;
        q.N = N;
        q.ell = ell;
        q.alpha = alpha;
        q.eps = eps;
        q.C = C;
        const auto b = dppmom::bounds::sample_bound_estimation(q);
        j["samples"] = b.samples;
        j["raw"] = b.raw;
        std::cout << b.samples << "\n";
    } else if (mode == "divergence") {
        const auto pair = dppmom::bounds::lower_bound_kernels(ell, alpha);
        const auto d = dppmom::bounds::divergence_exhaustive(pair.kplus, pair.kminus);
        j["kl"] = d.kl;
        j["hellinger_sq"] = d.hellinger_sq;
        j["kl_bound"] = 4.0 * std::pow(6.0 * alpha, ell);
        j["hellinger_sq_bound"] = std::pow(8.0 * alpha * alpha, ell);
        std::cout << "kl=" << d.kl << " hellinger_sq=" << d.hellinger_sq << "\n";
    } else {
        throw dppmom::input_error("unknown bounds mode: " + mode);
    }
    if (!out_path.empty()) write_json_file(j, out_path);
    return 0;
}

int cmd_experiment(const std::string& family, const std::string& n_spec,
                   const std::string& samples_spec, int trials, double alpha,
                   std::uint64_t seed, const std::string& method, bool force_general,
                   const std::string& kernel_file, const std::string& out_path) {
    dppmom::experiments::TrialConfig cfg;
    if (family == "cycle")
        cfg.family = dppmom::experiments::Family::cycle;
    else if (family == "clique")
        cfg.family = dppmom::experiments::Family::clique;
    else if (family == "chordal" || family == "chordal-random")
        cfg.family = dppmom::experiments::Family::chordal_random;
    else if (family == "file")
        cfg.family = dppmom::experiments::Family::file;
    else
        throw dppmom::input_error("unknown family: " + family);

    for (long v : parse_grid(n_spec)) cfg.n_grid.push_back(int(v));
    cfg.sample_grid = parse_grid(samples_spec);
    cfg.trials = trials;
    cfg.alpha = alpha;
    cfg.base_seed = seed;
    cfg.force_general = force_general;
    cfg.kernel_file = kernel_file;
    if (method == "spectral")
        cfg.method = dppmom::experiments::SampleMethod::spectral;
    else if (method == "bruteforce")
        cfg.method = dppmom::experiments::SampleMethod::bruteforce;
    else if (method == "oracle")
        cfg.method = dppmom::experiments::SampleMethod::oracle;
    else
        throw dppmom::input_error("unknown method: " + method);

    const auto grid = dppmom::experiments::run_grid(cfg);
    std::ofstream out(out_path);
    if (!out) throw dppmom::input_error("cannot write " + out_path);
    dppmom::experiments::write_grid_csv(grid, cfg, out);

    json side{{"tool", "dppmom"},
              {"version", kVersion},
              {"subcommand", "experiment"},
              {"family", family},
              {"N", n_spec},
              {"n", samples_spec},
              {"trials", trials},
              {"alpha", alpha},
              {"seed", seed},
              {"method", method},
              {"force_general", force_general}};
    write_json_file(side, out_path + ".json");
    std::cout << "experiment: " << grid.cells.size() << " cells, " << trials
              << " trials/cell, seed=" << seed << " -> " << out_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dppmom: moment-and-cycle-basis learning of DPP kernels"};
    app.require_subcommand(1);

    // sample
    auto* sample = app.add_subcommand("sample", "draw i.i.d. subsets from DPP(K)");
    std::string s_kernel, s_out, s_method = "spectral";
    long s_n = 0;
    std::uint64_t s_seed = 0, s_stream = 0;
    sample->add_option("--kernel", s_kernel)->required();
    sample->add_option("--n", s_n)->required();
    sample->add_option("--seed", s_seed)->required();
    sample->add_option("--stream", s_stream);
    sample->add_option("--method", s_method)->check(CLI::IsMember({"spectral", "bruteforce"}));
    sample->add_option("--out", s_out)->required();

    // estimate
    auto* estimate = app.add_subcommand("estimate", "estimate K from a samples file");
    std::string e_samples, e_out, e_format = "csv";
    double e_alpha = 0.0;
    bool e_force_general = false;
    int e_ndim = 0;
    estimate->add_option("--samples", e_samples)->required();
    estimate->add_option("--alpha", e_alpha)->required();
    estimate->add_flag("--force-general", e_force_general);
    estimate->add_option("--ndim", e_ndim);
    estimate->add_option("--out", e_out)->required();
    estimate->add_option("--format", e_format)->check(CLI::IsMember({"csv", "json"}));

    // cyclebasis
    auto* cyc = app.add_subcommand("cyclebasis", "shortest maximal cycle basis of a graph");
    std::string c_graph, c_out;
    cyc->add_option("--graph", c_graph)->required();
    cyc->add_option("--out", c_out)->required();

    // bounds
    auto* bounds = app.add_subcommand("bounds", "sample-complexity and divergence calculators");
    std::string b_mode, b_out;
    int b_N = 1, b_ell = 3;
    double b_alpha = 0.125, b_eps = 0.1, b_delta = 0.1, b_C = 1.0;
    bounds->add_option("--mode", b_mode)
        ->required()
        ->check(CLI::IsMember({"recovery", "estimation", "divergence"}));
    bounds->add_option("--N", b_N);
    bounds->add_option("--ell", b_ell);
    bounds->add_option("--alpha", b_alpha);
    bounds->add_option("--eps", b_eps);
    bounds->add_option("--delta", b_delta);
    bounds->add_option("--C", b_C);
    bounds->add_option("--out", b_out);

    // experiment
    auto* exp = app.add_subcommand("experiment", "seeded success-rate grids");
    std::string x_family = "cycle", x_nspec, x_sspec, x_method = "spectral", x_kernel, x_out;
    int x_trials = 50;
    double x_alpha = 0.0;
    std::uint64_t x_seed = 0;
    bool x_force_general = false;
    exp->add_option("--family", x_family);
    exp->add_option("--N", x_nspec)->required();
    exp->add_option("--n", x_sspec)->required();
    exp->add_option("--trials", x_trials);
    exp->add_option("--alpha", x_alpha);
    exp->add_option("--seed", x_seed)->required();
    exp->add_option("--method", x_method);
    exp->add_flag("--force-general", x_force_general);
    exp->add_option("--kernel", x_kernel);
    exp->add_option("--out", x_out)->required();

    try {
        app.parse(argc, argv);
        if (sample->parsed())
            return cmd_sample(s_kernel, s_n, s_seed, s_stream, s_method, s_out);
        if (estimate->parsed())
            return cmd_estimate(e_samples, e_alpha, e_force_general, e_ndim, e_out, e_format);
        if (cyc->parsed()) return cmd_cyclebasis(c_graph, c_out);
        if (bounds->parsed())
            return cmd_bounds(b_mode, b_N, b_ell, b_alpha, b_eps, b_delta, b_C, b_out);
        if (exp->parsed())
            return cmd_experiment(x_family, x_nspec, x_sspec, x_trials, x_alpha, x_seed, x_method,
                                  x_force_general, x_kernel, x_out);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const dppmom::input_error& e) {
        std::cerr << "error: input: " << e.what() << "\n";
        return 1;
    } catch (const dppmom::capability_error& e) {
        std::cerr << "error: capability: " << e.what() << "\n";
        return 2;
    } catch (const dppmom::numeric_error& e) {
        std::cerr << "error: numeric: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
