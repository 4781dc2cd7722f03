#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "odeim/error.hpp"
#include "odeim/experiments.hpp"
#include "odeim/linalg.hpp"
#include "odeim/manifest.hpp"
#include "odeim/matrix_io.hpp"
#include "odeim/pod.hpp"
#include "odeim/reports.hpp"
#include "odeim/rng.hpp"
#include "odeim/selection.hpp"
#include "odeim/text_util.hpp"

namespace {

using odeim::Index;
using odeim::Method;

constexpr const char* kMethodList =
    "qdeim|deim|odeim-d|odeim-e|odeim-c|odeim-rand|kdeim";

std::vector<Method> resolve_methods(const std::vector<std::string>& names) {
    if (names.empty()) {
        return {Method::qdeim,   Method::deim,       Method::odeim_d, Method::odeim_e,
                Method::odeim_c, Method::odeim_rand, Method::kdeim};
    }
    std::vector<Method> out;
    out.reserve(names.size());
    for (const std::string& name : names) {
        const auto method = odeim::parse_method(name);
        if (!method)
            throw odeim::ArgumentError("unknown method: " + name + " (expected " +
                                       kMethodList + ")");
        out.push_back(*method);
    }
    return out;
}

std::string join_methods(const std::vector<Method>& methods) {
    std::string out;
    for (Method m : methods) {
        if (!out.empty()) out += ",";
        out += odeim::method_name(m);
    }
    return out;
}

template <class T>
std::string join_values(const std::vector<T>& values) {
    std::ostringstream out;
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) out << ",";
        out << values[i];
    }
    return out.str();
}

void append_seed_notes(odeim::Manifest& manifest, const odeim::ExperimentConfig& cfg) {
    manifest.emplace_back(
        "seed-derivation",
        "splitmix64 chain seed->(kind,a,b); kinds: test-params=101 selection=201 "
        "toy-noise=301 pde-noise=401 verify-trial=501; a=cell id (or replicate for "
        "test-params), b=replicate");
    Index cell = 0;
    for (Method method : cfg.methods) {
        for (Index n : cfg.n_grid) {
            manifest.emplace_back("cell-" + std::to_string(cell),
                                  std::string(odeim::method_name(method)) + ":" +
                                      std::to_string(n));
            ++cell;
        }
    }
}

struct SelectFlags {
    std::string basis_path;
    std::string method;
    long long points = -1;
    std::uint64_t seed = 0;
    std::string out;
};

int run_select(const SelectFlags& flags) {
    const odeim::Matrix u = odeim::read_matrix(flags.basis_path);
    const auto method = odeim::parse_method(flags.method);
    if (!method)
        throw odeim::ArgumentError("unknown method: " + flags.method + " (expected " +
                                   kMethodList + ")");
    const odeim::Basis basis{u, odeim::Vector::Ones(u.cols())};
    const Index m = flags.points < 0 ? basis.dim() : static_cast<Index>(flags.points);
    const odeim::PointSet points = odeim::select_points(*method, basis, m, flags.seed);

    std::ostringstream body;
    for (Index p : points) body << p << "\n";
    if (flags.out.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream out(flags.out);
        if (!out) throw odeim::ArgumentError("cannot open " + flags.out + " for writing");
        out << body.str();
        odeim::Manifest manifest;
        manifest.emplace_back("command", "select");
        manifest.emplace_back("basis", flags.basis_path);
        manifest.emplace_back("method", flags.method);
        manifest.emplace_back("points", std::to_string(m));
        manifest.emplace_back("seed", std::to_string(flags.seed));
        manifest.emplace_back("out", flags.out);
        odeim::write_manifest(manifest, flags.out + ".manifest");
    }
    return 0;
}

struct ToyFlags {
    std::vector<long long> n_grid;
    double oversample_factor = 2.0;
    double noise = 1e-6;
    int replicates = 10;
    std::uint64_t seed = 0;
    std::vector<std::string> methods;
    bool full_scale = false;
    std::string out_dir = ".";
    int jobs = 0;
};

int run_toy(const ToyFlags& flags) {
    odeim::ExperimentConfig cfg;
    cfg.model = odeim::ModelKind::toy;
    cfg.methods = resolve_methods(flags.methods);
    if (flags.n_grid.empty()) {
        for (Index n = 5; n <= 100; n += 5) cfg.n_grid.push_back(n);
    } else {
        for (long long n : flags.n_grid) cfg.n_grid.push_back(static_cast<Index>(n));
    }
    cfg.rule = odeim::OversampleRule::factor;
    cfg.oversample_factor = flags.oversample_factor;
    cfg.sigma = flags.noise;
    cfg.replicates = flags.replicates;
    cfg.seed = flags.seed;
    cfg.jobs = flags.jobs;
    if (flags.full_scale) {
        cfg.toy.grid_size = 8192;
        cfg.toy.training_count = 2500;
        cfg.toy.test_count = 2500;
    }

    const odeim::ErrorTable table = odeim::run_toy_experiment(cfg);

    namespace fs = std::filesystem;
    fs::create_directories(flags.out_dir);
    const std::string csv_path = flags.out_dir + "/toy_results.csv";
    const std::string json_path = flags.out_dir + "/toy_results.json";
    odeim::write_error_csv(table, csv_path);
    odeim::write_error_json(table, json_path);

    odeim::Manifest manifest;
    manifest.emplace_back("command", "toy");
    manifest.emplace_back("n-grid", join_values(cfg.n_grid));
    manifest.emplace_back("oversample-factor", odeim::dtos(cfg.oversample_factor));
    manifest.emplace_back("noise", odeim::dtos(cfg.sigma));
    manifest.emplace_back("replicates", std::to_string(cfg.replicates));
    manifest.emplace_back("seed", std::to_string(cfg.seed));
    manifest.emplace_back("methods", join_methods(cfg.methods));
    manifest.emplace_back("full-scale", flags.full_scale ? "true" : "false");
    manifest.emplace_back("out-dir", flags.out_dir);
    manifest.emplace_back("jobs", std::to_string(cfg.jobs));
    manifest.emplace_back("grid-size", std::to_string(cfg.toy.grid_size));
    manifest.emplace_back("training-count", std::to_string(cfg.toy.training_count));
    manifest.emplace_back("test-count", std::to_string(cfg.toy.test_count));
    for (int rep = 0; rep < cfg.replicates; ++rep) {
        manifest.emplace_back(
            "replicate-seed-" + std::to_string(rep),
            std::to_string(odeim::derive_seed(cfg.seed, 101,
                                              static_cast<std::uint64_t>(rep))));
    }
    append_seed_notes(manifest, cfg);
    odeim::write_manifest(manifest, flags.out_dir + "/toy_manifest.txt");

    std::cout << "wrote " << csv_path << " (" << table.cells.size() << " rows)\n";
    return 0;
}

struct PdeFlags {
    long long mesh = 64;
    long long pod_dim = 20;
    long long snapshot_grid = 10;
    std::vector<long long> n_grid;
    double oversample_fraction = 0.1;
    double noise = 1e-3;
    int replicates = 10;
    std::uint64_t seed = 0;
    std::vector<std::string> methods;
    bool full_scale = false;
    bool skip_nonconverged = false;
    std::string cache_dir;
    std::string out_dir = ".";
    int jobs = 0;
};

int run_pde(const PdeFlags& flags, const CLI::App* cmd) {
    PdeFlags resolved = flags;
    if (flags.full_scale) {
        if (cmd->count("--mesh") == 0) resolved.mesh = 256;
        if (cmd->count("--pod-dim") == 0) resolved.pod_dim = 50;
        if (cmd->count("--snapshot-grid") == 0) resolved.snapshot_grid = 40;
        if (cmd->count("--n-grid") == 0) resolved.n_grid = {10, 20, 30, 40, 50};
    }
    if (resolved.n_grid.empty()) resolved.n_grid = {4, 8, 12, 16, 20};
    if (cmd->count("--cache-dir") == 0)
        resolved.cache_dir = resolved.out_dir + "/snapshot_cache";

    odeim::ExperimentConfig cfg;
    cfg.model = odeim::ModelKind::pde;
    cfg.methods = resolve_methods(resolved.methods);
    for (long long n : resolved.n_grid) cfg.n_grid.push_back(static_cast<Index>(n));
    cfg.rule = odeim::OversampleRule::fraction;
    cfg.oversample_fraction = resolved.oversample_fraction;
    cfg.sigma = resolved.noise;
    cfg.replicates = resolved.replicates;
    cfg.seed = resolved.seed;
    cfg.jobs = resolved.jobs;
    cfg.pde.mesh_divisions = static_cast<Index>(resolved.mesh);
    cfg.pde.snapshot_grid = static_cast<Index>(resolved.snapshot_grid);
    cfg.pde.pod_dim = static_cast<Index>(resolved.pod_dim);
    cfg.pde.skip_nonconverged = resolved.skip_nonconverged;
    cfg.pde.cache_dir = resolved.cache_dir;

    namespace fs = std::filesystem;
    fs::create_directories(resolved.out_dir);

    odeim::PdeRunInfo info;
    const odeim::ErrorTable table = odeim::run_pde_experiment(cfg, &info);

    if (info.cache_hit) {
        std::cout << "cache hit: reusing snapshots (mesh " << resolved.mesh << ", grid "
                  << resolved.snapshot_grid << ")\n";
    } else {
        Index converged = 0;
        for (const auto& st : info.snapshot_statuses)
            if (st.converged) ++converged;
        std::cout << "generated snapshots: " << converged << "/"
                  << info.snapshot_statuses.size() << " converged\n";
    }
    for (const auto& st : info.snapshot_statuses) {
        if (!st.converged)
            std::cout << "snapshot parameter skipped: xi = (" << odeim::dtos(st.xi1)
                      << ", " << odeim::dtos(st.xi2) << "), residual "
                      << odeim::dtos(st.residual) << "\n";
    }
    for (const auto& st : info.test_statuses) {
        if (!st.converged)
            std::cout << "test parameter excluded: xi = (" << odeim::dtos(st.xi1) << ", "
                      << odeim::dtos(st.xi2) << ")\n";
    }

    const std::string csv_path = resolved.out_dir + "/pde_results.csv";
    const std::string json_path = resolved.out_dir + "/pde_results.json";
    odeim::write_error_csv(table, csv_path);
    odeim::write_error_json(table, json_path);

    odeim::Manifest manifest;
    manifest.emplace_back("command", "pde");
    manifest.emplace_back("mesh", std::to_string(resolved.mesh));
    manifest.emplace_back("pod-dim", std::to_string(resolved.pod_dim));
    manifest.emplace_back("snapshot-grid", std::to_string(resolved.snapshot_grid));
    manifest.emplace_back("n-grid", join_values(cfg.n_grid));
    manifest.emplace_back("oversample-fraction", odeim::dtos(cfg.oversample_fraction));
    manifest.emplace_back("noise", odeim::dtos(cfg.sigma));
    manifest.emplace_back("replicates", std::to_string(cfg.replicates));
    manifest.emplace_back("seed", std::to_string(cfg.seed));
    manifest.emplace_back("methods", join_methods(cfg.methods));
    manifest.emplace_back("full-scale", resolved.full_scale ? "true" : "false");
    manifest.emplace_back("skip-nonconverged",
                          resolved.skip_nonconverged ? "true" : "false");
    manifest.emplace_back("cache-dir", resolved.cache_dir);
    manifest.emplace_back("out-dir", resolved.out_dir);
    manifest.emplace_back("jobs", std::to_string(cfg.jobs));
    manifest.emplace_back("cache-hit", info.cache_hit ? "true" : "false");
    Index converged = 0;
    for (const auto& st : info.snapshot_statuses)
        if (st.converged) ++converged;
    manifest.emplace_back("snapshots-converged", std::to_string(converged));
    manifest.emplace_back("snapshots-total",
                          std::to_string(info.snapshot_statuses.size()));
    append_seed_notes(manifest, cfg);
    odeim::write_manifest(manifest, resolved.out_dir + "/pde_manifest.txt");

    std::cout << "wrote " << csv_path << " (" << table.cells.size() << " rows)\n";
    return 0;
}

struct VerifyFlags {
    long long big_n = 0;
    long long n = 0;
    double delta = 0.0;
    long long trials = 0;
    std::uint64_t seed = 0;
    double sigma = 0.0;
    double m_scale = 1.0;
    double projection_norm = 0.1;
    std::string out;
};

int run_verify(const VerifyFlags& flags) {
    odeim::VerifyOptions opts;
    opts.sigma = flags.sigma;
    opts.m_scale = flags.m_scale;
    opts.projection_norm = flags.projection_norm;
    const odeim::BoundReport report = odeim::verify_probabilistic_bounds(
        static_cast<Index>(flags.big_n), static_cast<Index>(flags.n), flags.delta,
        static_cast<Index>(flags.trials), flags.seed, opts);
    if (flags.out.empty()) {
        odeim::write_bound_report_json(report, std::cout);
    } else {
        odeim::write_bound_report_json(report, flags.out);
        odeim::Manifest manifest;
        manifest.emplace_back("command", "verify-bounds");
        manifest.emplace_back("N", std::to_string(flags.big_n));
        manifest.emplace_back("n", std::to_string(flags.n));
        manifest.emplace_back("delta", odeim::dtos(flags.delta));
        manifest.emplace_back("trials", std::to_string(flags.trials));
        manifest.emplace_back("seed", std::to_string(flags.seed));
        manifest.emplace_back("sigma", odeim::dtos(flags.sigma));
        manifest.emplace_back("m-scale", odeim::dtos(flags.m_scale));
        manifest.emplace_back("projection-norm", odeim::dtos(flags.projection_norm));
        manifest.emplace_back("out", flags.out);
        manifest.emplace_back("seed-derivation",
                              "per-trial stream: splitmix64 chain seed->(501, trial)");
        odeim::write_manifest(manifest, flags.out + ".manifest");
    }
    return 0;
}

template <class Fn>
int dispatch(Fn&& fn) {
    try {
        return fn();
    } catch (const odeim::ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const odeim::HypothesisError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const odeim::SingularError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const odeim::NonconvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Point selection, oversampled empirical interpolation experiments, "
                 "and sampling-bound verification"};
    app.require_subcommand(1);
    std::string config_spec;

    SelectFlags select_flags;
    CLI::App* select_cmd =
        app.add_subcommand("select", "Select sampling points for a basis matrix");
    select_cmd->add_option("--config", config_spec, "Load defaults from a manifest file (explicit flags win)");
    select_cmd->add_option("--basis", select_flags.basis_path,
                           "Basis matrix file (text or binary)")
        ->required();
    select_cmd->add_option("--method", select_flags.method,
                           std::string("Selection method: ") + kMethodList)
        ->required();
    select_cmd->add_option("--points", select_flags.points,
                           "Number of sampling points (default: basis dimension)");
    select_cmd->add_option("--seed", select_flags.seed, "Seed for stochastic methods");
    select_cmd->add_option("--out", select_flags.out, "Output file (default: stdout)");

    ToyFlags toy_flags;
    CLI::App* toy_cmd = app.add_subcommand(
        "toy", "Empirical interpolation error sweep on the analytic test function");
    toy_cmd->add_option("--config", config_spec, "Load defaults from a manifest file (explicit flags win)");
    toy_cmd->add_option("--n-grid", toy_flags.n_grid,
                        "Basis dimensions (default: 5 10 ... 100)")
        ->delimiter(',');
    toy_cmd->add_option("--oversample-factor", toy_flags.oversample_factor,
                        "m = round(factor * n) for oversampling methods")
        ->capture_default_str();
    toy_cmd->add_option("--noise", toy_flags.noise,
                        "Noise standard deviation on sampled values")->capture_default_str();
    toy_cmd->add_option("--replicates", toy_flags.replicates, "Replicates")->capture_default_str();
    toy_cmd->add_option("--seed", toy_flags.seed, "Master seed")->capture_default_str();
    toy_cmd->add_option("--methods", toy_flags.methods,
                        std::string("Methods (default: all of ") + kMethodList + ")")
        ->delimiter(',');
    toy_cmd->add_flag("--full-scale", toy_flags.full_scale,
                      "Use the 8192-point grid with 2500/2500 parameters");
    toy_cmd->add_option("--out-dir", toy_flags.out_dir, "Output directory")->capture_default_str();
    toy_cmd->add_option("--jobs", toy_flags.jobs,
                        "Worker threads (0 = hardware concurrency)")->capture_default_str();

    PdeFlags pde_flags;
    CLI::App* pde_cmd = app.add_subcommand(
        "pde", "Reduced-order diffusion-reaction experiment with noisy evaluations");
    pde_cmd->add_option("--config", config_spec, "Load defaults from a manifest file (explicit flags win)");
    pde_cmd->add_option("--mesh", pde_flags.mesh, "Mesh divisions per axis")->capture_default_str();
    pde_cmd->add_option("--pod-dim", pde_flags.pod_dim, "State basis dimension")->capture_default_str();
    pde_cmd->add_option("--snapshot-grid", pde_flags.snapshot_grid,
                        "Snapshot parameters per axis")->capture_default_str();
    pde_cmd->add_option("--n-grid", pde_flags.n_grid,
                        "Nonlinear basis dimensions (default: 4 8 12 16 20)")
        ->delimiter(',');
    pde_cmd->add_option("--oversample-fraction", pde_flags.oversample_fraction,
                        "m = n + floor(fraction * mesh^2)")->capture_default_str();
    pde_cmd->add_option("--noise", pde_flags.noise,
                        "Noise standard deviation on nonlinear evaluations")->capture_default_str();
    pde_cmd->add_option("--replicates", pde_flags.replicates, "Replicates")->capture_default_str();
    pde_cmd->add_option("--seed", pde_flags.seed, "Master seed")->capture_default_str();
    pde_cmd->add_option("--methods", pde_flags.methods,
                        std::string("Methods (default: all of ") + kMethodList + ")")
        ->delimiter(',');
    pde_cmd->add_flag("--full-scale", pde_flags.full_scale,
                      "Mesh 256, 40x40 snapshots, r = 50, n-grid 10..50");
    pde_cmd->add_flag("--skip-nonconverged", pde_flags.skip_nonconverged,
                      "Drop snapshot parameters whose Newton solve fails instead of "
                      "aborting");
    pde_cmd->add_option("--cache-dir", pde_flags.cache_dir,
                        "Snapshot cache directory (default: <out-dir>/snapshot_cache)");
    pde_cmd->add_option("--out-dir", pde_flags.out_dir, "Output directory")->capture_default_str();
    pde_cmd->add_option("--jobs", pde_flags.jobs,
                        "Worker threads (0 = hardware concurrency)")->capture_default_str();

    VerifyFlags verify_flags;
    CLI::App* verify_cmd = app.add_subcommand(
        "verify-bounds", "Monte-Carlo verification of the sampling bounds");
    verify_cmd->add_option("--config", config_spec, "Load defaults from a manifest file (explicit flags win)");
    verify_cmd->add_option("--N", verify_flags.big_n, "Ambient dimension")->required();
    verify_cmd->add_option("--n", verify_flags.n, "Basis dimension")->required();
    verify_cmd->add_option("--delta", verify_flags.delta, "Failure probability")
        ->required();
    verify_cmd->add_option("--trials", verify_flags.trials, "Trial count")->required();
    verify_cmd->add_option("--seed", verify_flags.seed, "Master seed")->capture_default_str();
    verify_cmd->add_option("--sigma", verify_flags.sigma,
                           "Noise standard deviation on sampled values")->capture_default_str();
    verify_cmd->add_option("--m-scale", verify_flags.m_scale,
                           "Multiplier on the sampling threshold for m")->capture_default_str();
    verify_cmd->add_option("--projection-norm", verify_flags.projection_norm,
                           "Orthogonal component of the synthetic function")->capture_default_str();
    verify_cmd->add_option("--out", verify_flags.out, "Output file (default: stdout)");

    std::vector<std::string> args(argv + 1, argv + argc);
    std::string config_path;
    for (std::size_t i = 0; i < args.size();) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) {
                std::cerr << "error: --config expects a file\n";
                return 2;
            }
            config_path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                       args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
        }
    }
    if (!config_path.empty()) {
        const CLI::App* target = nullptr;
        for (const std::string& a : args) {
            if (!a.empty() && a[0] != '-') {
                target = app.get_subcommand_no_throw(a);
                break;
            }
        }
        if (target == nullptr) {
            std::cerr << "error: --config requires a subcommand\n";
            return 2;
        }
        try {
            const odeim::Manifest manifest = odeim::read_manifest_file(config_path);
            for (const auto& [key, value] : manifest) {
                const std::string flag = "--" + key;
                if (target->get_option_no_throw(flag) == nullptr) continue;
                if (value.empty()) continue;
                bool given = false;
                for (const std::string& a : args) {
                    if (a == flag || a.rfind(flag + "=", 0) == 0) {
                        given = true;
                        break;
                    }
                }
                if (!given) args.push_back(flag + "=" + value);
            }
        } catch (const odeim::Error& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    }
    std::reverse(args.begin(), args.end());

    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (select_cmd->parsed()) return dispatch([&] { return run_select(select_flags); });
    if (toy_cmd->parsed()) return dispatch([&] { return run_toy(toy_flags); });
    if (pde_cmd->parsed()) return dispatch([&] { return run_pde(pde_flags, pde_cmd); });
    if (verify_cmd->parsed()) return dispatch([&] { return run_verify(verify_flags); });
    return 2;
}
