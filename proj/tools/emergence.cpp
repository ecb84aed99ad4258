// Command-line front end for the causal-emergence toolkit.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "emergence/io.hpp"
#include "emergence/models.hpp"
#include "emergence/path.hpp"
#include "emergence/scale_space.hpp"
#include "emergence/svd.hpp"

namespace {

using namespace emergence;

struct AnalysisConfig {
    std::string pc_kind = "uniform";  // uniform | stationary
    std::string cp_kind = "detspec";  // detspec | primitive
    double consistency_tol = 1e-9;
    int horizon = 5;
    double epsilon_svd = 1e-9;
    double epsilon_dr = 1e-3;
    int max_states = 12;
    std::string output_format = "json";  // json | csv
    std::string out_path;
    int threads = 1;
};

CpKind parse_cp_kind(const std::string& s) {
    if (s == "detspec") return CpKind::detspec;
    if (s == "primitive") return CpKind::primitive;
    throw Error(errc::bad_params, "unknown cp kind '" + s + "'");
}

InterventionDist make_pc(const Tpm& tpm, const AnalysisConfig& cfg) {
    if (cfg.pc_kind == "uniform") return InterventionDist::uniform(tpm.n);
    if (cfg.pc_kind == "stationary") return stationary_distribution(tpm);
    throw Error(errc::bad_params, "unknown pc kind '" + cfg.pc_kind + "'");
}

int effective_max_states(const AnalysisConfig& cfg) {
    if (const char* env = std::getenv("EMERGENCE_MAX_STATES")) {
        try {
            return std::stoi(env);
        } catch (const std::exception&) {
            throw Error(errc::bad_params, "bad EMERGENCE_MAX_STATES value");
        }
    }
    return cfg.max_states;
}

void emit(const AnalysisConfig& cfg, const std::string& text) {
    if (cfg.out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
    } else {
        std::ofstream out(cfg.out_path);
        if (!out) throw Error(errc::parse_error, "cannot write " + cfg.out_path);
        out << text;
        if (!text.empty() && text.back() != '\n') out << '\n';
    }
}

int cmd_validate(const std::string& path) {
    const Tpm tpm = load_tpm(path);
    std::cout << "valid, n=" << tpm.n << ", permutation=" << (is_permutation(tpm) ? "true" : "false")
              << "\n";
    return 0;
}

int cmd_primitives(const std::string& path, const AnalysisConfig& cfg) {
    const Tpm tpm = load_tpm(path);
    const PrimitiveReport rep = system_primitives(tpm, make_pc(tpm, cfg));
    if (cfg.output_format == "csv") {
        emit(cfg, primitive_report_to_csv(rep));
    } else {
        emit(cfg, primitive_report_to_json(rep).dump(2));
    }
    return 0;
}

std::vector<ScaleNode> run_scan(const Tpm& tpm, const InterventionDist& pc,
                                const AnalysisConfig& cfg) {
    const int cap = effective_max_states(cfg);
    if (tpm.n > cap) {
        throw Error(errc::too_large, "n=" + std::to_string(tpm.n) + " exceeds max-states " +
                                         std::to_string(cap) +
                                         "; use the svd subcommand for large systems");
    }
    ScanOptions opts;
    opts.tol = cfg.consistency_tol;
    opts.horizon = cfg.horizon;
    opts.max_states = cap;
    opts.threads = cfg.threads;
    return valid_macroscales(tpm, pc, opts);
}

int cmd_scan(const std::string& path, const AnalysisConfig& cfg) {
    const Tpm tpm = load_tpm(path);
    const auto nodes = run_scan(tpm, make_pc(tpm, cfg), cfg);
    const CpKind kind = parse_cp_kind(cfg.cp_kind);
    if (cfg.output_format == "csv") {
        emit(cfg, scan_to_csv(nodes, kind));
    } else {
        emit(cfg, scan_to_json(nodes, kind).dump(2));
    }
    return 0;
}

int cmd_path(const std::string& path, const AnalysisConfig& cfg,
             const std::string& endpoint_str) {
    const Tpm tpm = load_tpm(path);
    const InterventionDist pc = make_pc(tpm, cfg);
    const CpKind kind = parse_cp_kind(cfg.cp_kind);
    const auto nodes = run_scan(tpm, pc, cfg);

    const ScaleNode* micro = nullptr;
    for (const auto& node : nodes) {
        if (node.partition.k == tpm.n) micro = &node;
    }
    if (!micro) throw Error(errc::unreachable, "microscale node missing");

    ScaleNode endpoint;
    if (endpoint_str.empty()) {
        endpoint = select_endpoint(nodes, kind);
    } else {
        const Partition want = parse_partition(endpoint_str);
        if (want.n() != tpm.n) throw Error(errc::invalid_endpoint, "endpoint length != n");
        if (want.k < 2) {
            throw Error(errc::invalid_endpoint, "k=1 endpoint excluded (CP undefined)");
        }
        const ScaleNode* found = nullptr;
        for (const auto& node : nodes) {
            if (node.partition == want) found = &node;
        }
        if (!found) {
            throw Error(errc::invalid_endpoint,
                        "'" + endpoint_str + "' is not a valid consistent scale");
        }
        endpoint = *found;
    }

    const MicroMacroPath mmp = longest_path(*micro, endpoint, nodes, kind);
    const ApportionReport rep = apportion(mmp);
    std::optional<std::size_t> dr;
    if (!rep.deltas.empty()) dr = diminishing_returns_stop(rep.deltas, cfg.epsilon_dr, 2);
    if (cfg.output_format == "csv") {
        emit(cfg, apportion_report_to_csv(rep));
    } else {
        emit(cfg, apportion_report_to_json(rep, dr).dump(2));
    }
    return 0;
}

int cmd_svd(const std::string& path, const AnalysisConfig& cfg) {
    const Tpm tpm = load_tpm(path);
    const SvdReport rep = svd_report(tpm, cfg.epsilon_svd);
    if (cfg.output_format == "csv") {
        emit(cfg, svd_report_to_csv(rep));
    } else {
        emit(cfg, svd_report_to_json(rep).dump(2));
    }
    return 0;
}

Schedule make_schedule(const std::string& name, int n, int steps, const std::vector<int>& blocks) {
    if (name == "noise") return noise_schedule(n, steps > 0 ? steps : n);
    if (name == "common_cause") return common_cause_schedule(n, steps > 0 ? steps : n - 1);
    if (name == "combined") return combined_schedule(n, steps > 0 ? steps : n);
    if (name == "fig4") return fig4_schedule(blocks, steps > 0 ? steps : 50);
    throw Error(errc::unknown_experiment, "unknown experiment '" + name + "'");
}

int cmd_experiment(const std::string& name, int n, int steps, const std::vector<int>& blocks,
                   const std::string& out_dir, const AnalysisConfig& cfg) {
    const Schedule sched = make_schedule(name, n, steps, blocks);
    const CpKind kind = parse_cp_kind(cfg.cp_kind);

    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    // Fixed endpoint for fig4: the block partition. The uncertainty-axis schedules have
    // no designated endpoint; their endpoint columns stay empty.
    std::optional<Partition> endpoint;
    if (sched.kind == Schedule::Kind::fig4_selfloop) {
        std::vector<int> assign;
        int blk = 0;
        for (int b : blocks) {
            for (int i = 0; i < b; ++i) assign.push_back(blk);
            ++blk;
        }
        endpoint = partition_from_assignment(assign);
    }

    std::string csv =
        "t,cp_detspec,cp_primitive,ei_bits,delta_ei,delta_cp,ce2_estimate,ce1_vague\n";
    json manifest;
    manifest["experiment"] = name;
    manifest["steps"] = sched.steps;
    manifest["frames"] = json::array();

    for (std::size_t t = 0; t < sched.frames.size(); ++t) {
        const Tpm& frame = sched.frames[t];
        char fname[32];
        std::snprintf(fname, sizeof(fname), "frame_%04zu.json", t);
        {
            std::ofstream f(fs::path(out_dir) / fname);
            f << tpm_to_json(frame).dump(2) << '\n';
        }
        manifest["frames"].push_back(fname);

        const InterventionDist pc = make_pc(frame, cfg);
        const PrimitiveReport rep = system_primitives(frame, pc);
        csv += std::to_string(t) + ',' + csv_num(rep.cp_detspec) + ',' +
               csv_num(rep.cp_primitive) + ',' + csv_num(rep.ei_bits) + ',';
        if (endpoint) {
            const Tpm macro = coarsen(frame, *endpoint, pc);
            const PrimitiveReport mrep = system_primitives(macro, project_pc(pc, *endpoint));
            // Detected EI-based emergence: the EI gain clamped at zero.
            const double dei = std::max(mrep.ei_bits - rep.ei_bits, 0.0);
            const double dcp = cp_value(mrep, kind) - cp_value(rep, kind);
            csv += csv_num(dei) + ',' + csv_num(dcp) + ',';
        } else {
            csv += ",,";
        }
        const SvdReport srep = svd_report(frame, cfg.epsilon_svd);
        csv += csv_num(srep.ce2_estimate) + ',' + csv_num(srep.ce1_vague) + '\n';
    }

    {
        std::ofstream f(fs::path(out_dir) / "manifest.json");
        f << manifest.dump(2) << '\n';
    }
    std::ofstream f(fs::path(out_dir) / "metrics.csv");
    f << csv;
    std::cout << "wrote " << sched.frames.size() << " frames to " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Causal-emergence analysis of discrete Markov systems"};
    app.require_subcommand(1);

    AnalysisConfig cfg;
    app.add_option("--pc", cfg.pc_kind, "Intervention distribution: uniform|stationary")
        ->check(CLI::IsMember({"uniform", "stationary"}));
    app.add_option("--cp", cfg.cp_kind, "CP flavor: detspec|primitive")
        ->check(CLI::IsMember({"detspec", "primitive"}));
    app.add_option("--tol", cfg.consistency_tol, "Consistency tolerance");
    app.add_option("--horizon", cfg.horizon, "Walker horizon for consistency checks");
    app.add_option("--epsilon-svd", cfg.epsilon_svd, "SVD threshold for the vague-CE mean");
    app.add_option("--epsilon-dr", cfg.epsilon_dr, "Diminishing-returns threshold");
    app.add_option("--max-states", cfg.max_states, "Partition-scan state cap");
    app.add_option("--out", cfg.out_path, "Write output to a file instead of stdout");
    app.add_option("--format", cfg.output_format, "Output format: json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--threads", cfg.threads, "Worker threads for the scan");

    std::string tpm_path, endpoint_str, experiment_name, out_dir = "experiment_out";
    int exp_n = 8, exp_steps = 0;
    std::vector<int> exp_blocks = {4, 4};
    double meso_delta = 0.2;

    auto* validate = app.add_subcommand("validate", "Validate a TPM file");
    validate->add_option("tpm", tpm_path)->required();

    auto* primitives = app.add_subcommand("primitives", "Causal primitives of one scale");
    primitives->add_option("tpm", tpm_path)->required();

    auto* scan = app.add_subcommand("scan", "Enumerate all valid macroscales");
    scan->add_option("tpm", tpm_path)->required();

    auto* pathcmd = app.add_subcommand("path", "Longest micro->macro path and apportioning");
    pathcmd->add_option("tpm", tpm_path)->required();
    pathcmd->add_option("--endpoint", endpoint_str, "Endpoint partition (rg-string)");

    auto* svdcmd = app.add_subcommand("svd", "SVD heuristic estimates");
    svdcmd->add_option("tpm", tpm_path)->required();

    auto* experiment = app.add_subcommand("experiment", "Generate a schedule and its metrics");
    experiment->add_option("name", experiment_name, "noise|common_cause|combined|fig4")
        ->required();
    experiment->add_option("--n", exp_n, "State count for the uncertainty-axis schedules");
    experiment->add_option("--steps", exp_steps, "Step count (0 = schedule default)");
    experiment->add_option("--blocks", exp_blocks, "Block sizes for fig4");
    experiment->add_option("--delta", meso_delta, "Mesoscale perturbation (reserved)");
    experiment->add_option("--out-dir", out_dir, "Output directory");

    // Let the global options above also appear after the subcommand name.
    for (auto* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(tpm_path);
        if (primitives->parsed()) return cmd_primitives(tpm_path, cfg);
        if (scan->parsed()) return cmd_scan(tpm_path, cfg);
        if (pathcmd->parsed()) return cmd_path(tpm_path, cfg, endpoint_str);
        if (svdcmd->parsed()) return cmd_svd(tpm_path, cfg);
        if (experiment->parsed()) {
            return cmd_experiment(experiment_name, exp_n, exp_steps, exp_blocks, out_dir, cfg);
        }
    } catch (const emergence::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.is_io_error() ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
