// Command line driver: validate | simulate | synthesize | check | converge.
// Exit codes: 0 ok, 1 domain or verification failure, 2 config error,
// 3 runtime cap exceeded.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "temple/control.hpp"
#include "temple/decay.hpp"
#include "temple/errors.hpp"
#include "temple/io.hpp"
#include "temple/profile.hpp"
#include "temple/system.hpp"
#include "temple/tracking.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace temple;

namespace {

struct Config {
    json raw;
    fs::path dir;  // directory of the config file, for relative paths

    SystemSpec system;
    double a = 0, b = 1;
    GridLevel grid{6};
    double tau = 0;
    std::vector<double> snapshots;
    fs::path out = "out";
    std::uint64_t seed = 0;
    std::size_t max_events = 1'000'000;
};

fs::path resolve(const Config& cfg, const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? path : cfg.dir / path;
}

SystemSpec system_from_json(const json& j) {
    if (j.contains("builtin")) {
        const std::string name = j.at("builtin").get<std::string>();
        if (name == "diag2") return make_diag2();
        throw Error(ErrorCode::BadInput, "unknown builtin system: " + name);
    }
    const auto c0 = j.at("c0").get<WVec>();
    const auto c1 = j.at("c1").get<WVec>();
    const int p = j.at("p").get<int>();
    Box gamma;
    for (const auto& pair : j.at("gamma")) {
        gamma.lo.push_back(pair.at(0).get<double>());
        gamma.hi.push_back(pair.at(1).get<double>());
    }
    if (c0.size() != c1.size() || c0.size() != gamma.lo.size()) {
        throw Error(ErrorCode::BadInput, "inconsistent system dimensions");
    }
    if (p < 1 || p >= static_cast<int>(c0.size())) {
        throw Error(ErrorCode::BadInput, "splitting index out of range");
    }
    return make_diagonal_affine(c0, c1, p, gamma,
                                j.value("name", std::string("diagonal")));
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::BadInput, "cannot open config " + path);
    Config cfg;
    try {
        in >> cfg.raw;
    } catch (const std::exception& e) {
        throw Error(ErrorCode::BadInput,
                    std::string("malformed config JSON: ") + e.what());
    }
    cfg.dir = fs::path(path).parent_path();
    try {
        cfg.system = system_from_json(cfg.raw.at("system"));
        if (cfg.raw.contains("interval")) {
            cfg.a = cfg.raw["interval"].at(0).get<double>();
            cfg.b = cfg.raw["interval"].at(1).get<double>();
        }
        cfg.grid.nu = cfg.raw.value("nu", 6);
        cfg.tau = cfg.raw.value("tau", 0.0);
        if (cfg.raw.contains("snapshots")) {
            cfg.snapshots = cfg.raw["snapshots"].get<std::vector<double>>();
        }
        cfg.out = resolve(cfg, cfg.raw.value("out", std::string("out")));
        cfg.seed = cfg.raw.value("seed", 0ULL);
        cfg.max_events = cfg.raw.value("max_events", 1'000'000ULL);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::BadInput,
                    std::string("config field error: ") + e.what());
    }
    if (cfg.grid.nu < 1) {
        throw Error(ErrorCode::BadInput, "nu must be at least 1");
    }
    if (!(cfg.a < cfg.b)) {
        throw Error(ErrorCode::BadInput, "interval must be non-degenerate");
    }
    return cfg;
}

DecayConstants constants_for(const Config& cfg) {
    if (cfg.raw.contains("constants")) {
        const auto& j = cfg.raw["constants"];
        const double C = j.at("C").get<double>();
        const double C1 = j.at("C1").get<double>();
        auto report = validate_system(cfg.system, 17);
        if (!report.pass || !report.bounds) {
            throw Error(ErrorCode::BadInput, "system hypotheses fail");
        }
        return DecayConstants::make(C, C1, report.bounds->lambda_min);
    }
    CalibrationOptions copts;
    copts.a = cfg.a;
    copts.b = cfg.b;
    copts.seed = cfg.seed;
    copts.trials = 64;
    if (cfg.raw.contains("calibration")) {
        const auto& j = cfg.raw["calibration"];
        copts.trials = j.value("trials", copts.trials);
        copts.nu_range.first = j.value("nu_lo", copts.nu_range.first);
        copts.nu_range.second = j.value("nu_hi", copts.nu_range.second);
    }
    return calibrate_constants(cfg.system, copts);
}

Profile load_profile_field(const Config& cfg, const char* key) {
    if (!cfg.raw.contains(key)) {
        throw Error(ErrorCode::BadInput,
                    std::string("config is missing '") + key + "'");
    }
    return io::load_profile_csv(
        resolve(cfg, cfg.raw[key].get<std::string>()).string(), cfg.a, cfg.b,
        cfg.system.n);
}

struct LoadedControls {
    BoundaryControl a, b;
};

LoadedControls load_controls(const Config& cfg) {
    if (!cfg.raw.contains("controls")) {
        throw Error(ErrorCode::BadInput, "config is missing 'controls'");
    }
    const auto& j = cfg.raw["controls"];
    if (j.contains("plan")) {
        auto pd = io::load_plan_json(
            resolve(cfg, j["plan"].get<std::string>()).string());
        return {pd.control_a, pd.control_b};
    }
    return {io::load_control_csv(resolve(cfg, j.at("a").get<std::string>()).string(),
                                 cfg.system.n),
            io::load_control_csv(resolve(cfg, j.at("b").get<std::string>()).string(),
                                 cfg.system.n)};
}

void write_snapshots(const fs::path& out, const Trajectory& traj) {
    json index = json::array();
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof(name), "snapshot_%03zu.csv", k);
        io::save_profile_csv((out / name).string(), traj.snapshots[k]);
        index.push_back({{"t", traj.snapshot_times[k]}, {"file", name}});
    }
    io::write_text_file((out / "snapshots.json").string(),
                        index.dump(2) + "\n");
}

int cmd_validate(const Config& cfg) {
    auto report = validate_system(cfg.system, cfg.raw.value("resolution", 33));
    fs::create_directories(cfg.out);
    io::write_text_file((cfg.out / "validation.json").string(),
                        io::validation_report_json(report));
    std::ostringstream os;
    for (const auto& c : report.checks) {
        os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name;
        if (!c.detail.empty()) os << ": " << c.detail;
        os << "\n";
    }
    std::cout << os.str();
    return report.pass ? 0 : 1;
}

int cmd_simulate(const Config& cfg) {
    if (!(cfg.tau > 0)) {
        throw Error(ErrorCode::BadInput, "simulate needs tau > 0");
    }
    Profile initial = load_profile_field(cfg, "initial");
    auto controls = load_controls(cfg);
    const DecayConstants constants = constants_for(cfg);

    EngineOptions opts;
    opts.max_events = cfg.max_events;
    Trajectory traj = run_forward(cfg.system, initial, controls.a, controls.b,
                                  cfg.grid, cfg.tau, cfg.snapshots, opts);

    const int n_nu = *std::max_element(traj.data_shocks_per_family.begin(),
                                       traj.data_shocks_per_family.end());
    auto oleinik = oleinik_report(traj, cfg.system, constants, cfg.grid, n_nu);

    fs::create_directories(cfg.out);
    write_snapshots(cfg.out, traj);
    io::save_event_log_jsonl((cfg.out / "events.jsonl").string(), traj.events);
    io::save_segments_csv((cfg.out / "fronts.csv").string(), traj.segments);
    io::write_text_file((cfg.out / "oleinik.json").string(),
                        io::oleinik_report_json(oleinik, n_nu));
    io::write_text_file((cfg.out / "oleinik.txt").string(),
                        io::oleinik_report_text(oleinik, n_nu));

    std::cout << (oleinik.pass ? "oleinik: pass" : "oleinik: FAIL")
              << " (required C = " << oleinik.required_C
              << ", worst margin = " << oleinik.worst_margin << ")\n";
    if (!traj.wave_count_ok || !traj.tv_ok) {
        std::cout << "structural monotonicity violated\n";
        return 1;
    }
    return oleinik.pass ? 0 : 1;
}

int cmd_synthesize(const Config& cfg) {
    Profile initial = load_profile_field(cfg, "initial");
    Profile target = load_profile_field(cfg, "target");
    const DecayConstants constants = constants_for(cfg);

    EngineOptions opts;
    opts.max_events = cfg.max_events;
    SynthesisPlan plan = synthesize(cfg.system, initial, target, cfg.tau,
                                    cfg.grid, constants, opts);

    Trajectory replay =
        run_forward(cfg.system, initial, plan.control_a, plan.control_b,
                    cfg.grid, cfg.tau, cfg.snapshots, opts);
    const Profile& reached = replay.final_profile();

    const bool match = profiles_match(reached, plan.target_quantized, 1e-9);
    const double gap_q = l1_distance(reached, plan.target_quantized);
    const double gap_target = l1_distance(reached, target);
    const double bound =
        (cfg.b - cfg.a) * cfg.system.n * cfg.grid.spacing();

    fs::create_directories(cfg.out);
    io::write_text_file((cfg.out / "plan.json").string(),
                        io::plan_json(plan, cfg.a, cfg.b));
    io::save_profile_csv((cfg.out / "replay.csv").string(), reached);
    io::save_event_log_jsonl((cfg.out / "replay_events.jsonl").string(),
                             replay.events);
    json verdict{{"replay_matches_quantized", match},
                 {"l1_gap_quantized", gap_q},
                 {"l1_gap_target", gap_target},
                 {"quantization_bound", bound},
                 {"event_count", replay.events.size()}};
    io::write_text_file((cfg.out / "replay.json").string(),
                        verdict.dump(2) + "\n");

    std::cout << (match ? "replay: exact" : "replay: MISMATCH")
              << " (L1 gap to target = " << gap_target << ", bound = "
              << bound << ")\n";
    return match ? 0 : 1;
}

int cmd_check(const Config& cfg) {
    Profile profile = load_profile_field(cfg, "profile");
    const double rho = cfg.raw.value("rho", 0.0);
    if (!(rho > 0)) {
        throw Error(ErrorCode::BadInput, "check needs rho > 0");
    }
    const std::string mode_s = cfg.raw.value("mode", "continuum");
    KMode mode;
    if (mode_s == "continuum") {
        mode = KMode::Continuum;
    } else if (mode_s == "grid") {
        mode = KMode::Grid;
    } else if (mode_s == "pairs") {
        mode = KMode::PartitionPairs;
    } else {
        throw Error(ErrorCode::BadInput, "mode must be continuum|grid|pairs");
    }
    auto report = check_k_rho(profile, rho, cfg.system.p, mode);
    fs::create_directories(cfg.out);
    io::write_text_file((cfg.out / "check.json").string(),
                        io::k_rho_report_json(report, rho, mode_s));
    std::cout << (report.member ? "member" : "not a member")
              << " (min rho = " << report.min_rho << ")\n";
    return report.member ? 0 : 1;
}

int cmd_converge(const Config& cfg) {
    if (!cfg.raw.contains("nu_list")) {
        throw Error(ErrorCode::BadInput, "config is missing 'nu_list'");
    }
    const auto nu_list = cfg.raw["nu_list"].get<std::vector<int>>();
    if (nu_list.empty() ||
        !std::is_sorted(nu_list.begin(), nu_list.end(),
                        [](int l, int r) { return l <= r; })) {
        throw Error(ErrorCode::BadInput, "nu_list must be increasing");
    }
    Profile initial = load_profile_field(cfg, "initial");
    Profile target = load_profile_field(cfg, "target");
    const DecayConstants constants = constants_for(cfg);

    struct Row {
        int nu;
        double gap;
        double ms;
        std::size_t events;
    };

    auto one_case = [&](int nu) -> Row {
        const auto start = std::chrono::steady_clock::now();
        EngineOptions opts;
        opts.max_events = cfg.max_events;
        GridLevel grid{nu};
        SynthesisPlan plan = synthesize(cfg.system, initial, target, cfg.tau,
                                        grid, constants, opts);
        Trajectory replay =
            run_forward(cfg.system, initial, plan.control_a, plan.control_b,
                        grid, cfg.tau, {}, opts);
        const double gap = l1_distance(replay.final_profile(), target);
        const auto end = std::chrono::steady_clock::now();
        const double ms =
            std::chrono::duration<double, std::milli>(end - start).count();
        return Row{nu, gap, ms, replay.events.size()};
    };

    std::vector<std::future<Row>> futures;
    for (int nu : nu_list) {
        futures.push_back(std::async(std::launch::async, one_case, nu));
    }
    std::vector<Row> rows;
    for (auto& f : futures) rows.push_back(f.get());

    fs::create_directories(cfg.out);
    std::ostringstream csv;
    csv << "nu,l1_gap,runtime_ms,event_count\n";
    for (const auto& r : rows) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.3f,%zu\n", r.nu, r.gap,
                      r.ms, r.events);
        csv << buf;
    }
    io::write_text_file((cfg.out / "converge.csv").string(), csv.str());
    std::cout << csv.str();

    for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
        if (rows[k + 1].gap > 2.0 * rows[k].gap + 1e-12) {
            std::cout << "gap is not non-increasing within factor 2\n";
            return 1;
        }
    }
    return 0;
}

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case ErrorCode::BadInput: return 2;
        case ErrorCode::Runaway: return 3;
        default: return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Front tracking and boundary control for Temple class systems"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    int nu_override = -1;
    std::int64_t seed_override = -1;
    std::int64_t max_events_override = -1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("config", config_path, "path to the run config JSON")
            ->required();
        cmd->add_option("--out", out_override, "output directory");
        cmd->add_option("--nu", nu_override, "value grid level override");
        cmd->add_option("--seed", seed_override, "seed override");
        cmd->add_option("--max-events", max_events_override,
                        "event cap override");
    };

    auto* validate = app.add_subcommand("validate", "check the system hypotheses");
    auto* simulate = app.add_subcommand("simulate", "run the forward flow");
    auto* synth = app.add_subcommand("synthesize", "build boundary controls for a target");
    auto* check = app.add_subcommand("check", "test a profile against the attainability bounds");
    auto* converge = app.add_subcommand("converge", "grid refinement study");
    for (auto* cmd : {validate, simulate, synth, check, converge}) {
        add_common(cmd);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        Config cfg = load_config(config_path);
        if (!out_override.empty()) cfg.out = out_override;
        if (nu_override > 0) cfg.grid.nu = nu_override;
        if (seed_override >= 0) {
            cfg.seed = static_cast<std::uint64_t>(seed_override);
        }
        if (max_events_override > 0) {
            cfg.max_events = static_cast<std::size_t>(max_events_override);
        }

        if (validate->parsed()) return cmd_validate(cfg);
        if (simulate->parsed()) return cmd_simulate(cfg);
        if (synth->parsed()) return cmd_synthesize(cfg);
        if (check->parsed()) return cmd_check(cfg);
        if (converge->parsed()) return cmd_converge(cfg);
        return 2;
    } catch (const Error& e) {
        std::cerr << "error (" << error_code_name(e.code()) << "): "
                  << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
