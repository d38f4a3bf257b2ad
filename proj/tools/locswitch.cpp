// Command-line driver: single runs, grid sweeps and AP field generation.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <unistd.h>

#include "locswitch/config.hpp"
#include "locswitch/errors.hpp"
#include "locswitch/report.hpp"
#include "locswitch/text.hpp"

namespace fs = std::filesystem;
using namespace locswitch;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

struct CommonOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string scheme;
    std::string user;
    std::string threshold;
    std::string out_dir = ".";
    std::optional<unsigned> parallel;
    std::optional<double> tick;
    std::string frame;
    std::string units;
    std::vector<std::string> set;
};

void add_common(CLI::App& cmd, CommonOptions& o, bool allow_both) {
    cmd.add_option("--config", o.config, "Scenario file (INI-style)");
    cmd.add_option("--seed", o.seed, "Run seed");
    cmd.add_option("--scheme", o.scheme, "Switching scheme");
    cmd.add_option("--user", o.user, "User class U1..U4");
    cmd.add_option("--threshold", o.threshold, "Threshold B1..B4");
    cmd.add_option("--out-dir", o.out_dir, "Directory for output files");
    cmd.add_option("--parallel", o.parallel, "Worker threads for sweeps");
    cmd.add_option("--tick", o.tick, "Tick length in seconds");
    cmd.add_option("--frame", o.frame, allow_both ? "outdoor, indoor or both" : "outdoor or indoor");
    cmd.add_option("--units", o.units, "'paper' adds kb/s and mAh readings to the summary");
    cmd.add_option("--set", o.set, "Override a config key: section.key=value");
}

RunConfig build_config(const CommonOptions& o) {
    RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
    for (const auto& s : o.set) apply_override(cfg, s);
    if (o.seed) cfg.seed = *o.seed;
    if (!o.scheme.empty()) apply_setting(cfg, "scenario", "scheme", o.scheme, "--scheme");
    if (!o.user.empty()) apply_setting(cfg, "scenario", "user", o.user, "--user");
    if (!o.threshold.empty()) apply_setting(cfg, "scenario", "threshold", o.threshold, "--threshold");
    if (o.tick) cfg.tick_s = *o.tick;
    if (o.parallel) {
        if (*o.parallel == 0) throw ConfigError("--parallel: must be at least 1");
        cfg.sweep.parallel = *o.parallel;
    }
    if (!o.units.empty() && o.units != "paper" && o.units != "si") {
        throw ConfigError("--units: expected 'paper' or 'si', got '" + o.units + "'");
    }
    return cfg;
}

std::vector<Frame> frames_for(const CommonOptions& o, const RunConfig& cfg, bool allow_both) {
    if (o.frame.empty()) return {cfg.frame};
    if (allow_both && o.frame == "both") return {Frame::Outdoor, Frame::Indoor};
    const auto f = parse_frame(o.frame);
    if (!f) {
        throw ConfigError("--frame: expected outdoor, indoor" + std::string(allow_both ? " or both" : "") +
                          ", got '" + o.frame + "'");
    }
    return {*f};
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
}

bool use_color() {
    const char* no_color = std::getenv("NO_COLOR");
    return (no_color == nullptr || *no_color == '\0') && isatty(fileno(stdout));
}

int cmd_run(const CommonOptions& o, bool events) {
    RunConfig cfg = build_config(o);
    const Frame frame = frames_for(o, cfg, false).front();
    Scenario sc = base_scenario(cfg, frame);
    sc.record_events = events;
    CellResult cell{frame, sc.scheme, cfg.user, cfg.threshold, sc.seed, run(sc), {}};
    const fs::path dir = o.out_dir;
    write_file(dir / "results.csv", format_csv({&cell, 1}));
    if (events) write_file(dir / "events.txt", format_events(cell.report->events));
    SummaryOptions opts;
    opts.color = use_color();
    opts.paper_units = o.units == "paper";
    opts.battery_voltage_v = cfg.profiles.battery_voltage_v;
    std::cout << format_summary(cell, sc, opts);
    return kExitOk;
}

int cmd_sweep(const CommonOptions& o) {
    RunConfig cfg = build_config(o);
    const auto frames = frames_for(o, cfg, true);
    for (const Frame frame : frames) {
        const fs::path dir = frames.size() > 1 ? fs::path(o.out_dir) / std::string(to_string(frame))
                                               : fs::path(o.out_dir);
        // A bad shared setting (say, an unreadable AP log) fails the whole frame.
        const Scenario base = base_scenario(cfg, frame);
        const auto schemes = cfg.sweep.schemes.empty() ? default_grid_schemes(frame) : cfg.sweep.schemes;
        std::vector<CellResult> cells;
        std::vector<Scenario> scenarios;
        for (const auto scheme : schemes) {
            for (const auto user : cfg.sweep.users) {
                for (const auto b : cfg.sweep.thresholds) {
                    for (const auto seed : cfg.sweep.seeds) {
                        cells.push_back({frame, scheme, user, b, seed, std::nullopt, {}});
                        scenarios.push_back(grid_scenario(base, cfg, scheme, user, b, seed));
                    }
                }
            }
        }
        const auto results = sweep(scenarios, cfg.sweep.parallel);
        std::size_t failed = 0;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            cells[i].report = results[i].report;
            cells[i].error = results[i].error;
            failed += results[i].report ? 0 : 1;
        }
        write_file(dir / "results.csv", format_csv(cells));
        for (const auto user : cfg.sweep.users) {
            write_file(dir / ("fig8_" + std::string(to_string(user)) + ".dat"),
                       format_fig8(cells, user, cfg.thresholds));
        }
        const auto grid = grid_cells(cells);
        try {
            write_file(dir / "fig9.dat", format_fig9(efficiency_ratio(grid)));
        } catch (const MissingCell& e) {
            write_file(dir / "fig9.dat", "# no ratio: " + std::string(e.what()) + '\n');
            std::cerr << "warning: fig9.dat left empty: " << e.what() << '\n';
        }
        std::cerr << to_string(frame) << ": " << cells.size() << " cells (" << failed
                  << " failed) -> " << (dir / "results.csv").string() << '\n';
    }
    return kExitOk;
}

struct GenfieldOptions {
    std::uint64_t seed = 1;
    std::size_t count = 40;
    double width = 2000.0;
    double height = 340.0;
    double range = 100.0;
    std::string frame = "indoor";
    double anchor_lat = 30.0;
    double anchor_lon = 120.0;
    std::string out;
};

int cmd_genfield(const GenfieldOptions& o) {
    const auto frame = parse_frame(o.frame);
    if (!frame) throw ConfigError("--frame: expected outdoor or indoor, got '" + o.frame + "'");
    FieldSpec spec{*frame, o.count, o.width, o.height, o.range, o.anchor_lat, o.anchor_lon};
    spec.validate();
    const ApLog log = generate_field(o.seed, spec);
    if (o.out.empty()) {
        std::cout << format_log(log);
    } else {
        if (fs::path(o.out).has_parent_path()) fs::create_directories(fs::path(o.out).parent_path());
        save_log(log, o.out);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Location-assisted Wi-Fi switching energy simulator"};
    app.require_subcommand(1);

    CommonOptions run_opts;
    bool events = false;
    auto* run_cmd = app.add_subcommand("run", "Simulate one scenario");
    add_common(*run_cmd, run_opts, false);
    run_cmd->add_flag("--events", events, "Also write the scheme event trace to events.txt");

    CommonOptions sweep_opts;
    auto* sweep_cmd = app.add_subcommand("sweep", "Simulate a scheme x user x threshold x seed grid");
    add_common(*sweep_cmd, sweep_opts, true);

    GenfieldOptions gen;
    auto* gen_cmd = app.add_subcommand("genfield", "Write a random access-point log");
    gen_cmd->add_option("--seed", gen.seed, "Field seed");
    gen_cmd->add_option("--count", gen.count, "Number of access points");
    gen_cmd->add_option("--width", gen.width, "Rectangle width (m)");
    gen_cmd->add_option("--height", gen.height, "Rectangle height (m)");
    gen_cmd->add_option("--range", gen.range, "Coverage range (m)");
    gen_cmd->add_option("--frame", gen.frame, "outdoor or indoor");
    gen_cmd->add_option("--anchor-lat", gen.anchor_lat, "Outdoor anchor latitude (deg)");
    gen_cmd->add_option("--anchor-lon", gen.anchor_lon, "Outdoor anchor longitude (deg)");
    gen_cmd->add_option("--out", gen.out, "Output file (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(run_opts, events);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_opts);
        return cmd_genfield(gen);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const FrameMismatch& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}
