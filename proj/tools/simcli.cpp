// Scenario-running CLI: workspace sampling and closed-loop tracking runs.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "softarm/config_io.hpp"
#include "softarm/errors.hpp"
#include "softarm/output.hpp"
#include "softarm/runner.hpp"
#include "softarm/trajectory.hpp"
#include "softarm/workspace.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitValidation = 3;
constexpr int kExitDivergence = 4;

struct CommonOpts {
    std::string config = "configs/default.ini";
    std::string outdir = "out";
    std::uint64_t seed = 12345;
    bool no_prismatic = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config, "Config file path")->capture_default_str();
    cmd->add_option("--out", opts.outdir, "Output directory")->capture_default_str();
    cmd->add_option("--seed", opts.seed, "Random seed")->capture_default_str();
    cmd->add_flag("--no-prismatic", opts.no_prismatic, "Lock the prismatic joint at zero");
}

Eigen::Vector3d parse_point(const std::string& raw, const char* flag) {
    std::string s = raw;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream in(s);
    Eigen::Vector3d p;
    if (!(in >> p.x() >> p.y() >> p.z()))
        throw softarm::validation_error(std::string(flag) + ": expected x,y,z");
    return p;
}

std::vector<softarm::Waypoint> load_waypoints(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw softarm::validation_error("waypoints: cannot open " + path);
    std::vector<softarm::Waypoint> wps;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        softarm::Waypoint wp;
        int grip = 0;
        if (!(row >> wp.position.x() >> wp.position.y() >> wp.position.z() >>
              wp.move_duration >> wp.dwell >> grip)) {
            if (line_no == 1) continue;  // header
            throw softarm::validation_error("waypoints: bad row " + std::to_string(line_no));
        }
        wp.gripper_closed = grip != 0;
        wps.push_back(wp);
    }
    if (wps.empty()) throw softarm::validation_error("waypoints: no rows in " + path);
    return wps;
}

void run_and_emit(const softarm::LoadedConfig& cfg, const softarm::Scenario& scenario,
                  const std::string& outdir) {
    const softarm::RunLog log =
        softarm::run_scenario(cfg.model, cfg.hysteresis, cfg.gains, scenario);
    softarm::emit_results(log, outdir);
    std::printf("scenario %s: %zu ticks, mean tip error %.4f mm, rms %.4f mm\n",
                log.scenario_name.c_str(), log.rows.size(),
                1e3 * log.summary.mean_tip_error, 1e3 * log.summary.rms_tip_error);
    std::printf("results written to %s\n", outdir.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Soft continuum arm with a muscle/piston prismatic base: "
                 "simulation, control and workspace analysis"};
    app.require_subcommand(1);

    CommonOpts ws_opts, track_opts, pick_opts, hold_opts;

    // workspace
    auto* ws = app.add_subcommand("workspace", "Monte-Carlo workspace sampling and shell fit");
    add_common(ws, ws_opts);
    int samples = 200000;
    int threads = 0;
    softarm::ShellFitOptions fit_options;
    ws->add_option("--samples", samples, "Sample count per cloud")->capture_default_str();
    ws->add_option("--threads", threads, "Sampling threads (0 = hardware)")
        ->capture_default_str();
    ws->add_option("--fit-inner-pct", fit_options.inner_percentile,
                   "Radial percentile used as r_inner")->capture_default_str();
    ws->add_option("--fit-outer-pct", fit_options.outer_percentile,
                   "Radial percentile used as r_outer")->capture_default_str();

    // track
    auto* track = app.add_subcommand("track", "Closed-loop trajectory tracking");
    add_common(track, track_opts);
    std::string shape = "helix";
    double duration = 10.0, radius = 0.05, pitch = 0.04, incline_deg = 20.0, rate_hz = 0.1,
           ramp = 2.0;
    std::string from_str, to_str;
    track->add_option("--shape", shape, "helix | circle | line")->capture_default_str();
    track->add_option("--duration", duration, "Run duration [s]")->capture_default_str();
    track->add_option("--radius", radius, "Circle/helix radius [m]")->capture_default_str();
    track->add_option("--pitch", pitch, "Helix pitch per revolution [m]")->capture_default_str();
    track->add_option("--incline-deg", incline_deg, "Circle incline [deg]")
        ->capture_default_str();
    track->add_option("--rate-hz", rate_hz, "Revolutions per second")->capture_default_str();
    track->add_option("--ramp", ramp, "Angular spin-up time [s]")->capture_default_str();
    track->add_option("--from", from_str, "Line start x,y,z [m]");
    track->add_option("--to", to_str, "Line end x,y,z [m]");

    // pick
    auto* pick = app.add_subcommand("pick", "Scripted pick-and-place waypoint run");
    add_common(pick, pick_opts);
    std::string waypoint_file;
    pick->add_option("--waypoints", waypoint_file,
                     "CSV x_m,y_m,z_m,move_s,dwell_s,gripper overriding the built-in script");

    // hold
    auto* hold = app.add_subcommand("hold", "Hold a task-space point");
    add_common(hold, hold_opts);
    double hold_duration = 5.0;
    std::string at_str;
    hold->add_option("--duration", hold_duration, "Run duration [s]")->capture_default_str();
    hold->add_option("--at", at_str, "Hold point x,y,z [m] (default: straight-pose tip)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ws->parsed()) {
            const auto cfg = softarm::load_config(ws_opts.config);
            std::error_code ec;
            std::filesystem::create_directories(ws_opts.outdir, ec);
            if (ec) throw std::runtime_error("cannot create " + ws_opts.outdir);

            const auto cloud_off =
                softarm::sample_workspace(cfg.model, samples, ws_opts.seed, false, threads);
            const auto fit_off = softarm::fit_shell(cloud_off, fit_options);
            softarm::write_cloud_csv(cloud_off, ws_opts.outdir + "/cloud_without.csv");
            if (ws_opts.no_prismatic) {
                softarm::write_fit_report(ws_opts.outdir + "/workspace_report.txt", fit_off);
                std::printf("workspace (prismatic disabled): r_inner %.4f m, r_outer %.4f m, "
                            "volume %.6e m^3\n",
                            fit_off.r_inner, fit_off.r_outer, fit_off.volume);
            } else {
                const auto cloud_on =
                    softarm::sample_workspace(cfg.model, samples, ws_opts.seed, true, threads);
                const auto fit_on = softarm::fit_shell(cloud_on, fit_options);
                const double ratio = softarm::compare_volumes(fit_on, fit_off);
                softarm::write_cloud_csv(cloud_on, ws_opts.outdir + "/cloud_with.csv");
                softarm::write_fit_report(ws_opts.outdir + "/workspace_report.txt", fit_on,
                                          fit_off, ratio);
                std::printf("workspace volume with prismatic %.6e m^3, without %.6e m^3, "
                            "ratio %.3f\n",
                            fit_on.volume, fit_off.volume, ratio);
            }
            std::printf("results written to %s\n", ws_opts.outdir.c_str());
        } else if (track->parsed()) {
            const auto cfg = softarm::load_config(track_opts.config);
            softarm::Scenario sc;
            if (shape == "helix")
                sc.kind = softarm::ScenarioKind::track_helix;
            else if (shape == "circle")
                sc.kind = softarm::ScenarioKind::track_circle;
            else if (shape == "line")
                sc.kind = softarm::ScenarioKind::track_line;
            else
                throw softarm::validation_error("--shape must be helix, circle or line");
            sc.duration = duration;
            sc.seed = track_opts.seed;
            sc.prismatic_enabled = !track_opts.no_prismatic;
            sc.radius = radius;
            sc.pitch = pitch;
            sc.incline = incline_deg * M_PI / 180.0;
            sc.rate_hz = rate_hz;
            sc.ramp_time = ramp;
            if (!from_str.empty()) sc.line_from = parse_point(from_str, "--from");
            if (!to_str.empty()) sc.line_to = parse_point(to_str, "--to");
            run_and_emit(cfg, sc, track_opts.outdir);
        } else if (pick->parsed()) {
            const auto cfg = softarm::load_config(pick_opts.config);
            softarm::Scenario sc;
            sc.kind = softarm::ScenarioKind::pick_place;
            sc.seed = pick_opts.seed;
            sc.prismatic_enabled = !pick_opts.no_prismatic;
            if (!waypoint_file.empty()) sc.waypoints = load_waypoints(waypoint_file);
            run_and_emit(cfg, sc, pick_opts.outdir);
        } else if (hold->parsed()) {
            const auto cfg = softarm::load_config(hold_opts.config);
            softarm::Scenario sc;
            sc.kind = softarm::ScenarioKind::hold;
            sc.duration = hold_duration;
            sc.seed = hold_opts.seed;
            sc.prismatic_enabled = !hold_opts.no_prismatic;
            if (!at_str.empty()) sc.hold_point = parse_point(at_str, "--at");
            run_and_emit(cfg, sc, hold_opts.outdir);
        }
    } catch (const softarm::config_error& err) {
        std::cerr << "configuration error: " << err.what() << "\n";
        return kExitConfig;
    } catch (const softarm::validation_error& err) {
        std::cerr << "validation error: " << err.what() << "\n";
        return kExitValidation;
    } catch (const softarm::simulation_error& err) {
        std::cerr << "simulation diverged: " << err.what() << "\n";
        return kExitDivergence;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
