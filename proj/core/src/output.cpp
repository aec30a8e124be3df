#include "softarm/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace softarm {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const RunLog& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_results: cannot open " + path);

    const int n = log.rows.empty() ? 0 : static_cast<int>(log.rows.front().q.size());
    const int chambers =
        log.rows.empty() ? 0 : static_cast<int>(log.rows.front().command.chambers.size());
    out << "t_s";
    for (int i = 0; i < n; ++i) out << ",q_" << i;
    for (int i = 0; i < n; ++i) out << ",qd_" << i;
    out << ",tip_x_m,tip_y_m,tip_z_m,ref_x_m,ref_y_m,ref_z_m";
    for (int i = 0; i < chambers; ++i) out << ",p_ch_" << i << "_pa";
    out << ",p_pam_pa,p_piston_pa,sat_flag,limit_flag\n";

    for (const RunRecord& r : log.rows) {
        out << fmt(r.t);
        for (int i = 0; i < n; ++i) out << ',' << fmt(r.q[i]);
        for (int i = 0; i < n; ++i) out << ',' << fmt(r.qd[i]);
        for (int i = 0; i < 3; ++i) out << ',' << fmt(r.tip[i]);
        for (int i = 0; i < 3; ++i) out << ',' << fmt(r.ref[i]);
        for (int i = 0; i < chambers; ++i) out << ',' << fmt(r.command.chambers[i]);
        out << ',' << fmt(r.command.pam) << ',' << fmt(r.command.piston) << ','
            << (r.saturated ? 1 : 0) << ',' << (r.limit_event ? 1 : 0) << '\n';
    }
    if (!out) throw std::runtime_error("emit_results: write failed for " + path);
}

void write_summary(const RunLog& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_results: cannot open " + path);
    out << "scenario = " << log.scenario_name << "\n";
    out << "seed = " << log.seed << "\n";
    out << "rows = " << log.rows.size() << "\n";
    out << "control_dt_s = " << fmt(log.control_dt) << "\n";
    out << "duration_s = " << fmt(log.rows.empty() ? 0.0 : log.rows.back().t) << "\n";
    out << "mean_tip_error_m = " << fmt(log.summary.mean_tip_error) << "\n";
    out << "rms_tip_error_m = " << fmt(log.summary.rms_tip_error) << "\n";
    out << "max_pressure_pa = " << fmt(log.summary.max_pressure) << "\n";
    out << "saturation_count = " << log.summary.saturation_count << "\n";
    out << "limit_event_count = " << log.summary.limit_event_count << "\n";
    for (const GripperEvent& e : log.gripper_events)
        out << "gripper_event = t:" << fmt(e.t) << " state:" << (e.closed ? "closed" : "open")
            << "\n";
    if (!out) throw std::runtime_error("emit_results: write failed for " + path);
}

struct Extent {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void grow(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double map(double v, double out_lo, double out_hi) const {
        const double span = hi - lo;
        if (!(span > 0.0)) return 0.5 * (out_lo + out_hi);
        return out_lo + (v - lo) / span * (out_hi - out_lo);
    }
};

std::string polyline(const std::vector<std::pair<double, double>>& pts, const char* color,
                     bool dashed) {
    std::ostringstream s;
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\"";
    if (dashed) s << " stroke-dasharray=\"5,4\"";
    s << " points=\"";
    for (const auto& [x, y] : pts) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", x, y);
        s << buf;
    }
    s << "\"/>\n";
    return s.str();
}

// Axonometric projection for the 3-D path plot.
std::pair<double, double> project(const Eigen::Vector3d& p) {
    const double c = std::cos(std::numbers::pi / 6.0), s = std::sin(std::numbers::pi / 6.0);
    return {(p.x() - p.y()) * c, -(p.z() + (p.x() + p.y()) * s)};
}

void write_traj3d(const RunLog& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_results: cannot open " + path);

    Extent ex, ey;
    std::vector<std::pair<double, double>> tip, ref;
    for (const RunRecord& r : log.rows) {
        tip.push_back(project(r.tip));
        ref.push_back(project(r.ref));
        ex.grow(tip.back().first);
        ex.grow(ref.back().first);
        ey.grow(tip.back().second);
        ey.grow(ref.back().second);
    }
    const double w = 640, hgt = 480, margin = 50;
    const auto place = [&](std::pair<double, double> p) {
        return std::pair<double, double>{ex.map(p.first, margin, w - margin),
                                         ey.map(p.second, margin, hgt - margin)};
    };
    for (auto& p : tip) p = place(p);
    for (auto& p : ref) p = place(p);

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << hgt
        << "\" viewBox=\"0 0 " << w << " " << hgt << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"20\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">tip path ("
        << log.scenario_name << ")</text>\n"
        << "<text x=\"20\" y=\"42\" font-family=\"sans-serif\" font-size=\"11\" "
           "fill=\"#444\">solid: simulated tip &#8212; dashed: reference</text>\n";
    out << polyline(ref, "#d62728", true);
    out << polyline(tip, "#1f77b4", false);
    out << "</svg>\n";
    if (!out) throw std::runtime_error("emit_results: write failed for " + path);
}

void write_timeseries(const RunLog& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_results: cannot open " + path);

    const double w = 720, hgt = 520, margin = 50;
    const double panel_h = (hgt - 3 * margin) / 2.0;
    Extent et;
    et.grow(0.0);
    et.grow(log.rows.empty() ? 1.0 : log.rows.back().t);

    Extent epos;
    Extent epr;
    for (const RunRecord& r : log.rows) {
        for (int i = 0; i < 3; ++i) {
            epos.grow(r.tip[i]);
            epos.grow(r.ref[i]);
        }
        epr.grow(r.command.pam);
        epr.grow(r.command.piston);
    }

    const auto series = [&](auto getter, double top, const Extent& ev) {
        std::vector<std::pair<double, double>> pts;
        pts.reserve(log.rows.size());
        for (const RunRecord& r : log.rows)
            pts.emplace_back(et.map(r.t, margin, w - margin),
                             ev.map(getter(r), top + panel_h, top));
        return pts;
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << hgt
        << "\" viewBox=\"0 0 " << w << " " << hgt << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    const char* colors[3] = {"#1f77b4", "#2ca02c", "#9467bd"};
    const char* labels[3] = {"x", "y", "z"};
    const double top1 = margin;
    out << "<text x=\"20\" y=\"" << top1 - 12
        << "\" font-family=\"sans-serif\" font-size=\"12\">tip position [m] (solid) vs "
           "reference (dashed)</text>\n";
    for (int i = 0; i < 3; ++i) {
        out << polyline(series([i](const RunRecord& r) { return r.ref[i]; }, top1, epos),
                        colors[i], true);
        out << polyline(series([i](const RunRecord& r) { return r.tip[i]; }, top1, epos),
                        colors[i], false);
        out << "<text x=\"" << w - margin + 8 << "\" y=\"" << top1 + 14 * (i + 1)
            << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << colors[i] << "\">"
            << labels[i] << "</text>\n";
    }

    const double top2 = 2 * margin + panel_h;
    out << "<text x=\"20\" y=\"" << top2 - 12
        << "\" font-family=\"sans-serif\" font-size=\"12\">prismatic pressures [Pa] "
           "(muscle solid, piston dashed)</text>\n";
    out << polyline(series([](const RunRecord& r) { return r.command.pam; }, top2, epr),
                    "#ff7f0e", false);
    out << polyline(series([](const RunRecord& r) { return r.command.piston; }, top2, epr),
                    "#8c564b", true);
    out << "<text x=\"20\" y=\"" << hgt - 16
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#444\">t in [0, " << et.hi
        << "] s</text>\n";
    out << "</svg>\n";
    if (!out) throw std::runtime_error("emit_results: write failed for " + path);
}

}  // namespace

void emit_results(const RunLog& log, const std::string& outdir) {
    std::error_code ec;
    std::filesystem::create_directories(outdir, ec);
    if (ec) throw std::runtime_error("emit_results: cannot create " + outdir);
    write_csv(log, outdir + "/run.csv");
    write_summary(log, outdir + "/summary.txt");
    write_traj3d(log, outdir + "/traj3d.svg");
    write_timeseries(log, outdir + "/timeseries.svg");
}

}  // namespace softarm
