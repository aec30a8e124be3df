#include "softarm/workspace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <thread>

#include "softarm/errors.hpp"
#include "softarm/kinematics.hpp"

namespace softarm {

namespace {

// splitmix64; fixed here so sampled clouds are reproducible across platforms
// and independent of the standard library's distributions.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct SampleRng {
    std::uint64_t state;
    SampleRng(std::uint64_t seed, std::uint64_t index)
        : state(mix64(seed ^ mix64(index * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL))) {}
    double uniform() {  // in [0, 1)
        state = mix64(state);
        return static_cast<double>(state >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }
};

Configuration draw_configuration(int segment_count, double bend_limit, double stroke_max,
                                 std::uint64_t seed, int index, bool prismatic_enabled) {
    SampleRng rng(seed, static_cast<std::uint64_t>(index));
    Configuration q;
    q.segments.resize(segment_count);
    for (int s = 0; s < segment_count; ++s) {
        q.segments[s].x() = rng.uniform(-bend_limit, bend_limit);
        q.segments[s].y() = rng.uniform(-bend_limit, bend_limit);
    }
    // Drawn last and unconditionally so bend draws match across modes.
    const double pris = rng.uniform(0.0, stroke_max);
    q.prismatic_ext = prismatic_enabled ? pris : 0.0;
    return q;
}

double percentile(std::vector<double>& values, double p) {
    const auto k = static_cast<std::ptrdiff_t>(
        std::llround(p * static_cast<double>(values.size() - 1)));
    std::nth_element(values.begin(), values.begin() + k, values.end());
    return values[k];
}

void write_key_value(std::ofstream& out, const ShellFit& fit, const char* prefix) {
    out << prefix << "r_inner_m = " << fit.r_inner << "\n";
    out << prefix << "r_outer_m = " << fit.r_outer << "\n";
    out << prefix << "z_min_m = " << fit.z_min << "\n";
    out << prefix << "sweep_m = " << fit.sweep << "\n";
    out << prefix << "volume_m3 = " << fit.volume << "\n";
}

}  // namespace

Configuration sample_configuration(const RobotModel& model, std::uint64_t seed, int index,
                                   bool prismatic_enabled) {
    return draw_configuration(model.segment_count(), model.bend_limit, model.stroke_max, seed,
                              index, prismatic_enabled);
}

WorkspaceCloud sample_workspace(const RobotModel& model, int n, std::uint64_t seed,
                                bool prismatic_enabled, int thread_count) {
    if (n < 1) throw validation_error("sample_workspace: need at least one sample");
    WorkspaceCloud cloud;
    cloud.seed = seed;
    cloud.sample_count = n;
    cloud.prismatic_enabled = prismatic_enabled;
    cloud.segment_count = model.segment_count();
    cloud.bend_limit = model.bend_limit;
    cloud.stroke_max = model.stroke_max;
    cloud.points.resize(n);

    if (thread_count <= 0)
        thread_count = static_cast<int>(std::thread::hardware_concurrency());
    thread_count = std::clamp(thread_count, 1, 64);

    const auto worker = [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            const Configuration q = sample_configuration(model, seed, i, prismatic_enabled);
            const KinematicChain chain = build_chain(model, q);
            cloud.points[i] = chain.tip();
        }
    };
    if (thread_count == 1 || n < 2 * thread_count) {
        worker(0, n);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (n + thread_count - 1) / thread_count;
        for (int t = 0; t < thread_count; ++t) {
            const int begin = t * chunk;
            const int end = std::min(n, begin + chunk);
            if (begin < end) pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    return cloud;
}

ShellFit fit_shell(const WorkspaceCloud& cloud, const ShellFitOptions& options) {
    if (!(options.inner_percentile >= 0.0) || !(options.outer_percentile <= 1.0) ||
        !(options.inner_percentile < options.outer_percentile))
        throw validation_error("fit_shell: need 0 <= inner < outer <= 1 percentiles");
    if (cloud.sample_count < 100 ||
        cloud.points.size() != static_cast<size_t>(cloud.sample_count))
        throw validation_error("fit_shell: need at least 100 points");

    // Work in the arm base frame: remove each sample's prismatic translation
    // (replayed from the recorded seed) so the shell describes the arm alone;
    // the translation re-enters through the cylindrical sweep term.
    std::vector<double> radii;
    std::vector<double> heights;
    std::vector<double> travel;
    radii.reserve(cloud.points.size());
    heights.reserve(cloud.points.size());
    double spread = 0.0;
    for (int i = 0; i < cloud.sample_count; ++i) {
        Eigen::Vector3d p = cloud.points[i];
        if (cloud.prismatic_enabled) {
            const Configuration q = draw_configuration(cloud.segment_count, cloud.bend_limit,
                                                       cloud.stroke_max, cloud.seed, i, true);
            p.z() -= q.prismatic_ext;
            travel.push_back(q.prismatic_ext);
        }
        spread = std::max(spread, (p - cloud.points[0]).norm());
        if (p.z() >= 0.0) {  // hemispherical model covers the upper half only
            radii.push_back(p.norm());
            heights.push_back(p.z());
        }
    }
    if (spread < 1e-12) throw validation_error("fit_shell: degenerate cloud (all points coincide)");
    if (radii.size() < 100)
        throw validation_error("fit_shell: too few points above the base plane");

    ShellFit fit;
    fit.r_outer = percentile(radii, options.outer_percentile);
    fit.r_inner = percentile(radii, options.inner_percentile);
    fit.z_min = percentile(heights, options.inner_percentile);
    if (!travel.empty())
        fit.sweep = percentile(travel, options.outer_percentile) -
                    percentile(travel, options.inner_percentile);
    fit.volume = (2.0 * std::numbers::pi / 3.0) *
                     (std::pow(fit.r_outer, 3) - std::pow(fit.r_inner, 3)) +
                 fit.sweep * std::numbers::pi *
                     (fit.r_outer * fit.r_outer - fit.r_inner * fit.r_inner);
    return fit;
}

double compare_volumes(const ShellFit& with_prismatic, const ShellFit& without_prismatic) {
    if (!(without_prismatic.volume > 0.0))
        throw std::domain_error("compare_volumes: baseline volume must be positive");
    return with_prismatic.volume / without_prismatic.volume;
}

void write_cloud_csv(const WorkspaceCloud& cloud, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_cloud_csv: cannot open " + path);
    out << "x_m,y_m,z_m\n";
    char row[128];
    for (const auto& p : cloud.points) {
        std::snprintf(row, sizeof(row), "%.17g,%.17g,%.17g\n", p.x(), p.y(), p.z());
        out << row;
    }
    if (!out) throw std::runtime_error("write_cloud_csv: write failed for " + path);
}

void write_fit_report(const std::string& path, const ShellFit& with_prismatic,
                      const ShellFit& without_prismatic, double ratio) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_fit_report: cannot open " + path);
    out.precision(12);
    write_key_value(out, with_prismatic, "with_prismatic.");
    write_key_value(out, without_prismatic, "without_prismatic.");
    out << "volume_ratio = " << ratio << "\n";
    if (!out) throw std::runtime_error("write_fit_report: write failed for " + path);
}

void write_fit_report(const std::string& path, const ShellFit& fit) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_fit_report: cannot open " + path);
    out.precision(12);
    write_key_value(out, fit, "");
    if (!out) throw std::runtime_error("write_fit_report: write failed for " + path);
}

}  // namespace softarm
