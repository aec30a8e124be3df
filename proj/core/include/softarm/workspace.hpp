#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "softarm/types.hpp"

namespace softarm {

/// Tip positions reached by uniformly sampled configurations. Per-point
/// randomness derives from (seed, index) alone, so clouds are bit-identical
/// regardless of thread count, and any draw can be replayed later (the
/// sampling ranges are recorded for that purpose).
struct WorkspaceCloud {
    std::vector<Eigen::Vector3d> points;
    std::uint64_t seed = 0;
    int sample_count = 0;
    bool prismatic_enabled = true;
    // sampling ranges, recorded so fit_shell can replay the draws
    int segment_count = 0;
    double bend_limit = 0.0;
    double stroke_max = 0.0;
};

/// Hemispherical-shell approximation of a cloud, measured from the arm base
/// frame (per-sample prismatic translation removed). volume adds a
/// cylindrical sweep term for the prismatic travel.
struct ShellFit {
    double r_inner = 0.0;
    double r_outer = 0.0;
    double z_min = 0.0;
    double volume = 0.0;
    double sweep = 0.0;  // m, vertical travel covered by the cloud
};

/// The exact configuration drawn for a given (seed, index) pair; bend
/// components are uniform in [-bend_limit, bend_limit] per axis and the
/// prismatic extension uniform in [0, stroke_max] (fixed 0 when disabled).
/// The bend draws do not depend on prismatic_enabled.
Configuration sample_configuration(const RobotModel& model, std::uint64_t seed, int index,
                                   bool prismatic_enabled);

/// thread_count 0 picks the hardware concurrency.
WorkspaceCloud sample_workspace(const RobotModel& model, int n, std::uint64_t seed,
                                bool prismatic_enabled, int thread_count = 0);

struct ShellFitOptions {
    double inner_percentile = 0.01;  // radial percentile taken as r_inner
    double outer_percentile = 0.99;  // radial percentile taken as r_outer
};

/// Percentile-based shell fit over the z >= 0 hemisphere (measured in the
/// arm base frame). Throws validation_error for degenerate clouds or fewer
/// than 100 points.
ShellFit fit_shell(const WorkspaceCloud& cloud, const ShellFitOptions& options = {});

/// Volume ratio with/without the prismatic joint.
double compare_volumes(const ShellFit& with_prismatic, const ShellFit& without_prismatic);

void write_cloud_csv(const WorkspaceCloud& cloud, const std::string& path);
void write_fit_report(const std::string& path, const ShellFit& with_prismatic,
                      const ShellFit& without_prismatic, double ratio);
void write_fit_report(const std::string& path, const ShellFit& fit);

}  // namespace softarm
