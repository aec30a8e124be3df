#pragma once

#include <string>

#include "softarm/runner.hpp"

namespace softarm {

/// Writes run.csv, summary.txt, traj3d.svg and timeseries.svg into outdir
/// (created if missing). run.csv has one row per control tick with columns
///   t_s, q_0..q_{n-1}, qd_0..qd_{n-1}, tip_x_m, tip_y_m, tip_z_m,
///   ref_x_m, ref_y_m, ref_z_m, p_ch_0_pa.., p_pam_pa, p_piston_pa,
///   sat_flag, limit_flag
/// and is byte-identical across re-emissions of the same log.
void emit_results(const RunLog& log, const std::string& outdir);

}  // namespace softarm
