#include <benchmark/benchmark.h>

#include "softarm/actuation.hpp"
#include "softarm/control.hpp"
#include "softarm/dynamics.hpp"
#include "softarm/kinematics.hpp"
#include "softarm/workspace.hpp"

namespace {

using namespace softarm;

RobotModel bench_model() {
    RobotModel m;
    m.segment_lengths = {0.04, 0.04};
    m.segment_masses = {0.06, 0.04};
    m.lumped_masses_per_segment = 5;
    m.shaft_mass = 0.30;
    m.piston_area = 5e-4;
    m.pam_count = 4;
    m.lever_count = 2;
    m.lever_ratio = 2.5;
    m.pam_area = 5e-5;
    m.stroke_max = 0.08;
    m.chamber_moment_arm = 0.012;
    m.chamber_gain = 1e-4;
    m.stiffness_per_segment = 0.1;
    m.damping_per_segment = 5e-4;
    m.pressure_limit = 2e5;
    m.bend_limit = 1.5707963267948966;
    m.gravity = Eigen::Vector3d(0, 0, -9.81);
    return m;
}

HysteresisModel bench_hysteresis() {
    HysteresisModel h;
    h.relax_curve = PressureCurve::affine(0.0, 2e4, 0.08, 1.2e5);
    h.contract_curve = PressureCurve::affine(0.0, 4e4, 0.08, 1.4e5);
    return h;
}

Configuration bench_configuration() {
    Configuration q = Configuration::zero(2);
    q.prismatic_ext = 0.03;
    q.segments[0] = Eigen::Vector2d(0.4, -0.2);
    q.segments[1] = Eigen::Vector2d(-0.3, 0.5);
    return q;
}

ConfigurationRates bench_rates() {
    ConfigurationRates qd = ConfigurationRates::zero(2);
    qd.prismatic_rate = 0.01;
    qd.segment_rates[0] = Eigen::Vector2d(0.5, 0.2);
    qd.segment_rates[1] = Eigen::Vector2d(-0.3, 0.4);
    return qd;
}

void BM_segment_transform(benchmark::State& state) {
    double phi = 0.3;
    for (auto _ : state) {
        const Pose pose = segment_transform(phi, -0.5 * phi, 0.04);
        benchmark::DoNotOptimize(pose.position);
    }
}
BENCHMARK(BM_segment_transform);

void BM_forward_kinematics(benchmark::State& state) {
    const RobotModel model = bench_model();
    const Configuration q = bench_configuration();
    for (auto _ : state) {
        const auto poses = forward_kinematics(model, q);
        benchmark::DoNotOptimize(poses.back().position);
    }
}
BENCHMARK(BM_forward_kinematics);

void BM_tip_jacobian(benchmark::State& state) {
    const RobotModel model = bench_model();
    const Configuration q = bench_configuration();
    for (auto _ : state) {
        const Eigen::Matrix3Xd jac = tip_jacobian(model, q);
        benchmark::DoNotOptimize(jac);
    }
}
BENCHMARK(BM_tip_jacobian);

void BM_inertia_matrix(benchmark::State& state) {
    const RobotModel model = bench_model();
    const Configuration q = bench_configuration();
    for (auto _ : state) {
        const Eigen::MatrixXd b = inertia_matrix(model, q);
        benchmark::DoNotOptimize(b);
    }
}
BENCHMARK(BM_inertia_matrix);

void BM_assemble_terms(benchmark::State& state) {
    const RobotModel model = bench_model();
    const Configuration q = bench_configuration();
    const ConfigurationRates qd = bench_rates();
    for (auto _ : state) {
        const DynamicsTerms terms = assemble_terms(model, q, qd);
        benchmark::DoNotOptimize(terms.coriolis);
    }
}
BENCHMARK(BM_assemble_terms);

void BM_plant_step(benchmark::State& state) {
    const RobotModel model = bench_model();
    const HysteresisModel h = bench_hysteresis();
    SimState sim;
    sim.q = bench_configuration();
    sim.qd = bench_rates();
    PressureCommand cmd;
    cmd.chambers.assign(6, 3e4);
    cmd.pam = 8e4;
    const auto force = [&](const SimState& s) {
        return generalized_force(model, h, s.q, s.qd, cmd);
    };
    for (auto _ : state) {
        const StepResult result = step_with_force(model, sim, force, 1e-3);
        benchmark::DoNotOptimize(result.state.q.prismatic_ext);
    }
}
BENCHMARK(BM_plant_step);

void BM_control_step(benchmark::State& state) {
    const RobotModel model = bench_model();
    const HysteresisModel h = bench_hysteresis();
    const ControllerGains gains;
    SimState sim;
    sim.q = bench_configuration();
    sim.qd = bench_rates();
    TaskReference ref;
    ref.position = Eigen::Vector3d(0.02, 0.01, 0.09);
    for (auto _ : state) {
        const ControlResult result = control_step(model, h, gains, ref, sim);
        benchmark::DoNotOptimize(result.command.pam);
    }
}
BENCHMARK(BM_control_step);

void BM_workspace_sampling(benchmark::State& state) {
    const RobotModel model = bench_model();
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        const WorkspaceCloud cloud = sample_workspace(model, n, 7, true, 1);
        benchmark::DoNotOptimize(cloud.points.back());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_workspace_sampling)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
