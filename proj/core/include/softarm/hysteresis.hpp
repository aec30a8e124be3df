#pragma once

#include <string>
#include <vector>

namespace softarm {

/// Piecewise-linear extension -> pressure table. Extensions must be strictly
/// increasing; queries clamp to the table ends.
struct PressureCurve {
    std::vector<double> extension;  // m
    std::vector<double> pressure;   // Pa

    double operator()(double ext) const;
    static PressureCurve affine(double ext_lo, double p_lo, double ext_hi, double p_hi);
    /// CSV with columns `extension_m, pressure_pa` (header optional).
    static PressureCurve load_csv(const std::string& path);
};

/// Static pressure-extension relationship of the muscles, measured separately
/// for contraction and relaxation, with the velocity thresholds that resolve
/// which branch applies.
struct HysteresisModel {
    enum class Blend {
        clip,     // piecewise-linear in velocity through the midpoint value
        literal,  // p_m(q) * (1 + qd/(v_relax - v_contract)), clamped
    };

    PressureCurve relax_curve;     // p_{s,r}(q)
    PressureCurve contract_curve;  // p_{s,c}(q), >= relax pointwise
    double v_threshold_relax = -0.005;    // m/s, < 0
    double v_threshold_contract = 0.005;  // m/s, > 0
    Blend blend = Blend::clip;

    double relax_pressure(double ext) const { return relax_curve(ext); }
    double contract_pressure(double ext) const { return contract_curve(ext); }
    double mid_pressure(double ext) const {
        return 0.5 * (relax_curve(ext) + contract_curve(ext));
    }

    /// Throws config_error if the tables are unusable or do not cover
    /// [0, stroke_max].
    void validate(double stroke_max) const;
};

/// Velocity-resolved static pressure: the relaxation curve below the relax
/// threshold, the contraction curve above the contract threshold, and a
/// continuous interpolation in between that passes through the midpoint
/// pressure at zero velocity. The result is always clamped to
/// [p_relax(q), p_contract(q)]; the extension is clamped to [0, stroke_max]
/// implicitly by the table ends.
double static_pressure(const HysteresisModel& h, double ext, double ext_rate);

}  // namespace softarm
