#include "softarm/hysteresis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "softarm/errors.hpp"

namespace softarm {

double PressureCurve::operator()(double ext) const {
    if (extension.empty()) throw config_error("pressure curve: empty table");
    if (ext <= extension.front()) return pressure.front();
    if (ext >= extension.back()) return pressure.back();
    const auto it = std::upper_bound(extension.begin(), extension.end(), ext);
    const size_t i = static_cast<size_t>(it - extension.begin());
    const double x0 = extension[i - 1], x1 = extension[i];
    const double w = (ext - x0) / (x1 - x0);
    return pressure[i - 1] + w * (pressure[i] - pressure[i - 1]);
}

PressureCurve PressureCurve::affine(double ext_lo, double p_lo, double ext_hi, double p_hi) {
    PressureCurve c;
    c.extension = {ext_lo, ext_hi};
    c.pressure = {p_lo, p_hi};
    return c;
}

PressureCurve PressureCurve::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("hysteresis curve: cannot open " + path);
    PressureCurve c;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double ext, p;
        if (!(row >> ext >> p)) {
            if (line_no == 1) continue;  // header row
            throw config_error("hysteresis curve: bad row " + std::to_string(line_no) + " in " +
                               path);
        }
        c.extension.push_back(ext);
        c.pressure.push_back(p);
    }
    if (c.extension.size() < 2)
        throw config_error("hysteresis curve: need at least two rows in " + path);
    for (size_t i = 1; i < c.extension.size(); ++i)
        if (!(c.extension[i] > c.extension[i - 1]))
            throw config_error("hysteresis curve: extension must be strictly increasing in " +
                               path);
    return c;
}

void HysteresisModel::validate(double stroke_max) const {
    const auto check_curve = [&](const PressureCurve& c, const char* name) {
        if (c.extension.size() < 2 || c.extension.size() != c.pressure.size())
            throw config_error(std::string(name) + ": table needs >= 2 matching rows");
        for (size_t i = 1; i < c.extension.size(); ++i) {
            if (!(c.extension[i] > c.extension[i - 1]))
                throw config_error(std::string(name) + ": extension not strictly increasing");
            if (c.pressure[i] < c.pressure[i - 1])
                throw config_error(std::string(name) + ": pressure must be non-decreasing");
        }
        for (double v : c.pressure)
            if (!std::isfinite(v) || v < 0.0)
                throw config_error(std::string(name) + ": pressures must be finite and >= 0");
        if (c.extension.front() > 0.0 || c.extension.back() < stroke_max)
            throw config_error(std::string(name) + ": table must cover [0, stroke_max]");
    };
    check_curve(relax_curve, "relax_curve");
    check_curve(contract_curve, "contract_curve");

    if (!(v_threshold_relax < 0.0) || !(v_threshold_contract > 0.0))
        throw config_error("velocity thresholds: need v_relax < 0 < v_contract");

    // Contraction must sit above relaxation; piecewise-linear curves only
    // need checking at the union of their knots.
    std::vector<double> knots = relax_curve.extension;
    knots.insert(knots.end(), contract_curve.extension.begin(), contract_curve.extension.end());
    for (double x : knots)
        if (contract_curve(x) < relax_curve(x) - 1e-12)
            throw config_error("hysteresis curves: contraction curve dips below relaxation");
}

double static_pressure(const HysteresisModel& h, double ext, double ext_rate) {
    const double p_relax = h.relax_pressure(ext);
    const double p_contract = h.contract_pressure(ext);
    const double vr = h.v_threshold_relax;
    const double vc = h.v_threshold_contract;

    double p;
    if (ext_rate <= vr) {
        p = p_relax;
    } else if (ext_rate >= vc) {
        p = p_contract;
    } else if (h.blend == HysteresisModel::Blend::literal) {
        const double p_mid = 0.5 * (p_relax + p_contract);
        p = p_mid * (1.0 + ext_rate / (vr - vc));
    } else {
        const double p_mid = 0.5 * (p_relax + p_contract);
        if (ext_rate < 0.0) {
            const double w = (ext_rate - vr) / (0.0 - vr);
            p = p_relax + w * (p_mid - p_relax);
        } else {
            const double w = ext_rate / vc;
            p = p_mid + w * (p_contract - p_mid);
        }
    }
    return std::clamp(p, p_relax, p_contract);
}

}  // namespace softarm
