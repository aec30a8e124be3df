#include "softarm/config_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "softarm/errors.hpp"

namespace softarm {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// section -> key -> value; consumed keys are erased so leftovers can be
// reported as unknown.
using SectionMap = std::map<std::string, std::map<std::string, std::string>>;

SectionMap parse_sections(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open " + path);
    SectionMap sections;
    std::string line, section;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("config: malformed section header at line " +
                                   std::to_string(line_no));
            section = trim(line.substr(1, line.size() - 2));
            sections[section];
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config: expected key = value at line " + std::to_string(line_no));
        if (section.empty())
            throw config_error("config: key outside any section at line " +
                               std::to_string(line_no));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!sections[section].emplace(key, value).second)
            throw config_error("config: duplicate key " + section + "." + key);
    }
    return sections;
}

class SectionReader {
public:
    SectionReader(SectionMap& sections, std::string name)
        : name_(std::move(name)), keys_(sections[name_]) {}

    bool has(const std::string& key) const { return keys_.count(key) > 0; }

    std::string take_string(const std::string& key) {
        const auto it = keys_.find(key);
        if (it == keys_.end()) throw config_error(name_ + "." + key + ": missing required key");
        std::string v = it->second;
        keys_.erase(it);
        return v;
    }

    double take_double(const std::string& key) { return to_double(key, take_string(key)); }

    double take_double(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        return take_double(key);
    }

    int take_int(const std::string& key, int fallback) {
        if (!has(key)) return fallback;
        const double v = take_double(key);
        if (v != std::floor(v)) throw config_error(name_ + "." + key + ": expected an integer");
        return static_cast<int>(v);
    }

    std::vector<double> take_list(const std::string& key) {
        std::string raw = take_string(key);
        std::replace(raw.begin(), raw.end(), ',', ' ');
        std::istringstream in(raw);
        std::vector<double> values;
        std::string tok;
        while (in >> tok) values.push_back(to_double(key, tok));
        if (values.empty()) throw config_error(name_ + "." + key + ": expected numbers");
        return values;
    }

    Eigen::Vector3d take_vec3(const std::string& key, const Eigen::Vector3d& fallback) {
        if (!has(key)) return fallback;
        const std::vector<double> v = take_list(key);
        if (v.size() != 3) throw config_error(name_ + "." + key + ": expected three numbers");
        return Eigen::Vector3d(v[0], v[1], v[2]);
    }

private:
    double to_double(const std::string& key, const std::string& raw) const {
        try {
            size_t used = 0;
            const double v = std::stod(raw, &used);
            if (used != raw.size() || !std::isfinite(v)) throw std::invalid_argument(raw);
            return v;
        } catch (const std::exception&) {
            throw config_error(name_ + "." + key + ": invalid number '" + raw + "'");
        }
    }

    std::string name_;
    std::map<std::string, std::string>& keys_;
};

void reject_leftovers(const SectionMap& sections) {
    static const char* known_sections[] = {"robot", "hysteresis", "controller", "limits"};
    for (const auto& [section, keys] : sections) {
        bool known = false;
        for (const char* s : known_sections) known = known || section == s;
        if (!known) throw config_error("config: unknown section [" + section + "]");
        if (!keys.empty())
            throw config_error("config: unknown key " + section + "." + keys.begin()->first);
    }
}

std::string resolve(const std::string& config_path, const std::string& rel) {
    const std::filesystem::path p(rel);
    if (p.is_absolute()) return rel;
    return (std::filesystem::path(config_path).parent_path() / p).string();
}

}  // namespace

LoadedConfig load_config(const std::string& path) {
    SectionMap sections = parse_sections(path);
    LoadedConfig cfg;

    SectionReader robot(sections, "robot");
    cfg.model.segment_lengths = robot.take_list("segment_lengths_m");
    cfg.model.segment_masses = robot.take_list("segment_masses_kg");
    cfg.model.lumped_masses_per_segment = robot.take_int("lumped_masses_per_segment", 5);
    cfg.model.shaft_mass = robot.take_double("shaft_mass_kg");
    cfg.model.payload_mass = robot.take_double("payload_mass_kg", 0.0);
    cfg.model.piston_area = robot.take_double("piston_area_m2");
    cfg.model.pam_count = robot.take_int("pam_count", 4);
    cfg.model.lever_count = robot.take_int("lever_count", 2);
    cfg.model.lever_ratio = robot.take_double("lever_ratio", 2.5);
    cfg.model.pam_area = robot.take_double("pam_area_m2");
    cfg.model.stroke_max = robot.take_double("stroke_max_m");
    cfg.model.chamber_moment_arm = robot.take_double("chamber_moment_arm_m");
    cfg.model.chamber_gain = robot.take_double("chamber_gain_n_per_pa");
    cfg.model.stiffness_per_segment = robot.take_double("stiffness_per_segment_nm_per_rad");
    cfg.model.damping_per_segment = robot.take_double("damping_per_segment_nms_per_rad");
    cfg.model.gravity = robot.take_vec3("gravity_mps2", Eigen::Vector3d(0.0, 0.0, -9.81));

    SectionReader limits(sections, "limits");
    cfg.model.pressure_limit = limits.take_double("pressure_max_pa", 2.0e5);
    cfg.model.bend_limit = limits.take_double("bend_limit_rad", 1.5707963267948966);

    SectionReader hyst(sections, "hysteresis");
    if (hyst.has("relax_curve_csv") || hyst.has("contract_curve_csv")) {
        cfg.hysteresis.relax_curve =
            PressureCurve::load_csv(resolve(path, hyst.take_string("relax_curve_csv")));
        cfg.hysteresis.contract_curve =
            PressureCurve::load_csv(resolve(path, hyst.take_string("contract_curve_csv")));
    } else {
        const double p0 = hyst.take_double("relax_pressure_at_zero_pa", 2.0e4);
        const double p1 = hyst.take_double("relax_pressure_at_full_pa", 1.2e5);
        const double offset = hyst.take_double("contract_offset_pa", 2.0e4);
        cfg.hysteresis.relax_curve = PressureCurve::affine(0.0, p0, cfg.model.stroke_max, p1);
        cfg.hysteresis.contract_curve =
            PressureCurve::affine(0.0, p0 + offset, cfg.model.stroke_max, p1 + offset);
    }
    cfg.hysteresis.v_threshold_relax = hyst.take_double("v_threshold_relax_mps", -0.005);
    cfg.hysteresis.v_threshold_contract = hyst.take_double("v_threshold_contract_mps", 0.005);
    if (hyst.has("blend")) {
        const std::string blend = hyst.take_string("blend");
        if (blend == "clip")
            cfg.hysteresis.blend = HysteresisModel::Blend::clip;
        else if (blend == "literal")
            cfg.hysteresis.blend = HysteresisModel::Blend::literal;
        else
            throw config_error("hysteresis.blend: expected 'clip' or 'literal'");
    }

    SectionReader controller(sections, "controller");
    cfg.gains.kp = controller.take_double("kp", 100.0);
    cfg.gains.kd = controller.take_double("kd", 20.0);
    cfg.gains.accel_saturation = controller.take_double("accel_saturation_mps2", 5.0);
    cfg.gains.pinv_damping = controller.take_double("pinv_damping", 1e-3);
    cfg.gains.control_rate_hz = controller.take_double("control_rate_hz", 100.0);
    cfg.gains.plant_rate_hz = controller.take_double("plant_rate_hz", 1000.0);

    reject_leftovers(sections);

    cfg.model.validate();
    cfg.hysteresis.validate(cfg.model.stroke_max);
    if (!(cfg.gains.kp > 0.0)) throw config_error("controller.kp: must be positive");
    if (!(cfg.gains.kd > 0.0)) throw config_error("controller.kd: must be positive");
    if (!(cfg.gains.accel_saturation > 0.0))
        throw config_error("controller.accel_saturation_mps2: must be positive");
    if (!(cfg.gains.pinv_damping >= 0.0))
        throw config_error("controller.pinv_damping: must be non-negative");
    if (!(cfg.gains.control_rate_hz > 0.0) || !(cfg.gains.plant_rate_hz >= cfg.gains.control_rate_hz))
        throw config_error("controller.control_rate_hz: need plant_rate_hz >= control_rate_hz > 0");
    return cfg;
}

}  // namespace softarm
