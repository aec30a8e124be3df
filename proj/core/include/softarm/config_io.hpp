#pragma once

#include <string>

#include "softarm/control.hpp"
#include "softarm/hysteresis.hpp"
#include "softarm/types.hpp"

namespace softarm {

struct LoadedConfig {
    RobotModel model;
    HysteresisModel hysteresis;
    ControllerGains gains;
};

/// Loads a sectioned key-value config file ([robot], [hysteresis],
/// [controller], [limits]; units carried in the key names). Unknown keys or
/// sections are rejected; missing or invalid fields raise config_error
/// naming the field. Hysteresis curves come either from the affine defaults
/// or from CSV files referenced relative to the config file.
LoadedConfig load_config(const std::string& path);

}  // namespace softarm
