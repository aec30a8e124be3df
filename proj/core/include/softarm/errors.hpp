#pragma once

#include <stdexcept>

namespace softarm {

// Error taxonomy; the CLI maps these onto its exit codes
// (2 config, 3 validation, 4 simulation divergence).

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class validation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class simulation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace softarm
