#pragma once

#include <stdexcept>
#include <string>

namespace lexdiv {

// Invalid parameters or an unusable run configuration. The CLI maps this
// to exit code 2.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed, missing, or insufficient input data. The CLI maps this to
// exit code 3.
struct data_error : std::runtime_error {
    explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace lexdiv
