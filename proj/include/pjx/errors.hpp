#pragma once

#include <stdexcept>
#include <string>

namespace pjx {

// Numerical failure (tolerance not met, non-finite integrand, ...), as opposed
// to caller mistakes which use std::domain_error / std::invalid_argument.
class numerics_error : public std::runtime_error {
public:
    explicit numerics_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Integral known to diverge for the requested parameters.
class divergent_integral : public numerics_error {
public:
    explicit divergent_integral(const std::string& msg) : numerics_error(msg) {}
};

// Parameter combination outside the coverage of the asymptotic estimates.
class unsupported_regime : public std::runtime_error {
public:
    explicit unsupported_regime(const std::string& msg) : std::runtime_error(msg) {}
};

// Local power-law fit of profile metadata failed.
class fit_error : public std::runtime_error {
public:
    explicit fit_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace pjx
