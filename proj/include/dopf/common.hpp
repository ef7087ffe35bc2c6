#pragma once

#include <stdexcept>
#include <string>

namespace dopf {

/// Thrown when an input structure fails validation (bad topology, bad
/// configuration file, inconsistent dimensions). Message names the offending
/// element.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a numerical routine cannot produce a meaningful result
/// (singular system, impossible operating point, failed fit).
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr double kPi = 3.14159265358979323846;

} // namespace dopf
