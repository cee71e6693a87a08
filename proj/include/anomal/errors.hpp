#pragma once

#include <stdexcept>
#include <string>

namespace anomal {

/// Thrown when an iterative numerical procedure fails to converge or a
/// matching/scan step cannot be completed at the requested tolerance.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace anomal
