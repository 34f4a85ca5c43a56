#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace scissor {

/// Raised when a quadrature fails its refinement check. Carries the
/// estimate, the refined estimate and the tolerance that was exceeded.
class numerical_error : public std::runtime_error {
public:
    numerical_error(const std::string& what, double coarse, double fine, double tolerance)
        : std::runtime_error(what + " (coarse=" + std::to_string(coarse) +
                             ", fine=" + std::to_string(fine) +
                             ", tolerance=" + std::to_string(tolerance) + ")"),
          coarse_(coarse), fine_(fine), tolerance_(tolerance) {}

    double coarse() const noexcept { return coarse_; }
    double fine() const noexcept { return fine_; }
    double tolerance() const noexcept { return tolerance_; }

private:
    double coarse_;
    double fine_;
    double tolerance_;
};

/// Bad configuration or CLI usage.
class config_error : public std::invalid_argument {
public:
    explicit config_error(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace scissor
