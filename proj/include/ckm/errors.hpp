#ifndef CKM_ERRORS_HPP
#define CKM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ckm {

// Demand exceeds the total capacity of the available facilities.
class InfeasibleError : public std::runtime_error {
public:
    InfeasibleError(const std::string& what, long long shortfall)
        : std::runtime_error(what), shortfall_(shortfall) {}

    // How many clients cannot be served (demand minus capacity).
    long long shortfall() const noexcept { return shortfall_; }

private:
    long long shortfall_;
};

// An exhaustive solver was asked to run beyond its size guard.
class RefusedScaleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed instance/config/assignment file.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ckm

#endif  // CKM_ERRORS_HPP
