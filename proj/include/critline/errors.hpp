#pragma once

#include <stdexcept>
#include <string>

namespace critline {

// Numerical failures discovered while evaluating: poles, exhausted scans,
// coarse contours. CLI maps these to exit code 2 (4 for audit findings).
class evaluation_error : public std::runtime_error {
public:
    explicit evaluation_error(const std::string& what) : std::runtime_error(what) {}
};

class pole_error : public evaluation_error {
public:
    explicit pole_error(const std::string& what) : evaluation_error(what) {}
};

class scan_exhausted_error : public evaluation_error {
public:
    explicit scan_exhausted_error(const std::string& what) : evaluation_error(what) {}
};

class boundary_too_coarse_error : public evaluation_error {
public:
    explicit boundary_too_coarse_error(const std::string& what) : evaluation_error(what) {}
};

class denominator_zero_error : public evaluation_error {
public:
    explicit denominator_zero_error(const std::string& what) : evaluation_error(what) {}
};

// Caller handed in arguments outside an operation's contract.
class precondition_error : public std::invalid_argument {
public:
    explicit precondition_error(const std::string& what) : std::invalid_argument(what) {}
};

class insufficient_zeros_error : public precondition_error {
public:
    explicit insufficient_zeros_error(const std::string& what) : precondition_error(what) {}
};

class not_primitive_error : public precondition_error {
public:
    explicit not_primitive_error(const std::string& what) : precondition_error(what) {}
};

class convergence_region_error : public precondition_error {
public:
    explicit convergence_region_error(const std::string& what) : precondition_error(what) {}
};

class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace critline
