#pragma once

#include <stdexcept>
#include <string>

namespace fronttrack {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct OutOfDomain : Error {
    explicit OutOfDomain(const std::string& msg) : Error(msg) {}
};

struct NotHyperbolic : Error {
    explicit NotHyperbolic(const std::string& msg) : Error(msg) {}
};

struct NotPositive : Error {
    explicit NotPositive(const std::string& msg) : Error(msg) {}
};

struct DegenerateEigenbasis : Error {
    explicit DegenerateEigenbasis(const std::string& msg) : Error(msg) {}
};

struct NoConvergence : Error {
    explicit NoConvergence(const std::string& msg) : Error(msg) {}
};

struct NoEvent : Error {
    explicit NoEvent(const std::string& msg) : Error(msg) {}
};

struct CannotSeparate : Error {
    explicit CannotSeparate(const std::string& msg) : Error(msg) {}
};

struct DataTooLarge : Error {
    explicit DataTooLarge(const std::string& msg) : Error(msg) {}
};

struct NoFeasibleParams : Error {
    double rho1_reported;
    NoFeasibleParams(const std::string& msg, double rho1)
        : Error(msg), rho1_reported(rho1) {}
};

struct ViolationFound : Error {
    explicit ViolationFound(const std::string& msg) : Error(msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

struct ParseError : ConfigError {
    int line;
    ParseError(const std::string& msg, int line_no)
        : ConfigError("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
};

struct ValidationError : ConfigError {
    std::string field;
    ValidationError(const std::string& field_name, const std::string& msg)
        : ConfigError(field_name + ": " + msg), field(field_name) {}
};

struct CFLViolation : Error {
    explicit CFLViolation(const std::string& msg) : Error(msg) {}
};

struct InconclusiveNearBoundary : Error {
    double root_re, root_im;
    InconclusiveNearBoundary(const std::string& msg, double re, double im)
        : Error(msg), root_re(re), root_im(im) {}
};

}  // namespace fronttrack
