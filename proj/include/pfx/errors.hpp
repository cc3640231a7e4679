#pragma once

#include <stdexcept>
#include <string>

namespace pfx {

// Mirrors pfx_status in pfx.h; values are part of the C ABI.
enum class ErrorCode : int {
    Ok = 0,
    InvalidArgument = 1,
    NonConvergence = 2,
    TruncationBreach = 3,
    StepSizeRejected = 4,
    InvalidState = 5,
    ValidityBreach = 6,
    NoPeaks = 7,
    Config = 8,
    Io = 9,
    Internal = 10,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(ErrorCode::InvalidArgument, what) {}
};

// Adaptive quadrature could not meet its tolerance; the best estimate is kept.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, double best_re, double best_im, double bound)
        : Error(ErrorCode::NonConvergence, what), best_re_(best_re), best_im_(best_im),
          error_bound_(bound) {}
    double best_real() const noexcept { return best_re_; }
    double best_imag() const noexcept { return best_im_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double best_re_;
    double best_im_;
    double error_bound_;
};

class TruncationBreach : public Error {
public:
    TruncationBreach(const std::string& what, double top_sector_population)
        : Error(ErrorCode::TruncationBreach, what), population_(top_sector_population) {}
    double population() const noexcept { return population_; }

private:
    double population_;
};

class StepSizeRejected : public Error {
public:
    StepSizeRejected(const std::string& what, double norm_drift)
        : Error(ErrorCode::StepSizeRejected, what), drift_(norm_drift) {}
    double norm_drift() const noexcept { return drift_; }

private:
    double drift_;
};

class InvalidState : public Error {
public:
    explicit InvalidState(const std::string& what) : Error(ErrorCode::InvalidState, what) {}
};

class ValidityBreach : public Error {
public:
    ValidityBreach(const std::string& what, double margin)
        : Error(ErrorCode::ValidityBreach, what), margin_(margin) {}
    double margin() const noexcept { return margin_; }

private:
    double margin_;
};

class NoPeaks : public Error {
public:
    explicit NoPeaks(const std::string& what) : Error(ErrorCode::NoPeaks, what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorCode::Config, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorCode::Io, what) {}
};

}  // namespace pfx
