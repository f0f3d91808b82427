#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace specdet {

enum class ErrorCode {
  kIndexOutOfRange,
  kSelfLoop,
  kEmptyGraph,
  kDegenerateLabeling,
  kConnectivityFailure,
  kConvergenceFailure,
  kDegenerateInput,
  kDisconnectedGraph,
  kLengthMismatch,
  kInvalidParams,
  kNoAdmissibleSplit,
  kInsufficientSpan,
  kParseError,
  kIoError,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Thrown by the eigensolvers; carries the iteration count and the best
// residual reached before giving up.
class ConvergenceError : public Error {
 public:
  ConvergenceError(int iterations, double best_residual)
      : Error(ErrorCode::kConvergenceFailure,
              "no convergence after " + std::to_string(iterations) +
                  " matrix-vector products (best residual " + std::to_string(best_residual) + ")"),
        iterations_(iterations),
        best_residual_(best_residual) {}

  int iterations() const noexcept { return iterations_; }
  double best_residual() const noexcept { return best_residual_; }

 private:
  int iterations_;
  double best_residual_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kSelfLoop: return "SelfLoop";
    case ErrorCode::kEmptyGraph: return "EmptyGraph";
    case ErrorCode::kDegenerateLabeling: return "DegenerateLabeling";
    case ErrorCode::kConnectivityFailure: return "ConnectivityFailure";
    case ErrorCode::kConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kDisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kNoAdmissibleSplit: return "NoAdmissibleSplit";
    case ErrorCode::kInsufficientSpan: return "InsufficientSpan";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace specdet
