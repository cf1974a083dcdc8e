#pragma once
#include <stdexcept>
#include <string>
#include <vector>

namespace radke {

/// Base error for all precondition violations and flagged failures.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Newton divergence; carries the residual trace of the failed run.
class SolveFailure : public Error {
public:
  SolveFailure(const std::string& what, std::vector<double> trace)
      : Error(what), residual_trace(std::move(trace)) {}
  std::vector<double> residual_trace;
};

} // namespace radke
