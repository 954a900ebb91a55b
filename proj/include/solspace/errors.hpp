#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace solspace {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed problem file, unknown field, invalid ADG, bad bounds.
class ProblemError : public Error {
 public:
  using Error::Error;
};

/// A well-formed request that cannot be satisfied by the model
/// (infeasible seed, no feasible baseline, non-nested trade-off...).
class DomainFailure : public Error {
 public:
  using Error::Error;
};

class InfeasibleSeedError : public DomainFailure {
 public:
  InfeasibleSeedError(std::vector<std::string> violated);
  const std::vector<std::string>& violated() const { return violated_; }

 private:
  std::vector<std::string> violated_;
};

class TradeoffError : public DomainFailure {
 public:
  using DomainFailure::DomainFailure;
};

/// Missing or corrupt file inside a run directory.
class RunLoadError : public Error {
 public:
  using Error::Error;
};

}  // namespace solspace
