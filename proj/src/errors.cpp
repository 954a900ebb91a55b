#include "solspace/errors.hpp"

namespace solspace {

namespace {

std::string join(const std::vector<std::string>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? ", " : "") + ids[i];
  return out;
}

}  // namespace

InfeasibleSeedError::InfeasibleSeedError(std::vector<std::string> violated)
    : DomainFailure("seed design violates requirements: " + join(violated)),
      violated_(std::move(violated)) {}

}  // namespace solspace
