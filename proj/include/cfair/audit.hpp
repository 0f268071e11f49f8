#pragma once

#include <optional>
#include <string>

#include "cfair/complexity.hpp"
#include "cfair/fairness.hpp"

namespace cfair {

/// One audited dataset: the CMD profile plus the fairness report, with
/// scenario metadata when the dataset came from the synthetic catalog.
struct AuditRecord {
  std::string dataset_id;
  std::string scenario_id;      // empty when unknown
  std::string parameter_name;   // empty when unknown
  std::optional<double> parameter_value;
  std::optional<uint64_t> seed;
  ComplexityProfile profile;
  FairnessReport fairness;
};

}  // namespace cfair
