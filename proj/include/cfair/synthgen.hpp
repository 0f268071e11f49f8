#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfair/dataset.hpp"

namespace cfair {

/// One draw from the structural causal model. The z_* fields hold the raw
/// noise so that bias transformations can be replayed upstream of Y without
/// re-drawing, which keeps every scenario on a single generation path
/// (parameter zero is then bit-identical to the unbiased baseline).
struct ScmSample {
  int A = 0;  // 1 = privileged
  double z_r = 0.0, z_q = 0.0, z_s = 0.0;
  double u_keep = 0.0;  // retention draw from a dedicated stream
  double R_true = 0.0, R_obs = 0.0;
  double Q_true = 0.0, Q_obs = 0.0;
  int Y = 0;
};

struct ScmConfig {
  double privileged_rate = 0.5;  // P(A = 1)
  double q_on_r = 0.5;           // Q = q_on_r * R + Normal(0, 1)
  double s_noise = 0.5;          // S = R + Q + Normal(0, s_noise)
  double shift_scale = 0.1;      // effect size per unit of bias parameter
  bool condition_above_median = true;  // S1F keeps/undersamples above-median rows
};

struct ScenarioSpec {
  std::string scenario_id;     // S1A, S1B, S1C, S1D, S1E, S1F, S2A, S3A, S4A
  std::string parameter_name;  // none, l_m, l_o, p_u, l_m_y, l_h_y, l_y, l_h_q
  double parameter_value = 0.0;
  bool conditional_on_r = false;  // l_r flag (S1F)
  int variant_index = 1;          // 1-based position in the scenario's value grid
  int variant_count = 1;
  long n = 5000;
  uint64_t seed = 0;

  /// Dataset label: scenario id plus variant index for multi-variant
  /// scenarios (S1B3), bare scenario id otherwise (S1A, S1C).
  std::string label() const;
};

struct GenerationResult {
  TabularDataset dataset;
  long total_rows = 0;
  long kept_rows = 0;
  long total_privileged = 0;
  long kept_privileged = 0;
};

/// Unbiased SCM draw: A ~ Bernoulli(privileged_rate), R ~ N(0,1),
/// Q ~ N(q_on_r * R, 1), S = R + Q + N(0, s_noise), Y = 1 iff S > 0.
std::vector<ScmSample> sample_base(long n, uint64_t seed, const ScmConfig& cfg = {});

/// Applies the scenario transformation to a base draw and assembles the
/// dataset (features R, Q — Q only for S1C — plus protected A and target Y).
GenerationResult apply_bias(const std::vector<ScmSample>& samples, const ScenarioSpec& spec,
                            const ScmConfig& cfg = {});

/// sample_base + apply_bias with the spec's own seed.
GenerationResult generate_dataset(const ScenarioSpec& spec, const ScmConfig& cfg = {});

/// The 73-dataset catalog grid: S1A, S1B x12, S1C, S1D x7, S1E x12, S1F x4,
/// S2A x12, S3A x12, S4A x12. Every spec carries the base seed: the catalog is
/// 73 bias transformations of one shared sample (common random numbers).
std::vector<ScenarioSpec> enumerate_catalog(long n = 5000, uint64_t base_seed = 42);

extern const std::vector<double> kShiftParameterGrid;        // S1B/S1E/S2A/S3A/S4A
extern const std::vector<double> kUndersampleParameterGrid;  // S1D
extern const std::vector<double> kConditionalParameterGrid;  // S1F

}  // namespace cfair
