#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cfair {

/// Raised for malformed input files, missing columns, non-binary columns
/// and other data-level problems. The CLI maps it to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable numeric dataset for a binary classification audit.
///
/// `target` uses 1 for the favorable outcome, `group` uses 1 for the
/// privileged group. The protected attribute is carried separately and is
/// never one of the feature columns.
struct TabularDataset {
  Eigen::MatrixXd features;              // n x d
  std::vector<std::string> feature_names;
  std::vector<int> target;               // 0/1 per row
  std::vector<int> group;                // protected attribute, 0/1 per row

  long rows() const { return features.rows(); }
  long cols() const { return features.cols(); }

  /// Validates the type invariants; throws DataError on violation.
  void validate() const;
};

enum class Membership { Privileged, Unprivileged };

/// Index view of one protected group.
struct GroupView {
  Membership membership;
  std::vector<int> rows;
  bool degenerate = false;  // set when the view is empty

  /// Feature matrix restricted to this view.
  Eigen::MatrixXd restrict(const Eigen::MatrixXd& features) const;
  std::vector<int> restrict_labels(const std::vector<int>& labels) const;
};

/// Per-row fold ids in [0, k).
struct FoldAssignment {
  int k = 0;
  std::vector<int> fold_of;
};

/// Per-feature standardization statistics. Constant columns are flagged and
/// map to all-zero output.
struct Scaler {
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;               // population convention (divide by n)
  std::vector<uint8_t> constant;

  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
};

struct CsvMapping {
  std::string target_column;
  std::string favorable_value;
  std::string protected_column;
  std::string privileged_value;
};

/// Loads a UTF-8, comma-separated, headered CSV. Lines starting with '#'
/// before the header are skipped. Target and protected columns must hold at
/// most two distinct raw values; every remaining column must parse as a
/// finite number. Missing values are rejected.
TabularDataset load_csv(const std::string& path, const CsvMapping& mapping);

/// Writes the dataset in the exact format load_csv reads back, with feature
/// cells printed so the reload is bit-identical. An optional comment line
/// (e.g. "config_hash=...") is emitted before the header.
void save_csv(const TabularDataset& ds, const std::string& path,
              const std::string& target_name = "Y",
              const std::string& protected_name = "A",
              const std::string& comment = "");

/// Splits rows on the protected attribute; the two views partition [0, n).
std::pair<GroupView, GroupView> split_groups(const TabularDataset& ds);

Scaler fit_scaler(const Eigen::MatrixXd& x);

/// Returns the dataset with every non-constant feature at mean 0 / stddev 1
/// together with the statistics used.
std::pair<TabularDataset, Scaler> standardize(const TabularDataset& ds);

/// Seeded stratified fold assignment; per-fold class counts differ from the
/// exact proportional share by at most one row. Throws DataError when a
/// class has fewer than k members.
FoldAssignment stratified_folds(const TabularDataset& ds, int k, uint64_t seed);

}  // namespace cfair
