#include "cfair/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "cfair/rng.hpp"

namespace cfair {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim_cell(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  size_t b = 0;
  while (b < s.size() && (s[b] == ' ' || s[b] == '\t')) ++b;
  s = s.substr(b);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + s.size() && std::isfinite(out);
}

}  // namespace

void TabularDataset::validate() const {
  if (rows() < 2) throw DataError("dataset needs at least 2 rows");
  if (cols() < 1) throw DataError("dataset needs at least 1 feature");
  if (static_cast<long>(feature_names.size()) != cols())
    throw DataError("feature name count does not match feature columns");
  if (static_cast<long>(target.size()) != rows() || static_cast<long>(group.size()) != rows())
    throw DataError("target/protected length does not match row count");
  if (!features.allFinite()) throw DataError("non-finite feature value");
  for (int v : target)
    if (v != 0 && v != 1) throw DataError("non-binary target");
  for (int v : group)
    if (v != 0 && v != 1) throw DataError("non-binary protected attribute");
}

Eigen::MatrixXd GroupView::restrict(const Eigen::MatrixXd& features) const {
  Eigen::MatrixXd out(static_cast<long>(rows.size()), features.cols());
  for (size_t i = 0; i < rows.size(); ++i) out.row(static_cast<long>(i)) = features.row(rows[i]);
  return out;
}

std::vector<int> GroupView::restrict_labels(const std::vector<int>& labels) const {
  std::vector<int> out;
  out.reserve(rows.size());
  for (int r : rows) out.push_back(labels[r]);
  return out;
}

TabularDataset load_csv(const std::string& path, const CsvMapping& mapping) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);

  std::string line;
  // Skip comment lines preceding the header.
  do {
    if (!std::getline(in, line)) throw DataError("empty file: " + path);
  } while (!line.empty() && line[0] == '#');
  if (line.empty()) throw DataError("empty file: " + path);

  std::vector<std::string> header = split_line(line);
  for (auto& h : header) h = trim_cell(h);

  auto find_col = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DataError("missing column '" + name + "' in " + path);
    return static_cast<int>(it - header.begin());
  };
  const int target_col = find_col(mapping.target_column);
  const int protected_col = find_col(mapping.protected_column);
  if (target_col == protected_col)
    throw DataError("target and protected columns must differ");

  std::vector<int> feature_cols;
  std::vector<std::string> feature_names;
  for (int c = 0; c < static_cast<int>(header.size()); ++c) {
    if (c == target_col || c == protected_col) continue;
    feature_cols.push_back(c);
    feature_names.push_back(header[c]);
  }
  if (feature_cols.empty()) throw DataError("no feature columns in " + path);

  std::vector<std::vector<double>> values;
  std::vector<std::string> target_raw, protected_raw;
  long row_idx = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    if (line[0] == '#') continue;
    std::vector<std::string> cells = split_line(line);
    if (cells.size() != header.size())
      throw DataError("row " + std::to_string(row_idx + 1) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(header.size()) + " in " + path);
    for (auto& c : cells) c = trim_cell(c);
    std::vector<double> row(feature_cols.size());
    for (size_t j = 0; j < feature_cols.size(); ++j) {
      const std::string& cell = cells[feature_cols[j]];
      if (cell.empty())
        throw DataError("missing value at row " + std::to_string(row_idx + 1) +
                        " column '" + feature_names[j] + "'");
      if (!parse_number(cell, row[j]))
        throw DataError("non-numeric feature cell '" + cell + "' at row " +
                        std::to_string(row_idx + 1) + " column '" + feature_names[j] + "'");
    }
    values.push_back(std::move(row));
    target_raw.push_back(cells[target_col]);
    protected_raw.push_back(cells[protected_col]);
    ++row_idx;
  }
  if (values.empty()) throw DataError("empty file: " + path);

  auto map_binary = [&](const std::vector<std::string>& raw, const std::string& positive,
                        const char* what) {
    std::set<std::string> distinct(raw.begin(), raw.end());
    if (distinct.size() > 2) throw DataError(std::string("non-binary ") + what);
    std::vector<int> mapped(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) mapped[i] = raw[i] == positive ? 1 : 0;
    return mapped;
  };

  TabularDataset ds;
  ds.features.resize(row_idx, static_cast<long>(feature_cols.size()));
  for (long i = 0; i < row_idx; ++i)
    for (size_t j = 0; j < feature_cols.size(); ++j) ds.features(i, static_cast<long>(j)) = values[i][j];
  ds.feature_names = std::move(feature_names);
  ds.target = map_binary(target_raw, mapping.favorable_value, "target");
  ds.group = map_binary(protected_raw, mapping.privileged_value, "protected attribute");
  ds.validate();
  return ds;
}

void save_csv(const TabularDataset& ds, const std::string& path,
              const std::string& target_name, const std::string& protected_name,
              const std::string& comment) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw DataError("cannot write file: " + tmp);
    if (!comment.empty()) out << "# " << comment << "\n";
    for (const auto& n : ds.feature_names) out << n << ",";
    out << protected_name << "," << target_name << "\n";
    char buf[40];
    for (long i = 0; i < ds.rows(); ++i) {
      for (long j = 0; j < ds.cols(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g", ds.features(i, j));
        out << buf << ",";
      }
      out << ds.group[i] << "," << ds.target[i] << "\n";
    }
    if (!out) throw DataError("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw DataError("cannot rename into place: " + path);
}

std::pair<GroupView, GroupView> split_groups(const TabularDataset& ds) {
  GroupView priv{Membership::Privileged, {}, false};
  GroupView unpriv{Membership::Unprivileged, {}, false};
  for (long i = 0; i < ds.rows(); ++i)
    (ds.group[i] == 1 ? priv : unpriv).rows.push_back(static_cast<int>(i));
  priv.degenerate = priv.rows.empty();
  unpriv.degenerate = unpriv.rows.empty();
  return {priv, unpriv};
}

Eigen::MatrixXd Scaler::apply(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (long j = 0; j < x.cols(); ++j) {
    if (constant[static_cast<size_t>(j)])
      out.col(j).setZero();
    else
      out.col(j) = (x.col(j).array() - mean(j)) / stddev(j);
  }
  return out;
}

Scaler fit_scaler(const Eigen::MatrixXd& x) {
  const long n = x.rows(), d = x.cols();
  Scaler s;
  s.mean.resize(d);
  s.stddev.resize(d);
  s.constant.assign(static_cast<size_t>(d), 0);
  for (long j = 0; j < d; ++j) {
    const double m = x.col(j).mean();
    const double var = (x.col(j).array() - m).square().sum() / static_cast<double>(n);
    const double sd = std::sqrt(var);
    s.mean(j) = m;
    s.stddev(j) = sd;
    if (sd == 0.0) {
      s.constant[static_cast<size_t>(j)] = 1;
      s.stddev(j) = 1.0;  // unused, keeps apply() division safe
    }
  }
  return s;
}

std::pair<TabularDataset, Scaler> standardize(const TabularDataset& ds) {
  Scaler s = fit_scaler(ds.features);
  TabularDataset out = ds;
  out.features = s.apply(ds.features);
  return {std::move(out), std::move(s)};
}

FoldAssignment stratified_folds(const TabularDataset& ds, int k, uint64_t seed) {
  if (k < 1) throw DataError("fold count must be >= 1");
  std::vector<int> by_class[2];
  for (long i = 0; i < ds.rows(); ++i) by_class[ds.target[i]].push_back(static_cast<int>(i));
  for (int c = 0; c < 2; ++c)
    if (static_cast<int>(by_class[c].size()) < k)
      throw DataError("class " + std::to_string(c) + " has fewer than k=" +
                      std::to_string(k) + " members");

  FoldAssignment fa;
  fa.k = k;
  fa.fold_of.assign(static_cast<size_t>(ds.rows()), 0);
  for (int c = 0; c < 2; ++c) {
    auto& idx = by_class[c];
    Rng rng(mix_seed(seed, "stratified_folds", static_cast<uint64_t>(c)));
    // Fisher-Yates with the library RNG, then round-robin over folds.
    for (size_t i = idx.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(rng.uniform_below(i));
      std::swap(idx[i - 1], idx[j]);
    }
    for (size_t i = 0; i < idx.size(); ++i)
      fa.fold_of[static_cast<size_t>(idx[i])] = static_cast<int>(i % static_cast<size_t>(k));
  }
  return fa;
}

}  // namespace cfair
