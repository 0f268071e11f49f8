#include "cfair/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cfair/linear_model.hpp"
#include "cfair/rng.hpp"

namespace cfair {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct InterpolantDraw {
  Eigen::MatrixXd points;  // one interpolant per original row
  std::vector<int> labels;
};

/// Shared state for computing several metrics on one point set. Rows are
/// held in canonical order (lexicographic by feature values, then label) so
/// that every index-based tie break is independent of input order.
class MetricEngine {
 public:
  MetricEngine(const Eigen::MatrixXd& points, const std::vector<int>& labels,
               const ComplexityConfig& cfg)
      : cfg_(cfg) {
    n_ = points.rows();
    std::vector<Eigen::Index> order(static_cast<size_t>(n_));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      for (Eigen::Index c = 0; c < points.cols(); ++c) {
        if (points(a, c) != points(b, c)) return points(a, c) < points(b, c);
      }
      if (labels[static_cast<size_t>(a)] != labels[static_cast<size_t>(b)])
        return labels[static_cast<size_t>(a)] < labels[static_cast<size_t>(b)];
      return a < b;
    });
    pts_.resize(n_, points.cols());
    labels_.resize(static_cast<size_t>(n_));
    for (Eigen::Index i = 0; i < n_; ++i) {
      pts_.row(i) = points.row(order[static_cast<size_t>(i)]);
      labels_[static_cast<size_t>(i)] = labels[static_cast<size_t>(order[static_cast<size_t>(i)])];
    }
    n0_ = 0;
    for (int y : labels_) n0_ += (y == 0) ? 1 : 0;
    n1_ = static_cast<int>(n_) - n0_;
  }

  std::optional<double> compute(MetricId metric, uint64_t seed) {
    if (n_ < 2) return std::nullopt;
    const bool single_class = (n0_ == 0 || n1_ == 0);
    switch (metric) {
      case MetricId::C1:
        return c1();
      case MetricId::C2:
        return c2();
      case MetricId::Density:
        return density();
      case MetricId::ClsCoef:
        return cls_coef();
      default:
        break;
    }
    if (single_class) return std::nullopt;
    switch (metric) {
      case MetricId::F1v:
        return f1v();
      case MetricId::L1:
        return l1();
      case MetricId::L2:
        return l2();
      case MetricId::L3:
        return l3(seed);
      case MetricId::N1:
        return n1();
      case MetricId::N2:
        return n2();
      case MetricId::N3:
        return n3();
      case MetricId::N4:
        return n4(seed);
      case MetricId::T1:
        return t1();
      case MetricId::LSC:
        return lsc();
      default:
        return std::nullopt;
    }
  }

 private:
  double c1() const {
    const double n = static_cast<double>(n_);
    double entropy = 0.0;
    for (double cnt : {static_cast<double>(n0_), static_cast<double>(n1_)}) {
      if (cnt > 0.0) {
        const double p = cnt / n;
        entropy -= p * std::log2(p);
      }
    }
    return 1.0 - entropy;
  }

  double c2() const {
    if (n0_ == 0 || n1_ == 0) return 1.0;
    const double a = static_cast<double>(n0_);
    const double b = static_cast<double>(n1_);
    const double ir = 0.5 * (a / b + b / a);
    return 1.0 - 1.0 / ir;
  }

  double f1v() const {
    const Eigen::Index d = pts_.cols();
    if (d == 0) return 1.0;
    Eigen::VectorXd mu0 = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd mu1 = Eigen::VectorXd::Zero(d);
    for (Eigen::Index i = 0; i < n_; ++i) {
      if (labels_[static_cast<size_t>(i)] == 0)
        mu0 += pts_.row(i).transpose();
      else
        mu1 += pts_.row(i).transpose();
    }
    mu0 /= static_cast<double>(n0_);
    mu1 /= static_cast<double>(n1_);
    Eigen::MatrixXd w_mat = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 0; i < n_; ++i) {
      const Eigen::VectorXd dev =
          pts_.row(i).transpose() - (labels_[static_cast<size_t>(i)] == 0 ? mu0 : mu1);
      w_mat += dev * dev.transpose();
    }
    // Population covariances weighted by class priors collapse to the total
    // within-class scatter divided by n.
    w_mat /= static_cast<double>(n_);
    const Eigen::VectorXd md = mu0 - mu1;
    const double md2 = md.squaredNorm();
    if (md2 < 1e-24) return 1.0;  // coincident means: no between-class scatter
    Eigen::VectorXd w = w_mat.completeOrthogonalDecomposition().solve(md);
    if (w.squaredNorm() < 1e-24 * md2) w = md;  // W annihilates md; fall back to its direction
    const double wmd = w.dot(md);
    const double between = wmd * wmd;
    const double within = w.dot(w_mat * w);
    const double tiny = 1e-12 * md2 * std::max(1.0, w.squaredNorm());
    if (within <= tiny) return between <= tiny ? 1.0 : 0.0;
    const double df = between / within;
    return 1.0 / (1.0 + df);
  }

  const LinearModel& linear() {
    if (!linear_) linear_ = fit_logistic(pts_, labels_, LogisticConfig{});
    return *linear_;
  }

  double l1() {
    const LinearModel& m = linear();
    const double wnorm = m.weights.norm();
    double total = 0.0;
    int miss = 0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      const double s = m.score(pts_.row(i));
      const int pred = s >= 0.0 ? 1 : 0;
      if (pred != labels_[static_cast<size_t>(i)]) {
        ++miss;
        if (wnorm > 0.0) total += std::abs(s) / wnorm;
      }
    }
    if (miss == 0) return 0.0;
    const double raw = total / static_cast<double>(n_);
    return raw / (1.0 + raw);
  }

  double l2() {
    const LinearModel& m = linear();
    int miss = 0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      const int pred = m.score(pts_.row(i)) >= 0.0 ? 1 : 0;
      if (pred != labels_[static_cast<size_t>(i)]) ++miss;
    }
    return static_cast<double>(miss) / static_cast<double>(n_);
  }

  InterpolantDraw make_interpolants(uint64_t seed) const {
    std::vector<std::vector<Eigen::Index>> by_class(2);
    for (Eigen::Index i = 0; i < n_; ++i)
      by_class[static_cast<size_t>(labels_[static_cast<size_t>(i)])].push_back(i);
    Rng rng(seed);
    InterpolantDraw draw;
    draw.points.resize(n_, pts_.cols());
    draw.labels.resize(static_cast<size_t>(n_));
    std::array<Eigen::Index, 2> cursor = {0, 0};  // rows are label-sorted within ties only,
    for (Eigen::Index i = 0; i < n_; ++i) {
      const int y = labels_[static_cast<size_t>(i)];
      const auto& mates = by_class[static_cast<size_t>(y)];
      // position of i within its class list (rows are scanned in order)
      Eigen::Index pos = cursor[static_cast<size_t>(y)]++;
      Eigen::Index j = i;
      if (mates.size() > 1) {
        const uint64_t r = rng.uniform_below(mates.size() - 1);
        const size_t k = static_cast<size_t>(r) >= static_cast<size_t>(pos) ? static_cast<size_t>(r) + 1
                                                                            : static_cast<size_t>(r);
        j = mates[k];
      }
      const double t = rng.uniform();
      draw.points.row(i) = t * pts_.row(i) + (1.0 - t) * pts_.row(j);
      draw.labels[static_cast<size_t>(i)] = y;
    }
    return draw;
  }

  double l3(uint64_t seed) {
    const LinearModel& m = linear();
    const InterpolantDraw draw = make_interpolants(seed);
    int miss = 0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      const int pred = m.score(draw.points.row(i)) >= 0.0 ? 1 : 0;
      if (pred != draw.labels[static_cast<size_t>(i)]) ++miss;
    }
    return static_cast<double>(miss) / static_cast<double>(n_);
  }

  const Eigen::MatrixXd& distances() {
    if (dist_.size() == 0) {
      dist_.resize(n_, n_);
      for (Eigen::Index i = 0; i < n_; ++i) {
        dist_(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < n_; ++j) {
          const double d = (pts_.row(i) - pts_.row(j)).norm();
          dist_(i, j) = d;
          dist_(j, i) = d;
        }
      }
    }
    return dist_;
  }

  /// Distance from each point to its nearest point of the other class.
  const std::vector<double>& enemy_distances() {
    if (enemy_.empty()) {
      const Eigen::MatrixXd& d = distances();
      enemy_.assign(static_cast<size_t>(n_), kInf);
      for (Eigen::Index i = 0; i < n_; ++i) {
        double best = kInf;
        for (Eigen::Index j = 0; j < n_; ++j) {
          if (labels_[static_cast<size_t>(j)] != labels_[static_cast<size_t>(i)] && d(i, j) < best)
            best = d(i, j);
        }
        enemy_[static_cast<size_t>(i)] = best;
      }
    }
    return enemy_;
  }

  double n1() {
    const Eigen::MatrixXd& d = distances();
    // Prim's algorithm from vertex 0; ties broken by lowest vertex index,
    // and key updates are strict so each vertex keeps its first best parent.
    std::vector<bool> in_tree(static_cast<size_t>(n_), false);
    std::vector<double> key(static_cast<size_t>(n_), kInf);
    std::vector<Eigen::Index> parent(static_cast<size_t>(n_), -1);
    in_tree[0] = true;
    for (Eigen::Index v = 1; v < n_; ++v) {
      key[static_cast<size_t>(v)] = d(0, v);
      parent[static_cast<size_t>(v)] = 0;
    }
    std::vector<bool> boundary(static_cast<size_t>(n_), false);
    for (Eigen::Index step = 1; step < n_; ++step) {
      Eigen::Index u = -1;
      double best = kInf;
      for (Eigen::Index v = 0; v < n_; ++v) {
        if (!in_tree[static_cast<size_t>(v)] && key[static_cast<size_t>(v)] < best) {
          best = key[static_cast<size_t>(v)];
          u = v;
        }
      }
      in_tree[static_cast<size_t>(u)] = true;
      const Eigen::Index p = parent[static_cast<size_t>(u)];
      if (labels_[static_cast<size_t>(u)] != labels_[static_cast<size_t>(p)]) {
        boundary[static_cast<size_t>(u)] = true;
        boundary[static_cast<size_t>(p)] = true;
      }
      for (Eigen::Index v = 0; v < n_; ++v) {
        if (!in_tree[static_cast<size_t>(v)] && d(u, v) < key[static_cast<size_t>(v)]) {
          key[static_cast<size_t>(v)] = d(u, v);
          parent[static_cast<size_t>(v)] = u;
        }
      }
    }
    int cnt = 0;
    for (bool b : boundary) cnt += b ? 1 : 0;
    return static_cast<double>(cnt) / static_cast<double>(n_);
  }

  double n2() {
    const Eigen::MatrixXd& d = distances();
    const std::vector<double>& enemy = enemy_distances();
    double intra = 0.0, extra = 0.0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      double same = kInf;
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (j != i && labels_[static_cast<size_t>(j)] == labels_[static_cast<size_t>(i)] &&
            d(i, j) < same)
          same = d(i, j);
      }
      if (std::isfinite(same)) intra += same;  // singleton classes add nothing
      extra += enemy[static_cast<size_t>(i)];
    }
    if (extra == 0.0) return intra == 0.0 ? 0.5 : 1.0;
    const double r = intra / extra;
    return r / (1.0 + r);
  }

  Eigen::Index loo_nearest(Eigen::Index i) {
    const Eigen::MatrixXd& d = distances();
    Eigen::Index best = -1;
    double bd = kInf;
    for (Eigen::Index j = 0; j < n_; ++j) {
      if (j != i && d(i, j) < bd) {
        bd = d(i, j);
        best = j;
      }
    }
    return best;
  }

  double n3() {
    int miss = 0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      const Eigen::Index j = loo_nearest(i);
      if (labels_[static_cast<size_t>(j)] != labels_[static_cast<size_t>(i)]) ++miss;
    }
    return static_cast<double>(miss) / static_cast<double>(n_);
  }

  double n4(uint64_t seed) {
    const InterpolantDraw draw = make_interpolants(seed);
    int miss = 0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      Eigen::Index best = -1;
      double bd = kInf;
      for (Eigen::Index j = 0; j < n_; ++j) {
        const double dj = (draw.points.row(i) - pts_.row(j)).norm();
        if (dj < bd) {
          bd = dj;
          best = j;
        }
      }
      if (labels_[static_cast<size_t>(best)] != draw.labels[static_cast<size_t>(i)]) ++miss;
    }
    return static_cast<double>(miss) / static_cast<double>(n_);
  }

  double t1() {
    const Eigen::MatrixXd& d = distances();
    const std::vector<double>& radius = enemy_distances();
    std::vector<Eigen::Index> order(static_cast<size_t>(n_));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      if (radius[static_cast<size_t>(a)] != radius[static_cast<size_t>(b)])
        return radius[static_cast<size_t>(a)] > radius[static_cast<size_t>(b)];
      return a < b;
    });
    std::vector<Eigen::Index> kept;
    for (Eigen::Index i : order) {
      bool absorbed = false;
      for (Eigen::Index k : kept) {
        if (d(k, i) + radius[static_cast<size_t>(i)] <= radius[static_cast<size_t>(k)]) {
          absorbed = true;
          break;
        }
      }
      if (!absorbed) kept.push_back(i);
    }
    return static_cast<double>(kept.size()) / static_cast<double>(n_);
  }

  double lsc() {
    const Eigen::MatrixXd& d = distances();
    const std::vector<double>& enemy = enemy_distances();
    double total = 0.0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      int cnt = 0;
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (j != i && d(i, j) < enemy[static_cast<size_t>(i)]) ++cnt;
      }
      total += static_cast<double>(cnt);
    }
    const double n = static_cast<double>(n_);
    return 1.0 - total / (n * n);
  }

  /// Same-class epsilon-neighborhood graph as adjacency bitsets.
  const std::vector<std::vector<uint64_t>>& graph() {
    if (adj_.empty()) {
      const Eigen::MatrixXd& d = distances();
      double maxd = 0.0;
      for (Eigen::Index i = 0; i < n_; ++i)
        for (Eigen::Index j = i + 1; j < n_; ++j) maxd = std::max(maxd, d(i, j));
      const size_t words = (static_cast<size_t>(n_) + 63) / 64;
      adj_.assign(static_cast<size_t>(n_), std::vector<uint64_t>(words, 0));
      edge_count_ = 0;
      for (Eigen::Index i = 0; i < n_; ++i) {
        for (Eigen::Index j = i + 1; j < n_; ++j) {
          if (labels_[static_cast<size_t>(i)] != labels_[static_cast<size_t>(j)]) continue;
          const double nd = maxd > 0.0 ? d(i, j) / maxd : 0.0;
          if (nd < cfg_.graph_epsilon) {
            adj_[static_cast<size_t>(i)][static_cast<size_t>(j) / 64] |= 1ULL << (j % 64);
            adj_[static_cast<size_t>(j)][static_cast<size_t>(i) / 64] |= 1ULL << (i % 64);
            ++edge_count_;
          }
        }
      }
    }
    return adj_;
  }

  double density() {
    graph();
    const double n = static_cast<double>(n_);
    return 1.0 - 2.0 * static_cast<double>(edge_count_) / (n * (n - 1.0));
  }

  double cls_coef() {
    const auto& adj = graph();
    double total = 0.0;
    for (Eigen::Index v = 0; v < n_; ++v) {
      const auto& row = adj[static_cast<size_t>(v)];
      int deg = 0;
      for (uint64_t w : row) deg += __builtin_popcountll(w);
      if (deg < 2) continue;  // coefficient 0
      // Count edges among the neighbors of v.
      long links2 = 0;  // twice the link count
      for (Eigen::Index u = 0; u < n_; ++u) {
        if (!(row[static_cast<size_t>(u) / 64] >> (u % 64) & 1ULL)) continue;
        const auto& urow = adj[static_cast<size_t>(u)];
        for (size_t w = 0; w < row.size(); ++w)
          links2 += __builtin_popcountll(row[w] & urow[w]);
      }
      total += static_cast<double>(links2) / (static_cast<double>(deg) * (deg - 1));
    }
    return 1.0 - total / static_cast<double>(n_);
  }

  ComplexityConfig cfg_;
  Eigen::MatrixXd pts_;
  std::vector<int> labels_;
  Eigen::Index n_ = 0;
  int n0_ = 0, n1_ = 0;
  std::optional<LinearModel> linear_;
  Eigen::MatrixXd dist_;
  std::vector<double> enemy_;
  std::vector<std::vector<uint64_t>> adj_;
  long edge_count_ = 0;
};

/// Drops columns that are constant within the view so that degenerate
/// directions (e.g. the protected attribute itself) cannot inflate scatter
/// matrices with pure noise.
Eigen::MatrixXd drop_constant_columns(const Eigen::MatrixXd& pts) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index c = 0; c < pts.cols(); ++c) {
    bool constant = true;
    for (Eigen::Index r = 1; r < pts.rows(); ++r) {
      if (pts(r, c) != pts(0, c)) {
        constant = false;
        break;
      }
    }
    if (!constant) keep.push_back(c);
  }
  Eigen::MatrixXd out(pts.rows(), static_cast<Eigen::Index>(keep.size()));
  for (size_t k = 0; k < keep.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = pts.col(keep[k]);
  return out;
}

}  // namespace

std::optional<MetricId> metric_from_name(const std::string& name) {
  for (int i = 0; i < kMetricCount; ++i) {
    if (name == kMetricNames[static_cast<size_t>(i)]) return static_cast<MetricId>(i);
  }
  return std::nullopt;
}

std::optional<double> compute_metric(MetricId metric, const Eigen::MatrixXd& points,
                                     const std::vector<int>& labels, uint64_t seed,
                                     const ComplexityConfig& cfg) {
  if (points.rows() != static_cast<Eigen::Index>(labels.size()))
    throw DataError("points/labels size mismatch");
  MetricEngine engine(points, labels, cfg);
  return engine.compute(metric, seed);
}

ComplexityProfile compute_profile(const TabularDataset& ds, uint64_t seed,
                                  const ComplexityConfig& cfg) {
  ds.validate();
  const TabularDataset std_ds = standardize(ds).first;
  const auto [priv_view, unpriv_view] = split_groups(std_ds);

  ComplexityProfile profile;
  profile.degenerate_group = priv_view.rows.empty() || unpriv_view.rows.empty();

  // Both group views draw from the same per-metric seed: a group's value is then
  // a pure function of its own rows, so exchanging which group is called
  // privileged swaps the two values and leaves every |difference| intact.
  auto group_values = [&](const GroupView& view) -> std::array<std::optional<double>, kMetricCount> {
    std::array<std::optional<double>, kMetricCount> out;
    if (view.rows.empty()) return out;
    const Eigen::MatrixXd pts = drop_constant_columns(view.restrict(std_ds.features));
    const std::vector<int> labels = view.restrict_labels(std_ds.target);
    MetricEngine engine(pts, labels, cfg);
    for (int m = 0; m < kMetricCount; ++m) {
      const uint64_t metric_seed = mix_seed(seed, kMetricNames[static_cast<size_t>(m)]);
      out[static_cast<size_t>(m)] = engine.compute(static_cast<MetricId>(m), metric_seed);
    }
    return out;
  };

  const auto priv_vals = group_values(priv_view);
  const auto unpriv_vals = group_values(unpriv_view);
  for (int m = 0; m < kMetricCount; ++m) {
    MetricTriple& t = profile.metrics[static_cast<size_t>(m)];
    t.privileged = priv_vals[static_cast<size_t>(m)];
    t.unprivileged = unpriv_vals[static_cast<size_t>(m)];
    if (t.privileged && t.unprivileged) t.cmd = std::abs(*t.privileged - *t.unprivileged);
  }
  return profile;
}

}  // namespace cfair
