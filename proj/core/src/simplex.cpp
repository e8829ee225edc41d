#include "crossover/simplex.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "basis_factor.hpp"

namespace crossover {

BasisState BasisState::slack(int num_rows, int num_cols) {
  BasisState basis;
  basis.status.assign(static_cast<std::size_t>(num_rows + num_cols), VarStatus::NonbasicLower);
  basis.basic.resize(num_rows);
  for (int i = 0; i < num_rows; ++i) {
    basis.status[num_cols + i] = VarStatus::Basic;
    basis.basic[i] = num_cols + i;
  }
  return basis;
}

std::string_view to_string(SimplexStatus status) {
  switch (status) {
    case SimplexStatus::Optimal: return "optimal";
    case SimplexStatus::Unbounded: return "unbounded";
    case SimplexStatus::Infeasible: return "infeasible";
    case SimplexStatus::IterationLimit: return "iteration_limit";
  }
  return "unknown";
}

BoundedSimplex::BoundedSimplex(const StandardLp& lp, SimplexOptions options)
    : lp_(&lp), options_(options), m_(lp.num_rows()), n_(lp.num_cols()) {
  const int total = n_ + m_;
  cost_ = Vec::Zero(total);
  cost_.head(n_) = lp.c;
  lo_ = Vec::Zero(total);
  hi_ = Vec::Zero(total);
  lo_.head(n_) = lp.lower;
  hi_.head(n_) = lp.upper;
  active_.assign(total, 1);
  x_ = Vec::Zero(total);
  status_.assign(total, VarStatus::NonbasicLower);
  position_.assign(total, -1);
  factor_ = std::make_unique<BasisFactor>(m_, m_ <= options_.dense_threshold);
  load_slack_basis();
}

BoundedSimplex::~BoundedSimplex() = default;

template <typename F>
void BoundedSimplex::for_column(int j, F&& f) const {
  if (j < n_) {
    for (SparseMat::InnerIterator it(lp_->a, j); it; ++it) f(static_cast<int>(it.row()), it.value());
  } else {
    f(j - n_, 1.0);
  }
}

double BoundedSimplex::column_dot(int j, const Vec& y) const {
  if (j >= n_) return y[j - n_];
  double acc = 0.0;
  for (SparseMat::InnerIterator it(lp_->a, j); it; ++it) acc += it.value() * y[it.row()];
  return acc;
}

double BoundedSimplex::nonbasic_value(int j) const {
  if (status_[j] == VarStatus::NonbasicUpper) {
    if (std::isfinite(hi_[j])) return hi_[j];
    return std::isfinite(lo_[j]) ? lo_[j] : 0.0;
  }
  if (std::isfinite(lo_[j])) return lo_[j];
  return std::isfinite(hi_[j]) ? hi_[j] : 0.0;
}

namespace {

VarStatus normalized_nonbasic(VarStatus wanted, double lo, double hi) {
  if (wanted == VarStatus::NonbasicUpper && !std::isfinite(hi) && std::isfinite(lo)) return VarStatus::NonbasicLower;
  if (wanted == VarStatus::NonbasicLower && !std::isfinite(lo) && std::isfinite(hi)) return VarStatus::NonbasicUpper;
  return wanted;
}

}  // namespace

void BoundedSimplex::set_cost(int j, double cost) { cost_[j] = cost; }

void BoundedSimplex::set_bounds(int j, double lower, double upper) {
  lo_[j] = lower;
  hi_[j] = upper;
  if (status_[j] != VarStatus::Basic) {
    const double value = x_[j];
    VarStatus wanted = VarStatus::NonbasicLower;
    if (std::isfinite(upper) && (!std::isfinite(lower) || std::abs(value - upper) < std::abs(value - lower))) {
      wanted = VarStatus::NonbasicUpper;
    }
    status_[j] = normalized_nonbasic(wanted, lower, upper);
    const double moved = nonbasic_value(j);
    if (moved != value) {
      x_[j] = moved;
      recompute_basics();
    }
  }
}

void BoundedSimplex::set_active(int j, bool active) { active_[j] = active ? 1 : 0; }

void BoundedSimplex::load_slack_basis() { load_basis(BasisState::slack(m_, n_)); }

int BoundedSimplex::load_basis(const BasisState& basis) {
  const int total = n_ + m_;
  if (static_cast<int>(basis.status.size()) != total) {
    throw std::invalid_argument("load_basis: status vector must cover structural and logical columns");
  }
  std::vector<int> basic;
  for (int j = 0; j < total; ++j) {
    if (basis.status[j] == VarStatus::Basic) basic.push_back(j);
  }
  if (static_cast<int>(basic.size()) != m_) {
    throw std::invalid_argument("load_basis: expected " + std::to_string(m_) + " basic columns, got " +
                                std::to_string(basic.size()));
  }
  // Keep the caller's position order when it is consistent.
  if (static_cast<int>(basis.basic.size()) == m_) {
    std::vector<int> sorted = basis.basic;
    std::sort(sorted.begin(), sorted.end());
    if (sorted == basic) basic = basis.basic;
  }
  basic_ = std::move(basic);
  std::fill(position_.begin(), position_.end(), -1);
  for (int j = 0; j < total; ++j) {
    if (basis.status[j] == VarStatus::Basic) {
      status_[j] = VarStatus::Basic;
    } else {
      status_[j] = normalized_nonbasic(basis.status[j], lo_[j], hi_[j]);
      x_[j] = nonbasic_value(j);
    }
  }
  for (int i = 0; i < m_; ++i) position_[basic_[i]] = i;
  const int before = static_cast<int>(std::count(status_.begin() + n_, status_.end(), VarStatus::Basic));
  refactor();
  const int after = static_cast<int>(std::count(status_.begin() + n_, status_.end(), VarStatus::Basic));
  return after - before;
}

void BoundedSimplex::refactor() {
  auto build = [&] {
    std::vector<Eigen::Triplet<double>> entries;
    for (int pos = 0; pos < m_; ++pos) {
      for_column(basic_[pos], [&](int row, double value) { entries.emplace_back(row, pos, value); });
    }
    SparseMat basis_matrix(m_, m_);
    basis_matrix.setFromTriplets(entries.begin(), entries.end());
    basis_matrix.makeCompressed();
    return basis_matrix;
  };
  SparseMat basis_matrix = build();
  if (!factor_->factorize(basis_matrix)) {
    const RankSplit split = rank_split(DenseMat(basis_matrix));
    std::vector<char> keep(m_, 0);
    for (int pos : split.independent_columns) keep[pos] = 1;
    std::size_t next_row = 0;
    for (int pos = 0; pos < m_; ++pos) {
      if (keep[pos]) continue;
      const int dropped = basic_[pos];
      const int logical = n_ + split.uncovered_rows.at(next_row++);
      status_[dropped] = normalized_nonbasic(VarStatus::NonbasicLower, lo_[dropped], hi_[dropped]);
      x_[dropped] = nonbasic_value(dropped);
      position_[dropped] = -1;
      status_[logical] = VarStatus::Basic;
      basic_[pos] = logical;
      position_[logical] = pos;
    }
    basis_matrix = build();
    if (!factor_->factorize(basis_matrix)) throw SingularBasisError("basis repair failed");
  }
  recompute_basics();
}

void BoundedSimplex::recompute_basics() {
  Vec rhs = lp_->b;
  for (int j = 0; j < n_ + m_; ++j) {
    if (status_[j] == VarStatus::Basic) continue;
    const double value = x_[j];
    if (value == 0.0) continue;
    for_column(j, [&](int row, double a) { rhs[row] -= a * value; });
  }
  factor_->ftran(rhs);
  for (int pos = 0; pos < m_; ++pos) x_[basic_[pos]] = rhs[pos];
}

bool BoundedSimplex::eligible(int j, double d, bool& increase) const {
  const double tol = options_.dual_tolerance;
  const bool free_var = !std::isfinite(lo_[j]) && !std::isfinite(hi_[j]);
  if (free_var) {
    if (std::abs(d) <= tol) return false;
    increase = d < 0.0;
    return true;
  }
  if (status_[j] == VarStatus::NonbasicUpper) {
    increase = false;
    return d > tol;
  }
  increase = true;
  return d < -tol;
}

double BoundedSimplex::primal_infeasibility() const {
  double worst = 0.0;
  for (int j : basic_) worst = std::max({worst, lo_[j] - x_[j], x_[j] - hi_[j]});
  return worst;
}

double BoundedSimplex::objective() const {
  double value = 0.0;
  for (int j = 0; j < n_ + m_; ++j) {
    if (x_[j] != 0.0) value += cost_[j] * x_[j];
  }
  return value;
}

Vec BoundedSimplex::duals() {
  Vec y(m_);
  for (int pos = 0; pos < m_; ++pos) y[pos] = cost_[basic_[pos]];
  factor_->btran(y);
  return y;
}

Vec BoundedSimplex::reduced_costs() {
  const Vec y = duals();
  Vec d(n_ + m_);
  for (int j = 0; j < n_ + m_; ++j) d[j] = status_[j] == VarStatus::Basic ? 0.0 : cost_[j] - column_dot(j, y);
  return d;
}

BasisState BoundedSimplex::basis() const {
  BasisState out;
  out.status = status_;
  out.basic = basic_;
  return out;
}

SimplexStatus BoundedSimplex::run(const SimplexLimits& limits) {
  using Clock = std::chrono::steady_clock;
  const auto started = Clock::now();
  const long first_iteration = iterations_;
  const double ptol = options_.primal_tolerance;
  const int total = n_ + m_;

  refactor();
  bool fresh = true;
  int degenerate_run = 0;
  bool bland = false;
  Vec y(m_);
  Vec alpha(m_);
  Vec basic_cost(m_);

  while (true) {
    if (iterations_ - first_iteration >= limits.max_iterations) return SimplexStatus::IterationLimit;
    if (std::isfinite(limits.time_limit_seconds) && (iterations_ & 31) == 0) {
      const double elapsed = std::chrono::duration<double>(Clock::now() - started).count();
      if (elapsed > limits.time_limit_seconds) return SimplexStatus::IterationLimit;
    }

    bool phase1 = false;
    for (int pos = 0; pos < m_; ++pos) {
      const int j = basic_[pos];
      double c = 0.0;
      if (x_[j] < lo_[j] - ptol) {
        c = -1.0;
      } else if (x_[j] > hi_[j] + ptol) {
        c = 1.0;
      }
      if (c != 0.0) phase1 = true;
      basic_cost[pos] = c;
    }
    if (!phase1) {
      for (int pos = 0; pos < m_; ++pos) basic_cost[pos] = cost_[basic_[pos]];
    }
    y = basic_cost;
    factor_->btran(y);

    int entering = -1;
    bool increase = true;
    double best_score = 0.0;
    for (int j = 0; j < total; ++j) {
      if (status_[j] == VarStatus::Basic || !active_[j] || lo_[j] == hi_[j]) continue;
      const double d = (phase1 ? 0.0 : cost_[j]) - column_dot(j, y);
      bool up = true;
      if (!eligible(j, d, up)) continue;
      if (bland) {
        entering = j;
        increase = up;
        break;
      }
      if (std::abs(d) > best_score) {
        best_score = std::abs(d);
        entering = j;
        increase = up;
      }
    }

    if (entering < 0) {
      if (!fresh) {
        refactor();
        fresh = true;
        continue;
      }
      return phase1 ? SimplexStatus::Infeasible : SimplexStatus::Optimal;
    }

    alpha.setZero();
    for_column(entering, [&](int row, double value) { alpha[row] = value; });
    factor_->ftran(alpha);
    const double dir = increase ? 1.0 : -1.0;

    double theta = (std::isfinite(lo_[entering]) && std::isfinite(hi_[entering])) ? hi_[entering] - lo_[entering] : kInf;
    int leave = -1;
    double leave_value = 0.0;
    for (int pos = 0; pos < m_; ++pos) {
      const double a = alpha[pos];
      if (std::abs(a) <= options_.pivot_tolerance) continue;
      const double rate = -dir * a;
      const int j = basic_[pos];
      const double xj = x_[j];
      double limit = kInf;
      double target = 0.0;
      if (rate < 0.0) {
        if (xj > hi_[j] + ptol) {
          limit = (xj - hi_[j]) / -rate;
          target = hi_[j];
        } else if (xj < lo_[j] - ptol) {
          continue;
        } else if (std::isfinite(lo_[j])) {
          limit = std::max(0.0, xj - lo_[j]) / -rate;
          target = lo_[j];
        } else {
          continue;
        }
      } else {
        if (xj < lo_[j] - ptol) {
          limit = (lo_[j] - xj) / rate;
          target = lo_[j];
        } else if (xj > hi_[j] + ptol) {
          continue;
        } else if (std::isfinite(hi_[j])) {
          limit = std::max(0.0, hi_[j] - xj) / rate;
          target = hi_[j];
        } else {
          continue;
        }
      }
      bool take = false;
      if (leave < 0) {
        take = limit < theta;
      } else {
        const double tie = 1e-12 * std::max(1.0, theta);
        take = limit < theta - tie || (limit <= theta + tie && j < basic_[leave]);
      }
      if (take) {
        theta = std::min(theta, limit);
        leave = pos;
        leave_value = target;
      }
    }

    if (!std::isfinite(theta)) {
      if (!fresh) {
        refactor();
        fresh = true;
        continue;
      }
      return phase1 ? SimplexStatus::Infeasible : SimplexStatus::Unbounded;
    }

    x_[entering] += dir * theta;
    if (theta != 0.0) {
      for (int pos = 0; pos < m_; ++pos) {
        if (alpha[pos] != 0.0) x_[basic_[pos]] -= dir * theta * alpha[pos];
      }
    }

    if (leave < 0) {
      status_[entering] = increase ? VarStatus::NonbasicUpper : VarStatus::NonbasicLower;
      x_[entering] = nonbasic_value(entering);
    } else {
      const int leaving = basic_[leave];
      x_[leaving] = leave_value;
      VarStatus leaving_status = leave_value == lo_[leaving] ? VarStatus::NonbasicLower : VarStatus::NonbasicUpper;
      status_[leaving] = normalized_nonbasic(leaving_status, lo_[leaving], hi_[leaving]);
      position_[leaving] = -1;
      status_[entering] = VarStatus::Basic;
      basic_[leave] = entering;
      position_[entering] = leave;
      const double pivot = std::abs(alpha[leave]);
      factor_->add_eta(leave, alpha);
      fresh = false;
      if (factor_->num_etas() >= options_.refactor_interval || pivot < 1e-7 * alpha.cwiseAbs().maxCoeff()) {
        refactor();
        fresh = true;
      }
    }

    ++iterations_;
    if (phase1) ++phase1_iterations_;
    if (theta <= 1e-12) {
      if (++degenerate_run >= std::max(3 * m_, 1)) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }
    if (options_.record_objective_trace && !phase1) trace_.push_back(objective());
  }
}

int BoundedSimplex::pivot_out_logicals() {
  refactor();
  int remaining = 0;
  Vec rho(m_);
  Vec alpha(m_);
  for (int pos = 0; pos < m_; ++pos) {
    const int logical = basic_[pos];
    if (logical < n_) continue;
    if (std::abs(x_[logical]) > options_.primal_tolerance) {
      ++remaining;
      continue;
    }
    rho.setZero();
    rho[pos] = 1.0;
    factor_->btran(rho);
    int best = -1;
    double best_abs = 1e-7;
    for (int j = 0; j < n_; ++j) {
      if (status_[j] == VarStatus::Basic) continue;
      const double v = std::abs(column_dot(j, rho));
      if (v > best_abs) {
        best_abs = v;
        best = j;
      }
    }
    if (best < 0) {
      ++remaining;
      continue;
    }
    alpha.setZero();
    for_column(best, [&](int row, double value) { alpha[row] = value; });
    factor_->ftran(alpha);
    status_[best] = VarStatus::Basic;
    active_[best] = 1;
    basic_[pos] = best;
    position_[best] = pos;
    x_[logical] = 0.0;
    status_[logical] = normalized_nonbasic(lo_[logical] == 0.0 ? VarStatus::NonbasicLower : VarStatus::NonbasicUpper,
                                           lo_[logical], hi_[logical]);
    position_[logical] = -1;
    factor_->add_eta(pos, alpha);
  }
  refactor();
  return remaining;
}

SimplexResult BoundedSimplex::result(SimplexStatus status) {
  SimplexResult out;
  out.status = status;
  out.x = structural_values();
  out.objective = cost_.head(n_).dot(out.x);
  out.basis = basis();
  out.duals = duals();
  out.reduced_costs = Vec(n_);
  for (int j = 0; j < n_; ++j) {
    out.reduced_costs[j] = status_[j] == VarStatus::Basic ? 0.0 : cost_[j] - column_dot(j, out.duals);
  }
  out.iterations = iterations_;
  out.phase1_iterations = phase1_iterations_;
  return out;
}

SimplexResult solve(const StandardLp& lp, const std::optional<BasisState>& start, const SimplexLimits& limits,
                    const SimplexOptions& options) {
  lp.validate();
  BoundedSimplex engine(lp, options);
  if (start) engine.load_basis(*start);
  const SimplexStatus status = engine.run(limits);
  return engine.result(status);
}

DualSolution reduced_costs(const StandardLp& lp, const BasisState& basis) {
  const int m = lp.num_rows();
  const int n = lp.num_cols();
  if (basis.num_basic() != m || static_cast<int>(basis.status.size()) != n + m) {
    throw std::invalid_argument("reduced_costs: basis does not match the LP dimensions");
  }
  std::vector<Eigen::Triplet<double>> entries;
  for (int pos = 0; pos < m; ++pos) {
    const int j = basis.basic[pos];
    if (j < n) {
      for (SparseMat::InnerIterator it(lp.a, j); it; ++it) entries.emplace_back(static_cast<int>(it.row()), pos, it.value());
    } else {
      entries.emplace_back(j - n, pos, 1.0);
    }
  }
  SparseMat basis_matrix(m, m);
  basis_matrix.setFromTriplets(entries.begin(), entries.end());
  BasisFactor factor(m, m <= 512);
  if (!factor.factorize(basis_matrix)) throw SingularBasisError("reduced_costs: basis matrix is singular; repair the basis first");
  DualSolution out;
  out.duals = Vec(m);
  for (int pos = 0; pos < m; ++pos) {
    const int j = basis.basic[pos];
    out.duals[pos] = j < n ? lp.c[j] : 0.0;
  }
  factor.btran(out.duals);
  out.reduced_costs = lp.c - lp.a.transpose() * out.duals;
  for (int j : basis.basic) {
    if (j < n) out.reduced_costs[j] = 0.0;
  }
  return out;
}

VertexCheck vertex_check(const StandardLp& lp, const Vec& x, double tolerance) {
  VertexCheck check;
  const int n = lp.num_cols();
  for (int j = 0; j < n; ++j) {
    const double slack = tolerance * std::max(1.0, std::abs(x[j]));
    if (x[j] > lp.lower[j] + slack && x[j] < lp.upper[j] - slack) check.interior.push_back(j);
  }
  if (check.interior.empty()) {
    check.is_vertex = true;
    return check;
  }
  DenseMat columns = DenseMat::Zero(lp.num_rows(), static_cast<Eigen::Index>(check.interior.size()));
  for (std::size_t k = 0; k < check.interior.size(); ++k) {
    for (SparseMat::InnerIterator it(lp.a, check.interior[k]); it; ++it) columns(it.row(), static_cast<Eigen::Index>(k)) = it.value();
  }
  const RankSplit split = rank_split(columns, 1e-9);
  std::vector<int> picked = split.independent_columns;
  std::sort(picked.begin(), picked.end());
  for (int k : picked) check.independent.push_back(check.interior[k]);
  check.is_vertex = check.independent.size() == check.interior.size();
  return check;
}

}  // namespace crossover
