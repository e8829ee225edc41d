#include "crossover/ipm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SparseCholesky>

#include "crossover/random.hpp"

namespace crossover {

std::string_view to_string(IpmStatus status) {
  switch (status) {
    case IpmStatus::Converged: return "converged";
    case IpmStatus::PrimalInfeasible: return "primal_infeasible";
    case IpmStatus::DualInfeasible: return "dual_infeasible";
    case IpmStatus::IterationLimit: return "iteration_limit";
    case IpmStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

namespace {

// Internal columns are x' >= 0 with an optional finite upper bound.
enum class Kind { Lower, UpperOnly, FreePos, FreeNeg };

struct InternalLp {
  SparseMat a;
  Vec b;
  Vec c;
  Vec ub;                  // +inf when unbounded above
  std::vector<int> origin;  // original column of each internal column
  std::vector<Kind> kind;
  Vec shift;               // per original column
  std::vector<int> bounded;  // internal columns with finite ub
};

InternalLp transform(const StandardLp& lp) {
  const int n = lp.num_cols();
  InternalLp in;
  in.shift = Vec::Zero(n);
  std::vector<Eigen::Triplet<double>> trips;
  std::vector<double> cost;
  std::vector<double> ub;
  auto add = [&](int j, Kind kind, double sign, double upper) {
    const int col = static_cast<int>(in.origin.size());
    for (SparseMat::InnerIterator it(lp.a, j); it; ++it) trips.emplace_back(it.row(), col, sign * it.value());
    cost.push_back(sign * lp.c[j]);
    ub.push_back(upper);
    in.origin.push_back(j);
    in.kind.push_back(kind);
    if (std::isfinite(upper)) in.bounded.push_back(col);
  };
  for (int j = 0; j < n; ++j) {
    const double l = lp.lower[j];
    const double u = lp.upper[j];
    if (std::isfinite(l)) {
      in.shift[j] = l;
      add(j, Kind::Lower, 1.0, std::isfinite(u) ? u - l : kInf);
    } else if (std::isfinite(u)) {
      in.shift[j] = u;
      add(j, Kind::UpperOnly, -1.0, kInf);
    } else {
      add(j, Kind::FreePos, 1.0, kInf);
      add(j, Kind::FreeNeg, -1.0, kInf);
    }
  }
  in.a.resize(lp.num_rows(), static_cast<int>(in.origin.size()));
  in.a.setFromTriplets(trips.begin(), trips.end());
  in.a.makeCompressed();
  in.c = Eigen::Map<Vec>(cost.data(), static_cast<Eigen::Index>(cost.size()));
  in.ub = Eigen::Map<Vec>(ub.data(), static_cast<Eigen::Index>(ub.size()));
  in.b = lp.b - lp.a * in.shift;
  return in;
}

// Solves (A diag(theta) A') dy = rhs with Jacobi scaling, a tiny diagonal
// shift for rank-deficient A, and refinement against the unshifted matrix.
class NormalSolver {
 public:
  NormalSolver(const SparseMat& a, int dense_threshold) : a_(a), dense_(a.rows() <= dense_threshold) {}

  bool factorize(const Vec& theta) {
    const int m = static_cast<int>(a_.rows());
    if (dense_) {
      dense_m_ = DenseMat::Zero(m, m);
      for (int j = 0; j < a_.cols(); ++j) {
        for (SparseMat::InnerIterator p(a_, j); p; ++p) {
          for (SparseMat::InnerIterator q(a_, j); q; ++q) {
            dense_m_(p.row(), q.row()) += theta[j] * p.value() * q.value();
          }
        }
      }
      diag_ = dense_m_.diagonal();
    } else {
      sparse_m_ = a_ * theta.asDiagonal() * a_.transpose();
      diag_ = sparse_m_.diagonal();
    }
    scale_ = Vec(m);
    for (int i = 0; i < m; ++i) scale_[i] = diag_[i] > 0.0 ? 1.0 / std::sqrt(diag_[i]) : 1.0;
    for (double shift = 1e-12; shift <= 1e-4; shift *= 100.0) {
      if (dense_) {
        DenseMat scaled = scale_.asDiagonal() * dense_m_ * scale_.asDiagonal();
        for (int i = 0; i < m; ++i) scaled(i, i) += diag_[i] > 0.0 ? shift : 1.0;
        dense_llt_.compute(scaled);
        if (dense_llt_.info() == Eigen::Success) return true;
      } else {
        SparseMat scaled = scale_.asDiagonal() * sparse_m_ * scale_.asDiagonal();
        SparseMat reg(m, m);
        reg.reserve(Eigen::VectorXi::Constant(m, 1));
        for (int i = 0; i < m; ++i) reg.insert(i, i) = diag_[i] > 0.0 ? shift : 1.0;
        scaled += reg;
        sparse_llt_.compute(scaled);
        if (sparse_llt_.info() == Eigen::Success) return true;
      }
    }
    return false;
  }

  Vec solve(const Vec& rhs) const {
    Vec dy = apply(rhs);
    for (int k = 0; k < 3; ++k) {
      const Vec r = rhs - multiply(dy);
      if (r.lpNorm<Eigen::Infinity>() <= 1e-14 * (1.0 + rhs.lpNorm<Eigen::Infinity>())) break;
      dy += apply(r);
    }
    return dy;
  }

 private:
  Vec apply(const Vec& rhs) const {
    const Vec scaled = scale_.cwiseProduct(rhs);
    const Vec z = dense_ ? Vec(dense_llt_.solve(scaled)) : Vec(sparse_llt_.solve(scaled));
    return scale_.cwiseProduct(z);
  }
  Vec multiply(const Vec& v) const { return dense_ ? Vec(dense_m_ * v) : Vec(sparse_m_ * v); }

  const SparseMat& a_;
  bool dense_;
  DenseMat dense_m_;
  SparseMat sparse_m_;
  Vec diag_;
  Vec scale_;
  Eigen::LLT<DenseMat> dense_llt_;
  Eigen::SimplicialLLT<SparseMat> sparse_llt_;
};

double max_step(const Vec& v, const Vec& dv) {
  double alpha = 1.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (dv[j] < 0.0) alpha = std::min(alpha, -v[j] / dv[j]);
  }
  return alpha;
}

struct Direction {
  Vec dx, dy, ds, dw, dz;
};

}  // namespace

PrimalDualPoint ipm_solve(const StandardLp& lp, double target_gap, const IpmOptions& options) {
  lp.validate();
  if (!(target_gap > 0.0)) throw std::invalid_argument("ipm_solve: target gap must be positive");
  const InternalLp in = transform(lp);
  const int n = static_cast<int>(in.origin.size());
  const auto& bounded = in.bounded;
  const int nb = static_cast<int>(bounded.size());
  const SparseMat at = in.a.transpose();

  Vec ubb(nb);
  for (int k = 0; k < nb; ++k) ubb[k] = in.ub[bounded[k]];

  NormalSolver normal(in.a, options.dense_threshold);

  // Starting point: least-squares solutions shifted to positivity.
  Vec x, y, s, w, z;
  {
    if (!normal.factorize(Vec::Ones(n))) throw std::runtime_error("ipm_solve: cannot factorize A A'");
    x = at * normal.solve(in.b);
    y = normal.solve(in.a * in.c);
    s = in.c - at * y;
    const double dx = std::max(-1.5 * (n > 0 ? x.minCoeff() : 0.0), 0.0);
    const double ds = std::max(-1.5 * (n > 0 ? s.minCoeff() : 0.0), 0.0);
    x.array() += dx;
    s.array() += ds;
    const double xs = x.dot(s);
    if (xs > 0.0) {
      x.array() += 0.5 * xs / std::max(s.sum(), 1e-300);
      s.array() += 0.5 * xs / std::max(x.sum(), 1e-300);
    }
    const double floor = 1e-2 * (1.0 + x.lpNorm<Eigen::Infinity>());
    for (int j = 0; j < n; ++j) {
      if (!(x[j] > 0.0)) x[j] = floor;
      if (!(s[j] > 0.0)) s[j] = 1.0;
    }
    w.resize(nb);
    z.resize(nb);
    for (int k = 0; k < nb; ++k) {
      const int j = bounded[k];
      if (x[j] >= 0.9 * ubb[k]) x[j] = 0.5 * ubb[k];
      w[k] = ubb[k] - x[j];
      z[k] = s[j];
      if (!(w[k] > 0.0)) w[k] = 0.5 * ubb[k];
    }
  }

  const double norm_b = in.b.lpNorm<Eigen::Infinity>();
  const double norm_c = in.c.lpNorm<Eigen::Infinity>();
  const double norm_u = nb > 0 ? ubb.lpNorm<Eigen::Infinity>() : 0.0;
  const double obj_shift = lp.c.dot(in.shift);
  const int ncomp = n + nb;

  PrimalDualPoint point;
  Vec prev_x, prev_s;
  auto scatter = [&](const Vec& xi, const Vec& si, const Vec& zi, Vec& xo, Vec& so, Vec* zo) {
    const int no = lp.num_cols();
    xo = in.shift;
    so = Vec::Zero(no);
    if (zo) *zo = Vec::Zero(no);
    Vec zfull = Vec::Zero(n);
    for (int k = 0; k < nb; ++k) zfull[bounded[k]] = zi[k];
    for (int j = 0; j < n; ++j) {
      const int o = in.origin[j];
      switch (in.kind[j]) {
        case Kind::Lower:
          xo[o] += xi[j];
          so[o] = si[j];
          if (zo) (*zo)[o] = zfull[j];
          break;
        case Kind::UpperOnly:
          xo[o] -= xi[j];
          if (zo) (*zo)[o] = si[j];
          break;
        case Kind::FreePos: xo[o] += xi[j]; break;
        case Kind::FreeNeg: xo[o] -= xi[j]; break;
      }
    }
  };

  Vec theta(n);
  for (int iter = 0;; ++iter) {
    const Vec rp = in.b - in.a * x;
    Vec rd = in.c - at * y - s;
    Vec ru(nb);
    for (int k = 0; k < nb; ++k) {
      rd[bounded[k]] += z[k];
      ru[k] = ubb[k] - x[bounded[k]] - w[k];
    }
    const double comp = x.dot(s) + w.dot(z);
    const double objective = in.c.dot(x) + obj_shift;
    const double rel_gap = comp / (1.0 + std::abs(objective));
    const double pres = std::max(rp.lpNorm<Eigen::Infinity>() / (1.0 + norm_b),
                                 nb > 0 ? ru.lpNorm<Eigen::Infinity>() / (1.0 + norm_u) : 0.0);
    const double dres = rd.lpNorm<Eigen::Infinity>() / (1.0 + norm_c);

    point.iterations = iter;
    point.gap = comp;
    point.relative_gap = rel_gap;
    point.primal_residual = pres;
    point.dual_residual = dres;

    IpmStatus status = IpmStatus::IterationLimit;
    bool stop = false;
    if (rel_gap <= target_gap && pres <= options.residual_tolerance && dres <= options.residual_tolerance) {
      status = IpmStatus::Converged;
      stop = true;
    } else if (!std::isfinite(comp) || !std::isfinite(pres) || !std::isfinite(dres)) {
      status = IpmStatus::NumericalFailure;
      stop = true;
    } else if (x.lpNorm<Eigen::Infinity>() > 1e14 * (1.0 + norm_b)) {
      status = IpmStatus::DualInfeasible;
      stop = true;
    } else if (y.lpNorm<Eigen::Infinity>() > 1e14 * (1.0 + norm_c) || s.lpNorm<Eigen::Infinity>() > 1e14 * (1.0 + norm_c)) {
      status = IpmStatus::PrimalInfeasible;
      stop = true;
    } else if (iter >= options.max_iterations) {
      stop = true;
    }
    if (stop) {
      point.status = status;
      scatter(x, s, z, point.x, point.s, &point.z);
      point.y = y;
      if (prev_x.size() == n) {
        scatter(prev_x, prev_s, Vec::Zero(nb), point.previous_x, point.previous_s, nullptr);
      }
      return point;
    }

    for (int j = 0; j < n; ++j) theta[j] = s[j] / x[j];
    for (int k = 0; k < nb; ++k) theta[bounded[k]] += z[k] / w[k];
    theta = theta.cwiseInverse();
    if (!normal.factorize(theta)) {
      point.status = IpmStatus::NumericalFailure;
      scatter(x, s, z, point.x, point.s, &point.z);
      point.y = y;
      return point;
    }

    auto direction = [&](const Vec& rxs, const Vec& rwz) {
      Direction d;
      Vec rhat = rd - rxs.cwiseQuotient(x);
      for (int k = 0; k < nb; ++k) rhat[bounded[k]] += (rwz[k] - z[k] * ru[k]) / w[k];
      d.dy = normal.solve(rp + in.a * theta.cwiseProduct(rhat));
      d.dx = theta.cwiseProduct(at * d.dy - rhat);
      d.ds = (rxs - s.cwiseProduct(d.dx)).cwiseQuotient(x);
      d.dw.resize(nb);
      d.dz.resize(nb);
      for (int k = 0; k < nb; ++k) {
        d.dw[k] = ru[k] - d.dx[bounded[k]];
        d.dz[k] = (rwz[k] - z[k] * d.dw[k]) / w[k];
      }
      return d;
    };

    const double mu = comp / std::max(ncomp, 1);
    const Vec rxs_aff = -x.cwiseProduct(s);
    const Vec rwz_aff = -w.cwiseProduct(z);
    const Direction aff = direction(rxs_aff, rwz_aff);
    const double ap_aff = std::min(max_step(x, aff.dx), max_step(w, aff.dw));
    const double ad_aff = std::min(max_step(s, aff.ds), max_step(z, aff.dz));
    const double mu_aff = ((x + ap_aff * aff.dx).dot(s + ad_aff * aff.ds) +
                           (w + ap_aff * aff.dw).dot(z + ad_aff * aff.dz)) /
                          std::max(ncomp, 1);
    const double sigma = mu > 0.0 ? std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3) : 0.0;

    Vec rxs = rxs_aff - aff.dx.cwiseProduct(aff.ds);
    rxs.array() += sigma * mu;
    Vec rwz = rwz_aff - aff.dw.cwiseProduct(aff.dz);
    rwz.array() += sigma * mu;
    const Direction d = direction(rxs, rwz);
    const double ap = std::min(1.0, options.step_fraction * std::min(max_step(x, d.dx), max_step(w, d.dw)));
    const double ad = std::min(1.0, options.step_fraction * std::min(max_step(s, d.ds), max_step(z, d.dz)));

    prev_x = x;
    prev_s = s;
    x += ap * d.dx;
    w += ap * d.dw;
    y += ad * d.dy;
    s += ad * d.ds;
    z += ad * d.dz;
  }
}

Vec analytic_center(const StandardLp& lp) {
  StandardLp flat = lp;
  flat.c.setZero();
  IpmOptions options;
  options.residual_tolerance = 1e-10;
  const PrimalDualPoint point = ipm_solve(flat, 1e-10, options);
  return point.x;
}

Vec ot_product_plan(const OtProblem& p) {
  const int m = p.num_sources();
  const int n = p.num_sinks();
  const double total = p.supply.sum();
  if (!(total > 0.0)) throw std::invalid_argument("ot_product_plan: zero total supply");
  Vec plan(static_cast<Eigen::Index>(m) * n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) plan[p.arc_index(i, j)] = p.supply[i] * p.demand[j] / total;
  }
  return plan;
}

Vec synthetic_interior(const StandardLp& lp, const Vec& vertex, const Vec& center, double blend, double noise,
                       std::uint64_t seed) {
  const int n = lp.num_cols();
  if (vertex.size() != n || center.size() != n) throw std::invalid_argument("synthetic_interior: size mismatch");
  if (blend < 0.0 || blend > 1.0) throw std::invalid_argument("synthetic_interior: blend must be in [0, 1]");
  if (blend == 0.0 && noise == 0.0) return vertex;
  const Vec base = (1.0 - blend) * vertex + blend * center;
  if (noise == 0.0) return base;

  Rng rng(seed);
  Vec noisy = base;
  for (int j = 0; j < n; ++j) noisy[j] *= 1.0 + noise * rng.uniform(-1.0, 1.0);

  // Least-norm correction onto A x = b; A A' may be rank deficient.
  const DenseMat a = DenseMat(lp.a);
  const Eigen::CompleteOrthogonalDecomposition<DenseMat> cod(a * a.transpose());
  Vec projected = noisy;
  for (int pass = 0; pass < 3; ++pass) projected -= a.transpose() * cod.solve(a * projected - lp.b);

  // Pull back toward base until within bounds; base itself is feasible.
  const Vec dir = projected - base;
  double t = 1.0;
  for (int j = 0; j < n; ++j) {
    if (dir[j] < 0.0 && std::isfinite(lp.lower[j])) t = std::min(t, std::max(0.0, (base[j] - lp.lower[j]) / -dir[j]));
    if (dir[j] > 0.0 && std::isfinite(lp.upper[j])) t = std::min(t, std::max(0.0, (lp.upper[j] - base[j]) / dir[j]));
  }
  Vec result = base + t * dir;
  for (int j = 0; j < n; ++j) result[j] = std::clamp(result[j], lp.lower[j], lp.upper[j]);
  return result;
}

}  // namespace crossover
