#include "crossover/sinkhorn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace crossover {

Vec SinkhornResult::flat_plan() const {
  Vec flat(plan.size());
  for (Eigen::Index i = 0; i < plan.rows(); ++i) {
    for (Eigen::Index j = 0; j < plan.cols(); ++j) flat[i * plan.cols() + j] = plan(i, j);
  }
  return flat;
}

namespace {

double log_sum_exp(const Eigen::Ref<const Vec>& v) {
  const double top = v.maxCoeff();
  if (!std::isfinite(top)) return top;
  return top + std::log((v.array() - top).exp().sum());
}

void run_scaling(const OtProblem& p, const SinkhornOptions& options, SinkhornResult& out) {
  const DenseMat kernel = (-p.cost.array() / out.eta).exp().matrix();
  const Vec& s = p.supply;
  const Vec& d = p.demand;
  out.u = Vec::Ones(s.size());
  out.v = Vec::Ones(d.size());
  Vec kv = kernel * out.v;
  for (out.iterations = 0; out.iterations < options.max_iterations; ++out.iterations) {
    out.u = s.cwiseQuotient(kv);
    out.v = d.cwiseQuotient(kernel.transpose() * out.u);
    kv = kernel * out.v;
    // Columns match exactly after the v update; rows carry the error.
    out.marginal_error = (out.u.cwiseProduct(kv) - s).lpNorm<1>();
    if (!std::isfinite(out.marginal_error)) throw std::runtime_error("sinkhorn: scaling overflow; use a larger eta");
    if (out.marginal_error <= options.tolerance) {
      out.converged = true;
      ++out.iterations;
      break;
    }
  }
  out.plan = out.u.asDiagonal() * kernel * out.v.asDiagonal();
}

void run_log_domain(const OtProblem& p, const SinkhornOptions& options, SinkhornResult& out) {
  const int m = p.num_sources();
  const int n = p.num_sinks();
  const double eta = out.eta;
  const Vec log_s = p.supply.array().log().matrix();
  const Vec log_d = p.demand.array().log().matrix();
  Vec f = Vec::Zero(m);
  Vec g = Vec::Zero(n);
  auto row_update = [&] {
    for (int i = 0; i < m; ++i) {
      const Vec arg = ((g - p.cost.row(i).transpose()).array() / eta).matrix();
      f[i] = eta * (log_s[i] - log_sum_exp(arg));
    }
  };
  auto column_update = [&] {
    for (int j = 0; j < n; ++j) {
      const Vec arg = ((f - p.cost.col(j)).array() / eta).matrix();
      g[j] = eta * (log_d[j] - log_sum_exp(arg));
    }
  };
  for (out.iterations = 0; out.iterations < options.max_iterations; ++out.iterations) {
    row_update();
    column_update();
    double error = 0.0;
    for (int i = 0; i < m; ++i) {
      const Vec arg = ((g - p.cost.row(i).transpose()).array() / eta).matrix();
      error += std::abs(std::exp(f[i] / eta + log_sum_exp(arg)) - p.supply[i]);
    }
    out.marginal_error = error;
    if (error <= options.tolerance) {
      out.converged = true;
      ++out.iterations;
      break;
    }
  }
  out.plan.resize(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) out.plan(i, j) = std::exp((f[i] + g[j] - p.cost(i, j)) / eta);
  }
  out.u = f / eta;
  out.v = g / eta;
}

}  // namespace

SinkhornResult sinkhorn(const OtProblem& problem, const SinkhornOptions& options) {
  OtProblem p = problem;
  p.normalize();
  p.validate();
  if (!p.cost.allFinite()) throw std::invalid_argument("sinkhorn: cost matrix must be finite");
  const double max_cost = p.cost.size() > 0 ? p.cost.cwiseAbs().maxCoeff() : 0.0;
  SinkhornResult out;
  out.eta = options.eta > 0.0 ? options.eta : 0.01 * max_cost;
  if (!(out.eta > 0.0)) out.eta = 1.0;
  out.log_domain = out.eta < 0.01 * max_cost;
  if (out.log_domain) {
    run_log_domain(p, options, out);
  } else {
    run_scaling(p, options, out);
  }
  return out;
}

}  // namespace crossover
