#include "basis_factor.hpp"

#include <cmath>

namespace crossover {

bool BasisFactor::factorize(const SparseMat& basis_matrix) {
  etas_.clear();
  if (m_ == 0) return true;
  if (dense_) {
    DenseMat dense = DenseMat(basis_matrix);
    dense_lu_.compute(dense);
    const auto& lu = dense_lu_.matrixLU();
    const double scale = std::max(1.0, lu.cwiseAbs().maxCoeff());
    for (int i = 0; i < m_; ++i) {
      if (!(std::abs(lu(i, i)) > 1e-11 * scale)) return false;
    }
    return true;
  }
  sparse_lu_ = std::make_unique<Eigen::SparseLU<SparseMat, Eigen::COLAMDOrdering<int>>>();
  sparse_lu_->analyzePattern(basis_matrix);
  sparse_lu_->factorize(basis_matrix);
  return sparse_lu_->info() == Eigen::Success;
}

void BasisFactor::ftran(Vec& v) const {
  if (m_ == 0) return;
  if (dense_) {
    v = dense_lu_.solve(v);
  } else {
    v = sparse_lu_->solve(v);
  }
  for (const Eta& eta : etas_) {
    const double pivot_value = v[eta.row] / eta.pivot;
    v[eta.row] = pivot_value;
    if (pivot_value == 0.0) continue;
    for (std::size_t k = 0; k < eta.index.size(); ++k) v[eta.index[k]] -= eta.value[k] * pivot_value;
  }
}

void BasisFactor::btran(Vec& v) const {
  if (m_ == 0) return;
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double acc = v[it->row];
    for (std::size_t k = 0; k < it->index.size(); ++k) acc -= it->value[k] * v[it->index[k]];
    v[it->row] = acc / it->pivot;
  }
  if (dense_) {
    v = dense_lu_.transpose().solve(v);
  } else {
    v = sparse_lu_->transpose().solve(v);
  }
}

void BasisFactor::add_eta(int row, const Vec& alpha) {
  Eta eta;
  eta.row = row;
  eta.pivot = alpha[row];
  for (int i = 0; i < m_; ++i) {
    if (i != row && alpha[i] != 0.0 && std::abs(alpha[i]) > 1e-14) {
      eta.index.push_back(i);
      eta.value.push_back(alpha[i]);
    }
  }
  etas_.push_back(std::move(eta));
}

RankSplit rank_split(const DenseMat& basis_matrix, double threshold) {
  Eigen::FullPivLU<DenseMat> lu(basis_matrix);
  lu.setThreshold(threshold);
  const int rank = static_cast<int>(lu.rank());
  RankSplit split;
  const auto& q = lu.permutationQ().indices();
  const auto& p = lu.permutationP().indices();
  for (int k = 0; k < rank; ++k) split.independent_columns.push_back(q[k]);
  // P maps original row i to position p[i]; rows landing beyond the rank are
  // not covered by the independent columns.
  for (int i = 0; i < basis_matrix.rows(); ++i) {
    if (p[i] >= rank) split.uncovered_rows.push_back(i);
  }
  return split;
}

}  // namespace crossover
