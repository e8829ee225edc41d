#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "crossover/model.hpp"

namespace crossover {

/// LU factorization of a basis matrix plus a product-form eta file for the
/// pivots applied since the last refactorization.
class BasisFactor {
 public:
  BasisFactor(int m, bool dense) : m_(m), dense_(dense) {}

  /// Returns false when the matrix is numerically singular.
  bool factorize(const SparseMat& basis_matrix);

  /// v <- B^{-1} v
  void ftran(Vec& v) const;
  /// v <- B^{-T} v
  void btran(Vec& v) const;

  /// Records the pivot that replaced basis position `row`; `alpha` is the
  /// entering column already transformed by ftran.
  void add_eta(int row, const Vec& alpha);

  int num_etas() const { return static_cast<int>(etas_.size()); }

 private:
  struct Eta {
    int row = 0;
    double pivot = 1.0;
    std::vector<int> index;
    std::vector<double> value;
  };

  int m_;
  bool dense_;
  Eigen::PartialPivLU<DenseMat> dense_lu_;
  std::unique_ptr<Eigen::SparseLU<SparseMat, Eigen::COLAMDOrdering<int>>> sparse_lu_;
  std::vector<Eta> etas_;
};

/// Indices (into the column list of `basis_matrix`) of a maximal independent
/// subset of columns, and the rows left uncovered by it.
struct RankSplit {
  std::vector<int> independent_columns;
  std::vector<int> uncovered_rows;
};

RankSplit rank_split(const DenseMat& basis_matrix, double threshold = 1e-9);

}  // namespace crossover
