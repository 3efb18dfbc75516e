// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <Eigen/SparseCholesky>

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdd {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

struct SingularMatrix : std::runtime_error {
  explicit SingularMatrix(const std::string& what) : std::runtime_error(what) {}
};
struct NotPositiveDefinite : std::runtime_error {
  explicit NotPositiveDefinite(const std::string& what) : std::runtime_error(what) {}
};
struct DimensionMismatch : std::runtime_error {
  explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};
struct NewtonDiverged : std::runtime_error {
  explicit NewtonDiverged(const std::string& what) : std::runtime_error(what) {}
};
struct InvalidArgument : std::runtime_error {
  explicit InvalidArgument(const std::string& what) : std::runtime_error(what) {}
};

/// Triplet accumulator; duplicate (row,col) entries are summed on finalize.
class SparseBuilder {
public:
  SparseBuilder(Eigen::Index rows, Eigen::Index cols) : rows_(rows), cols_(cols) {}

  void add(Eigen::Index r, Eigen::Index c, double v) {
    if (v != 0.0) triplets_.emplace_back(r, c, v);
  }

  SpMat finalize() const {
    SpMat m(rows_, cols_);
    m.setFromTriplets(triplets_.begin(), triplets_.end());
    m.makeCompressed();
    return m;
  }

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }

private:
  Eigen::Index rows_, cols_;
  std::vector<Triplet> triplets_;
};

/// Direct sparse factorization, reusable across right-hand sides.
/// LDLT is used when the matrix is flagged SPD, LU otherwise (saddle-point
/// systems are indefinite and need pivoting).
class SparseSolver {
public:
  enum class Kind { LU, LDLT };

  explicit SparseSolver(const SpMat& A, Kind kind = Kind::LU) : n_(A.rows()) {
    if (A.rows() != A.cols()) throw DimensionMismatch("SparseSolver: matrix not square");
    if (kind == Kind::LDLT) {
      ldlt_ = std::make_unique<Eigen::SimplicialLDLT<SpMat>>();
      ldlt_->compute(A);
      if (ldlt_->info() != Eigen::Success) {
        ldlt_.reset();  // fall back to LU; LDLT without pivoting can fail on valid systems
        factorizeLU(A);
      }
    } else {
      factorizeLU(A);
    }
  }

  Vec solve(const Vec& b) const {
    if (b.size() != n_) throw DimensionMismatch("SparseSolver::solve: rhs size mismatch");
    Vec x = ldlt_ ? Vec(ldlt_->solve(b)) : Vec(lu_->solve(b));
    if (!x.allFinite()) throw SingularMatrix("SparseSolver::solve: non-finite solution");
    return x;
  }

  Mat solve(const Mat& B) const {
    Mat X(B.rows(), B.cols());
    for (Eigen::Index j = 0; j < B.cols(); ++j) X.col(j) = solve(Vec(B.col(j)));
    return X;
  }

  Eigen::Index size() const { return n_; }

private:
  void factorizeLU(const SpMat& A) {
    lu_ = std::make_unique<Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>>();
    lu_->analyzePattern(A);
    lu_->factorize(A);
    if (lu_->info() != Eigen::Success)
      throw SingularMatrix("SparseSolver: factorization failed (zero pivot)");
  }

  Eigen::Index n_;
  std::unique_ptr<Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>> lu_;
  std::unique_ptr<Eigen::SimplicialLDLT<SpMat>> ldlt_;
};

/// Solves Ax = b by direct factorization. Residual contract: ||Ax-b|| <= 1e-10 ||b||.
inline Vec solve_sparse(const SpMat& A, const Vec& b) {
  if (A.rows() != A.cols()) throw DimensionMismatch("solve_sparse: matrix not square");
  if (A.rows() != b.size()) throw DimensionMismatch("solve_sparse: rhs size mismatch");
  SparseSolver solver(A);
  Vec x = solver.solve(b);
#ifndef NDEBUG
  const double bn = b.norm();
  if (bn > 0 && (A * x - b).norm() > 1e-10 * bn)
    throw SingularMatrix("solve_sparse: residual above tolerance");
#endif
  return x;
}

struct EigPairs {
  Vec values;    // nondecreasing
  Mat vectors;   // columns, B-orthonormal
};

/// Generalized symmetric eigenproblem A v = lambda B v, A sym PSD, B SPD.
inline EigPairs generalized_sym_eig(const Mat& A, const Mat& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
    throw DimensionMismatch("generalized_sym_eig: dimension mismatch");
  Eigen::LLT<Mat> cholB(B);
  if (cholB.info() != Eigen::Success)
    throw NotPositiveDefinite("generalized_sym_eig: B factorization failed");
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es;
  es.compute(A, B, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success || !es.eigenvalues().allFinite())
    throw NotPositiveDefinite("generalized_sym_eig: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

/// u^T M v for an assembled bilinear form M.
inline double dot_weighted(const Vec& u, const Vec& v, const SpMat& M) {
  if (u.size() != M.rows() || v.size() != M.cols())
    throw DimensionMismatch("dot_weighted: dimension mismatch");
  return u.dot(M * v);
}

}  // namespace cdd
