#pragma once

#include <iosfwd>

#include <Eigen/Sparse>

#include "glcn/space.hpp"

namespace glcn {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Real sparse matrix over the dofs of one component. Applied to a complex
/// coefficient vector it acts on the real and imaginary parts independently.
class SparseOperator {
 public:
  SparseOperator() = default;
  SparseOperator(SparseMatrix matrix, bool symmetric);

  const SparseMatrix& matrix() const { return matrix_; }
  int dimension() const { return static_cast<int>(matrix_.rows()); }
  bool symmetric() const { return symmetric_; }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& u) const;
  ComplexField apply(const ComplexField& u) const;

  /// (A u, v) = v^H A u.
  Complex pairing(const ComplexField& u, const ComplexField& v) const;

  /// max |A - A^T| over all entries.
  double max_asymmetry() const;

  /// Coordinate text: one "i j value" line per stored nonzero.
  void write_coordinate(std::ostream& os) const;

 private:
  SparseMatrix matrix_;
  bool symmetric_ = false;
};

}  // namespace glcn
