#include "glcn/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <utility>

namespace glcn {

SparseOperator::SparseOperator(SparseMatrix matrix, bool symmetric)
    : matrix_(std::move(matrix)), symmetric_(symmetric) {
  matrix_.makeCompressed();
}

Eigen::VectorXcd SparseOperator::apply(const Eigen::VectorXcd& u) const {
  Eigen::VectorXcd out(u.size());
  out.real() = matrix_ * u.real();
  out.imag() = matrix_ * u.imag();
  return out;
}

ComplexField SparseOperator::apply(const ComplexField& u) const {
  return ComplexField(u.space_ptr(), apply(u.coeffs()));
}

Complex SparseOperator::pairing(const ComplexField& u,
                                const ComplexField& v) const {
  return v.coeffs().dot(apply(u.coeffs()));
}

double SparseOperator::max_asymmetry() const {
  const SparseMatrix transpose = matrix_.transpose();
  const SparseMatrix diff = matrix_ - transpose;
  double worst = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) {
      worst = std::max(worst, std::abs(it.value()));
    }
  }
  return worst;
}

void SparseOperator::write_coordinate(std::ostream& os) const {
  const auto precision = os.precision(17);
  for (int k = 0; k < matrix_.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(matrix_, k); it; ++it) {
      os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
  os.precision(precision);
}

}  // namespace glcn
