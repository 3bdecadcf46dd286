#include "glcn/basis.hpp"

#include <cmath>

#include "glcn/error.hpp"

namespace glcn {

namespace {

double ipow(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

}  // namespace

ReferenceBasis::ReferenceBasis(int degree) : degree_(degree) {
  if (degree < 1) throw InvalidArgument("polynomial degree must be >= 1");
  for (int j = 0; j <= degree; ++j) {
    for (int i = 0; i + j <= degree; ++i) {
      nodes_.push_back({static_cast<double>(i) / degree,
                        static_cast<double>(j) / degree});
    }
  }
  for (int total = 0; total <= degree; ++total) {
    for (int b = 0; b <= total; ++b) monomials_.push_back({total - b, b});
  }
  const int n = size();
  Eigen::MatrixXd vandermonde(n, n);
  for (int r = 0; r < n; ++r) {
    for (int m = 0; m < n; ++m) {
      vandermonde(r, m) =
          ipow(nodes_[r].x, monomials_[m][0]) * ipow(nodes_[r].y, monomials_[m][1]);
    }
  }
  coefficients_ = vandermonde.fullPivLu().inverse();
}

void ReferenceBasis::values(Point ref, std::span<double> out) const {
  const int n = size();
  Eigen::VectorXd mono(n);
  for (int m = 0; m < n; ++m) {
    mono[m] = ipow(ref.x, monomials_[m][0]) * ipow(ref.y, monomials_[m][1]);
  }
  Eigen::Map<Eigen::VectorXd>(out.data(), n) = coefficients_.transpose() * mono;
}

Eigen::VectorXd ReferenceBasis::values(Point ref) const {
  Eigen::VectorXd v(size());
  values(ref, std::span<double>(v.data(), v.size()));
  return v;
}

void ReferenceBasis::gradients(Point ref,
                               std::span<std::array<double, 2>> out) const {
  const int n = size();
  Eigen::VectorXd dx(n);
  Eigen::VectorXd dy(n);
  for (int m = 0; m < n; ++m) {
    const auto [a, b] = monomials_[m];
    dx[m] = a == 0 ? 0.0 : a * ipow(ref.x, a - 1) * ipow(ref.y, b);
    dy[m] = b == 0 ? 0.0 : b * ipow(ref.x, a) * ipow(ref.y, b - 1);
  }
  const Eigen::VectorXd gx = coefficients_.transpose() * dx;
  const Eigen::VectorXd gy = coefficients_.transpose() * dy;
  for (int i = 0; i < n; ++i) out[i] = {gx[i], gy[i]};
}

Tabulation tabulate(const ReferenceBasis& basis, std::span<const Point> points) {
  const int nq = static_cast<int>(points.size());
  const int nb = basis.size();
  Tabulation tab{Eigen::MatrixXd(nq, nb), Eigen::MatrixXd(nq, nb),
                 Eigen::MatrixXd(nq, nb)};
  std::vector<double> v(nb);
  std::vector<std::array<double, 2>> g(nb);
  for (int q = 0; q < nq; ++q) {
    basis.values(points[q], v);
    basis.gradients(points[q], g);
    for (int i = 0; i < nb; ++i) {
      tab.values(q, i) = v[i];
      tab.d_xi(q, i) = g[i][0];
      tab.d_eta(q, i) = g[i][1];
    }
  }
  return tab;
}

}  // namespace glcn
