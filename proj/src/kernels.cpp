#include "padicrd/kernels.hpp"

#include <cassert>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace padicrd::kernels {

namespace {

constexpr Eigen::Index kParallelRows = 128;

inline double row_dot(const RowMatrix& a, Eigen::Index i, std::span<const double> x) {
  const double* row = a.data() + i * a.cols();
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) s += row[j] * x[j];
  return s;
}

void accumulate(const RowMatrix& a, const Eigen::VectorXd& x, double w, Eigen::VectorXd& acc) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double* row = a.data() + i * a.cols();
    double s = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) s += row[j] * x[j];
    acc[i] += w * s;
  }
}

void convolution_row(std::span<const RowMatrix> factors, std::span<const Eigen::VectorXd> forcing,
                     double dt, std::size_t i, Eigen::VectorXd& out) {
  out = Eigen::VectorXd::Zero(forcing[0].size());
  if (i == 0) return;
  for (std::size_t m = 0; m <= i; ++m) {
    const double w = (m == 0 || m == i) ? 0.5 : 1.0;
    accumulate(factors[i - m], forcing[m], w, out);
  }
  out *= dt;
}

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void matvec_serial(const RowMatrix& a, std::span<const double> x, std::span<double> y) {
  assert(static_cast<Eigen::Index>(x.size()) == a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) y[i] = row_dot(a, i, x);
}

void matvec_parallel(const RowMatrix& a, std::span<const double> x, std::span<double> y) {
  const Eigen::Index rows = a.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < rows; ++i) y[i] = row_dot(a, i, x);
}

void matvec_add_serial(const RowMatrix& a, double alpha, std::span<const double> x, std::span<double> y) {
  for (Eigen::Index i = 0; i < a.rows(); ++i) y[i] += alpha * row_dot(a, i, x);
}

void matvec_add_parallel(const RowMatrix& a, double alpha, std::span<const double> x,
                         std::span<double> y) {
  const Eigen::Index rows = a.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < rows; ++i) y[i] += alpha * row_dot(a, i, x);
}

void matvec_add(const RowMatrix& a, double alpha, std::span<const double> x, std::span<double> y) {
  if (a.rows() >= kParallelRows && max_threads() > 1) {
    matvec_add_parallel(a, alpha, x, y);
  } else {
    matvec_add_serial(a, alpha, x, y);
  }
}

void reaction_serial(const PointwiseReaction& r, std::span<const double> u, std::span<const double> v,
                     std::span<double> fu, std::span<double> gv) {
  for (std::size_t i = 0; i < u.size(); ++i) r(u[i], v[i], fu[i], gv[i]);
}

void reaction_parallel(const PointwiseReaction& r, std::span<const double> u,
                       std::span<const double> v, std::span<double> fu, std::span<double> gv) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) r(u[i], v[i], fu[i], gv[i]);
}

void trapezoid_convolution_serial(std::span<const RowMatrix> factors,
                                  std::span<const Eigen::VectorXd> forcing, double dt,
                                  std::span<Eigen::VectorXd> out) {
  for (std::size_t i = 0; i < forcing.size(); ++i) convolution_row(factors, forcing, dt, i, out[i]);
}

void trapezoid_convolution_parallel(std::span<const RowMatrix> factors,
                                    std::span<const Eigen::VectorXd> forcing, double dt,
                                    std::span<Eigen::VectorXd> out) {
  const auto steps = static_cast<std::ptrdiff_t>(forcing.size());
  // Later rows carry more terms; dynamic scheduling balances the triangle.
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < steps; ++i) {
    convolution_row(factors, forcing, dt, static_cast<std::size_t>(i), out[i]);
  }
}

}  // namespace padicrd::kernels
