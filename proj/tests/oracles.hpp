#pragma once

// Reference computations used only by the tests. None of them call the
// library's numerical code paths.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Cyclic Jacobi rotations; eigenvalues of a symmetric matrix, ascending.
inline std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a) {
  const auto n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    }
    if (off < 1e-30) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(out.begin(), out.end());
  return out;
}

// e^{t a} by Taylor series on a / 2^s followed by s squarings.
inline Eigen::MatrixXd taylor_exp(const Eigen::MatrixXd& a, double t) {
  Eigen::MatrixXd x = a * t;
  double norm = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) norm = std::max(norm, x.row(i).cwiseAbs().sum());
  int s = 0;
  while (norm > 0.5) {
    norm /= 2.0;
    ++s;
  }
  x /= std::pow(2.0, s);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  Eigen::MatrixXd sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  for (int k = 0; k < s; ++k) sum = sum * sum;
  return sum;
}

// Roots of a x^2 + b x + c by the schoolbook formula, ascending.
inline std::pair<double, double> quadratic_roots(double a, double b, double c) {
  const double sq = std::sqrt(b * b - 4.0 * a * c);
  const double r1 = (-b - sq) / (2.0 * a), r2 = (-b + sq) / (2.0 * a);
  return {std::min(r1, r2), std::max(r1, r2)};
}

// Growth rate of the mode kappa: larger root of
// lambda^2 - ((1+d) eps kappa + tr) lambda + h = 0, real part.
inline double lambda_plus(double fu, double fv, double gu, double gv, double eps, double d, double kappa) {
  const double tr = fu + gv, det = fu * gv - fv * gu;
  const double b = (1.0 + d) * eps * kappa + tr;
  const double h = eps * eps * d * kappa * kappa + eps * kappa * (d * fu + gv) + det;
  const std::complex<double> root = std::sqrt(std::complex<double>(b * b - 4.0 * h));
  return std::max((0.5 * (b + root)).real(), (0.5 * (b - root)).real());
}

// Little-endian base-p digits of value at the given precision.
inline std::vector<std::uint32_t> digits_of(std::uint64_t value, std::uint32_t p, unsigned precision) {
  std::vector<std::uint32_t> d(precision);
  for (unsigned i = 0; i < precision; ++i) {
    d[i] = static_cast<std::uint32_t>(value % p);
    value /= p;
  }
  return d;
}

// Level-M operator entries by Haar quadrature of the kernel p^N A_{JK}:
// each level-M ball is split into p^extra finer balls of volume p^{-M-extra}.
inline Eigen::MatrixXd quadrature_L_M(const Eigen::MatrixXi& adj, std::uint32_t p, unsigned n_level,
                                      unsigned m_level, unsigned extra = 2) {
  const int n = static_cast<int>(adj.rows());
  const auto per = static_cast<int>(std::pow(p, m_level - n_level));
  const auto fine = static_cast<int>(std::pow(p, extra));
  const double pn = std::pow(static_cast<double>(p), n_level);
  const double vol = std::pow(static_cast<double>(p), -static_cast<double>(m_level + extra));
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n * per, n * per);
  for (int j = 0; j < n; ++j) {
    const int gamma = adj.row(j).sum();
    for (int a = 0; a < per; ++a) {
      for (int i = 0; i < n; ++i) {
        for (int b = 0; b < per; ++b) {
          double integral = 0.0;
          for (int f = 0; f < fine; ++f) integral += pn * adj(j, i) * vol;
          out(j * per + a, i * per + b) = integral;
        }
      }
      out(j * per + a, j * per + a) -= gamma;
    }
  }
  return out;
}

}  // namespace oracle
