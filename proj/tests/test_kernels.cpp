#include <gtest/gtest.h>

#include <random>

#include "padicrd/kernels.hpp"

using namespace padicrd::kernels;

namespace {

RowMatrix random_matrix(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  RowMatrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = u(rng);
  }
  return a;
}

Eigen::VectorXd random_vector(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::VectorXd x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

std::span<const double> cs(const Eigen::VectorXd& x) { return {x.data(), static_cast<std::size_t>(x.size())}; }
std::span<double> ms(Eigen::VectorXd& x) { return {x.data(), static_cast<std::size_t>(x.size())}; }

}  // namespace

TEST(Kernels, MatvecParallelIsBitIdentical) {
  for (Eigen::Index n : {1, 7, 128, 513}) {
    const auto a = random_matrix(n, 1 + n);
    const auto x = random_vector(n, 2 + n);
    Eigen::VectorXd ys(n), yp(n);
    matvec_serial(a, cs(x), ms(ys));
    matvec_parallel(a, cs(x), ms(yp));
    EXPECT_EQ(ys, yp);
    EXPECT_LT((ys - a * x).cwiseAbs().maxCoeff(), 1e-12);
    Eigen::VectorXd zs = x, zp = x;
    matvec_add_serial(a, 0.5, cs(x), ms(zs));
    matvec_add_parallel(a, 0.5, cs(x), ms(zp));
    EXPECT_EQ(zs, zp);
    EXPECT_LT((zs - (x + 0.5 * a * x)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Kernels, ReactionParallelIsBitIdentical) {
  const PointwiseReaction r = [](double u, double v, double& f, double& g) {
    f = 2.0 - 5.5 * u + u * u * v;
    g = 4.5 * u - u * u * v;
  };
  const auto u = random_vector(1000, 3), v = random_vector(1000, 4);
  Eigen::VectorXd fs(1000), gs(1000), fp(1000), gp(1000);
  reaction_serial(r, cs(u), cs(v), ms(fs), ms(gs));
  reaction_parallel(r, cs(u), cs(v), ms(fp), ms(gp));
  EXPECT_EQ(fs, fp);
  EXPECT_EQ(gs, gp);
}

TEST(Kernels, TrapezoidConvolution) {
  const Eigen::Index n = 6;
  const std::size_t steps = 40;
  const double dt = 0.01;
  std::vector<RowMatrix> factors;
  std::vector<Eigen::VectorXd> forcing;
  for (std::size_t k = 0; k <= steps; ++k) {
    factors.push_back(random_matrix(n, 10 + k));
    forcing.push_back(random_vector(n, 100 + k));
  }
  std::vector<Eigen::VectorXd> serial(steps + 1), parallel(steps + 1);
  trapezoid_convolution_serial(factors, forcing, dt, serial);
  trapezoid_convolution_parallel(factors, forcing, dt, parallel);
  for (std::size_t i = 0; i <= steps; ++i) EXPECT_EQ(serial[i], parallel[i]) << i;
  EXPECT_EQ(serial[0], Eigen::VectorXd::Zero(n));
  // direct evaluation of the composite trapezoid sum
  for (std::size_t i = 1; i <= steps; ++i) {
    Eigen::VectorXd ref = Eigen::VectorXd::Zero(n);
    for (std::size_t m = 0; m <= i; ++m) {
      const double w = (m == 0 || m == i) ? 0.5 : 1.0;
      ref += w * dt * (factors[i - m] * forcing[m]);
    }
    EXPECT_LT((serial[i] - ref).cwiseAbs().maxCoeff(), 1e-13) << i;
  }
}

TEST(Kernels, ConvolutionIntegratesConstantsExactly) {
  // E = identity, F = 1: the integral of 1 over [0, t_i] is t_i
  const std::size_t steps = 10;
  std::vector<RowMatrix> factors(steps + 1, RowMatrix::Identity(2, 2));
  std::vector<Eigen::VectorXd> forcing(steps + 1, Eigen::VectorXd::Ones(2));
  std::vector<Eigen::VectorXd> out(steps + 1);
  trapezoid_convolution_parallel(factors, forcing, 0.1, out);
  for (std::size_t i = 0; i <= steps; ++i) EXPECT_NEAR(out[i][0], 0.1 * static_cast<double>(i), 1e-15);
}
