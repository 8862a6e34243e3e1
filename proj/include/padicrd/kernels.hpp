#pragma once

// Dense inner loops shared by the integrators and the Picard verifier.
//
// Each kernel comes as a serial reference and an OpenMP variant. The
// parallel variants split work only over independent output rows/times, so
// every output element is accumulated in the same order as the serial
// version and results are bit-identical for any thread count.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace padicrd::kernels {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

int max_threads();

// y = a * x
void matvec_serial(const RowMatrix& a, std::span<const double> x, std::span<double> y);
void matvec_parallel(const RowMatrix& a, std::span<const double> x, std::span<double> y);

// y += alpha * a * x
void matvec_add_serial(const RowMatrix& a, double alpha, std::span<const double> x, std::span<double> y);
void matvec_add_parallel(const RowMatrix& a, double alpha, std::span<const double> x,
                         std::span<double> y);

// Picks the parallel path only above a size where threading pays off.
void matvec_add(const RowMatrix& a, double alpha, std::span<const double> x, std::span<double> y);

using PointwiseReaction = std::function<void(double u, double v, double& fu, double& gv)>;

// (fu[i], gv[i]) = reaction(u[i], v[i]) for every site.
void reaction_serial(const PointwiseReaction& r, std::span<const double> u, std::span<const double> v,
                     std::span<double> fu, std::span<double> gv);
void reaction_parallel(const PointwiseReaction& r, std::span<const double> u,
                       std::span<const double> v, std::span<double> fu, std::span<double> gv);

/**
 * Composite-trapezoid semigroup convolution on a uniform mesh t_i = i dt:
 *
 *   out[i] = dt * sum_{m=0..i} w_{im} factors[i-m] * forcing[m],
 *
 * with w = 1/2 at m = 0 and m = i (and out[0] = 0). `factors[k]` is the
 * semigroup at time k dt. Cost is O(steps^2) matrix-vector products.
 */
void trapezoid_convolution_serial(std::span<const RowMatrix> factors,
                                  std::span<const Eigen::VectorXd> forcing, double dt,
                                  std::span<Eigen::VectorXd> out);
void trapezoid_convolution_parallel(std::span<const RowMatrix> factors,
                                    std::span<const Eigen::VectorXd> forcing, double dt,
                                    std::span<Eigen::VectorXd> out);

}  // namespace padicrd::kernels
