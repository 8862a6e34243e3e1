// Serial vs OpenMP kernels on level-M operators of a cycle graph.

#include <benchmark/benchmark.h>

#include <vector>

#include "padicrd/kernels.hpp"
#include "padicrd/operators.hpp"

using namespace padicrd;

namespace {

kernels::RowMatrix level_operator(unsigned extra) {
  const auto e = embed(Graph::cycle(16));
  return build_full_L_M(refine(e, e.level() + extra)).entries;
}

template <bool Parallel>
void BM_Matvec(benchmark::State& state) {
  const auto a = level_operator(static_cast<unsigned>(state.range(0)));
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(a.rows(), 0, 1);
  Eigen::VectorXd y(a.rows());
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  const std::span<double> ys(y.data(), static_cast<std::size_t>(y.size()));
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::matvec_parallel(a, xs, ys);
    } else {
      kernels::matvec_serial(a, xs, ys);
    }
    benchmark::DoNotOptimize(y.data());
  }
  state.counters["sites"] = static_cast<double>(a.rows());
}

template <bool Parallel>
void BM_Trapezoid(benchmark::State& state) {
  const auto a = level_operator(static_cast<unsigned>(state.range(0)));
  const std::size_t steps = 64;
  std::vector<kernels::RowMatrix> factors;
  std::vector<Eigen::VectorXd> forcing;
  for (std::size_t k = 0; k <= steps; ++k) {
    factors.push_back(semigroup_exp(a, 1.0, 0.01 * static_cast<double>(k)));
    forcing.push_back(Eigen::VectorXd::Constant(a.rows(), 1.0 / (1.0 + static_cast<double>(k))));
  }
  std::vector<Eigen::VectorXd> out(steps + 1);
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::trapezoid_convolution_parallel(factors, forcing, 0.01, out);
    } else {
      kernels::trapezoid_convolution_serial(factors, forcing, 0.01, out);
    }
    benchmark::DoNotOptimize(out.back().data());
  }
  state.counters["sites"] = static_cast<double>(a.rows());
}

}  // namespace

BENCHMARK(BM_Matvec<false>)->Name("matvec/serial")->DenseRange(2, 6, 2);
BENCHMARK(BM_Matvec<true>)->Name("matvec/parallel")->DenseRange(2, 6, 2)->UseRealTime();
BENCHMARK(BM_Trapezoid<false>)->Name("trapezoid/serial")->DenseRange(1, 3);
BENCHMARK(BM_Trapezoid<true>)->Name("trapezoid/parallel")->DenseRange(1, 3)->UseRealTime();

BENCHMARK_MAIN();
