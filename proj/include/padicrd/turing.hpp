#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "padicrd/kinetics.hpp"
#include "padicrd/network.hpp"

namespace padicrd {

struct LinearStability {
  double trace;
  double det;
  bool t1;  // TrJ < 0
  bool t2;  // detJ > 0
  std::complex<double> lambda_plus;
  std::complex<double> lambda_minus;
};

LinearStability linear_stability(const Jacobian& j);

// h(kappa) = eps^2 d kappa^2 + eps kappa (d f_u + g_v) + det J.
double h_kappa(const Jacobian& j, double eps, double d, double kappa);

// Roots of lambda^2 - ((1+d) eps kappa + TrJ) lambda + h(kappa) = 0, lambda_plus
// having the larger real part.
std::pair<std::complex<double>, std::complex<double>> dispersion(const Jacobian& j, double eps, double d,
                                                                double kappa);

struct CriticalDiffusion {
  std::optional<double> d_c;
  // Real roots of f_u^2 d^2 + 2(2 f_v g_u - f_u g_v) d + g_v^2 = 0, ascending.
  std::vector<double> roots;
};

// Smallest positive root d* such that every d > d* satisfies T3 and T5.
// Throws ArgumentError when f_u = 0 (degenerate quadratic).
CriticalDiffusion critical_diffusion(const Jacobian& j);

struct InstabilityBand {
  double kappa1;  // kappa1 < kappa2 < 0
  double kappa2;
};

// Zeros of h when T3 and T5 hold; std::nullopt otherwise.
std::optional<InstabilityBand> instability_band(const Jacobian& j, double eps, double d);

// kappa_min = -(d f_u + g_v) / (2 eps d_c).
double kappa_min(const Jacobian& j, double eps, double d, double d_c);

// A level of the space hierarchy: finite M >= N, or X_infinity.
struct SpaceLevel {
  std::optional<unsigned> m;  // empty = infinity
  bool is_infinity() const { return !m.has_value(); }
  std::string name() const;
  static SpaceLevel infinity() { return {}; }
  static SpaceLevel level(unsigned m) { return {m}; }
};

enum class ModeStatus { stable, marginal, unstable };

struct ModeEntry {
  double kappa;
  int multiplicity;
  std::complex<double> lambda_plus;
  ModeStatus status;
};

struct SpaceVerdict {
  SpaceLevel space;
  std::vector<ModeEntry> modes;  // distinct nonzero spectral values
  std::vector<double> unstable;  // kappa values strictly inside the band
  bool pattern = false;
  std::vector<std::string> notes;
};

struct TuringReport {
  Jacobian jacobian{};
  std::pair<double, double> steady_state{};
  double eps = 0, d = 0;
  double trace = 0, det = 0;
  bool t1 = false, t2 = false, t3 = false, t4 = false, t5 = false;
  double t3_value = 0;  // d f_u + g_v
  double t5_value = 0;  // (d f_u + g_v)^2 - 4 d det J
  CriticalDiffusion critical;
  std::optional<InstabilityBand> band;
  std::optional<double> kappa_min;
  std::vector<SpaceVerdict> spaces;
  bool subset_monotone = true;  // unstable(X_M) subset of unstable(X_infinity)
};

// Band membership guard: kappa1 + tol < kappa < kappa2 - tol is unstable,
// within tol of an endpoint is marginal.
inline constexpr double kBandGuard = 1e-12;

TuringReport turing_check(const KineticsModel& model, double eps, double d, const NetworkEmbedding& embedding,
                          const std::vector<SpaceLevel>& levels,
                          std::optional<std::pair<double, double>> guess = {});

}  // namespace padicrd
