#include "padicrd/turing.hpp"

#include <algorithm>
#include <cmath>

#include "padicrd/errors.hpp"
#include "padicrd/operators.hpp"
#include "padicrd/spectral.hpp"

namespace padicrd {

LinearStability linear_stability(const Jacobian& j) {
  LinearStability s;
  s.trace = j[0][0] + j[1][1];
  s.det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
  s.t1 = s.trace < 0.0;
  s.t2 = s.det > 0.0;
  const auto root = std::sqrt(std::complex<double>(s.trace * s.trace - 4.0 * s.det, 0.0));
  s.lambda_plus = 0.5 * (s.trace + root);
  s.lambda_minus = 0.5 * (s.trace - root);
  return s;
}

double h_kappa(const Jacobian& j, double eps, double d, double kappa) {
  const double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
  return eps * eps * d * kappa * kappa + eps * kappa * (d * j[0][0] + j[1][1]) + det;
}

std::pair<std::complex<double>, std::complex<double>> dispersion(const Jacobian& j, double eps, double d,
                                                                double kappa) {
  const double b = (1.0 + d) * eps * kappa + j[0][0] + j[1][1];
  const double h = h_kappa(j, eps, d, kappa);
  const auto root = std::sqrt(std::complex<double>(b * b - 4.0 * h, 0.0));
  const std::complex<double> lp = 0.5 * (b + root);
  const std::complex<double> lm = 0.5 * (b - root);
  if (lm.real() > lp.real()) return {lm, lp};
  return {lp, lm};
}

CriticalDiffusion critical_diffusion(const Jacobian& j) {
  const double fu = j[0][0], fv = j[0][1], gu = j[1][0], gv = j[1][1];
  if (fu == 0.0) throw ArgumentError("critical_diffusion: f_u = 0 makes the d_c equation degenerate");
  const double a = fu * fu;
  const double b = 2.0 * (2.0 * fv * gu - fu * gv);
  const double c = gv * gv;
  CriticalDiffusion out;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return out;
  const double sq = std::sqrt(disc);
  // Cancellation-free pair of roots.
  const double q = -0.5 * (b + (b >= 0 ? sq : -sq));
  double r1 = q / a;
  double r2 = q != 0.0 ? c / q : r1;
  if (r1 > r2) std::swap(r1, r2);
  out.roots = {r1, r2};
  // The quadratic opens upwards, so T5 holds for every d > r2 exactly; T3
  // holds for every d > d* iff f_u > 0 and d* >= -g_v / f_u.
  for (double r : out.roots) {
    if (r <= 0.0) continue;
    const bool t5_beyond = r >= r2;
    const bool t3_beyond = fu > 0.0 && r * fu + gv >= 0.0;
    if (t5_beyond && t3_beyond) {
      out.d_c = r;
      break;
    }
  }
  return out;
}

std::optional<InstabilityBand> instability_band(const Jacobian& j, double eps, double d) {
  const double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
  const double s = d * j[0][0] + j[1][1];
  const double disc = s * s - 4.0 * d * det;
  if (!(s > 0.0) || !(disc > 0.0)) return std::nullopt;
  const double sq = std::sqrt(disc);
  const double k1 = -(s + sq) / (2.0 * d * eps);
  // (s - sq) = 4 d det / (s + sq) avoids cancellation when det is small.
  const double k2 = -(4.0 * d * det / (s + sq)) / (2.0 * d * eps);
  return InstabilityBand{k1, k2};
}

double kappa_min(const Jacobian& j, double eps, double d, double d_c) {
  return -(d * j[0][0] + j[1][1]) / (2.0 * eps * d_c);
}

std::string SpaceLevel::name() const { return m ? "X_" + std::to_string(*m) : "X_infinity"; }

namespace {

std::vector<EigenvalueGroup> nonzero_groups(const std::vector<double>& values) {
  SpectrumReport tmp;
  for (double v : values) {
    if (std::abs(v) > 1e-9) tmp.eigenvalues.push_back(v);
  }
  std::sort(tmp.eigenvalues.begin(), tmp.eigenvalues.end());
  return tmp.grouped(1e-9);
}

SpaceVerdict evaluate_space(const SpaceLevel& space, const std::vector<double>& spectrum, const Jacobian& j,
                            double eps, double d, const std::optional<InstabilityBand>& band, bool t_all) {
  SpaceVerdict out{space, {}, {}, false, {}};
  for (const auto& g : nonzero_groups(spectrum)) {
    ModeEntry m{g.value, g.multiplicity, dispersion(j, eps, d, g.value).first, ModeStatus::stable};
    if (band) {
      if (g.value > band->kappa1 + kBandGuard && g.value < band->kappa2 - kBandGuard) {
        m.status = ModeStatus::unstable;
        out.unstable.push_back(g.value);
      } else if (std::abs(g.value - band->kappa1) <= kBandGuard ||
                 std::abs(g.value - band->kappa2) <= kBandGuard) {
        m.status = ModeStatus::marginal;
      }
    }
    out.modes.push_back(m);
  }
  out.pattern = t_all && !out.unstable.empty();
  return out;
}

bool contains_value(const std::vector<double>& set, double v) {
  return std::any_of(set.begin(), set.end(), [&](double x) { return std::abs(x - v) <= 1e-9; });
}

}  // namespace

TuringReport turing_check(const KineticsModel& model, double eps, double d, const NetworkEmbedding& embedding,
                          const std::vector<SpaceLevel>& levels, std::optional<std::pair<double, double>> guess) {
  if (!embedding.graph().is_undirected_simple()) {
    throw ArgumentError("turing_check requires a symmetric adjacency matrix with zero diagonal");
  }
  if (!(eps > 0.0) || !(d > 0.0)) throw ArgumentError("turing_check needs eps > 0 and d > 0");
  TuringReport rep;
  rep.eps = eps;
  rep.d = d;
  rep.steady_state = steady_state(model, guess);
  rep.jacobian = model.jacobian(rep.steady_state.first, rep.steady_state.second);
  const auto& j = rep.jacobian;
  const auto ls = linear_stability(j);
  rep.trace = ls.trace;
  rep.det = ls.det;
  rep.t1 = ls.t1;
  rep.t2 = ls.t2;
  rep.t3_value = d * j[0][0] + j[1][1];
  rep.t3 = rep.t3_value > 0.0;
  rep.t4 = j[0][0] * j[1][1] < 0.0;
  rep.t5_value = rep.t3_value * rep.t3_value - 4.0 * d * rep.det;
  rep.t5 = rep.t5_value > 0.0;
  if (j[0][0] != 0.0) rep.critical = critical_diffusion(j);
  rep.band = instability_band(j, eps, d);
  if (rep.critical.d_c) rep.kappa_min = kappa_min(j, eps, d, *rep.critical.d_c);
  const bool t_all = rep.t1 && rep.t2 && rep.t3 && rep.t4 && rep.t5;

  const auto infinity_spec = spectrum_L_infinity(embedding).eigenvalues;
  const auto infinity_verdict =
      evaluate_space(SpaceLevel::infinity(), infinity_spec, j, eps, d, rep.band, t_all);
  std::optional<bool> level_n_pattern;

  for (const auto& space : levels) {
    if (space.is_infinity()) {
      rep.spaces.push_back(infinity_verdict);
      continue;
    }
    const unsigned m = *space.m;
    if (m < embedding.level()) {
      throw ArgumentError("level M = " + std::to_string(m) + " is below N = " + std::to_string(embedding.level()));
    }
    const auto spec = m == embedding.level() ? eig_symmetric(build_graph_laplacian(embedding).entries)
                                             : spectrum_L_M_computed(embedding, m);
    auto verdict = evaluate_space(space, spec.eigenvalues, j, eps, d, rep.band, t_all);
    if (m == embedding.level()) {
      level_n_pattern = verdict.pattern;
    } else {
      verdict.notes.push_back(
          "sigma(L_M) for M > N contains the wavelet eigenvalues -gamma_I in addition to sigma(L_N)");
      if (!level_n_pattern) {
        level_n_pattern = evaluate_space(SpaceLevel::level(embedding.level()),
                                         eig_symmetric(build_graph_laplacian(embedding).entries).eigenvalues,
                                         j, eps, d, rep.band, t_all)
                              .pattern;
      }
      if (verdict.pattern && !*level_n_pattern) {
        verdict.notes.push_back(
            "pattern in X_M but not in X_N: the claim that no pattern exists in X_M for every M >= N is "
            "not supported by the computed spectrum (a -gamma_I mode lies in the band)");
      }
    }
    for (double k : verdict.unstable) {
      if (!contains_value(infinity_verdict.unstable, k)) rep.subset_monotone = false;
    }
    rep.spaces.push_back(std::move(verdict));
  }
  return rep;
}

}  // namespace padicrd
