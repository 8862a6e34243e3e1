#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "padicrd/expression.hpp"

namespace padicrd {

using Jacobian = std::array<std::array<double, 2>, 2>;  // [[f_u, f_v], [g_u, g_v]]

enum class KineticsKind { brusselator, cima, custom };

std::string to_string(KineticsKind k);

struct ValidityBox {
  double a;
  double b;
  bool contains(double u, double v) const { return u > a && u < b && v > a && v < b; }
  double width() const { return b - a; }
};

/**
 * Reaction pair (f, g) on the open box (a, b)^2.
 *
 * Built-in models carry closed-form steady states and Jacobians; custom
 * models are parsed expressions whose Jacobian is their symbolic derivative.
 * Evaluation through `reaction` is noexcept and IEEE (used inside parallel
 * kernels); `f`/`g` throw on division by zero.
 */
class KineticsModel {
 public:
  KineticsKind kind() const { return kind_; }
  const std::map<std::string, double>& params() const { return params_; }
  const ValidityBox& box() const { return box_; }
  const std::optional<std::pair<double, double>>& closed_form_steady_state() const { return steady_; }

  double f(double u, double v) const;
  double g(double u, double v) const;
  void reaction(double u, double v, double& fu, double& gv) const noexcept;
  Jacobian jacobian(double u, double v) const;

  // Expression strings: the parsed input for custom models, the printed formulas otherwise.
  const std::string& f_text() const { return f_text_; }
  const std::string& g_text() const { return g_text_; }
  // Symbolic partial derivatives (custom models only).
  const std::array<expr::ExprPtr, 4>& jacobian_exprs() const { return jac_exprs_; }

  KineticsModel with_box(ValidityBox box) const;

  friend KineticsModel brusselator(double A, double B);
  friend KineticsModel cima(double A, double B, double C);
  friend KineticsModel parse_kinetics(const std::string&, const std::string&,
                                      const std::map<std::string, double>&, std::optional<ValidityBox>,
                                      std::optional<std::pair<double, double>>);

 private:
  KineticsKind kind_ = KineticsKind::custom;
  std::map<std::string, double> params_;
  std::array<double, 3> c_{};  // A, B, C of the built-ins
  ValidityBox box_{-10.0, 10.0};
  std::optional<std::pair<double, double>> steady_;
  std::string f_text_, g_text_;
  expr::ExprPtr f_expr_, g_expr_;             // bound (parameters substituted)
  std::array<expr::ExprPtr, 4> jac_exprs_{};  // f_u, f_v, g_u, g_v
};

// f = A - (B+1) u + u^2 v, g = B u - u^2 v; steady state (A, B/A).
KineticsModel brusselator(double A, double B);

// f = A - u - 4uv/(1+u^2), g = BCu - Cuv/(1+u^2); steady state (A/(4B+1), B(1 + u0^2)).
KineticsModel cima(double A, double B, double C);

// Custom kinetics from expression strings. Without a box, the default is the
// steady state +/- 10 when `guess` lets one be found, otherwise (-10, 10).
KineticsModel parse_kinetics(const std::string& f_text, const std::string& g_text,
                             const std::map<std::string, double>& params,
                             std::optional<ValidityBox> box = {},
                             std::optional<std::pair<double, double>> guess = {});

// Box around a steady state: [min(u0,v0) - margin, max(u0,v0) + margin].
ValidityBox box_around(std::pair<double, double> steady, double margin = 10.0);

/// Closed form for built-ins; damped Newton from `guess` for custom models
/// (residual <= 1e-12, at most 100 iterations). Throws NumericalError on
/// non-convergence or when the result leaves the validity box.
std::pair<double, double> steady_state(const KineticsModel& model,
                                       std::optional<std::pair<double, double>> guess = {});

// Central-difference Jacobian with step h.
Jacobian finite_difference_jacobian(const KineticsModel& model, double u, double v, double h = 1e-6);

// Hypothesis-1 style check at the steady state: neither gradient of f nor g vanishes.
bool gradients_nonvanishing(const Jacobian& j);

}  // namespace padicrd
