#include "padicrd/kinetics.hpp"

#include <algorithm>
#include <cmath>

namespace padicrd {

std::string to_string(KineticsKind k) {
  switch (k) {
    case KineticsKind::brusselator: return "brusselator";
    case KineticsKind::cima: return "cima";
    case KineticsKind::custom: return "custom";
  }
  return "unknown";
}

double KineticsModel::f(double u, double v) const {
  if (kind_ == KineticsKind::custom) return expr::evaluate(f_expr_, u, v);
  double fu = 0, gv = 0;
  reaction(u, v, fu, gv);
  return fu;
}

double KineticsModel::g(double u, double v) const {
  if (kind_ == KineticsKind::custom) return expr::evaluate(g_expr_, u, v);
  double fu = 0, gv = 0;
  reaction(u, v, fu, gv);
  return gv;
}

void KineticsModel::reaction(double u, double v, double& fu, double& gv) const noexcept {
  switch (kind_) {
    case KineticsKind::brusselator: {
      const double A = c_[0], B = c_[1];
      const double u2v = u * u * v;
      fu = A - (B + 1.0) * u + u2v;
      gv = B * u - u2v;
      return;
    }
    case KineticsKind::cima: {
      const double A = c_[0], B = c_[1], C = c_[2];
      const double q = u * v / (1.0 + u * u);
      fu = A - u - 4.0 * q;
      gv = B * C * u - C * q;
      return;
    }
    case KineticsKind::custom:
      fu = expr::evaluate_unchecked(*f_expr_, u, v);
      gv = expr::evaluate_unchecked(*g_expr_, u, v);
      return;
  }
}

Jacobian KineticsModel::jacobian(double u, double v) const {
  switch (kind_) {
    case KineticsKind::brusselator: {
      const double B = c_[1];
      return {{{-(B + 1.0) + 2.0 * u * v, u * u}, {B - 2.0 * u * v, -u * u}}};
    }
    case KineticsKind::cima: {
      const double B = c_[1], C = c_[2];
      const double s = 1.0 + u * u;
      const double dq_du = v * (1.0 - u * u) / (s * s);
      const double dq_dv = u / s;
      return {{{-1.0 - 4.0 * dq_du, -4.0 * dq_dv}, {B * C - C * dq_du, -C * dq_dv}}};
    }
    case KineticsKind::custom:
      return {{{expr::evaluate(jac_exprs_[0], u, v), expr::evaluate(jac_exprs_[1], u, v)},
               {expr::evaluate(jac_exprs_[2], u, v), expr::evaluate(jac_exprs_[3], u, v)}}};
  }
  return {};
}

KineticsModel KineticsModel::with_box(ValidityBox box) const {
  if (!(box.a < box.b)) throw ArgumentError("validity box needs a < b");
  auto m = *this;
  m.box_ = box;
  return m;
}

ValidityBox box_around(std::pair<double, double> steady, double margin) {
  return {std::min(steady.first, steady.second) - margin, std::max(steady.first, steady.second) + margin};
}

KineticsModel brusselator(double A, double B) {
  if (!(A > 0.0) || !(B > 0.0)) throw ArgumentError("brusselator needs A > 0 and B > 0");
  KineticsModel m;
  m.kind_ = KineticsKind::brusselator;
  m.params_ = {{"A", A}, {"B", B}};
  m.c_ = {A, B, 0.0};
  m.steady_ = std::pair{A, B / A};
  m.box_ = box_around(*m.steady_);
  m.f_text_ = "A-(B+1)*u+u^2*v";
  m.g_text_ = "B*u-u^2*v";
  return m;
}

KineticsModel cima(double A, double B, double C) {
  if (!(A > 0.0) || !(B > 0.0) || !(C > 0.0)) throw ArgumentError("cima needs A, B, C > 0");
  KineticsModel m;
  m.kind_ = KineticsKind::cima;
  m.params_ = {{"A", A}, {"B", B}, {"C", C}};
  m.c_ = {A, B, C};
  const double u0 = A / (4.0 * B + 1.0);
  m.steady_ = std::pair{u0, B * (1.0 + u0 * u0)};
  m.box_ = box_around(*m.steady_);
  m.f_text_ = "A-u-4*u*v/(1+u^2)";
  m.g_text_ = "B*C*u-C*u*v/(1+u^2)";
  return m;
}

KineticsModel parse_kinetics(const std::string& f_text, const std::string& g_text,
                             const std::map<std::string, double>& params, std::optional<ValidityBox> box,
                             std::optional<std::pair<double, double>> guess) {
  KineticsModel m;
  m.kind_ = KineticsKind::custom;
  m.params_ = params;
  m.f_text_ = f_text;
  m.g_text_ = g_text;
  m.f_expr_ = expr::bind(expr::parse(f_text), params);
  m.g_expr_ = expr::bind(expr::parse(g_text), params);
  m.jac_exprs_ = {expr::differentiate(m.f_expr_, "u"), expr::differentiate(m.f_expr_, "v"),
                  expr::differentiate(m.g_expr_, "u"), expr::differentiate(m.g_expr_, "v")};
  if (box) {
    m.box_ = *box;
  } else if (guess) {
    m.box_ = {-1e300, 1e300};
    m.box_ = box_around(steady_state(m, guess));
  }
  return m;
}

std::pair<double, double> steady_state(const KineticsModel& model,
                                       std::optional<std::pair<double, double>> guess) {
  if (const auto& s = model.closed_form_steady_state()) {
    if (!model.box().contains(s->first, s->second)) {
      throw NumericalError("steady state lies outside the validity box");
    }
    return *s;
  }
  if (!guess) throw ArgumentError("custom kinetics need an initial guess for the steady state");
  double u = guess->first, v = guess->second;
  auto residual = [&](double uu, double vv) {
    double fu = 0, gv = 0;
    model.reaction(uu, vv, fu, gv);
    return std::pair{fu, gv};
  };
  auto [fu, gv] = residual(u, v);
  for (int it = 0; it < 100; ++it) {
    const double r = std::max(std::abs(fu), std::abs(gv));
    if (r <= 1e-12) {
      if (!model.box().contains(u, v)) throw NumericalError("steady state lies outside the validity box");
      return {u, v};
    }
    const auto j = model.jacobian(u, v);
    const double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    if (det == 0.0 || !std::isfinite(det)) throw NumericalError("Newton: singular Jacobian");
    const double du = (j[1][1] * fu - j[0][1] * gv) / det;
    const double dv = (-j[1][0] * fu + j[0][0] * gv) / det;
    // Backtrack until the residual decreases.
    double step = 1.0;
    for (int k = 0; k < 30; ++k) {
      const auto [nf, ng] = residual(u - step * du, v - step * dv);
      if (std::isfinite(nf) && std::isfinite(ng) && std::max(std::abs(nf), std::abs(ng)) < r) {
        u -= step * du;
        v -= step * dv;
        fu = nf;
        gv = ng;
        break;
      }
      step *= 0.5;
      if (k == 29) throw NumericalError("Newton: line search failed");
    }
  }
  throw NumericalError("Newton: no convergence in 100 iterations");
}

Jacobian finite_difference_jacobian(const KineticsModel& model, double u, double v, double h) {
  Jacobian j{};
  double fp, gp, fm, gm;
  model.reaction(u + h, v, fp, gp);
  model.reaction(u - h, v, fm, gm);
  j[0][0] = (fp - fm) / (2 * h);
  j[1][0] = (gp - gm) / (2 * h);
  model.reaction(u, v + h, fp, gp);
  model.reaction(u, v - h, fm, gm);
  j[0][1] = (fp - fm) / (2 * h);
  j[1][1] = (gp - gm) / (2 * h);
  return j;
}

bool gradients_nonvanishing(const Jacobian& j) {
  return (j[0][0] != 0.0 || j[0][1] != 0.0) && (j[1][0] != 0.0 || j[1][1] != 0.0);
}

}  // namespace padicrd
