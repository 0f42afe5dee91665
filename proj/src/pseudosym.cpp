#include "nf/pseudosym.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "nf/derive.hpp"

namespace nf {

namespace {

constexpr double kDegenerateFloor = 1e-10;

const Tensor& sigma_of(const ConditionSpec& cond, const PointFrame& f) {
  if (!condition_uses_power(cond.kind)) return f.metric.g;
  if (cond.ell < 0 || cond.ell >= static_cast<int>(f.s_pow.size()))
    throw std::invalid_argument("Ricci power not cached for this frame");
  return f.s_pow[static_cast<std::size_t>(cond.ell)];
}

FitReport project_fit(const Tensor& lhs, const Tensor& rhs, const std::vector<double>& point) {
  FitReport rep;
  rep.point = point;
  rep.lhs_mag = lhs.max_abs();
  rep.rhs_mag = rhs.max_abs();
  rep.degenerate = rep.lhs_mag < kDegenerateFloor && rep.rhs_mag < kDegenerateFloor;
  if (rep.degenerate) {
    rep.residual = rep.lhs_mag;
    return rep;
  }
  if (rep.rhs_mag < kDegenerateFloor) {
    rep.L = 0.0;
    rep.residual = rep.lhs_mag;
    return rep;
  }
  const double fitted = dot(lhs, rhs) / dot(rhs, rhs);
  rep.L = fitted;
  rep.residual = max_abs_diff(lhs, scale(rhs, fitted));
  return rep;
}

}  // namespace

bool condition_uses_power(ConditionKind k) {
  return k == ConditionKind::TT_Sl || k == ConditionKind::TRicciT_Sl;
}

bool condition_uses_ricci(ConditionKind k) {
  return k == ConditionKind::TRicciT_g || k == ConditionKind::TRicciT_Sl;
}

FitReport fit_L(const ConditionSpec& cond, const PointFrame& f) {
  const Tensor ta04 = build_T(f, cond.ta);
  const Tensor b_op = curv_op_from_04(ta04, f.metric);
  const Tensor k_in =
      condition_uses_ricci(cond.kind) ? ricci_of_T(f, cond.tb) : build_T(f, cond.tb);
  const Tensor lhs = derive(b_op, k_in);
  const Tensor rhs = q_op(sigma_of(cond, f), k_in);
  return project_fit(lhs, rhs, f.p);
}

ClassificationReport classify(const PointFrame& f) {
  ClassificationReport rep;
  rep.r = f.r;
  const int n = f.n;
  const auto& g = f.metric.g;
  const auto& S = f.ricci;
  rep.einstein_residual = max_abs_diff(S, scale(g, f.r / n));
  rep.k_einstein_residual = max_abs_diff(S, scale(g, f.k * (n - 1)));
  if (!f.has_xi) {
    rep.eta_alpha = dot(S, g) / dot(g, g);
    rep.eta_beta = 0.0;
    rep.eta_residual = max_abs_diff(S, scale(g, rep.eta_alpha));
    return rep;
  }
  Tensor h(n, {Variance::Co, Variance::Co});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h(i, j) = f.eta(i) * f.eta(j);
  Eigen::Matrix2d a;
  a << dot(g, g), dot(g, h), dot(g, h), dot(h, h);
  Eigen::Vector2d b(dot(S, g), dot(S, h));
  const Eigen::Vector2d x = a.fullPivLu().solve(b);
  rep.eta_alpha = x(0);
  rep.eta_beta = x(1);
  rep.eta_residual = max_abs_diff(S, add(scale(g, rep.eta_alpha), scale(h, rep.eta_beta)));
  return rep;
}

double master_identity_check(const ConditionSpec& cond, const PointFrame& f, double L,
                             unsigned seed) {
  const int n = f.n;
  std::mt19937 rng(seed * 2654435761u + 99u);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  std::vector<double> xi(static_cast<std::size_t>(n));
  if (f.has_xi) {
    for (int i = 0; i < n; ++i) xi[static_cast<std::size_t>(i)] = f.xi(i);
  } else {
    for (double& v : xi) v = u(rng);
  }

  const Tensor ta04 = build_T(f, cond.ta);
  const Tensor& sigma = sigma_of(cond, f);
  const auto& ginv = f.metric.g_inv;
  const bool ricci_kind = condition_uses_ricci(cond.kind);
  const Tensor kt = ricci_kind ? ricci_of_T(f, cond.tb) : build_T(f, cond.tb);

  // p_xz[c,z,v] = T_a(xi, e_c, e_z, e_v); per probe X this contracts to the
  // endomorphism A = T_a(xi, X) with one metric raise.
  Tensor p_xz(n, {Variance::Co, Variance::Co, Variance::Co});
  for (int c = 0; c < n; ++c)
    for (int z = 0; z < n; ++z)
      for (int v = 0; v < n; ++v) {
        double s = 0.0;
        for (int w = 0; w < n; ++w) s += ta04(w, c, z, v) * xi[static_cast<std::size_t>(w)];
        p_xz(c, z, v) = s;
      }

  auto sig = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        s += sigma(i, j) * a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
    return s;
  };
  auto k4 = [&](const std::vector<double>& a, const std::vector<double>& b,
                const std::vector<double>& c, const std::vector<double>& d) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          for (int m = 0; m < n; ++m)
            s += kt(i, j, l, m) * a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)] *
                 c[static_cast<std::size_t>(l)] * d[static_cast<std::size_t>(m)];
    return s;
  };
  auto k2 = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        s += kt(i, j) * a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
    return s;
  };
  auto draw = [&] {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& x : v) x = u(rng);
    return v;
  };

  double worst = 0.0;
  for (int trial = 0; trial < 6; ++trial) {
    const auto x_probe = draw();
    // A[i][z] applied to Z gives the component i of T_a(xi, X)Z.
    std::vector<std::vector<double>> a_mat(static_cast<std::size_t>(n),
                                           std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i)
      for (int z = 0; z < n; ++z) {
        double s = 0.0;
        for (int c = 0; c < n; ++c)
          for (int v = 0; v < n; ++v)
            s += ginv(i, v) * p_xz(c, z, v) * x_probe[static_cast<std::size_t>(c)];
        a_mat[static_cast<std::size_t>(i)][static_cast<std::size_t>(z)] = s;
      }
    auto apply = [&](const std::vector<double>& vec) {
      std::vector<double> out(static_cast<std::size_t>(n), 0.0);
      for (int i = 0; i < n; ++i)
        for (int z = 0; z < n; ++z)
          out[static_cast<std::size_t>(i)] +=
              a_mat[static_cast<std::size_t>(i)][static_cast<std::size_t>(z)] *
              vec[static_cast<std::size_t>(z)];
      return out;
    };

    double lhs = 0.0, rhs = 0.0;
    if (!ricci_kind) {
      const auto uu = draw(), vv = draw(), ww = draw();
      lhs = -k4(apply(uu), vv, ww, xi) - k4(uu, apply(vv), ww, xi) -
            k4(uu, vv, apply(ww), xi) - k4(uu, vv, ww, apply(xi));
      rhs = L * (-sig(x_probe, uu) * k4(xi, vv, ww, xi) + sig(xi, uu) * k4(x_probe, vv, ww, xi) -
                 sig(x_probe, vv) * k4(uu, xi, ww, xi) + sig(xi, vv) * k4(uu, x_probe, ww, xi) -
                 sig(x_probe, ww) * k4(uu, vv, xi, xi) + sig(xi, ww) * k4(uu, vv, x_probe, xi) -
                 sig(x_probe, xi) * k4(uu, vv, ww, xi) + sig(xi, xi) * k4(uu, vv, ww, x_probe));
    } else {
      const auto yy = draw(), uu = draw();
      lhs = -k2(apply(yy), uu) - k2(yy, apply(uu));
      rhs = L * (-sig(x_probe, yy) * k2(xi, uu) + sig(xi, yy) * k2(x_probe, uu) -
                 sig(x_probe, uu) * k2(yy, xi) + sig(xi, uu) * k2(yy, x_probe));
    }
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

FitReport dichotomy_fit(const PointFrame& f, const CoeffVector& c) {
  CoeffVector curv{};
  curv[0] = 1.0;
  return fit_L({ConditionKind::TT_g, curv, c, 1}, f);
}

DichotomyReport dichotomy_check(const PointFrame& f, const CoeffVector& c, const FitReport& fit,
                                double tol_l, double tol_res) {
  DichotomyReport rep;
  rep.precondition_sum = c[0] + c[5] + c[6];
  rep.contraction_sum = c[0] + c[2] + c[3] + f.n * c[4] + c[5] + c[6];
  const auto cls = classify(f);
  rep.k_einstein_residual = cls.k_einstein_residual;
  rep.eta_residual = cls.eta_residual;
  if (fit.degenerate)
    rep.l_gap = 0.0;  // condition holds at every L, k included
  else if (fit.L)
    rep.l_gap = std::abs(*fit.L - f.k);
  else
    rep.l_gap = std::numeric_limits<double>::infinity();

  if (std::abs(rep.precondition_sum) < 1e-12) {
    rep.verdict = DichotomyVerdict::PreconditionFailed;
    return rep;
  }
  const double mag = std::max(1.0, f.ricci.max_abs());
  if (rep.k_einstein_residual < tol_res * mag) {
    rep.verdict = DichotomyVerdict::EinsteinBranch;
    return rep;
  }
  if (rep.l_gap < tol_l) {
    rep.verdict = DichotomyVerdict::LBranch;
    return rep;
  }
  if (std::abs(rep.contraction_sum) < 1e-12 && rep.eta_residual < tol_res * mag) {
    rep.verdict = DichotomyVerdict::EtaEinsteinBranch;
    return rep;
  }
  rep.verdict = DichotomyVerdict::Violation;
  return rep;
}

RrslReport rrsl_corollary_check(const PointFrame& f, int ell, double tol_l, double tol_res) {
  if (ell < 1 || ell >= static_cast<int>(f.s_pow.size()))
    throw std::invalid_argument("Ricci power not cached for this frame");
  RrslReport rep;
  rep.ell = ell;
  // Assembled straight from the frame's curvature fields so the ell = 1 case
  // is an independent path from fit_L's preset route.
  const Tensor rr = derive(f.r13, f.r04);
  rep.rr_mag = rr.max_abs();
  const double mag = std::max(1.0, f.r13.max_abs() * f.r04.max_abs());
  if (rep.rr_mag <= kDegenerateFloor * mag || f.k == 0.0) return rep;
  rep.applicable = true;
  rep.predicted_L =
      1.0 / (std::pow(f.k, ell - 1) * std::pow(static_cast<double>(f.n - 1), ell));
  const Tensor rhs = q_op(f.s_pow[static_cast<std::size_t>(ell)], f.r04);
  rep.fit = project_fit(rr, rhs, f.p);
  rep.l_gap = rep.fit.L ? std::abs(*rep.fit.L - rep.predicted_L)
                        : std::numeric_limits<double>::infinity();
  const double target = std::pow(f.k * (f.n - 1), ell);
  rep.spow_form_residual =
      max_abs_diff(f.s_pow[static_cast<std::size_t>(ell)], scale(f.metric.g, target));
  const double smag = std::max(1.0, f.s_pow[static_cast<std::size_t>(ell)].max_abs());
  rep.confirmed = rep.l_gap < tol_l && rep.spow_form_residual < tol_res * smag;
  return rep;
}

RicciConditionConstants ricci_condition_constants(const PointFrame& f, const CoeffVector& c,
                                                  std::optional<double> L) {
  const int n = f.n;
  const double k = f.k;
  const double eps = f.eps;
  const double r = f.r;
  const double kn1 = k * (n - 1);
  RicciConditionConstants out;
  out.E = eps * (k * c[0] + c[7] * r - kn1 * c[1] - kn1 * c[2]);
  out.F = -eps * kn1 * (k * c[0] + kn1 * c[4] + c[7] * r);
  out.G = -kn1 * kn1 * (c[1] + c[2] + 2 * c[3] + c[4] + c[5] + 2 * c[6]);
  if (L) {
    if (!f.has_xi) throw std::invalid_argument("equation check needs the distinguished field");
    const auto& g = f.metric.g;
    const auto& S = f.ricci;
    const auto& s2 = f.s_pow[2];
    Tensor lhs(n, {Variance::Co, Variance::Co});
    Tensor rhs(n, {Variance::Co, Variance::Co});
    for (int y = 0; y < n; ++y)
      for (int v = 0; v < n; ++v) {
        lhs(y, v) = eps * c[5] * s2(y, v) - out.E * S(y, v) - out.F * g(y, v) -
                    out.G * f.eta(y) * f.eta(v);
        rhs(y, v) = *L * (eps * kn1 * g(y, v) - eps * S(y, v));
      }
    out.equation_residual = max_abs_diff(lhs, rhs);
  }
  return out;
}

}  // namespace nf
