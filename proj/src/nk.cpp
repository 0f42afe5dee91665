#include "nf/nk.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace nf {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt17(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::vector<ManifoldSpec> make_registry() {
  std::vector<ManifoldSpec> reg;
  reg.push_back(ManifoldSpec::from_strings(
      "s3", 3, {{"1", "0", "0"}, {"cos(x0)^2", "0"}, {"sin(x0)^2"}}, {"0", "1", "1"}, 1.0, 1,
      {{0.3, kPi / 2 - 0.3}, {0.3, 6.0}, {0.3, 6.0}}, "sasakian", true));
  reg.push_back(ManifoldSpec::from_strings(
      "s5", 5,
      {{"1", "0", "0", "0", "0"},
       {"sin(x0)^2", "0", "0", "0"},
       {"cos(x0)^2", "0", "0"},
       {"sin(x0)^2*cos(x1)^2", "0"},
       {"sin(x0)^2*sin(x1)^2"}},
      {"0", "0", "1", "1", "1"}, 1.0, 1,
      {{0.3, kPi / 2 - 0.3}, {0.3, kPi / 2 - 0.3}, {0.3, 6.0}, {0.3, 6.0}, {0.3, 6.0}},
      "sasakian", true));
  reg.push_back(ManifoldSpec::from_strings(
      "h3", 3, {{"1", "0", "0"}, {"exp(2*x0)", "0"}, {"exp(2*x0)"}}, {"1", "0", "0"}, -1.0, 1,
      {{-0.8, 0.8}, {-1.0, 1.0}, {-1.0, 1.0}}, "kenmotsu", true));
  reg.push_back(ManifoldSpec::from_strings(
      "h5", 5,
      {{"1", "0", "0", "0", "0"},
       {"exp(2*x0)", "0", "0", "0"},
       {"exp(2*x0)", "0", "0"},
       {"exp(2*x0)", "0"},
       {"exp(2*x0)"}},
      {"1", "0", "0", "0", "0"}, -1.0, 1,
      {{-0.8, 0.8}, {-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}}, "kenmotsu", true));
  reg.push_back(ManifoldSpec::from_strings(
      "kenmotsu-warped-3d", 3,
      {{"1", "0", "0"}, {"exp(2*x0)", "0"}, {"exp(2*x0)*sin(x1)^2"}}, {"1", "0", "0"}, -1.0, 1,
      {{-0.8, 0.8}, {0.3, kPi - 0.3}, {0.3, 6.0}}, "kenmotsu", false));
  reg.push_back(ManifoldSpec::from_strings(
      "kenmotsu-warped-5d", 5,
      {{"1", "0", "0", "0", "0"},
       {"exp(2*x0)", "0", "0", "0"},
       {"exp(2*x0)*sin(x1)^2", "0", "0"},
       {"exp(2*x0)", "0"},
       {"exp(2*x0)*sin(x3)^2"}},
      {"1", "0", "0", "0", "0"}, -1.0, 1,
      {{-0.8, 0.8}, {0.3, kPi - 0.3}, {0.3, 6.0}, {0.3, kPi - 0.3}, {0.3, 6.0}}, "kenmotsu",
      false));
  reg.push_back(ManifoldSpec::from_strings(
      "de-sitter-4d", 4,
      {{"-1", "0", "0", "0"},
       {"cosh(x0)^2", "0", "0"},
       {"cosh(x0)^2*sin(x1)^2", "0"},
       {"cosh(x0)^2*sin(x1)^2*sin(x2)^2"}},
      {"1", "0", "0", "0"}, 1.0, -1,
      {{-0.7, 0.7}, {0.3, kPi - 0.3}, {0.3, kPi - 0.3}, {0.3, 6.0}}, "constant-curvature",
      true));
  reg.push_back(ManifoldSpec::from_strings(
      "flat-3d", 3, {{"1", "0", "0"}, {"1", "0"}, {"1"}}, {"1", "0", "0"}, 0.0, 1,
      {{-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}}, "constant-curvature", true));
  reg.push_back(ManifoldSpec::from_strings(
      "flat-4d", 4, {{"1", "0", "0", "0"}, {"1", "0", "0"}, {"1", "0"}, {"1"}},
      {"1", "0", "0", "0"}, 0.0, 1,
      {{-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}}, "constant-curvature", true));
  return reg;
}

// Max over random probe vectors of the scalar difference between two equally
// shaped tensors fully contracted with the same probes.
double probe_diff(const Tensor& lhs, const Tensor& rhs, std::mt19937& rng, int trials) {
  const int rank = lhs.rank();
  if (rank == 0) return std::abs(lhs.data()[0] - rhs.data()[0]);
  const int n = lhs.dim();
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::vector<std::vector<double>> vecs(static_cast<std::size_t>(rank),
                                          std::vector<double>(static_cast<std::size_t>(n)));
    for (auto& v : vecs)
      for (double& x : v) x = u(rng);
    double a = 0.0, b = 0.0;
    const std::size_t total = lhs.data().size();
    for (std::size_t flat = 0; flat < total; ++flat) {
      double w = 1.0;
      std::size_t rem = flat;
      for (int s = rank - 1; s >= 0; --s) {
        w *= vecs[static_cast<std::size_t>(s)][rem % static_cast<std::size_t>(n)];
        rem /= static_cast<std::size_t>(n);
      }
      a += lhs.data()[flat] * w;
      b += rhs.data()[flat] * w;
    }
    worst = std::max(worst, std::abs(a - b));
  }
  return worst;
}

IdentityCheck make_check(std::string id, std::string tag, const Tensor& lhs, const Tensor& rhs,
                         std::mt19937& rng) {
  IdentityCheck c;
  c.id = std::move(id);
  c.tag = std::move(tag);
  c.residual = std::max(max_abs_diff(lhs, rhs), probe_diff(lhs, rhs, rng, 4));
  c.scale = std::max({1.0, lhs.max_abs(), rhs.max_abs()});
  return c;
}

}  // namespace

const std::vector<ManifoldSpec>& builtin_registry() {
  static const std::vector<ManifoldSpec> reg = make_registry();
  return reg;
}

const ManifoldSpec* find_builtin(const std::string& name) {
  for (const auto& e : builtin_registry())
    if (e.name == name) return &e;
  return nullptr;
}

ManifoldSpec random_3d(unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-0.08, 0.08);
  std::vector<std::vector<std::string>> rows(3);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      std::string e = (i == j) ? "1" : "0";
      for (int c = 0; c < 3; ++c) e += " + " + fmt17(u(rng)) + "*x" + std::to_string(c);
      for (int c = 0; c < 3; ++c)
        for (int d = c; d < 3; ++d)
          e += " + " + fmt17(u(rng)) + "*x" + std::to_string(c) + "*x" + std::to_string(d);
      rows[static_cast<std::size_t>(i)].push_back(e);
    }
  return ManifoldSpec::from_strings("random-3d", 3, rows, {}, 0.0, 1,
                                    {{-0.5, 0.5}, {-0.5, 0.5}, {-0.5, 0.5}}, "generic", false);
}

std::vector<IdentityCheck> verify_nullity(const PointFrame& f, unsigned seed) {
  if (!f.has_xi) throw std::invalid_argument("frame has no distinguished field");
  const int n = f.n;
  const double eps = f.eps;
  const double k = f.k;
  const double kn1 = k * (n - 1);
  std::mt19937 rng(seed * 2654435761u + 17u);
  std::vector<IdentityCheck> out;

  const auto& g = f.metric.g;
  const auto& xi = f.xi;
  const auto& eta = f.eta;

  {  // R(X,Y)xi = eps k (eta(Y) X - eta(X) Y)
    Tensor lhs(n, {Variance::Contra, Variance::Co, Variance::Co});
    Tensor rhs(n, {Variance::Contra, Variance::Co, Variance::Co});
    for (int i = 0; i < n; ++i)
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          double s = 0.0;
          for (int z = 0; z < n; ++z) s += f.r13(i, z, x, y) * xi(z);
          lhs(i, x, y) = s;
          rhs(i, x, y) = eps * k * (eta(y) * (i == x ? 1.0 : 0.0) - eta(x) * (i == y ? 1.0 : 0.0));
        }
    out.push_back(make_check("curvature-xi", "eq-curvature", lhs, rhs, rng));
  }
  {  // R(xi,X)Y = eps k (eps g(X,Y) xi - eta(Y) X)
    Tensor lhs(n, {Variance::Contra, Variance::Co, Variance::Co});
    Tensor rhs(n, {Variance::Contra, Variance::Co, Variance::Co});
    for (int i = 0; i < n; ++i)
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          double s = 0.0;
          for (int w = 0; w < n; ++w) s += f.r13(i, y, w, x) * xi(w);
          lhs(i, x, y) = s;
          rhs(i, x, y) = eps * k * (eps * g(x, y) * xi(i) - eta(y) * (i == x ? 1.0 : 0.0));
        }
    out.push_back(make_check("curvature-xi-first", "eq-curvature-2", lhs, rhs, rng));
  }
  {  // R(xi,X)xi = eps k (eta(X) xi - X)
    Tensor lhs(n, {Variance::Contra, Variance::Co});
    Tensor rhs(n, {Variance::Contra, Variance::Co});
    for (int i = 0; i < n; ++i)
      for (int x = 0; x < n; ++x) {
        double s = 0.0;
        for (int w = 0; w < n; ++w)
          for (int z = 0; z < n; ++z) s += f.r13(i, z, w, x) * xi(w) * xi(z);
        lhs(i, x) = s;
        rhs(i, x) = eps * k * (eta(x) * xi(i) - (i == x ? 1.0 : 0.0));
      }
    out.push_back(make_check("curvature-xi-sandwich", "eq-curvature-3", lhs, rhs, rng));
  }
  {  // R(X,Y,Z,xi) = eps k (eta(X) g(Y,Z) - eta(Y) g(X,Z))
    Tensor lhs(n, {Variance::Co, Variance::Co, Variance::Co});
    Tensor rhs(n, {Variance::Co, Variance::Co, Variance::Co});
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) {
          double s = 0.0;
          for (int v = 0; v < n; ++v) s += f.r04f(x, y, z, v) * xi(v);
          lhs(x, y, z) = s;
          rhs(x, y, z) = eps * k * (eta(x) * g(y, z) - eta(y) * g(x, z));
        }
    out.push_back(make_check("curvature-04-xi", "eq-eps-PS-R(X,Y,Z,xi)", lhs, rhs, rng));
  }
  {  // eta(R(X,Y)Z) = k (eta(X) g(Y,Z) - eta(Y) g(X,Z))
    Tensor lhs(n, {Variance::Co, Variance::Co, Variance::Co});
    Tensor rhs(n, {Variance::Co, Variance::Co, Variance::Co});
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) {
          double s = 0.0;
          for (int i = 0; i < n; ++i) s += eta(i) * f.r13(i, z, x, y);
          lhs(x, y, z) = s;
          rhs(x, y, z) = k * (eta(x) * g(y, z) - eta(y) * g(x, z));
        }
    out.push_back(make_check("eta-of-curvature", "eq-eps-PS-eta(R(X,Y),Z)", lhs, rhs, rng));
  }
  {  // S(X,xi) = eps k (n-1) eta(X)
    Tensor lhs(n, {Variance::Co});
    Tensor rhs(n, {Variance::Co});
    for (int x = 0; x < n; ++x) {
      double s = 0.0;
      for (int z = 0; z < n; ++z) s += f.ricci(x, z) * xi(z);
      lhs(x) = s;
      rhs(x) = eps * kn1 * eta(x);
    }
    out.push_back(make_check("ricci-xi", "eq-ricci", lhs, rhs, rng));
  }
  {  // Q xi = k (n-1) xi
    Tensor lhs(n, {Variance::Contra});
    Tensor rhs(n, {Variance::Contra});
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int z = 0; z < n; ++z) s += f.q(i, z) * xi(z);
      lhs(i) = s;
      rhs(i) = kn1 * xi(i);
    }
    out.push_back(make_check("q-xi", "eq-Q", lhs, rhs, rng));
  }
  {  // S(xi,xi) = eps k (n-1)
    Tensor lhs(n, {});
    Tensor rhs(n, {});
    double s = 0.0;
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) s += f.ricci(y, z) * xi(y) * xi(z);
    lhs.data()[0] = s;
    rhs.data()[0] = eps * kn1;
    out.push_back(make_check("ricci-xi-xi", "eq-S-xi-xi", lhs, rhs, rng));
  }
  {  // eta(Q X) = k (n-1) eta(X)
    Tensor lhs(n, {Variance::Co});
    Tensor rhs(n, {Variance::Co});
    for (int x = 0; x < n; ++x) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += eta(i) * f.q(i, x);
      lhs(x) = s;
      rhs(x) = kn1 * eta(x);
    }
    out.push_back(make_check("eta-qx", "eq-eta-QX", lhs, rhs, rng));
  }
  double kp = 1.0;  // k^l (n-1)^l running product, l = 0 term first
  for (int l = 0; l <= 3 && l < static_cast<int>(f.s_pow.size()); ++l) {
    Tensor lhs(n, {Variance::Co});
    Tensor rhs(n, {Variance::Co});
    for (int x = 0; x < n; ++x) {
      double s = 0.0;
      for (int z = 0; z < n; ++z) s += f.s_pow[static_cast<std::size_t>(l)](x, z) * xi(z);
      lhs(x) = s;
      rhs(x) = eps * kp * eta(x);
    }
    out.push_back(make_check("ricci-power-xi-l" + std::to_string(l), "eq-Sp-QX-xi", lhs, rhs, rng));
    kp *= kn1;
  }
  return out;
}

XiForms lemma_oracle(const PointFrame& f, const CoeffVector& c) {
  if (!f.has_xi) throw std::invalid_argument("frame has no distinguished field");
  const int n = f.n;
  const double eps = f.eps;
  const double k = f.k;
  const double r = f.r;
  const double kn1 = k * (n - 1);
  const auto& g = f.metric.g;
  const auto& S = f.ricci;
  const auto& Q = f.q;
  const auto& xi = f.xi;
  const auto& eta = f.eta;

  const double c_x = -eps * k * c[0] + eps * kn1 * c[2] - eps * c[7] * r;
  const double c_y = eps * k * c[0] + eps * kn1 * c[1] + eps * c[7] * r;
  const double c_mid = eps * k * c[0] + eps * kn1 * (c[1] + c[3] + c[4] + c[6]) + eps * c[7] * r;
  const double c_gz = k * c[0] + kn1 * c[4] + c[7] * r;
  const double c_last = -eps * k * c[0] + eps * kn1 * (c[2] + c[3] + c[5] + c[6]) - eps * c[7] * r;
  const double c_ric =
      eps * kn1 * (c[0] + n * c[1] + c[2] + c[3] + c[5] + c[6]) + eps * r * (c[4] + (n - 1) * c[7]);

  XiForms o{
      Tensor(n, {Variance::Contra, Variance::Co, Variance::Co}),
      Tensor(n, {Variance::Contra, Variance::Co}),
      Tensor(n, {Variance::Contra, Variance::Co, Variance::Co}),
      Tensor(n, {Variance::Co, Variance::Co}),
      Tensor(n, {Variance::Co, Variance::Co, Variance::Co}),
      Tensor(n, {Variance::Contra, Variance::Co}),
      Tensor(n, {Variance::Co}),
      0.0,
  };

  for (int i = 0; i < n; ++i)
    for (int x = 0; x < n; ++x) {
      const double d_ix = (i == x) ? 1.0 : 0.0;
      o.t_xix_xi(i, x) = c_x * d_ix + eps * c[5] * Q(i, x) + c_mid * eta(x) * xi(i);
      o.t_xxi_xi(i, x) = c_last * eta(x) * xi(i) + c_y * d_ix + eps * c[4] * Q(i, x);
      for (int y = 0; y < n; ++y) {
        const double d_iy = (i == y) ? 1.0 : 0.0;
        o.t_xy_xi(i, x, y) = c_x * eta(x) * d_iy + c_y * eta(y) * d_ix +
                             c[3] * S(x, y) * xi(i) + eps * c[4] * eta(y) * Q(i, x) +
                             eps * c[5] * eta(x) * Q(i, y) + kn1 * c[6] * g(x, y) * xi(i);
        o.t_xiy_z(i, x, y) = c_gz * g(x, y) * xi(i) + c[1] * S(x, y) * xi(i) +
                             eps * kn1 * c[3] * eta(x) * d_iy + eps * c[5] * eta(y) * Q(i, x) +
                             eps * c[6] * eta(x) * Q(i, y) + c_x * eta(y) * d_ix;
      }
    }
  for (int x = 0; x < n; ++x) {
    o.st_x_xi(x) = c_ric * eta(x);
    for (int y = 0; y < n; ++y) {
      o.eta_t_xy_xi(x, y) = eps * kn1 * (c[1] + c[2] + c[4] + c[5]) * eta(x) * eta(y) +
                            c[3] * S(x, y) + kn1 * c[6] * g(x, y);
      for (int v = 0; v < n; ++v)
        o.t_xy_xi_v(x, y, v) = c_x * eta(x) * g(y, v) + c_y * eta(y) * g(x, v) +
                               eps * c[3] * S(x, y) * eta(v) + eps * c[4] * eta(y) * S(x, v) +
                               eps * c[5] * eta(x) * S(y, v) + eps * kn1 * c[6] * g(x, y) * eta(v);
    }
  }
  o.st_xi_xi = c_ric;
  return o;
}

XiForms lemma_direct(const PointFrame& f, const CoeffVector& c) {
  if (!f.has_xi) throw std::invalid_argument("frame has no distinguished field");
  const int n = f.n;
  const Tensor t04 = build_T(f, c);
  const Tensor st = ricci_of_T(f, c);
  const auto& ginv = f.metric.g_inv;
  const auto& xi = f.xi;

  XiForms o{
      Tensor(n, {Variance::Contra, Variance::Co, Variance::Co}),
      Tensor(n, {Variance::Contra, Variance::Co}),
      Tensor(n, {Variance::Contra, Variance::Co, Variance::Co}),
      Tensor(n, {Variance::Co, Variance::Co}),
      Tensor(n, {Variance::Co, Variance::Co, Variance::Co}),
      Tensor(n, {Variance::Contra, Variance::Co}),
      Tensor(n, {Variance::Co}),
      0.0,
  };

  // a[x,y,v] = T(X,Y,xi,V), b[y,z,v] = T(xi,Y,Z,V)
  Tensor a(n, {Variance::Co, Variance::Co, Variance::Co});
  Tensor b(n, {Variance::Co, Variance::Co, Variance::Co});
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int v = 0; v < n; ++v) {
        double sa = 0.0, sb = 0.0;
        for (int w = 0; w < n; ++w) {
          sa += t04(x, y, w, v) * xi(w);
          sb += t04(w, x, y, v) * xi(w);
        }
        a(x, y, v) = sa;
        b(x, y, v) = sb;
      }
  o.t_xy_xi_v = a;

  for (int i = 0; i < n; ++i)
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        double s1 = 0.0, s2 = 0.0;
        for (int v = 0; v < n; ++v) {
          s1 += ginv(i, v) * a(x, y, v);
          s2 += ginv(i, v) * b(x, y, v);
        }
        o.t_xy_xi(i, x, y) = s1;
        o.t_xiy_z(i, x, y) = s2;
      }
  for (int i = 0; i < n; ++i)
    for (int x = 0; x < n; ++x) {
      double s1 = 0.0, s2 = 0.0;
      for (int w = 0; w < n; ++w) {
        s1 += o.t_xy_xi(i, w, x) * xi(w);
        s2 += o.t_xy_xi(i, x, w) * xi(w);
      }
      o.t_xix_xi(i, x) = s1;
      o.t_xxi_xi(i, x) = s2;
    }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      double s = 0.0;
      for (int v = 0; v < n; ++v) s += a(x, y, v) * xi(v);
      o.eta_t_xy_xi(x, y) = f.eps * s;
    }
  for (int x = 0; x < n; ++x) {
    double s = 0.0;
    for (int z = 0; z < n; ++z) s += st(x, z) * xi(z);
    o.st_x_xi(x) = s;
  }
  double sxx = 0.0;
  for (int y = 0; y < n; ++y)
    for (int z = 0; z < n; ++z) sxx += st(y, z) * xi(y) * xi(z);
  o.st_xi_xi = sxx;
  return o;
}

XiFormsDiff xi_forms_diff(const XiForms& a, const XiForms& b) {
  XiFormsDiff d;
  const Tensor* as[] = {&a.t_xy_xi, &a.t_xix_xi, &a.t_xiy_z, &a.eta_t_xy_xi,
                        &a.t_xy_xi_v, &a.t_xxi_xi, &a.st_x_xi};
  const Tensor* bs[] = {&b.t_xy_xi, &b.t_xix_xi, &b.t_xiy_z, &b.eta_t_xy_xi,
                        &b.t_xy_xi_v, &b.t_xxi_xi, &b.st_x_xi};
  for (int m = 0; m < 7; ++m) {
    d.residual = std::max(d.residual, max_abs_diff(*as[m], *bs[m]));
    d.scale = std::max({d.scale, as[m]->max_abs(), bs[m]->max_abs()});
  }
  d.residual = std::max(d.residual, std::abs(a.st_xi_xi - b.st_xi_xi));
  d.scale = std::max({d.scale, std::abs(a.st_xi_xi), std::abs(b.st_xi_xi)});
  return d;
}

double kenmotsu_structure_residual(const ManifoldSpec& spec, const PointFrame& f) {
  const Tensor grad = nabla_xi(spec, f);
  double res = 0.0;
  for (int i = 0; i < f.n; ++i)
    for (int j = 0; j < f.n; ++j) {
      const double want = (i == j ? 1.0 : 0.0) - f.eta(j) * f.xi(i);
      res = std::max(res, std::abs(grad(i, j) - want));
    }
  return res;
}

}  // namespace nf
