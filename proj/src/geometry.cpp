#include "nf/geometry.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "nf/jet.hpp"

namespace nf {

namespace {

constexpr int kMaxDim = 8;

// First-order multivariate dual number: value plus gradient in up to kMaxDim
// chart directions. Carries exact derivatives of the Christoffel formula when
// seeded with (g, dg) and (dg, d2g) pairs.
struct D1 {
  double v = 0.0;
  std::array<double, kMaxDim> d{};

  static D1 constant(double c) {
    D1 r;
    r.v = c;
    return r;
  }
};

D1 operator+(const D1& x, const D1& y) {
  D1 r;
  r.v = x.v + y.v;
  for (int i = 0; i < kMaxDim; ++i) r.d[static_cast<std::size_t>(i)] =
      x.d[static_cast<std::size_t>(i)] + y.d[static_cast<std::size_t>(i)];
  return r;
}

D1 operator-(const D1& x, const D1& y) {
  D1 r;
  r.v = x.v - y.v;
  for (int i = 0; i < kMaxDim; ++i) r.d[static_cast<std::size_t>(i)] =
      x.d[static_cast<std::size_t>(i)] - y.d[static_cast<std::size_t>(i)];
  return r;
}

D1 operator*(const D1& x, const D1& y) {
  D1 r;
  r.v = x.v * y.v;
  for (int i = 0; i < kMaxDim; ++i) r.d[static_cast<std::size_t>(i)] =
      x.d[static_cast<std::size_t>(i)] * y.v + x.v * y.d[static_cast<std::size_t>(i)];
  return r;
}

D1 operator/(const D1& x, const D1& y) {
  if (y.v == 0.0) throw std::runtime_error("dual division by zero");
  D1 r;
  r.v = x.v / y.v;
  for (int i = 0; i < kMaxDim; ++i) r.d[static_cast<std::size_t>(i)] =
      (x.d[static_cast<std::size_t>(i)] - r.v * y.d[static_cast<std::size_t>(i)]) / y.v;
  return r;
}

// Gauss-Jordan inverse with partial pivoting on the value part; works for any
// scalar supporting +,-,*,/ and a value() hook for pivot magnitude.
template <class T, class Mag>
std::vector<std::vector<T>> gauss_jordan(std::vector<std::vector<T>> a, int n, Mag mag) {
  std::vector<std::vector<T>> inv(static_cast<std::size_t>(n),
                                  std::vector<T>(static_cast<std::size_t>(n), T::constant(0.0)));
  for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = T::constant(1.0);

  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = mag(a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)]);
    for (int row = col + 1; row < n; ++row) {
      const double m = mag(a[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)]);
      if (m > best) {
        best = m;
        pivot = row;
      }
    }
    if (best == 0.0) throw std::runtime_error("degenerate metric");
    std::swap(a[static_cast<std::size_t>(col)], a[static_cast<std::size_t>(pivot)]);
    std::swap(inv[static_cast<std::size_t>(col)], inv[static_cast<std::size_t>(pivot)]);

    const T p = a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
    for (int j = 0; j < n; ++j) {
      a[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)] =
          a[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)] / p;
      inv[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)] =
          inv[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)] / p;
    }
    for (int row = 0; row < n; ++row) {
      if (row == col) continue;
      const T f = a[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
      for (int j = 0; j < n; ++j) {
        a[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] =
            a[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] -
            f * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)];
        inv[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] =
            inv[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] -
            f * inv[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)];
      }
    }
  }
  return inv;
}

struct MetricJets {
  // Flat row-major arrays: g[i,j]; dg[c,i,j] = d_c g_ij; d2g[a,b,i,j].
  std::vector<double> g, dg, d2g;
  int n = 0;

  double gv(int i, int j) const { return g[static_cast<std::size_t>(i * n + j)]; }
  double d1(int c, int i, int j) const {
    return dg[static_cast<std::size_t>((c * n + i) * n + j)];
  }
  double d2(int a, int b, int i, int j) const {
    return d2g[static_cast<std::size_t>(((a * n + b) * n + i) * n + j)];
  }
};

MetricJets collect_metric_jets(const ManifoldSpec& spec, const std::vector<double>& p) {
  const int n = spec.n;
  MetricJets mj;
  mj.n = n;
  mj.g.assign(static_cast<std::size_t>(n * n), 0.0);
  mj.dg.assign(static_cast<std::size_t>(n * n * n), 0.0);
  mj.d2g.assign(static_cast<std::size_t>(n * n * n * n), 0.0);

  auto set_d2 = [&](int a, int b, int i, int j, double v) {
    mj.d2g[static_cast<std::size_t>(((a * n + b) * n + i) * n + j)] = v;
    mj.d2g[static_cast<std::size_t>(((b * n + a) * n + i) * n + j)] = v;
    mj.d2g[static_cast<std::size_t>(((a * n + b) * n + j) * n + i)] = v;
    mj.d2g[static_cast<std::size_t>(((b * n + a) * n + j) * n + i)] = v;
  };

  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          const Jet2 jt = spec.g_at(i, j).eval_jet(p, a, b);
          if (a == b) {
            mj.g[static_cast<std::size_t>(i * n + j)] = jt.v;
            mj.g[static_cast<std::size_t>(j * n + i)] = jt.v;
            mj.dg[static_cast<std::size_t>((a * n + i) * n + j)] = jt.da;
            mj.dg[static_cast<std::size_t>((a * n + j) * n + i)] = jt.da;
          }
          set_d2(a, b, i, j, jt.dab);
        }
  return mj;
}

struct ChristoffelJet {
  Tensor gamma;   // [i,j,k]
  Tensor dgamma;  // [a,i,j,k] = d_a Gamma^i_jk
};

ChristoffelJet christoffel_core(const ManifoldSpec& spec, const std::vector<double>& p) {
  const int n = spec.n;
  if (n < 2 || n > kMaxDim) throw std::invalid_argument("dimension out of range");
  const MetricJets mj = collect_metric_jets(spec, p);

  // Seed duals: G carries (g, dg); DG[c] carries (d_c g, d_a d_c g).
  std::vector<std::vector<D1>> G(static_cast<std::size_t>(n),
                                 std::vector<D1>(static_cast<std::size_t>(n)));
  std::vector<std::vector<std::vector<D1>>> DG(
      static_cast<std::size_t>(n),
      std::vector<std::vector<D1>>(static_cast<std::size_t>(n),
                                   std::vector<D1>(static_cast<std::size_t>(n))));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      D1 gij;
      gij.v = mj.gv(i, j);
      for (int a = 0; a < n; ++a) gij.d[static_cast<std::size_t>(a)] = mj.d1(a, i, j);
      G[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = gij;
      for (int c = 0; c < n; ++c) {
        D1 dgij;
        dgij.v = mj.d1(c, i, j);
        for (int a = 0; a < n; ++a) dgij.d[static_cast<std::size_t>(a)] = mj.d2(a, c, i, j);
        DG[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = dgij;
      }
    }

  auto Ginv = gauss_jordan<D1>(G, n, [](const D1& x) { return std::abs(x.v); });

  ChristoffelJet out;
  out.gamma = Tensor(n, {Variance::Contra, Variance::Co, Variance::Co});
  out.dgamma = Tensor(n, {Variance::Co, Variance::Contra, Variance::Co, Variance::Co});
  const D1 half = D1::constant(0.5);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        D1 sum = D1::constant(0.0);
        for (int l = 0; l < n; ++l) {
          const auto& dj = DG[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)][static_cast<std::size_t>(k)];
          const auto& dk = DG[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)][static_cast<std::size_t>(l)];
          const auto& dl = DG[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
          sum = sum + Ginv[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] * (dj + dk - dl);
        }
        sum = half * sum;
        out.gamma(i, j, k) = sum.v;
        out.gamma(i, k, j) = sum.v;
        for (int a = 0; a < n; ++a) {
          out.dgamma(a, i, j, k) = sum.d[static_cast<std::size_t>(a)];
          out.dgamma(a, i, k, j) = sum.d[static_cast<std::size_t>(a)];
        }
      }
  return out;
}

MetricPair metric_at(const ManifoldSpec& spec, const std::vector<double>& p) {
  const int n = spec.n;
  Tensor g(n, {Variance::Co, Variance::Co});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = spec.g_at(i, j).eval(p);
  return MetricPair::from_metric(g);
}

Tensor riemann_from_gamma(const ChristoffelJet& cj, int n) {
  // R13[i,z,x,y]: component i of R(e_x,e_y)e_z; sign gives
  // R(X,Y)Z = k(g(Y,Z)X - g(X,Z)Y) on constant curvature.
  Tensor r13(n, {Variance::Contra, Variance::Co, Variance::Co, Variance::Co});
  for (int i = 0; i < n; ++i)
    for (int z = 0; z < n; ++z)
      for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y) {
          double v = cj.dgamma(x, i, y, z) - cj.dgamma(y, i, x, z);
          for (int m = 0; m < n; ++m)
            v += cj.gamma(i, x, m) * cj.gamma(m, y, z) - cj.gamma(i, y, m) * cj.gamma(m, x, z);
          r13(i, z, x, y) = v;
          r13(i, z, y, x) = -v;
        }
  return r13;
}

double radical_inverse(unsigned long long index, unsigned base) {
  double result = 0.0;
  double f = 1.0 / static_cast<double>(base);
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= static_cast<double>(base);
  }
  return result;
}

}  // namespace

ManifoldSpec ManifoldSpec::from_strings(std::string name, int n,
                                        const std::vector<std::vector<std::string>>& upper_metric,
                                        const std::vector<std::string>& xi,
                                        double k, int epsilon,
                                        std::vector<std::array<double, 2>> chart_box,
                                        std::string class_tag, bool constant_curvature) {
  ManifoldSpec s;
  s.name = std::move(name);
  s.n = n;
  s.metric.resize(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Expr e = parse(upper_metric[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - i)], n);
      s.metric[static_cast<std::size_t>(i * n + j)] = e;
      s.metric[static_cast<std::size_t>(j * n + i)] = e;
    }
  for (const auto& comp : xi) s.xi.push_back(parse(comp, n));
  s.k = k;
  s.epsilon = epsilon;
  s.chart_box = std::move(chart_box);
  s.class_tag = std::move(class_tag);
  s.constant_curvature = constant_curvature;
  return s;
}

Tensor christoffel(const ManifoldSpec& spec, const std::vector<double>& p) {
  return christoffel_core(spec, p).gamma;
}

Tensor christoffel_fd(const ManifoldSpec& spec, const std::vector<double>& p, double h) {
  const int n = spec.n;
  const MetricPair m = metric_at(spec, p);

  std::vector<double> dg(static_cast<std::size_t>(n * n * n));
  std::vector<double> q = p;
  for (int c = 0; c < n; ++c) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        q[static_cast<std::size_t>(c)] = p[static_cast<std::size_t>(c)] + h;
        const double plus = spec.g_at(i, j).eval(q);
        q[static_cast<std::size_t>(c)] = p[static_cast<std::size_t>(c)] - h;
        const double minus = spec.g_at(i, j).eval(q);
        q[static_cast<std::size_t>(c)] = p[static_cast<std::size_t>(c)];
        dg[static_cast<std::size_t>((c * n + i) * n + j)] = (plus - minus) / (2.0 * h);
      }
  }

  auto d1 = [&](int c, int i, int j) { return dg[static_cast<std::size_t>((c * n + i) * n + j)]; };
  Tensor gamma(n, {Variance::Contra, Variance::Co, Variance::Co});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += m.g_inv(i, l) * (d1(j, l, k) + d1(k, j, l) - d1(l, j, k));
        gamma(i, j, k) = 0.5 * s;
      }
  return gamma;
}

std::pair<Tensor, Tensor> riemann(const ManifoldSpec& spec, const std::vector<double>& p) {
  const ChristoffelJet cj = christoffel_core(spec, p);
  const MetricPair m = metric_at(spec, p);
  Tensor r13 = riemann_from_gamma(cj, spec.n);
  Tensor r04 = lower(r13, 0, m);
  return {std::move(r13), std::move(r04)};
}

PointFrame frame(const ManifoldSpec& spec, const std::vector<double>& p, int max_l) {
  const int n = spec.n;
  PointFrame f;
  f.p = p;
  f.n = n;
  f.k = spec.k;

  const ChristoffelJet cj = christoffel_core(spec, p);
  f.metric = metric_at(spec, p);
  f.gamma = cj.gamma;
  f.r13 = riemann_from_gamma(cj, n);
  f.r04 = lower(f.r13, 0, f.metric);

  f.r04f = Tensor(n, {Variance::Co, Variance::Co, Variance::Co, Variance::Co});
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int v = 0; v < n; ++v) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) s += f.metric.g(m, v) * f.r13(m, z, x, y);
          f.r04f(x, y, z, v) = s;
        }

  f.ricci = Tensor(n, {Variance::Co, Variance::Co});
  for (int y = 0; y < n; ++y)
    for (int z = 0; z < n; ++z) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += f.r13(i, z, i, y);
      f.ricci(y, z) = s;
    }

  f.q = raise(f.ricci, 0, f.metric);
  f.r = contract(f.ricci, 0, 1, f.metric).data()[0];

  if (max_l < 0) max_l = 0;
  f.s_pow.reserve(static_cast<std::size_t>(max_l) + 1);
  f.s_pow.push_back(f.metric.g);
  if (max_l >= 1) f.s_pow.push_back(f.ricci);
  for (int l = 2; l <= max_l; ++l) {
    Tensor sl(n, {Variance::Co, Variance::Co});
    const Tensor& prev = f.s_pow[static_cast<std::size_t>(l - 1)];
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        double s = 0.0;
        for (int m = 0; m < n; ++m) s += f.q(m, x) * prev(m, y);
        sl(x, y) = s;
      }
    f.s_pow.push_back(std::move(sl));
  }

  if (!spec.xi.empty()) {
    f.has_xi = true;
    f.xi = Tensor(n, {Variance::Contra});
    for (int i = 0; i < n; ++i) f.xi(i) = spec.xi[static_cast<std::size_t>(i)].eval(p);
    double gxx = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) gxx += f.metric.g(i, j) * f.xi(i) * f.xi(j);
    if (std::abs(std::abs(gxx) - 1.0) > 1e-6)
      throw std::runtime_error("xi is not a unit field at the sample point");
    f.eps = gxx > 0.0 ? 1.0 : -1.0;
    if (static_cast<int>(f.eps) != spec.epsilon)
      throw std::runtime_error("declared epsilon does not match g(xi,xi)");
    f.eta = Tensor(n, {Variance::Co});
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int m = 0; m < n; ++m) s += f.metric.g(j, m) * f.xi(m);
      f.eta(j) = f.eps * s;
    }
  } else {
    f.eps = static_cast<double>(spec.epsilon);
  }
  return f;
}

std::vector<std::vector<double>> sample_points(const ManifoldSpec& spec, int count,
                                               unsigned seed) {
  static constexpr std::array<unsigned, kMaxDim> kBases{2, 3, 5, 7, 11, 13, 17, 19};
  const int n = spec.n;
  if (static_cast<int>(spec.chart_box.size()) != n)
    throw std::invalid_argument("chart box does not match dimension");
  const unsigned long long offset = 1 + static_cast<unsigned long long>(seed) % 100003ULL;

  std::vector<std::vector<double>> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    std::vector<double> p(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) {
      const double u = radical_inverse(offset + static_cast<unsigned long long>(i),
                                       kBases[static_cast<std::size_t>(c)]);
      const auto& box = spec.chart_box[static_cast<std::size_t>(c)];
      p[static_cast<std::size_t>(c)] = box[0] + u * (box[1] - box[0]);
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

Tensor nabla_xi(const ManifoldSpec& spec, const PointFrame& f) {
  if (!f.has_xi) throw std::invalid_argument("manifold declares no xi field");
  const int n = f.n;
  Tensor out(n, {Variance::Contra, Variance::Co});
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Jet2 jt = spec.xi[static_cast<std::size_t>(i)].eval_jet(f.p, j, j);
      double s = jt.da;
      for (int m = 0; m < n; ++m) s += f.gamma(i, j, m) * f.xi(m);
      out(i, j) = s;
    }
  return out;
}

}  // namespace nf
