#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nf/geometry.hpp"
#include "nf/tensors.hpp"
#include "test_manifolds.hpp"

using nf::ManifoldSpec;
using nf::PointFrame;
using nf::Tensor;
using nf::Variance;
using namespace nft;

namespace {

Tensor constant_curvature_r13(const PointFrame& f, double k) {
  const int n = f.n;
  Tensor exp(n, {Variance::Contra, Variance::Co, Variance::Co, Variance::Co});
  for (int i = 0; i < n; ++i)
    for (int z = 0; z < n; ++z)
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          exp(i, z, x, y) =
              k * (f.metric.g(y, z) * (i == x ? 1.0 : 0.0) - f.metric.g(x, z) * (i == y ? 1.0 : 0.0));
  return exp;
}

void check_riemann_invariants(const ManifoldSpec& spec, const std::vector<double>& p) {
  PointFrame f = nf::frame(spec, p);
  const double scale = std::max(1.0, f.r04.max_abs());

  CHECK(nf::antisymmetry_residual(f.r04, 0, 1) < 1e-9 * scale);
  CHECK(nf::antisymmetry_residual(f.r04, 2, 3) < 1e-9 * scale);

  // Pair exchange of the two antisymmetric index pairs.
  const std::vector<int> pair_swap{2, 3, 0, 1};
  CHECK(nf::max_abs_diff(f.r04, nf::permute(f.r04, pair_swap)) < 1e-9 * scale);

  // First Bianchi: cyclic sum over the three lower slots of R13.
  const int n = f.n;
  double bianchi = 0.0;
  for (int i = 0; i < n; ++i)
    for (int z = 0; z < n; ++z)
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          bianchi = std::max(bianchi, std::abs(f.r13(i, z, x, y) + f.r13(i, x, y, z) +
                                               f.r13(i, y, z, x)));
  CHECK(bianchi < 1e-9 * scale);

  // Metric compatibility: d_k g_ij = Gamma^l_ki g_lj + Gamma^l_kj g_il.
  double compat = 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double dg = spec.g_at(i, j).eval_jet(p, k, k).da;
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += f.gamma(l, k, i) * f.metric.g(l, j) + f.gamma(l, k, j) * f.metric.g(i, l);
        compat = std::max(compat, std::abs(dg - s));
      }
  CHECK(compat < 1e-10 * scale);

  // Function-order curvature is the (3,2,0,1)-relabeling of the classical one.
  double relabel = 0.0;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int v = 0; v < n; ++v)
          relabel = std::max(relabel, std::abs(f.r04f(x, y, z, v) - f.r04(v, z, x, y)));
  CHECK(relabel < 1e-12 * scale);

  // S symmetric; Q self-adjoint against g.
  CHECK(nf::symmetry_residual(f.ricci, 0, 1) < 1e-10 * scale);
  std::mt19937 rng(321);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> xv(static_cast<std::size_t>(n)), yv(static_cast<std::size_t>(n));
    for (auto& v : xv) v = u(rng);
    for (auto& v : yv) v = u(rng);
    double lhs = 0.0, rhs = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double qx = 0.0, qy = 0.0;
        for (int m = 0; m < n; ++m) {
          qx += f.q(i, m) * xv[static_cast<std::size_t>(m)];
          qy += f.q(j, m) * yv[static_cast<std::size_t>(m)];
        }
        lhs += f.metric.g(i, j) * qx * yv[static_cast<std::size_t>(j)];
        rhs += f.metric.g(i, j) * xv[static_cast<std::size_t>(i)] * qy;
      }
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
}

}  // namespace

TEST_CASE("flat metric: vanishing symbols and curvature") {
  auto spec = flat3();
  for (const auto& p : nf::sample_points(spec, 4, 1)) {
    PointFrame f = nf::frame(spec, p);
    CHECK(f.gamma.max_abs() == 0.0);
    CHECK(f.r13.max_abs() == 0.0);
    CHECK(f.ricci.max_abs() == 0.0);
    CHECK(f.r == 0.0);
    CHECK(f.s_pow[1].max_abs() == 0.0);
    CHECK(f.s_pow[2].max_abs() == 0.0);
    CHECK(nf::max_abs_diff(f.s_pow[0], f.metric.g) == 0.0);
  }
}

TEST_CASE("hyperbolic warped model: known symbols") {
  auto spec = h3();
  const std::vector<double> p{0.3, 0.4, -0.2};
  Tensor gamma = nf::christoffel(spec, p);
  const double e2t = std::exp(2.0 * 0.3);
  CHECK(gamma(0, 1, 1) == doctest::Approx(-e2t).epsilon(1e-12));
  CHECK(gamma(0, 2, 2) == doctest::Approx(-e2t).epsilon(1e-12));
  CHECK(gamma(1, 0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gamma(2, 0, 2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gamma(0, 0, 0) == doctest::Approx(0.0));
}

TEST_CASE("sphere polar chart: known symbol and curvature component") {
  auto spec = s2();
  {
    const std::vector<double> p{kPi / 4, 1.0};
    Tensor gamma = nf::christoffel(spec, p);
    CHECK(gamma(0, 1, 1) == doctest::Approx(-0.5).epsilon(1e-12));
  }
  {
    const std::vector<double> p{kPi / 3, 2.0};
    auto [r13, r04] = nf::riemann(spec, p);
    CHECK(r04(0, 1, 0, 1) == doctest::Approx(0.75).epsilon(1e-12));
    // Oracle: classical storage R_ijkl = g_ik g_jl - g_il g_jk at k = 1.
    PointFrame f = nf::frame(spec, p);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l)
            CHECK(r04(i, j, k, l) == doctest::Approx(f.metric.g(i, k) * f.metric.g(j, l) -
                                                     f.metric.g(i, l) * f.metric.g(j, k))
                                         .epsilon(1e-11));
    // Function order flips the sign of that component.
    CHECK(f.r04f(0, 1, 0, 1) == doctest::Approx(-0.75).epsilon(1e-12));
  }
}

TEST_CASE("constant-curvature form of R13") {
  struct Case {
    ManifoldSpec spec;
    double k;
  };
  const Case cases[] = {{s3(), 1.0}, {h3(), -1.0}, {desitter4(), 1.0}, {flat3(), 0.0}};
  for (const auto& c : cases) {
    for (const auto& p : nf::sample_points(c.spec, 5, 3)) {
      PointFrame f = nf::frame(c.spec, p);
      Tensor expected = constant_curvature_r13(f, c.k);
      const double scale = std::max(1.0, expected.max_abs());
      CHECK(nf::max_abs_diff(f.r13, expected) < 1e-9 * scale);
    }
  }
}

TEST_CASE("unit three-sphere: Ricci data") {
  auto spec = s3();
  for (const auto& p : nf::sample_points(spec, 5, 7)) {
    PointFrame f = nf::frame(spec, p);
    CHECK(nf::max_abs_diff(f.ricci, nf::scale(f.metric.g, 2.0)) < 1e-9);
    CHECK(f.r == doctest::Approx(6.0).epsilon(1e-10));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(f.q(i, j) == doctest::Approx(i == j ? 2.0 : 0.0).epsilon(1e-9));
    CHECK(nf::max_abs_diff(f.s_pow[2], nf::scale(f.metric.g, 4.0)) < 1e-8);
    CHECK(nf::max_abs_diff(f.s_pow[3], nf::scale(f.metric.g, 8.0)) < 1e-8);
  }
}

TEST_CASE("exact symbols match finite differences") {
  std::mt19937 rng(5);
  ManifoldSpec specs[] = {h3(), s2(), s3(), kenmotsu3(), desitter4(), random_poly3(rng)};
  for (const auto& spec : specs) {
    for (const auto& p : nf::sample_points(spec, 4, 11)) {
      Tensor ad = nf::christoffel(spec, p);
      Tensor fd = nf::christoffel_fd(spec, p, 1e-5);
      const double scale = std::max(1.0, ad.max_abs());
      CHECK(nf::max_abs_diff(ad, fd) < 1e-5 * scale);
    }
  }
}

TEST_CASE("riemann invariants on generic and named manifolds") {
  std::mt19937 rng(9);
  ManifoldSpec specs[] = {s3(), kenmotsu3(), desitter4(), random_poly3(rng), random_poly3(rng)};
  for (const auto& spec : specs)
    for (const auto& p : nf::sample_points(spec, 4, 13)) check_riemann_invariants(spec, p);
}

TEST_CASE("warped Kenmotsu model: frozen Ricci decomposition") {
  auto spec = kenmotsu3();
  for (const auto& p : nf::sample_points(spec, 6, 17)) {
    PointFrame f = nf::frame(spec, p);
    const double em2t = std::exp(-2.0 * p[0]);
    const double alpha = em2t - 2.0;
    const double beta = -em2t;
    Tensor expected(3, {Variance::Co, Variance::Co});
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        expected(i, j) = alpha * f.metric.g(i, j) + beta * f.eta(i) * f.eta(j);
    CHECK(nf::max_abs_diff(f.ricci, expected) < 1e-9 * std::max(1.0, expected.max_abs()));
    CHECK(f.r == doctest::Approx(2.0 * em2t - 6.0).epsilon(1e-10));
    CHECK(f.eta(0) == doctest::Approx(1.0));
    CHECK(f.eta(1) == doctest::Approx(0.0));
    CHECK(f.eta(2) == doctest::Approx(0.0));
    CHECK(f.eps == 1.0);
  }
}

TEST_CASE("lorentzian frame: unit timelike field") {
  auto spec = desitter4();
  for (const auto& p : nf::sample_points(spec, 4, 19)) {
    PointFrame f = nf::frame(spec, p);
    CHECK(f.eps == -1.0);
    CHECK(f.metric.signature == 1);
    // eta(xi) = eps * g(xi,xi) = 1.
    double ex = 0.0;
    for (int i = 0; i < 4; ++i) ex += f.eta(i) * f.xi(i);
    CHECK(ex == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("hopf field on the three-sphere is unit") {
  auto spec = s3();
  for (const auto& p : nf::sample_points(spec, 5, 23)) {
    PointFrame f = nf::frame(spec, p);
    double norm = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) norm += f.metric.g(i, j) * f.xi(i) * f.xi(j);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("frame rejects non-unit or mis-declared xi") {
  auto bad_unit = ManifoldSpec::from_strings(
      "bad", 3, {{"1", "0", "0"}, {"cos(x0)^2", "0"}, {"sin(x0)^2"}}, {"0", "1", "0"}, 1.0, 1,
      {{0.3, 1.2}, {0.3, 6.0}, {0.3, 6.0}}, "generic", false);
  CHECK_THROWS_AS(nf::frame(bad_unit, {0.7, 1.0, 1.0}), std::runtime_error);

  auto bad_eps = s3();
  bad_eps.epsilon = -1;
  CHECK_THROWS_AS(nf::frame(bad_eps, {0.7, 1.0, 1.0}), std::runtime_error);
}

TEST_CASE("covariant derivative of xi on Kenmotsu models") {
  // nabla_j xi^i = delta^i_j - eta_j xi^i characterizes the class.
  for (const auto& spec : {kenmotsu3(), h3()}) {
    for (const auto& p : nf::sample_points(spec, 5, 29)) {
      PointFrame f = nf::frame(spec, p);
      Tensor nx = nf::nabla_xi(spec, f);
      double res = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          res = std::max(res, std::abs(nx(i, j) - ((i == j ? 1.0 : 0.0) - f.eta(j) * f.xi(i))));
      CHECK(res < 1e-9);
    }
  }
}

TEST_CASE("sample points: deterministic, in box, distinct") {
  auto spec = kenmotsu3();
  auto a = nf::sample_points(spec, 20, 42);
  auto b = nf::sample_points(spec, 20, 42);
  CHECK(a == b);
  auto c = nf::sample_points(spec, 20, 43);
  CHECK(a != c);
  for (const auto& p : a) {
    REQUIRE(p.size() == 3);
    for (int i = 0; i < 3; ++i) {
      CHECK(p[static_cast<std::size_t>(i)] >= spec.chart_box[static_cast<std::size_t>(i)][0]);
      CHECK(p[static_cast<std::size_t>(i)] <= spec.chart_box[static_cast<std::size_t>(i)][1]);
    }
  }
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) CHECK(a[i] != a[j]);
}

TEST_CASE("nullity Ricci contraction on declared frames") {
  // S(X,xi) = eps k (n-1) eta(X) across k/eps signatures, including k = 0.
  ManifoldSpec specs[] = {s3(), h3(), kenmotsu3(), desitter4(), flat3()};
  for (const auto& spec : specs) {
    for (const auto& p : nf::sample_points(spec, 4, 31)) {
      PointFrame f = nf::frame(spec, p);
      const double c = f.eps * f.k * (f.n - 1);
      for (int x = 0; x < f.n; ++x) {
        double sxxi = 0.0;
        for (int m = 0; m < f.n; ++m) sxxi += f.ricci(x, m) * f.xi(m);
        CHECK(sxxi == doctest::Approx(c * f.eta(x)).epsilon(1e-9).scale(1.0));
      }
    }
  }
}
