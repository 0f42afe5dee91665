#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "nf/family.hpp"
#include "nf/geometry.hpp"
#include "test_manifolds.hpp"

using nf::CoeffVector;
using nf::PointFrame;
using nf::Preset;
using nf::Tensor;

namespace {

CoeffVector random_coeffs(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  CoeffVector c;
  for (int i = 0; i < 8; ++i) c[i] = u(rng);
  return c;
}

double eval_T(const Tensor& t, const std::vector<double>& x, const std::vector<double>& y,
              const std::vector<double>& z, const std::vector<double>& v) {
  const int n = t.dim();
  double s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          s += t(a, b, c, d) * x[static_cast<std::size_t>(a)] * y[static_cast<std::size_t>(b)] *
               z[static_cast<std::size_t>(c)] * v[static_cast<std::size_t>(d)];
  return s;
}

}  // namespace

TEST_CASE("preset names round-trip in declared order") {
  const auto& all = nf::all_presets();
  REQUIRE(all.size() == 20);
  CHECK(nf::preset_name(all.front()) == "r");
  CHECK(nf::preset_name(all.back()) == "w9");
  for (Preset p : all) {
    auto back = nf::preset_from_name(nf::preset_name(p));
    REQUIRE(back.has_value());
    CHECK(*back == p);
  }
  CHECK_FALSE(nf::preset_from_name("weyl").has_value());
}

TEST_CASE("coefficient oracles at fixed dimensions") {
  {
    CoeffVector c = nf::coefficients(Preset::Conformal, 5);
    const double third = 1.0 / 3.0;
    CHECK(c[0] == doctest::Approx(1.0));
    CHECK(c[1] == doctest::Approx(-third));
    CHECK(c[2] == doctest::Approx(third));
    CHECK(c[3] == doctest::Approx(0.0));
    CHECK(c[4] == doctest::Approx(-third));
    CHECK(c[5] == doctest::Approx(third));
    CHECK(c[6] == doctest::Approx(0.0));
    CHECK(c[7] == doctest::Approx(1.0 / 12.0));
  }
  {
    CoeffVector c = nf::coefficients(Preset::Concircular, 4);
    CHECK(c[0] == doctest::Approx(1.0));
    for (int i = 1; i <= 6; ++i) CHECK(c[i] == doctest::Approx(0.0));
    CHECK(c[7] == doctest::Approx(-1.0 / 12.0));
  }
  {
    CoeffVector c = nf::coefficients(Preset::QuasiConformal, 4, 1.0, -0.5);
    CHECK(c[7] == doctest::Approx(1.0 / 6.0));
    CHECK(c[1] == doctest::Approx(-0.5));
    CHECK(c[2] == doctest::Approx(0.5));
    CHECK(c[4] == doctest::Approx(-0.5));
    CHECK(c[5] == doctest::Approx(0.5));
  }
  {
    CoeffVector c = nf::coefficients(Preset::Projective, 3);
    CHECK(c[1] == doctest::Approx(-0.5));
    CHECK(c[2] == doctest::Approx(0.5));
    CHECK(c[7] == doctest::Approx(0.0));
  }
  {
    CoeffVector c = nf::coefficients(Preset::PseudoProjective, 5, 2.0, 0.25);
    CHECK(c[7] == doctest::Approx(-(2.0 / 4.0 + 0.25) / 5.0));
    CHECK(c[2] == doctest::Approx(-0.25));
  }
  {
    // Conharmonic differs from conformal only in the r-term.
    CoeffVector con = nf::coefficients(Preset::Conformal, 6);
    CoeffVector chh = nf::coefficients(Preset::Conharmonic, 6);
    for (int i = 0; i <= 6; ++i) CHECK(con[i] == chh[i]);
    CHECK(chh[7] == 0.0);
    CHECK(con[7] == doctest::Approx(1.0 / 20.0));
  }
}

TEST_CASE("w-family sign pattern at n = 5") {
  const double q = 0.25;
  struct Row {
    Preset p;
    int i;
    double vi;
    int j;
    double vj;
  };
  const Row rows[] = {
      {Preset::W0, 1, -q, 5, q},  {Preset::W0Star, 1, q, 5, -q}, {Preset::W1, 1, q, 2, -q},
      {Preset::W1Star, 1, -q, 2, q}, {Preset::W2, 4, -q, 5, q},  {Preset::W3, 2, -q, 4, q},
      {Preset::W4, 5, q, 6, -q},  {Preset::W5, 2, -q, 5, q},     {Preset::W6, 1, -q, 6, q},
      {Preset::W7, 1, -q, 4, q},  {Preset::W8, 1, -q, 3, q},     {Preset::W9, 3, q, 4, -q},
  };
  for (const auto& row : rows) {
    CoeffVector c = nf::coefficients(row.p, 5);
    CHECK(c[0] == 1.0);
    CHECK(c[row.i] == doctest::Approx(row.vi));
    CHECK(c[row.j] == doctest::Approx(row.vj));
    double others = 0.0;
    for (int i = 1; i <= 7; ++i)
      if (i != row.i && i != row.j) others += std::abs(c[i]);
    CHECK(others == 0.0);
  }
}

TEST_CASE("coefficient errors") {
  CHECK_THROWS_AS(nf::coefficients(Preset::Conformal, 2), std::invalid_argument);
  CHECK_THROWS_AS(nf::coefficients(Preset::QuasiConformal, 4), std::invalid_argument);
  CHECK_THROWS_AS(nf::coefficients(Preset::PseudoProjective, 4, 1.0, {}), std::invalid_argument);
  CHECK_THROWS_AS(nf::coefficients(Preset::Custom, 4), std::invalid_argument);
}

TEST_CASE("preset r reproduces the function-order curvature tensor") {
  for (const auto& spec : {nft::s3(), nft::kenmotsu3()}) {
    for (const auto& p : nf::sample_points(spec, 3, 41)) {
      PointFrame f = nf::frame(spec, p);
      Tensor t = nf::build_T(f, nf::coefficients(Preset::R, f.n));
      CHECK(nf::max_abs_diff(t, f.r04f) == 0.0);
    }
  }
}

TEST_CASE("concircular tensor vanishes on constant curvature") {
  for (const auto& spec : {nft::s5(), nft::s3()}) {
    for (const auto& p : nf::sample_points(spec, 3, 43)) {
      PointFrame f = nf::frame(spec, p);
      Tensor t = nf::build_T(f, nf::coefficients(Preset::Concircular, f.n));
      CHECK(t.max_abs() < 1e-9);
    }
  }
}

TEST_CASE("conformal tensor vanishes on the hyperbolic model") {
  auto spec = nft::h5();
  for (const auto& p : nf::sample_points(spec, 3, 47)) {
    PointFrame f = nf::frame(spec, p);
    Tensor t = nf::build_T(f, nf::coefficients(Preset::Conformal, 5));
    CHECK(t.max_abs() < 1e-8);
  }
}

TEST_CASE("build_T is linear in the coefficients") {
  std::mt19937 rng(51);
  auto spec = nft::random_poly3(rng);
  auto pts = nf::sample_points(spec, 2, 53);
  for (const auto& p : pts) {
    PointFrame f = nf::frame(spec, p);
    for (int trial = 0; trial < 10; ++trial) {
      CoeffVector c1 = random_coeffs(rng);
      CoeffVector c2 = random_coeffs(rng);
      CoeffVector sum;
      for (int i = 0; i < 8; ++i) sum[i] = c1[i] + c2[i];
      Tensor lhs = nf::build_T(f, sum);
      Tensor rhs = nf::add(nf::build_T(f, c1), nf::build_T(f, c2));
      CHECK(nf::max_abs_diff(lhs, rhs) < 1e-12 * std::max(1.0, lhs.max_abs()));
    }
  }
}

TEST_CASE("quasi-conformal shape is antisymmetric in the first two arguments") {
  auto spec = nft::kenmotsu3();
  const auto p = nf::sample_points(spec, 1, 59).front();
  PointFrame f = nf::frame(spec, p);
  const Preset shaped[] = {Preset::R,          Preset::Conformal,  Preset::Conharmonic,
                           Preset::Concircular, Preset::Projective, Preset::MProjective,
                           Preset::W1,         Preset::W1Star};
  for (Preset pr : shaped) {
    Tensor t = nf::build_T(f, nf::coefficients(pr, f.n));
    CHECK(nf::antisymmetry_residual(t, 0, 1) < 1e-10 * std::max(1.0, t.max_abs()));
  }
  Tensor qc = nf::build_T(f, nf::coefficients(Preset::QuasiConformal, f.n, 0.7, 0.3));
  CHECK(nf::antisymmetry_residual(qc, 0, 1) < 1e-10 * std::max(1.0, qc.max_abs()));
  // Contrast: a preset outside the shape is not (X,Y)-antisymmetric here.
  Tensor w8 = nf::build_T(f, nf::coefficients(Preset::W8, f.n));
  CHECK(nf::antisymmetry_residual(w8, 0, 1) > 1e-3);
}

TEST_CASE("ricci_of_T matches its closed form") {
  std::mt19937 rng(61);
  std::vector<nf::ManifoldSpec> specs{nft::s3(), nft::kenmotsu3(), nft::desitter4(),
                                      nft::random_poly3(rng)};
  for (const auto& spec : specs) {
    for (const auto& p : nf::sample_points(spec, 2, 67)) {
      PointFrame f = nf::frame(spec, p);
      for (int trial = 0; trial < 6; ++trial) {
        CoeffVector c = random_coeffs(rng);
        Tensor direct = nf::ricci_of_T(f, c);
        Tensor closed = nf::ricci_of_T_closed_form(f, c);
        CHECK(nf::max_abs_diff(direct, closed) < 1e-9 * std::max(1.0, closed.max_abs()));
      }
      Tensor direct_r = nf::ricci_of_T(f, nf::coefficients(Preset::R, f.n));
      CHECK(nf::max_abs_diff(direct_r, f.ricci) < 1e-10 * std::max(1.0, f.ricci.max_abs()));
    }
  }
}

TEST_CASE("conformal trace vanishes on every frame") {
  std::mt19937 rng(71);
  std::vector<nf::ManifoldSpec> specs{nft::s5(), nft::kenmotsu3(), nft::kenmotsu5(),
                                      nft::desitter4(), nft::random_poly3(rng)};
  for (const auto& spec : specs) {
    for (const auto& p : nf::sample_points(spec, 2, 73)) {
      PointFrame f = nf::frame(spec, p);
      Tensor st = nf::ricci_of_T(f, nf::coefficients(Preset::Conformal, f.n));
      CHECK(st.max_abs() < 1e-9 * std::max(1.0, f.ricci.max_abs()));
    }
  }
}

TEST_CASE("family tensor evaluated on vectors matches its definition") {
  // Dual route: multilinear evaluation against a term-by-term scalar build.
  std::mt19937 rng(79);
  auto spec = nft::kenmotsu3();
  const auto p = nf::sample_points(spec, 1, 83).front();
  PointFrame f = nf::frame(spec, p);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto rand_vec = [&] {
    std::vector<double> v(3);
    for (auto& x : v) x = u(rng);
    return v;
  };
  auto g_of = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        s += f.metric.g(i, j) * a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
    return s;
  };
  auto s_of = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        s += f.ricci(i, j) * a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
    return s;
  };
  auto r_of = [&](const std::vector<double>& a, const std::vector<double>& b,
                  const std::vector<double>& c, const std::vector<double>& d) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l)
            s += f.r04f(i, j, k, l) * a[static_cast<std::size_t>(i)] *
                 b[static_cast<std::size_t>(j)] * c[static_cast<std::size_t>(k)] *
                 d[static_cast<std::size_t>(l)];
    return s;
  };
  for (int trial = 0; trial < 20; ++trial) {
    CoeffVector c = random_coeffs(rng);
    Tensor t = nf::build_T(f, c);
    auto x = rand_vec(), y = rand_vec(), z = rand_vec(), v = rand_vec();
    const double direct = eval_T(t, x, y, z, v);
    const double expected = c[0] * r_of(x, y, z, v) + c[1] * s_of(y, z) * g_of(x, v) +
                            c[2] * s_of(x, z) * g_of(y, v) + c[3] * s_of(x, y) * g_of(z, v) +
                            c[4] * s_of(x, v) * g_of(y, z) + c[5] * s_of(y, v) * g_of(x, z) +
                            c[6] * s_of(z, v) * g_of(x, y) +
                            c[7] * f.r * (g_of(y, z) * g_of(x, v) - g_of(x, z) * g_of(y, v));
    CHECK(direct == doctest::Approx(expected).epsilon(1e-10));
  }
}
