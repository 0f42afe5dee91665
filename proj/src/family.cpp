#include "nf/family.hpp"

#include <stdexcept>

namespace nf {

namespace {

struct PresetRow {
  Preset preset;
  std::string_view name;
};

constexpr PresetRow kRows[] = {
    {Preset::R, "r"},
    {Preset::QuasiConformal, "quasi-conformal"},
    {Preset::Conformal, "conformal"},
    {Preset::Conharmonic, "conharmonic"},
    {Preset::Concircular, "concircular"},
    {Preset::PseudoProjective, "pseudo-projective"},
    {Preset::Projective, "projective"},
    {Preset::MProjective, "m-projective"},
    {Preset::W0, "w0"},
    {Preset::W0Star, "w0star"},
    {Preset::W1, "w1"},
    {Preset::W1Star, "w1star"},
    {Preset::W2, "w2"},
    {Preset::W3, "w3"},
    {Preset::W4, "w4"},
    {Preset::W5, "w5"},
    {Preset::W6, "w6"},
    {Preset::W7, "w7"},
    {Preset::W8, "w8"},
    {Preset::W9, "w9"},
};

}  // namespace

const std::vector<Preset>& all_presets() {
  static const std::vector<Preset> presets = [] {
    std::vector<Preset> v;
    for (const auto& row : kRows) v.push_back(row.preset);
    return v;
  }();
  return presets;
}

std::string_view preset_name(Preset p) {
  for (const auto& row : kRows)
    if (row.preset == p) return row.name;
  return "custom";
}

std::optional<Preset> preset_from_name(std::string_view name) {
  for (const auto& row : kRows)
    if (row.name == name) return row.preset;
  return std::nullopt;
}

bool preset_is_parametric(Preset p) {
  return p == Preset::QuasiConformal || p == Preset::PseudoProjective;
}

CoeffVector coefficients(Preset p, int n, std::optional<double> a0_opt,
                         std::optional<double> a1_opt) {
  if (n < 3) throw std::invalid_argument("presets require dimension >= 3");
  if (p == Preset::Custom) throw std::invalid_argument("custom preset has no closed form");
  if (preset_is_parametric(p) && (!a0_opt || !a1_opt))
    throw std::invalid_argument("parametric preset needs both free parameters");

  const double n1 = 1.0 / static_cast<double>(n - 1);
  const double n2 = 1.0 / static_cast<double>(n - 2);
  CoeffVector c;
  switch (p) {
    case Preset::R:
      c[0] = 1.0;
      break;
    case Preset::QuasiConformal: {
      const double a0 = *a0_opt, a1 = *a1_opt;
      c[0] = a0;
      c[1] = a1;
      c[2] = -a1;
      c[4] = a1;
      c[5] = -a1;
      c[7] = -(a0 * n1 + 2.0 * a1) / static_cast<double>(n);
      break;
    }
    case Preset::Conformal:
    case Preset::Conharmonic:
      c[0] = 1.0;
      c[1] = -n2;
      c[2] = n2;
      c[4] = -n2;
      c[5] = n2;
      c[7] = (p == Preset::Conformal) ? n1 * n2 : 0.0;
      break;
    case Preset::Concircular:
      c[0] = 1.0;
      c[7] = -1.0 / static_cast<double>(n * (n - 1));
      break;
    case Preset::PseudoProjective: {
      const double a0 = *a0_opt, a1 = *a1_opt;
      c[0] = a0;
      c[1] = a1;
      c[2] = -a1;
      c[7] = -(a0 * n1 + a1) / static_cast<double>(n);
      break;
    }
    case Preset::Projective:
      c[0] = 1.0;
      c[1] = -n1;
      c[2] = n1;
      break;
    case Preset::MProjective:
      c[0] = 1.0;
      c[1] = -0.5 * n1;
      c[2] = 0.5 * n1;
      c[4] = -0.5 * n1;
      c[5] = 0.5 * n1;
      break;
    case Preset::W0:
      c[0] = 1.0;
      c[1] = -n1;
      c[5] = n1;
      break;
    case Preset::W0Star:
      c[0] = 1.0;
      c[1] = n1;
      c[5] = -n1;
      break;
    case Preset::W1:
      c[0] = 1.0;
      c[1] = n1;
      c[2] = -n1;
      break;
    case Preset::W1Star:
      c[0] = 1.0;
      c[1] = -n1;
      c[2] = n1;
      break;
    case Preset::W2:
      c[0] = 1.0;
      c[4] = -n1;
      c[5] = n1;
      break;
    case Preset::W3:
      c[0] = 1.0;
      c[2] = -n1;
      c[4] = n1;
      break;
    case Preset::W4:
      c[0] = 1.0;
      c[5] = n1;
      c[6] = -n1;
      break;
    case Preset::W5:
      c[0] = 1.0;
      c[2] = -n1;
      c[5] = n1;
      break;
    case Preset::W6:
      c[0] = 1.0;
      c[1] = -n1;
      c[6] = n1;
      break;
    case Preset::W7:
      c[0] = 1.0;
      c[1] = -n1;
      c[4] = n1;
      break;
    case Preset::W8:
      c[0] = 1.0;
      c[1] = -n1;
      c[3] = n1;
      break;
    case Preset::W9:
      c[0] = 1.0;
      c[3] = n1;
      c[4] = -n1;
      break;
    case Preset::Custom:
      break;
  }
  return c;
}

Tensor build_T(const PointFrame& f, const CoeffVector& c) {
  const int n = f.n;
  const Tensor& g = f.metric.g;
  const Tensor& S = f.ricci;
  Tensor out(n, {Variance::Co, Variance::Co, Variance::Co, Variance::Co});
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int v = 0; v < n; ++v)
          out(x, y, z, v) = c[0] * f.r04f(x, y, z, v) + c[1] * S(y, z) * g(x, v) +
                            c[2] * S(x, z) * g(y, v) + c[3] * S(x, y) * g(z, v) +
                            c[4] * S(x, v) * g(y, z) + c[5] * S(y, v) * g(x, z) +
                            c[6] * S(z, v) * g(x, y) +
                            c[7] * f.r * (g(y, z) * g(x, v) - g(x, z) * g(y, v));
  return out;
}

Tensor ricci_of_T(const PointFrame& f, const CoeffVector& c) {
  const int n = f.n;
  const Tensor t = build_T(f, c);
  Tensor out(n, {Variance::Co, Variance::Co});
  for (int y = 0; y < n; ++y)
    for (int z = 0; z < n; ++z) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int v = 0; v < n; ++v) s += f.metric.g_inv(i, v) * t(i, y, z, v);
      out(y, z) = s;
    }
  return out;
}

Tensor ricci_of_T_closed_form(const PointFrame& f, const CoeffVector& c) {
  const double cs = c[0] + static_cast<double>(f.n) * c[1] + c[2] + c[3] + c[5] + c[6];
  const double cg = (c[4] + static_cast<double>(f.n - 1) * c[7]) * f.r;
  return add(scale(f.ricci, cs), scale(f.metric.g, cg));
}

}  // namespace nf
