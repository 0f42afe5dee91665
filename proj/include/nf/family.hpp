#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nf/geometry.hpp"
#include "nf/tensors.hpp"

namespace nf {

// Coefficients of the eight-term curvature family
//   T(X,Y,Z,V) = a0 R(X,Y,Z,V) + a1 S(Y,Z)g(X,V) + a2 S(X,Z)g(Y,V)
//              + a3 S(X,Y)g(Z,V) + a4 S(X,V)g(Y,Z) + a5 S(Y,V)g(X,Z)
//              + a6 S(Z,V)g(X,Y) + a7 r (g(Y,Z)g(X,V) - g(X,Z)g(Y,V)).
struct CoeffVector {
  std::array<double, 8> a{};

  double operator[](int i) const { return a[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return a[static_cast<std::size_t>(i)]; }
};

enum class Preset {
  R,
  QuasiConformal,
  Conformal,
  Conharmonic,
  Concircular,
  PseudoProjective,
  Projective,
  MProjective,
  W0,
  W0Star,
  W1,
  W1Star,
  W2,
  W3,
  W4,
  W5,
  W6,
  W7,
  W8,
  W9,
  Custom,
};

// The 20 named presets in CLI order, excluding Custom.
const std::vector<Preset>& all_presets();
std::string_view preset_name(Preset p);
std::optional<Preset> preset_from_name(std::string_view name);

// True for the two presets that keep (a0, a1) free.
bool preset_is_parametric(Preset p);

// Closed-form coefficients at dimension n. QuasiConformal and PseudoProjective
// require both free parameters; other presets ignore them. Throws on n < 3,
// on Custom, and on missing free parameters.
CoeffVector coefficients(Preset p, int n, std::optional<double> a0 = {},
                         std::optional<double> a1 = {});

// (0,4) family tensor in function-argument order: out[x,y,z,v] = T(e_x,e_y,e_z,e_v).
Tensor build_T(const PointFrame& f, const CoeffVector& c);

// Ricci-type trace: S_T(Y,Z) = g^{iv} T(e_i, Y, Z, e_v).
Tensor ricci_of_T(const PointFrame& f, const CoeffVector& c);

// Closed form the trace must reproduce:
//   S_T = (a0 + n a1 + a2 + a3 + a5 + a6) S + (a4 + (n-1) a7) r g.
Tensor ricci_of_T_closed_form(const PointFrame& f, const CoeffVector& c);

}  // namespace nf
