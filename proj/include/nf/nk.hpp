#pragma once

// Nullity-structure layer: built-in example manifolds, verification of the
// identities every unit field in N(k) must satisfy, and closed forms for the
// family tensor contracted against the distinguished field.

#include <string>
#include <vector>

#include "nf/family.hpp"
#include "nf/geometry.hpp"
#include "nf/tensors.hpp"

namespace nf {

// Named example manifolds with declared (k, epsilon) and class tags.
const std::vector<ManifoldSpec>& builtin_registry();

// nullptr when no entry matches.
const ManifoldSpec* find_builtin(const std::string& name);

// Generic 3-dim chart: identity metric plus a small seeded symmetric
// quadratic perturbation. Deterministic per seed; carries no xi.
ManifoldSpec random_3d(unsigned seed);

// One verified identity. residual is the max mismatch over all components
// and random probe vectors; scale is what the caller compares it against.
struct IdentityCheck {
  std::string id;
  std::string tag;
  double residual = 0.0;
  double scale = 1.0;
};

// Evaluates both sides of each nullity identity with the frame's declared
// (k, epsilon): nine vector and trace identities plus the Ricci-power one
// for l = 0..3. Requires has_xi.
std::vector<IdentityCheck> verify_nullity(const PointFrame& f, unsigned seed = 0);

// The family tensor contracted against xi, one member per slot pattern.
// Vector-valued members carry the value index first.
struct XiForms {
  Tensor t_xy_xi;      // [i,x,y]  component i of T(X,Y)xi
  Tensor t_xix_xi;     // [i,x]    component i of T(xi,X)xi
  Tensor t_xiy_z;      // [i,y,z]  component i of T(xi,Y)Z
  Tensor eta_t_xy_xi;  // [x,y]    eta(T(X,Y)xi)
  Tensor t_xy_xi_v;    // [x,y,v]  T(X,Y,xi,V)
  Tensor t_xxi_xi;     // [i,x]    component i of T(X,xi)xi
  Tensor st_x_xi;      // [x]      S_T(X,xi)
  double st_xi_xi = 0.0;
};

// Closed-form route: every member assembled from (g, S, Q, r, eta, xi,
// epsilon, k, n) and the coefficients only. Requires has_xi.
XiForms lemma_oracle(const PointFrame& f, const CoeffVector& c);

// Independent route: direct contractions of build_T / ricci_of_T with xi.
XiForms lemma_direct(const PointFrame& f, const CoeffVector& c);

// Max over members of the max-abs difference, with a comparison scale.
struct XiFormsDiff {
  double residual = 0.0;
  double scale = 1.0;
};
XiFormsDiff xi_forms_diff(const XiForms& a, const XiForms& b);

// Residual of the structure equation nabla_j xi^i = delta^i_j - eta_j xi^i
// at the frame point. Zero characterizes the warped-product class.
double kenmotsu_structure_residual(const ManifoldSpec& spec, const PointFrame& f);

}  // namespace nf
