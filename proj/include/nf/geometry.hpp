#pragma once

#include <array>
#include <string>
#include <vector>

#include "nf/expr.hpp"
#include "nf/tensors.hpp"

namespace nf {

// Coordinate-chart description of a semi-Riemannian manifold with an optional
// distinguished unit field xi and declared nullity constants (k, epsilon).
struct ManifoldSpec {
  std::string name;
  int n = 0;
  // Row-major n*n grid of component expressions, filled symmetrically.
  std::vector<Expr> metric;
  // Component expressions of xi; empty when the manifold declares no field.
  std::vector<Expr> xi;
  double k = 0.0;
  int epsilon = 1;
  // Per-coordinate sampling interval, away from chart singularities.
  std::vector<std::array<double, 2>> chart_box;
  std::string class_tag = "generic";
  bool constant_curvature = false;

  const Expr& g_at(int i, int j) const {
    return metric[static_cast<std::size_t>(i * n + j)];
  }

  static ManifoldSpec from_strings(std::string name, int n,
                                   const std::vector<std::vector<std::string>>& upper_metric,
                                   const std::vector<std::string>& xi,
                                   double k, int epsilon,
                                   std::vector<std::array<double, 2>> chart_box,
                                   std::string class_tag, bool constant_curvature = false);
};

// Everything curvature-related evaluated at one chart point.
//
// Index layouts:
//   gamma[i,j,k]  = Gamma^i_jk, symmetric in (j,k)
//   r13[i,z,x,y]  = component i of R(e_x,e_y)e_z
//   r04           = lower(r13, slot 0), classical order: r04[i,j,k,l] = g(R(e_k,e_l)e_j, e_i)
//   r04f[x,y,z,v] = g(R(e_x,e_y)e_z, e_v), function-argument order
//   ricci[y,z]    = trace of X -> R(X,e_y)e_z
//   q[i,z]        = Ricci operator, (Q X)^i = q[i,z] X^z
//   s_pow[l]      = S^l with S^0 = g, S^l(X,Y) = S(Q^{l-1}X, Y)
struct PointFrame {
  std::vector<double> p;
  int n = 0;
  MetricPair metric;
  Tensor gamma;
  Tensor r13;
  Tensor r04;
  Tensor r04f;
  Tensor ricci;
  Tensor q;
  double r = 0.0;
  std::vector<Tensor> s_pow;
  bool has_xi = false;
  Tensor xi;   // (1,0)
  Tensor eta;  // (0,1), eta_j = eps * g_jm xi^m
  double eps = 1.0;
  double k = 0.0;
};

// Levi-Civita symbols Gamma^i_jk from exact second-order automatic
// differentiation of the metric expressions.
Tensor christoffel(const ManifoldSpec& spec, const std::vector<double>& p);

// Independent oracle: same symbols from central differences of the metric.
Tensor christoffel_fd(const ManifoldSpec& spec, const std::vector<double>& p, double h = 1e-5);

// R13 and R04 (classical order, lower(R13, 0)). Sign fixed so constant
// curvature spaces satisfy R(X,Y)Z = k(g(Y,Z)X - g(X,Z)Y).
std::pair<Tensor, Tensor> riemann(const ManifoldSpec& spec, const std::vector<double>& p);

// Full frame with Ricci data and S^l cache for l = 0..max_l.
PointFrame frame(const ManifoldSpec& spec, const std::vector<double>& p, int max_l = 3);

// Deterministic low-discrepancy points inside the chart box.
std::vector<std::vector<double>> sample_points(const ManifoldSpec& spec, int count,
                                               unsigned seed);

// Covariant derivative of xi: out[i,j] = nabla_j xi^i. Requires has_xi.
Tensor nabla_xi(const ManifoldSpec& spec, const PointFrame& f);

}  // namespace nf
