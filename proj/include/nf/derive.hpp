#pragma once

#include "nf/tensors.hpp"

namespace nf {

// Operator-valued 2-form from a (0,4) tensor in function-argument order:
// out[a,z,x,y] = g^{av} t04[x,y,z,v], the component a of T(e_x,e_y)e_z.
// Matches the r13 layout, so the curvature operator is r13 itself.
Tensor curv_op_from_04(const Tensor& t04, const MetricPair& m);

// Derivation of a (0,s) tensor by an operator-valued 2-form:
//   (B.K)(X1,...,Xs,X,Y) = -sum_j K(X1,...,B(X,Y)Xj,...,Xs),
// with the two new slots appended last in order (X,Y).
// derive() runs the parallel kernel; derive_serial() is the reference
// implementation with identical per-component summation order.
Tensor derive(const Tensor& b_op, const Tensor& k);
Tensor derive_serial(const Tensor& b_op, const Tensor& k);

// Wedge endomorphism field of a symmetric (0,2) tensor sigma:
// out[a,z,x,y] = sigma(y,z) delta^a_x - sigma(x,z) delta^a_y.
Tensor wedge_op_field(const Tensor& sigma);

// Tachibana operator Q(sigma,K) = derive(wedge_op_field(sigma), K).
Tensor q_op(const Tensor& sigma, const Tensor& k);

// max-abs of derive(b_op, k) - L * q_op(sigma, k).
double condition_residual(const Tensor& b_op, const Tensor& k, const Tensor& sigma, double L);

}  // namespace nf
