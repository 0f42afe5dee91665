#include "nf/derive.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "nf/threads.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nf {

int thread_cap() {
#ifdef _OPENMP
  int cap = omp_get_max_threads();
  if (const char* env = std::getenv("NULLITY_FORGE_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && parsed > 0)
      cap = std::min(cap, static_cast<int>(parsed));
  }
  return std::max(1, cap);
#else
  return 1;
#endif
}

namespace {

void require_0s(const Tensor& k) {
  if (k.rank() < 1) throw std::invalid_argument("derivation needs rank >= 1");
  for (int s = 0; s < k.rank(); ++s)
    if (k.variance(s) != Variance::Co)
      throw std::invalid_argument("derivation acts on (0,s) tensors; lower the input first");
}

void require_op(const Tensor& b) {
  if (b.rank() != 4 || b.variance(0) != Variance::Contra || b.variance(1) != Variance::Co ||
      b.variance(2) != Variance::Co || b.variance(3) != Variance::Co)
    throw std::invalid_argument("operator field must be a (1,3) tensor");
}

// Shared kernel: one output component per (flat j-block, x, y) triple, inner
// summation order fixed so serial and parallel results are bit-identical.
template <bool Parallel>
Tensor derive_impl(const Tensor& b_op, const Tensor& k) {
  require_op(b_op);
  require_0s(k);
  const int n = k.dim();
  if (b_op.dim() != n) throw std::invalid_argument("dimension mismatch");
  const int s = k.rank();

  std::vector<Variance> out_var(static_cast<std::size_t>(s + 2), Variance::Co);
  Tensor out(n, out_var);

  std::vector<std::size_t> stride(static_cast<std::size_t>(s));
  stride[static_cast<std::size_t>(s - 1)] = 1;
  for (int m = s - 2; m >= 0; --m)
    stride[static_cast<std::size_t>(m)] =
        stride[static_cast<std::size_t>(m + 1)] * static_cast<std::size_t>(n);
  const std::size_t blocks = stride[0] * static_cast<std::size_t>(n);

  const double* kd = k.data().data();
  double* od = out.data().data();
  const auto& b = b_op;

#ifdef _OPENMP
  const int nt = Parallel ? thread_cap() : 1;
#pragma omp parallel for schedule(static) num_threads(nt)
#endif
  for (long long fj = 0; fj < static_cast<long long>(blocks); ++fj) {
    // Decode the K multi-index once per block.
    int jidx[16];
    std::size_t rem = static_cast<std::size_t>(fj);
    for (int m = s - 1; m >= 0; --m) {
      jidx[m] = static_cast<int>(rem % static_cast<std::size_t>(n));
      rem /= static_cast<std::size_t>(n);
    }
    const std::size_t obase = static_cast<std::size_t>(fj) * static_cast<std::size_t>(n) *
                              static_cast<std::size_t>(n);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        double acc = 0.0;
        for (int m = 0; m < s; ++m) {
          const int jm = jidx[m];
          const std::size_t base = static_cast<std::size_t>(fj) -
                                   static_cast<std::size_t>(jm) * stride[static_cast<std::size_t>(m)];
          for (int a = 0; a < n; ++a)
            acc -= kd[base + static_cast<std::size_t>(a) * stride[static_cast<std::size_t>(m)]] *
                   b(a, jm, x, y);
        }
        od[obase + static_cast<std::size_t>(x * n + y)] = acc;
      }
  }
  return out;
}

}  // namespace

Tensor curv_op_from_04(const Tensor& t04, const MetricPair& m) {
  const int n = t04.dim();
  Tensor out(n, {Variance::Contra, Variance::Co, Variance::Co, Variance::Co});
  for (int a = 0; a < n; ++a)
    for (int z = 0; z < n; ++z)
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          double s = 0.0;
          for (int v = 0; v < n; ++v) s += m.g_inv(a, v) * t04(x, y, z, v);
          out(a, z, x, y) = s;
        }
  return out;
}

Tensor derive(const Tensor& b_op, const Tensor& k) { return derive_impl<true>(b_op, k); }

Tensor derive_serial(const Tensor& b_op, const Tensor& k) { return derive_impl<false>(b_op, k); }

Tensor wedge_op_field(const Tensor& sigma) {
  if (sigma.rank() != 2) throw std::invalid_argument("sigma must be a (0,2) tensor");
  const double asym = symmetry_residual(sigma, 0, 1);
  if (asym > 1e-9 * std::max(1.0, sigma.max_abs()))
    throw std::invalid_argument("sigma is not symmetric");
  const int n = sigma.dim();
  Tensor out(n, {Variance::Contra, Variance::Co, Variance::Co, Variance::Co});
  for (int a = 0; a < n; ++a)
    for (int z = 0; z < n; ++z)
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          out(a, z, x, y) = sigma(y, z) * (a == x ? 1.0 : 0.0) - sigma(x, z) * (a == y ? 1.0 : 0.0);
  return out;
}

Tensor q_op(const Tensor& sigma, const Tensor& k) { return derive(wedge_op_field(sigma), k); }

double condition_residual(const Tensor& b_op, const Tensor& k, const Tensor& sigma, double L) {
  Tensor lhs = derive(b_op, k);
  Tensor rhs = q_op(sigma, k);
  return max_abs_diff(lhs, scale(rhs, L));
}

}  // namespace nf
