#include "nf/tensors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace nf {

namespace {

std::size_t total_size(int n, int rank) {
  std::size_t s = 1;
  for (int k = 0; k < rank; ++k) s *= static_cast<std::size_t>(n);
  return s;
}

void decode(std::size_t flat, int n, int rank, std::vector<int>& idx) {
  for (int k = rank - 1; k >= 0; --k) {
    idx[static_cast<std::size_t>(k)] = static_cast<int>(flat % static_cast<std::size_t>(n));
    flat /= static_cast<std::size_t>(n);
  }
}

std::size_t encode(const std::vector<int>& idx, int n) {
  std::size_t f = 0;
  for (int i : idx) f = f * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
  return f;
}

void require_same_shape(const Tensor& a, const Tensor& b) {
  if (a.dim() != b.dim() || a.variance() != b.variance())
    throw std::invalid_argument("tensor shape mismatch");
}

}  // namespace

Tensor::Tensor(int n, std::vector<Variance> var)
    : n_(n), var_(std::move(var)), a_(total_size(n, static_cast<int>(var_.size())), 0.0) {}

Tensor Tensor::scalar(double v) {
  Tensor t;
  t.n_ = 1;
  t.a_.assign(1, v);
  return t;
}

double& Tensor::at(std::span<const int> idx) {
  std::size_t f = 0;
  for (int i : idx) f = f * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i);
  return a_[f];
}

double Tensor::at(std::span<const int> idx) const {
  std::size_t f = 0;
  for (int i : idx) f = f * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i);
  return a_[f];
}

double Tensor::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

MetricPair MetricPair::from_metric(const Tensor& g) {
  const int n = g.dim();
  if (g.rank() != 2 || g.variance(0) != Variance::Co || g.variance(1) != Variance::Co)
    throw std::invalid_argument("metric must be a (0,2) tensor");

  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(i, j);

  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::runtime_error("metric is not symmetric");

  const double det = m.determinant();
  if (std::abs(det) <= 1e-8) throw std::runtime_error("metric is degenerate");

  Eigen::MatrixXd inv = m.inverse();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  int negatives = 0;
  for (int i = 0; i < n; ++i)
    if (es.eigenvalues()(i) < 0.0) ++negatives;

  MetricPair out;
  out.g = g;
  out.g_inv = Tensor(n, {Variance::Contra, Variance::Contra});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.g_inv(i, j) = inv(i, j);
  out.signature = negatives;
  out.det = det;
  return out;
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b);
  Tensor out = a;
  for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] += b.data()[i];
  return out;
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b);
  Tensor out = a;
  for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] -= b.data()[i];
  return out;
}

Tensor scale(const Tensor& a, double s) {
  Tensor out = a;
  for (double& v : out.data()) v *= s;
  return out;
}

double dot(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) s += a.data()[i] * b.data()[i];
  return s;
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

Tensor contract(const Tensor& t, int slot_a, int slot_b, const MetricPair& m) {
  const int n = t.dim();
  const int r = t.rank();
  if (slot_a == slot_b || slot_a < 0 || slot_b < 0 || slot_a >= r || slot_b >= r)
    throw std::invalid_argument("bad contraction slots");

  const Variance va = t.variance(slot_a);
  const Variance vb = t.variance(slot_b);
  // Pairing weight: identity for mixed variance, metric inverse for two lower
  // slots, metric for two upper slots.
  const Tensor* pair = nullptr;
  if (va == Variance::Co && vb == Variance::Co) pair = &m.g_inv;
  else if (va == Variance::Contra && vb == Variance::Contra) pair = &m.g;

  std::vector<Variance> out_var;
  for (int k = 0; k < r; ++k)
    if (k != slot_a && k != slot_b) out_var.push_back(t.variance(k));
  Tensor out(n, out_var);

  std::vector<int> oidx(static_cast<std::size_t>(r - 2));
  std::vector<int> tidx(static_cast<std::size_t>(r));
  const std::size_t osize = out.data().size();
  for (std::size_t f = 0; f < osize; ++f) {
    decode(f, n, r - 2, oidx);
    int pos = 0;
    for (int k = 0; k < r; ++k)
      if (k != slot_a && k != slot_b) tidx[static_cast<std::size_t>(k)] = oidx[static_cast<std::size_t>(pos++)];
    double s = 0.0;
    for (int p = 0; p < n; ++p) {
      tidx[static_cast<std::size_t>(slot_a)] = p;
      if (pair) {
        for (int q = 0; q < n; ++q) {
          tidx[static_cast<std::size_t>(slot_b)] = q;
          s += (*pair)(p, q) * t.data()[encode(tidx, n)];
        }
      } else {
        tidx[static_cast<std::size_t>(slot_b)] = p;
        s += t.data()[encode(tidx, n)];
      }
    }
    out.data()[f] = s;
  }
  return out;
}

namespace {

Tensor convert_slot(const Tensor& t, int slot, const Tensor& weight, Variance target) {
  const int n = t.dim();
  const int r = t.rank();
  std::vector<Variance> out_var = t.variance();
  out_var[static_cast<std::size_t>(slot)] = target;
  Tensor out(n, out_var);

  std::vector<int> idx(static_cast<std::size_t>(r));
  const std::size_t size = out.data().size();
  for (std::size_t f = 0; f < size; ++f) {
    decode(f, n, r, idx);
    const int i = idx[static_cast<std::size_t>(slot)];
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      idx[static_cast<std::size_t>(slot)] = j;
      s += weight(i, j) * t.data()[encode(idx, n)];
    }
    idx[static_cast<std::size_t>(slot)] = i;
    out.data()[f] = s;
  }
  return out;
}

}  // namespace

Tensor raise(const Tensor& t, int slot, const MetricPair& m) {
  if (t.variance(slot) != Variance::Co)
    throw std::invalid_argument("raise expects a lower slot");
  return convert_slot(t, slot, m.g_inv, Variance::Contra);
}

Tensor lower(const Tensor& t, int slot, const MetricPair& m) {
  if (t.variance(slot) != Variance::Contra)
    throw std::invalid_argument("lower expects an upper slot");
  return convert_slot(t, slot, m.g, Variance::Co);
}

Tensor permute(const Tensor& t, std::span<const int> perm) {
  const int n = t.dim();
  const int r = t.rank();
  if (static_cast<int>(perm.size()) != r) throw std::invalid_argument("bad permutation size");

  // Output slot k mirrors input slot perm[k].
  std::vector<Variance> out_var(static_cast<std::size_t>(r));
  for (int k = 0; k < r; ++k)
    out_var[static_cast<std::size_t>(k)] = t.variance(perm[static_cast<std::size_t>(k)]);
  Tensor out(n, out_var);

  std::vector<int> oidx(static_cast<std::size_t>(r));
  std::vector<int> tidx(static_cast<std::size_t>(r));
  const std::size_t size = out.data().size();
  for (std::size_t f = 0; f < size; ++f) {
    decode(f, n, r, oidx);
    for (int k = 0; k < r; ++k)
      tidx[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] = oidx[static_cast<std::size_t>(k)];
    out.data()[f] = t.data()[encode(tidx, n)];
  }
  return out;
}

Tensor wedge_sigma(const Tensor& x, const Tensor& y, const Tensor& sigma) {
  const int n = sigma.dim();
  Tensor out(n, {Variance::Contra, Variance::Co});
  for (int z = 0; z < n; ++z) {
    double sy = 0.0, sx = 0.0;
    for (int m = 0; m < n; ++m) {
      sy += sigma(m, z) * y(m);
      sx += sigma(m, z) * x(m);
    }
    for (int i = 0; i < n; ++i) out(i, z) = sy * x(i) - sx * y(i);
  }
  return out;
}

namespace {

double swap_residual(const Tensor& t, int slot_a, int slot_b, double sign) {
  const int n = t.dim();
  const int r = t.rank();
  std::vector<int> idx(static_cast<std::size_t>(r));
  std::vector<int> sidx(static_cast<std::size_t>(r));
  double m = 0.0;
  const std::size_t size = t.data().size();
  for (std::size_t f = 0; f < size; ++f) {
    decode(f, n, r, idx);
    sidx = idx;
    std::swap(sidx[static_cast<std::size_t>(slot_a)], sidx[static_cast<std::size_t>(slot_b)]);
    m = std::max(m, std::abs(t.data()[f] - sign * t.data()[encode(sidx, n)]));
  }
  return m;
}

}  // namespace

double symmetry_residual(const Tensor& t, int slot_a, int slot_b) {
  return swap_residual(t, slot_a, slot_b, 1.0);
}

double antisymmetry_residual(const Tensor& t, int slot_a, int slot_b) {
  return swap_residual(t, slot_a, slot_b, -1.0);
}

bool within_tolerance(double residual, double scale, double rel, double abs_floor) {
  return residual <= std::max(rel * scale, abs_floor);
}

}  // namespace nf
