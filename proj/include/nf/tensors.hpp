#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace nf {

// Slot variance: Co = index pairs with vectors (lower index), Contra = index
// pairs with covectors (upper index).
enum class Variance : std::uint8_t { Co = 0, Contra = 1 };

// Dense multi-index tensor value at a point: n^rank doubles in row-major
// order plus one variance flag per slot. Immutable by convention once built.
class Tensor {
 public:
  Tensor() = default;
  Tensor(int n, std::vector<Variance> var);

  static Tensor scalar(double v);

  int dim() const { return n_; }
  int rank() const { return static_cast<int>(var_.size()); }
  const std::vector<Variance>& variance() const { return var_; }
  Variance variance(int slot) const { return var_[static_cast<std::size_t>(slot)]; }

  const std::vector<double>& data() const { return a_; }
  std::vector<double>& data() { return a_; }

  double& at(std::span<const int> idx);
  double at(std::span<const int> idx) const;

  template <class... I>
  double& operator()(I... idx) {
    return a_[flat(idx...)];
  }
  template <class... I>
  double operator()(I... idx) const {
    return a_[flat(idx...)];
  }

  double max_abs() const;

 private:
  template <class... I>
  std::size_t flat(I... idx) const {
    std::size_t f = 0;
    ((f = f * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx)), ...);
    return f;
  }

  int n_ = 0;
  std::vector<Variance> var_;
  std::vector<double> a_;
};

// Metric with its inverse; signature counts negative eigenvalues.
struct MetricPair {
  Tensor g;      // (0,2)
  Tensor g_inv;  // (2,0)
  int signature = 0;
  double det = 0.0;

  // Builds the inverse and signature; throws if g is asymmetric beyond 1e-12
  // or |det| <= 1e-8.
  static MetricPair from_metric(const Tensor& g);
};

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double s);
double dot(const Tensor& a, const Tensor& b);
double max_abs_diff(const Tensor& a, const Tensor& b);

// Contracts slot_a with slot_b. Matching variances pair through the metric
// (g_inv for two lower slots, g for two upper); mixed variance pairs plainly.
Tensor contract(const Tensor& t, int slot_a, int slot_b, const MetricPair& m);

// Variance conversion of one slot through the metric.
Tensor raise(const Tensor& t, int slot, const MetricPair& m);
Tensor lower(const Tensor& t, int slot, const MetricPair& m);

Tensor permute(const Tensor& t, std::span<const int> perm);

// Endomorphism (1,1) of (X wedge_sigma Y): Z -> sigma(Y,Z) X - sigma(X,Z) Y.
Tensor wedge_sigma(const Tensor& x, const Tensor& y, const Tensor& sigma);

// Max-abs residuals of (anti)symmetry in two slots.
double symmetry_residual(const Tensor& t, int slot_a, int slot_b);
double antisymmetry_residual(const Tensor& t, int slot_a, int slot_b);

// Shared tolerance policy: relative 1e-9 scaled by max-abs, absolute floor 1e-12.
bool within_tolerance(double residual, double scale, double rel = 1e-9, double abs_floor = 1e-12);

}  // namespace nf
