// Timing comparison of the parallel derivation kernels against the serial
// reference, on synthetic tensors and on curvature data from the registry.
// Prints a table; exits nonzero if any pair of results disagrees bitwise.

#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "nf/derive.hpp"
#include "nf/geometry.hpp"
#include "nf/nk.hpp"
#include "nf/threads.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

nf::Tensor random_tensor(int n, std::vector<nf::Variance> var, unsigned seed) {
  nf::Tensor t(n, std::move(var));
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& v : t.data()) v = u(gen);
  return t;
}

template <class F>
double time_ms(int iters, F&& body) {
  const auto t0 = clock_type::now();
  for (int i = 0; i < iters; ++i) body();
  const auto t1 = clock_type::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / iters;
}

bool bitwise_equal(const nf::Tensor& a, const nf::Tensor& b) {
  if (a.data().size() != b.data().size()) return false;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    if (a.data()[i] != b.data()[i]) return false;
  return true;
}

struct Case {
  std::string name;
  nf::Tensor b;
  nf::Tensor k;
  int iters;
};

}  // namespace

int main() {
  using V = nf::Variance;
  std::vector<Case> cases;
  for (const int n : {4, 6, 8}) {
    cases.push_back({"random n=" + std::to_string(n) + " rank-4",
                     random_tensor(n, {V::Contra, V::Co, V::Co, V::Co}, 11u + static_cast<unsigned>(n)),
                     random_tensor(n, {V::Co, V::Co, V::Co, V::Co}, 29u + static_cast<unsigned>(n)),
                     n <= 6 ? 400 : 100});
  }
  {
    const auto* spec = nf::find_builtin("kenmotsu-warped-5d");
    const auto f = nf::frame(*spec, nf::sample_points(*spec, 1, 1)[0]);
    cases.push_back({"curvature n=5 (R.R)", f.r13, f.r04, 400});
  }

  std::printf("threads: %d\n\n", nf::thread_cap());
  std::printf("%-24s %12s %12s %9s %8s\n", "case", "serial ms", "parallel ms", "speedup",
              "match");
  bool all_match = true;
  for (const auto& c : cases) {
    // Warm both paths once so allocation noise stays out of the timings.
    auto ref = nf::derive_serial(c.b, c.k);
    auto par = nf::derive(c.b, c.k);
    const bool match = bitwise_equal(ref, par);
    all_match = all_match && match;
    const double ts = time_ms(c.iters, [&] { ref = nf::derive_serial(c.b, c.k); });
    const double tp = time_ms(c.iters, [&] { par = nf::derive(c.b, c.k); });
    std::printf("%-24s %12.4f %12.4f %8.2fx %8s\n", c.name.c_str(), ts, tp, ts / tp,
                match ? "yes" : "NO");
  }
  return all_match ? 0 : 1;
}
