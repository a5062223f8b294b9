#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace mulinfo {

/// Neumaier-compensated accumulator. For probability vectors and entropy
/// sums the compensated result is accurate to a few ulp independent of the
/// number of terms, which the 1e-12 normalization checks rely on.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Runs fn(block) for block = 0..num_blocks-1 on up to `parallelism` threads.
/// Callers store per-block results and fold them in block order afterwards,
/// so the outcome is identical for every parallelism degree.
inline void for_each_block(std::size_t num_blocks, unsigned parallelism,
                           const std::function<void(std::size_t)>& fn) {
  if (parallelism <= 1 || num_blocks <= 1) {
    for (std::size_t b = 0; b < num_blocks; ++b) fn(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t b = next.fetch_add(1);
      if (b >= num_blocks) return;
      fn(b);
    }
  };
  unsigned nthreads = static_cast<unsigned>(
      std::min<std::size_t>(parallelism, num_blocks));
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace mulinfo
