#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <thread>
#include <vector>

namespace hardylab {

/// Runs fn(chunk) for chunk in [0, chunks) on up to `workers` threads. Work assignment is
/// strided, results are expected in per-chunk slots, so the outcome is independent of workers.
template <class Fn>
void for_each_chunk(std::size_t chunks, int workers, Fn&& fn) {
  const std::size_t w = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1, chunks ? chunks : 1);
  if (w == 1) {
    for (std::size_t c = 0; c < chunks; ++c) fn(c);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (std::size_t t = 0; t < w; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t c = t; c < chunks; c += w) fn(c);
    });
  for (auto& th : pool) th.join();
}

/// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace hardylab
