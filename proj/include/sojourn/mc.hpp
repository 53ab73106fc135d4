#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

namespace sojourn {

struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
};

struct ExecPolicy {
  int workers = 1;
};

// Welford accumulator with deterministic pairwise merge.
class MeanVarAccumulator {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }

  void merge(const MeanVarAccumulator& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(o.n_);
    const double d = o.mean_ - mean_;
    const double nm = na + nb;
    mean_ += d * nb / nm;
    m2_ += o.m2_ + d * d * na * nb / nm;
    n_ += o.n_;
  }

  std::int64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

  MCEstimate estimate() const {
    if (n_ == 0) throw std::invalid_argument("MeanVarAccumulator: no samples");
    return {mean_, n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0, n_};
  }

 private:
  std::int64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

inline MCEstimate estimate_mean(std::span<const double> values) {
  MeanVarAccumulator acc;
  for (double v : values) acc.add(v);
  return acc.estimate();
}

// success probability with binomial standard error
inline MCEstimate estimate_proportion(std::int64_t hits, std::int64_t n) {
  if (n <= 0) throw std::invalid_argument("estimate_proportion: empty sample");
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n};
}

inline constexpr std::int64_t kReduceBlock = 8192;

// Deterministic block reduction: items are split into fixed-size blocks, each
// block gets its own accumulator, partials merge in block order.  The result
// is bitwise independent of the worker count.
template <typename Acc, typename MakeAcc, typename Body>
Acc parallel_reduce(std::int64_t n, const ExecPolicy& exec, MakeAcc make_acc, Body body) {
  if (n < 0) throw std::invalid_argument("parallel_reduce: negative count");
  const std::int64_t n_blocks = (n + kReduceBlock - 1) / kReduceBlock;
  Acc total = make_acc();
  if (n_blocks == 0) return total;

  std::vector<Acc> partials;
  partials.reserve(static_cast<std::size_t>(n_blocks));
  for (std::int64_t b = 0; b < n_blocks; ++b) partials.push_back(make_acc());

  auto run_block = [&](std::int64_t b) {
    const std::int64_t begin = b * kReduceBlock;
    const std::int64_t end = std::min(n, begin + kReduceBlock);
    body(begin, end, partials[static_cast<std::size_t>(b)]);
  };

  const int workers = std::max(1, exec.workers);
  if (workers == 1 || n_blocks == 1) {
    for (std::int64_t b = 0; b < n_blocks; ++b) run_block(b);
  } else {
    std::atomic<std::int64_t> next{0};
    auto worker = [&] {
      for (std::int64_t b = next.fetch_add(1); b < n_blocks; b = next.fetch_add(1)) run_block(b);
    };
    std::vector<std::thread> pool;
    const int spawn = static_cast<int>(std::min<std::int64_t>(workers, n_blocks));
    pool.reserve(static_cast<std::size_t>(spawn));
    for (int w = 0; w < spawn; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (auto& p : partials) total.merge(p);
  return total;
}

// Same block scheme for side-effect loops writing disjoint ranges.
template <typename Body>
void parallel_for_blocks(std::int64_t n, const ExecPolicy& exec, Body body) {
  struct Nothing {
    void merge(const Nothing&) {}
  };
  parallel_reduce<Nothing>(
      n, exec, [] { return Nothing{}; },
      [&](std::int64_t begin, std::int64_t end, Nothing&) { body(begin, end); });
}

}  // namespace sojourn
