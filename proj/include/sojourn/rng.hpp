#pragma once

#include <cmath>
#include <cstdint>

namespace sojourn {

// splitmix64 finalizer
inline std::uint64_t hash64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

// Counter-style stream: substreams are derived from the key alone, so the
// stream handed to sample i never depends on how many draws earlier samples
// consumed.  Copy freely; copies advance independently.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed)
      : key_(hash64(seed + 0x9E3779B97F4A7C15ULL)), state_(hash64(~seed)) {}

  // substream-reproducing identity: from_key(key()) yields the same substreams
  std::uint64_t key() const { return key_; }
  static RandomStream from_key(std::uint64_t key) {
    RandomStream rs(0);
    rs.key_ = key;
    rs.state_ = hash64(key);
    return rs;
  }

  RandomStream substream(std::uint64_t index) const {
    RandomStream child(0);
    child.key_ = hash64(key_ + 0x9E3779B97F4A7C15ULL * (index + 1));
    child.state_ = hash64(child.key_);
    return child;
  }

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // strictly inside (0,1)
  double uniform01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  double exponential() { return -std::log(uniform01()); }

  // unit Frechet with shape p: P(X <= x) = exp(-x^-p)
  double frechet(double shape) { return std::pow(exponential(), -1.0 / shape); }

 private:
  std::uint64_t key_;
  std::uint64_t state_;
};

}  // namespace sojourn
