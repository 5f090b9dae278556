#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace sofic {

// Deterministic RNG stream. All bounded draws go through rejection
// sampling on raw mt19937_64 output so that results are identical on
// every platform (std::uniform_int_distribution is not portable).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(splitmix64(seed)) {}

  // Stream for task `task` under master seed `master`. Distinct tasks
  // get statistically independent streams.
  static RngStream derived(std::uint64_t master, std::uint64_t task) {
    std::uint64_t s = master;
    s = splitmix64(s ^ (0x9e3779b97f4a7c15ULL * (task + 1)));
    return RngStream(s);
  }

  std::uint64_t next_u64() { return gen_(); }

  // Uniform integer in [0, bound). bound >= 1.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % bound;
  }

  // Uniform double in [0, 1) with 53 bits.
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 gen_;
};

}  // namespace sofic
