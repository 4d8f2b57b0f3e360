#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace fairpm {

// Seeded generator whose derived samples are identical across standard
// library implementations (mt19937_64 output is fully specified; the
// distribution helpers below avoid the implementation-defined ones).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform integer in [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound);
  // Uniform real in [0, 1) with 53 random bits.
  double uniform();
  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fairpm
