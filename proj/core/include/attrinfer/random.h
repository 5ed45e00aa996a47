#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace attrinfer {

// Seeded generator whose draws are identical across standard libraries: only
// the raw mt19937_64 stream is used, never the std distributions.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }
  // Uniform in [0, n). Precondition: n > 0.
  size_t UniformIndex(size_t n);
  // Uniform in [lo, hi].
  int UniformInt(int lo, int hi);
  // Uniform in [0, 1).
  double UniformReal();
  bool Bernoulli(double p) { return UniformReal() < p; }

  // k distinct indices from [0, n), in selection order. Precondition: k <= n.
  std::vector<size_t> Sample(size_t n, size_t k);

 private:
  std::mt19937_64 engine_;
};

// Independent child seed for stream `index` of `seed`.
uint64_t DeriveSeed(uint64_t seed, uint64_t index);

}  // namespace attrinfer
