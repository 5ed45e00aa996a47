#include "attrinfer/random.h"

#include <numeric>

#include "attrinfer/errors.h"

namespace attrinfer {

size_t Rng::UniformIndex(size_t n) {
  if (n == 0) throw ContractViolation("UniformIndex of an empty range");
  const uint64_t range = static_cast<uint64_t>(n);
  // Largest multiple of range that fits; reject draws above it.
  const uint64_t limit = UINT64_MAX - (UINT64_MAX % range + 1) % range;
  uint64_t x;
  do {
    x = engine_();
  } while (x > limit);
  return static_cast<size_t>(x % range);
}

int Rng::UniformInt(int lo, int hi) {
  if (hi < lo) throw ContractViolation("UniformInt: empty range");
  return lo + static_cast<int>(UniformIndex(static_cast<size_t>(hi - lo) + 1));
}

double Rng::UniformReal() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::vector<size_t> Rng::Sample(size_t n, size_t k) {
  if (k > n) throw ContractViolation("Sample: k exceeds population");
  std::vector<size_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (size_t i = 0; i < k; ++i) {
    const size_t j = i + UniformIndex(n - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

uint64_t DeriveSeed(uint64_t seed, uint64_t index) {
  // splitmix64 over a mix of both inputs.
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace attrinfer
