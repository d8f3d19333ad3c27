#pragma once

#include <cstdint>
#include <cstddef>

#include "fspace/dense.hpp"

namespace fspace {

// Counter-based generator (splitmix64 finalizer over key + counter).
// Values depend only on (key, counter), so any partition of a sampling loop
// across threads reproduces the serial stream exactly. split() derives an
// independent stream deterministically.
class CounterRng {
 public:
  static constexpr std::uint64_t kDefaultSeed = 0xF1C75;

  explicit CounterRng(std::uint64_t seed = kDefaultSeed) : key_(seed) {}

  std::uint64_t at(std::uint64_t counter) const {
    std::uint64_t z = key_ + (counter + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t next_u64() { return at(counter_++); }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [-1, 1)
  double symmetric() { return 2.0 * uniform() - 1.0; }

  CounterRng split(std::uint64_t stream) const {
    return CounterRng(at(0xD1B54A32D192ED03ull + stream));
  }

  std::uint64_t seed() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

inline Vector random_vector(CounterRng& rng, std::size_t n) {
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = rng.symmetric();
  return v;
}

inline DenseMatrix random_matrix(CounterRng& rng, std::size_t rows, std::size_t cols) {
  DenseMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.symmetric();
  return m;
}

// G^T G + dim * I: eigenvalues in [dim, dim + ||G||^2], safely SPD.
inline DenseSymMatrix random_spd(CounterRng& rng, std::size_t n) {
  DenseMatrix g = random_matrix(rng, n, n);
  DenseMatrix gram = g.transpose() * g;
  for (std::size_t i = 0; i < n; ++i) gram(i, i) += static_cast<double>(n);
  return DenseSymMatrix::symmetrize(gram);
}

}  // namespace fspace
