#pragma once

#include <cmath>
#include <cstdint>

#include "ktrace/common.hpp"

namespace ktrace {

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

// Counter-based generator (splitmix64 core). Chosen over <random> engines +
// distributions because the stream must be identical across platforms and
// standard library versions; std::normal_distribution makes no such promise.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Independent substream addressed by up to two indices. Used to give every
  // Monte Carlo sample / instance its own generator regardless of scheduling.
  static Rng derive(std::uint64_t seed, std::uint64_t s0, std::uint64_t s1 = 0) {
    std::uint64_t h = detail::mix64(seed + 0x9e3779b97f4a7c15ULL);
    h = detail::mix64(h ^ (s0 + 0xbf58476d1ce4e5b9ULL));
    h = detail::mix64(h ^ (s1 + 0x94d049bb133111ebULL));
    return Rng(h);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return detail::mix64(state_);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; second deviate cached.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u = 1.0 - uniform();  // (0, 1]
    double r = std::sqrt(-2.0 * std::log(u));
    double a = 6.283185307179586476925286766559 * uniform();
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  Complex complex_gaussian() {
    double re = gaussian();
    double im = gaussian();
    return Complex(re, im);
  }

  int uniform_int(int bound) {  // [0, bound)
    return int(next_u64() % std::uint64_t(bound));
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Dense complex Gaussian matrix, entries re+i*im with N(0,1) parts.
CMatrix gaussian_matrix(Rng& rng, int rows, int cols);

// Random PD instance G G* + 1e-3 I with G complex Gaussian.
CMatrix random_pd(Rng& rng, int n);

// Random Hermitian direction (G + G*)/2 scaled to unit spectral radius.
CMatrix random_hermitian_unit(Rng& rng, int n);

// Random Hermitian (G + G*)/2, unscaled.
CMatrix random_hermitian(Rng& rng, int n);

// Random PSD with deliberately rank-deficient spectrum (r zero eigenvalues).
CMatrix random_psd_rank_deficient(Rng& rng, int n, int zeros);

}  // namespace ktrace
