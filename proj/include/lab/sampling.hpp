#pragma once
// Deterministic parameter sampling shared by the CLI checks and the tests:
// spectral points in a fixed box away from the real axis, bounded integer
// height vectors, and a retry wrapper that converts persistent singular
// draws into a typed error.

#include <random>

#include "lab/errors.hpp"
#include "lab/model.hpp"

namespace lab {

struct Sampler {
  std::mt19937_64 rng;
  explicit Sampler(unsigned long long seed) : rng(seed) {}

  std::complex<double> z() {
    std::uniform_real_distribution<double> re(-0.5, 0.5), im(0.1, 0.5);
    const double x = re(rng);
    return {x, im(rng)};
  }

  Heights heights(int n) {
    std::uniform_int_distribution<int> d(-3, 3);
    Heights a(n);
    for (auto& v : a) v = d(rng);
    return a;
  }

  // real phase-space coordinates with a guaranteed minimum separation
  std::vector<double> positions(int n, double min_sep = 0.25) {
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = i - 0.5 * (n - 1) + min_sep * u(rng);
    return x;
  }

  std::vector<double> momenta(int n, double scale = 0.5) {
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    std::vector<double> p(n);
    for (auto& v : p) v = scale * u(rng);
    return p;
  }
};

// run f(), redrawing degenerate configurations; gives up after `cap` tries
template <class F>
auto with_resampling(F f, int cap = 100) {
  for (int attempt = 0;; ++attempt) {
    try {
      return f();
    } catch (const PoleNearby&) {
      if (attempt + 1 >= cap) throw DegenerateParameters("resample cap hit");
    } catch (const CollisionSingularity&) {
      if (attempt + 1 >= cap) throw DegenerateParameters("resample cap hit");
    }
  }
}

// default generic shift parameters; pairwise spacing stays >= 0.1 up to n=9
inline std::vector<double> default_delta(int n) {
  if (n == 2) return {0.05, 0.43};
  if (n == 3) return {0.05, 0.38, 0.81};
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = 0.05 + 0.9 * i / n;
  return d;
}

inline Heights default_heights(int n) {
  if (n == 2) return {1, -2};
  if (n == 3) return {1, -1, 2};
  Heights a(n);
  for (int i = 0; i < n; ++i) a[i] = (i * 7 % 5) - 2;
  return a;
}

}  // namespace lab
