#pragma once

// Empirical H^gamma(T^k) product constant: max over random band-limited pairs
// of ||fg||_{H^gamma} / (||f||_{H^gamma} ||g||_{H^gamma}).
//
// Fields are band-limited to |n_a| < ny/4 on every axis so the pointwise
// product is alias-free on the grid.

#include "nlkg/propagator/propagator.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace nlkg {

struct AlgebraReport {
  int k = 0;
  double gamma = 0.0;
  int ny = 0;
  int trials = 0;
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
};

inline double sobolev_norm_torus(const Grid& tg, std::span<const std::complex<double>> c, double gamma) {
  double acc = 0.0;
  for (std::size_t i = 0; i < tg.size; ++i) acc += std::pow(1.0 + tg.lambda[i], gamma) * std::norm(c[i]);
  return std::sqrt(acc);
}

/// ||fg||_{H^gamma} / (||f|| ||g||) for physical f, g on a torus grid.
inline double algebra_ratio(const Grid& tg, const ComplexField& f, const ComplexField& g, double gamma) {
  ComplexField prod(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) prod[i] = f[i] * g[i];
  const double num = sobolev_norm_torus(tg, to_modal(tg, prod), gamma);
  const double den = sobolev_norm_torus(tg, to_modal(tg, f), gamma) * sobolev_norm_torus(tg, to_modal(tg, g), gamma);
  return num / den;
}

inline bool in_band(const Grid& tg, std::size_t iy) {
  const auto slots = tg.y_multi_index(iy);
  for (std::size_t a = 0; a < slots.size(); ++a) {
    const int n = tg.spec.ny[a];
    if (4 * std::abs(lattice_index(slots[a], n)) >= n) return false;
  }
  return true;
}

inline AlgebraReport algebra_check(int k, double gamma, int trials, int ny, std::uint64_t seed = 0,
                                   double torus_length = 2.0 * std::numbers::pi) {
  if (!(gamma > 0.5 * k)) throw std::invalid_argument("algebra_check: requires gamma > k/2");
  if (trials < 1) throw std::invalid_argument("algebra_check: trials must be >= 1");
  const Grid tg = make_torus_grid(std::vector<double>(static_cast<std::size_t>(k), torus_length),
                                  std::vector<int>(static_cast<std::size_t>(k), ny));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> envelope(tg.size, 0.0);
  for (std::size_t i = 0; i < tg.size; ++i)
    if (in_band(tg, i)) envelope[i] = std::pow(1.0 + tg.lambda[i], -(0.5 * gamma + 0.5 * k));

  auto draw = [&]() {
    ComplexField c(tg.size);
    for (std::size_t i = 0; i < tg.size; ++i)
      if (envelope[i] > 0.0) c[i] = envelope[i] * std::complex<double>(normal(rng), normal(rng));
    to_physical_inplace(tg, c);
    return c;
  };

  AlgebraReport r{k, gamma, ny, trials, 0.0, 0.0};
  for (int t = 0; t < trials; ++t) {
    const ComplexField f = draw();
    const ComplexField g = draw();
    const double ratio = algebra_ratio(tg, f, g, gamma);
    r.max_ratio = std::max(r.max_ratio, ratio);
    r.mean_ratio += ratio / trials;
  }
  return r;
}

}  // namespace nlkg
