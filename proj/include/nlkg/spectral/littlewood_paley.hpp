#pragma once

// Dyadic Littlewood-Paley blocks in the x-frequencies and the Besov norm
// ||P_0 f||_{L^r} + (sum_{j>0} 2^{2sj} ||P_j f||_{L^r}^2)^{1/2}, with the
// y-variables held in L^2.

#include "nlkg/spectral/field.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace nlkg {

/// C-infinity monotone profile: 1 on [0,1], 0 on [2, inf).
inline double dyadic_profile(double rho) {
  if (rho <= 1.0) return 1.0;
  if (rho >= 2.0) return 0.0;
  auto h = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  const double a = h(2.0 - rho);
  const double b = h(rho - 1.0);
  return a / (a + b);
}

inline double chi0(double xi_abs) { return dyadic_profile(xi_abs); }

/// phi_j(xi) = chi0(2^{-j} xi) - chi0(2^{-j+1} xi) for j >= 1; chi0 for j == 0.
inline double dyadic_multiplier(int j, double xi_abs) {
  if (j == 0) return chi0(xi_abs);
  return chi0(std::ldexp(xi_abs, -j)) - chi0(std::ldexp(xi_abs, -j + 1));
}

/// Smallest J with 2^J >= max |xi| over the x-lattice; blocks 0..J partition
/// the discrete spectrum exactly.
inline int dyadic_max_index(const Grid& g) {
  const double m = std::sqrt(*std::max_element(g.xi_sq.begin(), g.xi_sq.end()));
  if (m <= 1.0) return 0;
  return static_cast<int>(std::ceil(std::log2(m)));
}

struct DyadicBlock {
  int j = 0;
  ComplexField field;
};

inline DyadicBlock littlewood_paley_project(const Grid& g, const ComplexField& f, int j) {
  if (j < 0) throw std::invalid_argument("littlewood_paley_project: j must be >= 0");
  ComplexField c = to_modal(g, f);
  for (std::size_t ix = 0; ix < g.x_size; ++ix) {
    const double w = dyadic_multiplier(j, std::sqrt(g.xi_sq[ix]));
    for (std::size_t iy = 0; iy < g.y_size; ++iy) c[ix * g.y_size + iy] *= w;
  }
  to_physical_inplace(g, c);
  return {j, std::move(c)};
}

inline double besov_norm(const Grid& g, const ComplexField& f, double s, double r) {
  if (!(r >= 1.0)) throw std::invalid_argument("besov_norm: r must be >= 1");
  check_shape(g, f, "besov_norm");
  const int jmax = dyadic_max_index(g);
  const double low = mixed_norm(g, littlewood_paley_project(g, f, 0).field, r, 2.0);
  double high = 0.0;
  for (int j = 1; j <= jmax; ++j) {
    const double nj = mixed_norm(g, littlewood_paley_project(g, f, j).field, r, 2.0);
    high += std::exp2(2.0 * s * j) * nj * nj;
  }
  return low + std::sqrt(high);
}

}  // namespace nlkg
