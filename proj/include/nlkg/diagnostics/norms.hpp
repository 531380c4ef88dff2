#pragma once

#include "nlkg/evolve/evolve.hpp"

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace nlkg {

enum class SpatialMode { Lrho_xy, Lrho_x_L2_y, H1xL2_energy, Hgamma_y_weighted };

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct NormSpec {
  double q = 2.0;  // time exponent, may be +inf
  SpatialMode mode = SpatialMode::Lrho_xy;
  double rho = 2.0;
  double gamma = 0.0;  // Hgamma_y_weighted only
};

inline double lebesgue_norm(const Grid& g, std::span<const std::complex<double>> f, double rho,
                            SpatialMode mode = SpatialMode::Lrho_xy) {
  check_shape(g, f, "lebesgue_norm");
  switch (mode) {
    case SpatialMode::Lrho_xy: return lp_norm(g, f, rho);
    case SpatialMode::Lrho_x_L2_y: return mixed_norm(g, f, rho, 2.0);
    default: throw std::invalid_argument("lebesgue_norm: mode needs a state or gamma; use spatial_norm");
  }
}

/// (1 - Delta_y)^{gamma/2} on a physical field.
inline ComplexField sobolev_y_apply(const Grid& g, const ComplexField& f, double gamma) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("sobolev_y_apply: gamma must be >= 0");
  ComplexField c = to_modal(g, f);
  apply_sobolev_y_modal(g, c, gamma);
  to_physical_inplace(g, c);
  return c;
}

/// Squared energy norm sum (1 + lambda + |xi|^2)|u_hat|^2 + |v_hat|^2.
inline double energy_norm_sq_modal(const Grid& g, std::span<const std::complex<double>> u_hat,
                                   std::span<const std::complex<double>> v_hat) {
  double acc = 0.0;
  for (std::size_t ix = 0; ix < g.x_size; ++ix) {
    for (std::size_t iy = 0; iy < g.y_size; ++iy) {
      const std::size_t i = ix * g.y_size + iy;
      acc += (1.0 + g.lambda[iy] + g.xi_sq[ix]) * std::norm(u_hat[i]) + std::norm(v_hat[i]);
    }
  }
  return acc;
}

inline double energy_norm_modal(const Grid& g, std::span<const std::complex<double>> u_hat,
                                 std::span<const std::complex<double>> v_hat) {
  return std::sqrt(energy_norm_sq_modal(g, u_hat, v_hat));
}

inline double energy_norm(const Grid& g, const FieldState& s) {
  check_shape(g, s.u, "energy_norm");
  check_shape(g, s.v, "energy_norm");
  const ModalState m = forward_transform(g, s);
  return energy_norm_modal(g, m.u_hat, m.v_hat);
}

/// E = 1/2 (||v||^2 + ||grad u||^2 + ||u||^2) - sign/(p+1) ||u||_{L^{p+1}}^{p+1}.
inline double conserved_energy_modal(const Grid& g, std::span<const std::complex<double>> u,
                                     std::span<const std::complex<double>> u_hat,
                                     std::span<const std::complex<double>> v_hat, double p, Sign sign) {
  const double quad = 0.5 * energy_norm_sq_modal(g, u_hat, v_hat);
  if (sign == Sign::off) return quad;
  double pot = 0.0;
  for (const auto& z : u) pot += std::pow(std::abs(z), p + 1.0);
  return quad - sign_value(sign) / (p + 1.0) * pot * g.cell_volume;
}

inline double conserved_energy(const Grid& g, const FieldState& s, double p, Sign sign) {
  check_shape(g, s.u, "conserved_energy");
  check_shape(g, s.v, "conserved_energy");
  const ModalState m = forward_transform(g, s);
  return conserved_energy_modal(g, s.u, m.u_hat, m.v_hat, p, sign);
}

/// Spatial part of a NormSpec evaluated on one state.
inline double spatial_norm(const Grid& g, const FieldState& s, const NormSpec& spec) {
  switch (spec.mode) {
    case SpatialMode::Lrho_xy:
    case SpatialMode::Lrho_x_L2_y: return lebesgue_norm(g, s.u, spec.rho, spec.mode);
    case SpatialMode::H1xL2_energy: return energy_norm(g, s);
    case SpatialMode::Hgamma_y_weighted:
      return mixed_norm(g, sobolev_y_apply(g, s.u, spec.gamma), spec.rho, 2.0);
  }
  throw std::invalid_argument("spatial_norm: unknown mode");
}

/// Composite trapezoid in t of the q-th power of per-time values, then the
/// 1/q root; q = inf takes the max. Times must be increasing.
inline double time_lebesgue_norm(std::span<const double> times, std::span<const double> values, double q) {
  if (times.size() != values.size() || times.empty())
    throw std::invalid_argument("time_lebesgue_norm: need matching nonempty series");
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, v);
    return m;
  }
  if (!(q >= 1.0)) throw std::invalid_argument("time_lebesgue_norm: q must be >= 1");
  if (times.size() == 1) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i)
    acc += 0.5 * (times[i] - times[i - 1]) * (std::pow(values[i], q) + std::pow(values[i - 1], q));
  return std::pow(acc, 1.0 / q);
}

inline double strichartz_norm(const Grid& g, const Trajectory& traj, const NormSpec& spec) {
  if (traj.snapshots.empty()) throw std::invalid_argument("strichartz_norm: empty trajectory");
  std::vector<double> t;
  std::vector<double> v;
  for (const auto& s : traj.snapshots) {
    t.push_back(s.time);
    v.push_back(spatial_norm(g, s, spec));
  }
  return time_lebesgue_norm(t, v, spec.q);
}

}  // namespace nlkg
