#pragma once

// Initial data generators. Both shapes are deterministic; the seed is only
// echoed in the manifest.
//
//   gaussian: A exp(-|x|^2 / R^2) (1 + 0.3 cos(2 pi y_1 / l_1)), v = 0
//   bump:     A exp(1 - 1/(1 - |x|^2/R^2)) (1 + 0.3 cos(2 pi y_1 / l_1)) for |x| < R, else 0; v = 0

#include "nlkg/cli/config.hpp"
#include "nlkg/spectral/snapshot_io.hpp"

#include <cmath>
#include <numbers>

namespace nlkg {

inline double bump_profile(double r2, double radius) {
  const double s = r2 / (radius * radius);
  if (s >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s));
}

inline double gaussian_profile(double r2, double radius) { return std::exp(-r2 / (radius * radius)); }

/// A * profile(|x|^2) * (1 + y_mod cos(2 pi y_1 / l_1)).
template <class Profile>
FieldState radial_data(const Grid& g, double amplitude, Profile profile, double y_mod = 0.3) {
  FieldState s = zero_state(g);
  std::vector<double> ymul(g.y_size, 1.0);
  for (std::size_t iy = 0; iy < g.y_size; ++iy) {
    const auto slot = g.y_multi_index(iy);
    const double y1 = g.y_coord(0, slot[0]);
    ymul[iy] = 1.0 + y_mod * std::cos(2.0 * std::numbers::pi * y1 / g.spec.torus_lengths[0]);
  }
  for (std::size_t ix = 0; ix < g.x_size; ++ix) {
    const auto slot = g.x_multi_index(ix);
    double r2 = 0.0;
    for (std::size_t a = 0; a < slot.size(); ++a) {
      const double x = g.x_coord(a, slot[a]);
      r2 += x * x;
    }
    const double base = amplitude * profile(r2);
    if (base == 0.0) continue;
    for (std::size_t iy = 0; iy < g.y_size; ++iy) s.u[ix * g.y_size + iy] = base * ymul[iy];
  }
  return s;
}

inline FieldState bump_data(const Grid& g, double amplitude, double radius, double y_mod = 0.3) {
  return radial_data(g, amplitude, [radius](double r2) { return bump_profile(r2, radius); }, y_mod);
}

inline FieldState gaussian_data(const Grid& g, double amplitude, double radius, double y_mod = 0.3) {
  return radial_data(g, amplitude, [radius](double r2) { return gaussian_profile(r2, radius); }, y_mod);
}

/// Largest |x| where |u| or |v| exceeds 1e-8 of its maximum; 0 for zero data.
inline double support_radius(const Grid& g, const FieldState& s) {
  double m = 0.0;
  for (std::size_t i = 0; i < g.size; ++i) m = std::max({m, std::abs(s.u[i]), std::abs(s.v[i])});
  if (m == 0.0) return 0.0;
  double r = 0.0;
  for (std::size_t ix = 0; ix < g.x_size; ++ix) {
    bool hit = false;
    for (std::size_t iy = 0; iy < g.y_size && !hit; ++iy) {
      const std::size_t i = ix * g.y_size + iy;
      hit = std::abs(s.u[i]) > 1e-8 * m || std::abs(s.v[i]) > 1e-8 * m;
    }
    if (!hit) continue;
    const auto slot = g.x_multi_index(ix);
    double r2 = 0.0;
    for (std::size_t a = 0; a < slot.size(); ++a) {
      const double x = g.x_coord(a, slot[a]);
      r2 += x * x;
    }
    r = std::max(r, std::sqrt(r2));
  }
  return r;
}

struct InitialData {
  FieldState state;
  double support_radius = 0.0;
};

inline InitialData make_initial_data(const Grid& g, const RunConfig& c) {
  switch (c.data_kind) {
    case DataKind::bump:
      return {bump_data(g, c.data_amplitude, c.data_radius), effective_radius(c.data_kind, c.data_radius)};
    case DataKind::gaussian:
      return {gaussian_data(g, c.data_amplitude, c.data_radius), effective_radius(c.data_kind, c.data_radius)};
    case DataKind::file: {
      Snapshot snap = read_snapshot(c.data_file);
      if (!(snap.spec == g.spec)) throw ConfigError("data_file grid does not match the configured domain");
      snap.state.time = 0.0;
      const double r = support_radius(g, snap.state);
      return {std::move(snap.state), r};
    }
  }
  throw ConfigError("unknown data kind");
}

}  // namespace nlkg
