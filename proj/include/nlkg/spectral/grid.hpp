#pragma once

// Domain description and the modal lattice of R^d x T^k.
//
// R^d is replaced by a periodic box; T^k is a flat torus with adjustable side
// lengths. Arrays over the physical grid are row-major in (x_1..x_d, y_1..y_k)
// so a flat index splits as ix * y_size + iy with the y-block contiguous.

#include "nlkg/spectral/fft.hpp"

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlkg {

using ComplexField = std::vector<std::complex<double>>;

struct DomainSpec {
  int d = 1;
  int k = 1;
  std::vector<double> box_lengths;    // d entries
  std::vector<double> torus_lengths;  // k entries
  std::vector<int> nx;                // d entries
  std::vector<int> ny;                // k entries

  friend bool operator==(const DomainSpec&, const DomainSpec&) = default;
};

inline constexpr int kMinGridExtent = 4;

inline void validate(const DomainSpec& s, bool allow_empty_x = false) {
  if (!allow_empty_x && (s.d < 1 || s.d > 5)) throw std::invalid_argument("DomainSpec: d must lie in [1,5]");
  if (s.k < 1) throw std::invalid_argument("DomainSpec: k must be >= 1");
  if (static_cast<int>(s.box_lengths.size()) != s.d || static_cast<int>(s.nx.size()) != s.d)
    throw std::invalid_argument("DomainSpec: box_lengths and nx need d entries");
  if (static_cast<int>(s.torus_lengths.size()) != s.k || static_cast<int>(s.ny.size()) != s.k)
    throw std::invalid_argument("DomainSpec: torus_lengths and ny need k entries");
  auto check_len = [](double l) {
    if (!(l > 0) || !std::isfinite(l)) throw std::invalid_argument("DomainSpec: lengths must be positive and finite");
  };
  auto check_n = [](int n) {
    if (n % 2 != 0) throw std::invalid_argument("DomainSpec: grid sizes must be even");
    if (n < kMinGridExtent) throw std::invalid_argument("DomainSpec: grid sizes must be >= 4");
  };
  for (double l : s.box_lengths) check_len(l);
  for (double l : s.torus_lengths) check_len(l);
  for (int n : s.nx) check_n(n);
  for (int n : s.ny) check_n(n);
}

/// Centered integer lattice index of FFT slot i for an n-point axis: [-n/2, n/2).
inline int lattice_index(int i, int n) { return i < n / 2 ? i : i - n; }

/// Angular frequencies 2 pi m / L in FFT order.
inline std::vector<double> axis_frequencies(double length, int n) {
  std::vector<double> f(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) f[static_cast<std::size_t>(i)] = 2.0 * std::numbers::pi * lattice_index(i, n) / length;
  return f;
}

/// Sum of squared per-axis frequencies over the row-major multi-index, FFT order.
inline std::vector<double> squared_frequency_sum(const std::vector<double>& lengths, const std::vector<int>& n) {
  std::size_t total = 1;
  for (int m : n) total *= static_cast<std::size_t>(m);
  std::vector<double> out(total, 0.0);
  std::size_t stride = total;
  for (std::size_t a = 0; a < n.size(); ++a) {
    const auto f = axis_frequencies(lengths[a], n[a]);
    stride /= static_cast<std::size_t>(n[a]);
    for (std::size_t idx = 0; idx < total; ++idx) {
      const double w = f[(idx / stride) % static_cast<std::size_t>(n[a])];
      out[idx] += w * w;
    }
  }
  return out;
}

/// Eigenvalues of -Delta_y on the flat torus, one per y-mode (FFT order).
inline std::vector<double> eigenvalues_torus(const std::vector<double>& torus_lengths, const std::vector<int>& ny) {
  if (torus_lengths.size() != ny.size()) throw std::invalid_argument("eigenvalues_torus: size mismatch");
  for (double l : torus_lengths)
    if (!(l > 0)) throw std::invalid_argument("eigenvalues_torus: lengths must be positive");
  return squared_frequency_sum(torus_lengths, ny);
}

struct Grid {
  DomainSpec spec;
  std::vector<int> dims;  // nx..., ny...
  std::size_t size = 0;
  std::size_t x_size = 1;
  std::size_t y_size = 1;
  double cell_volume = 1.0;  // (dx)^d (dy)^k
  double dx_volume = 1.0;
  double dy_volume = 1.0;
  double volume_x = 1.0;
  double volume_y = 1.0;
  std::vector<std::vector<double>> x_frequencies;  // per axis, FFT order
  std::vector<std::vector<double>> y_frequencies;
  std::vector<double> xi_sq;   // |xi|^2 per x-mode
  std::vector<double> lambda;  // torus eigenvalue per y-mode
  std::shared_ptr<const FftPlan> plan;

  double volume() const { return volume_x * volume_y; }
  double xi_sq_of(std::size_t idx) const { return xi_sq[idx / y_size]; }
  double lambda_of(std::size_t idx) const { return lambda[idx % y_size]; }

  /// Physical x coordinate along axis a, centered box [-L/2, L/2).
  double x_coord(std::size_t a, int i) const {
    const double h = spec.box_lengths[a] / spec.nx[a];
    return (i - spec.nx[a] / 2) * h;
  }
  /// Physical y coordinate along axis a, [0, l).
  double y_coord(std::size_t a, int i) const { return i * spec.torus_lengths[a] / spec.ny[a]; }

  /// Decomposes an x-block index into per-axis slots.
  std::vector<int> x_multi_index(std::size_t ix) const {
    std::vector<int> out(spec.nx.size());
    for (std::size_t a = spec.nx.size(); a-- > 0;) {
      out[a] = static_cast<int>(ix % static_cast<std::size_t>(spec.nx[a]));
      ix /= static_cast<std::size_t>(spec.nx[a]);
    }
    return out;
  }
  std::vector<int> y_multi_index(std::size_t iy) const {
    std::vector<int> out(spec.ny.size());
    for (std::size_t a = spec.ny.size(); a-- > 0;) {
      out[a] = static_cast<int>(iy % static_cast<std::size_t>(spec.ny[a]));
      iy /= static_cast<std::size_t>(spec.ny[a]);
    }
    return out;
  }
};

namespace detail {
inline Grid build_grid(const DomainSpec& spec) {
  Grid g;
  g.spec = spec;
  for (std::size_t a = 0; a < spec.nx.size(); ++a) {
    g.dims.push_back(spec.nx[a]);
    g.x_size *= static_cast<std::size_t>(spec.nx[a]);
    g.dx_volume *= spec.box_lengths[a] / spec.nx[a];
    g.volume_x *= spec.box_lengths[a];
    g.x_frequencies.push_back(axis_frequencies(spec.box_lengths[a], spec.nx[a]));
  }
  for (std::size_t a = 0; a < spec.ny.size(); ++a) {
    g.dims.push_back(spec.ny[a]);
    g.y_size *= static_cast<std::size_t>(spec.ny[a]);
    g.dy_volume *= spec.torus_lengths[a] / spec.ny[a];
    g.volume_y *= spec.torus_lengths[a];
    g.y_frequencies.push_back(axis_frequencies(spec.torus_lengths[a], spec.ny[a]));
  }
  g.size = g.x_size * g.y_size;
  g.cell_volume = g.dx_volume * g.dy_volume;
  g.xi_sq = spec.nx.empty() ? std::vector<double>{0.0} : squared_frequency_sum(spec.box_lengths, spec.nx);
  g.lambda = eigenvalues_torus(spec.torus_lengths, spec.ny);
  g.plan = std::make_shared<const FftPlan>(g.dims);
  return g;
}
}  // namespace detail

inline Grid make_grid(const DomainSpec& spec) {
  validate(spec);
  return detail::build_grid(spec);
}

/// A grid over T^k alone (no Euclidean factor), used for y-only computations.
inline Grid make_torus_grid(const std::vector<double>& torus_lengths, const std::vector<int>& ny) {
  DomainSpec s;
  s.d = 0;
  s.k = static_cast<int>(ny.size());
  s.torus_lengths = torus_lengths;
  s.ny = ny;
  validate(s, /*allow_empty_x=*/true);
  return detail::build_grid(s);
}

inline void check_shape(const Grid& g, std::span<const std::complex<double>> f, const char* what) {
  if (f.size() != g.size) throw std::invalid_argument(std::string(what) + ": field shape does not match the grid");
}

}  // namespace nlkg
