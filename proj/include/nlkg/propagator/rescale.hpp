#pragma once

// Mass rescaling u_lambda(t, x) = u(sqrt(lambda) t, sqrt(lambda) x).
//
// If u solves the mass-1 flat equation with data (f, g, F) then u_lambda solves
// the mass-lambda equation with data f(sqrt(lambda) x),
// sqrt(lambda) g(sqrt(lambda) x) and lambda F(sqrt(lambda) t, sqrt(lambda) x).
//
// The rescaled field is placed on a target box by moving Fourier coefficients:
// source frequency xi maps to sqrt(lambda) xi, which must land on the target
// lattice. The default target box is L / sqrt(lambda), where every source mode
// keeps its integer index and the periodic surrogate scales like R^d.

#include "nlkg/spectral/field.hpp"

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace nlkg {

struct RescaledSolution {
  Grid grid;
  std::vector<FieldState> snapshots;
};

namespace detail {

inline bool is_y_independent(const Grid& g, const ComplexField& modal) {
  double total = 0.0;
  double off = 0.0;
  for (std::size_t ix = 0; ix < g.x_size; ++ix) {
    for (std::size_t iy = 0; iy < g.y_size; ++iy) {
      const double a = std::norm(modal[ix * g.y_size + iy]);
      total += a;
      if (iy != 0) off += a;
    }
  }
  return off <= 1e-24 * total || total == 0.0;
}

}  // namespace detail

inline RescaledSolution rescale_solution(const Grid& g, std::span<const FieldState> snapshots, double lambda,
                                         std::optional<std::vector<double>> target_box = std::nullopt) {
  if (!(lambda > 0.0)) throw std::invalid_argument("rescale_solution: lambda must be positive");
  const double root = std::sqrt(lambda);
  DomainSpec target = g.spec;
  if (target_box) {
    if (target_box->size() != g.spec.box_lengths.size())
      throw std::invalid_argument("rescale_solution: target box needs d lengths");
    target.box_lengths = *target_box;
  } else {
    for (auto& l : target.box_lengths) l /= root;
  }
  RescaledSolution out{make_grid(target), {}};
  const Grid& tg = out.grid;

  // Index map per axis: m -> m * sqrt(lambda) * L_target / L_source.
  const std::size_t d = g.spec.nx.size();
  std::vector<double> factor(d);
  for (std::size_t a = 0; a < d; ++a) factor[a] = root * target.box_lengths[a] / g.spec.box_lengths[a];
  const double amplitude = std::sqrt(tg.volume() / g.volume());

  auto move_coefficients = [&](const ComplexField& src, double scale) {
    ComplexField dst(tg.size);
    double cmax = 0.0;
    for (const auto& z : src) cmax = std::max(cmax, std::abs(z));
    const double drop = 1e-14 * cmax;
    for (std::size_t ix = 0; ix < g.x_size; ++ix) {
      const auto& z = src[ix * g.y_size];
      if (std::abs(z) <= drop) continue;
      const auto slots = g.x_multi_index(ix);
      std::size_t tix = 0;
      for (std::size_t a = 0; a < d; ++a) {
        const int n = g.spec.nx[a];
        const double mapped = lattice_index(slots[a], n) * factor[a];
        const double rounded = std::round(mapped);
        if (std::abs(mapped - rounded) > 1e-9)
          throw std::invalid_argument("rescale_solution: frequency map is off the target lattice");
        const int m = static_cast<int>(rounded);
        if (m < -n / 2 || m >= n / 2)
          throw std::invalid_argument("rescale_solution: rescaled frequency exceeds the target Nyquist range");
        tix = tix * static_cast<std::size_t>(n) + static_cast<std::size_t>(m < 0 ? m + n : m);
      }
      dst[tix * tg.y_size] = z * (amplitude * scale);
    }
    return dst;
  };

  for (const auto& s : snapshots) {
    check_shape(g, s.u, "rescale_solution");
    check_shape(g, s.v, "rescale_solution");
    const ModalState m = forward_transform(g, s);
    if (!detail::is_y_independent(g, m.u_hat) || !detail::is_y_independent(g, m.v_hat))
      throw std::invalid_argument("rescale_solution: field depends on y; rescaling acts on R^d data only");
    ModalState r{s.time / root, move_coefficients(m.u_hat, 1.0), move_coefficients(m.v_hat, root)};
    out.snapshots.push_back(inverse_transform(tg, r));
  }
  return out;
}

}  // namespace nlkg
