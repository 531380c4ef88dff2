#pragma once

// Physical and modal representations of the pair (u, v = du/dt).
//
// Modal coefficients are taken against the orthonormal basis
// exp(i(xi.x + n.y)) / sqrt(Vol), so the grid-weighted L^2 norm of a field
// equals the plain l^2 norm of its coefficients.

#include "nlkg/spectral/grid.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>

namespace nlkg {

struct FieldState {
  double time = 0.0;
  ComplexField u;
  ComplexField v;
};

struct ModalState {
  double time = 0.0;
  ComplexField u_hat;
  ComplexField v_hat;
};

inline FieldState zero_state(const Grid& g, double time = 0.0) {
  return {time, ComplexField(g.size), ComplexField(g.size)};
}

/// In-place physical -> orthonormal modal coefficients.
inline void to_modal_inplace(const Grid& g, std::span<std::complex<double>> data) {
  g.plan->forward(data);
  const double scale = std::sqrt(g.volume()) / static_cast<double>(g.size);
  for (auto& z : data) z *= scale;
}

/// In-place orthonormal modal coefficients -> physical values.
inline void to_physical_inplace(const Grid& g, std::span<std::complex<double>> data) {
  g.plan->backward(data);
  const double scale = 1.0 / std::sqrt(g.volume());
  for (auto& z : data) z *= scale;
}

inline ComplexField to_modal(const Grid& g, const ComplexField& f) {
  check_shape(g, f, "to_modal");
  ComplexField out = f;
  to_modal_inplace(g, out);
  return out;
}

inline ComplexField to_physical(const Grid& g, const ComplexField& c) {
  check_shape(g, c, "to_physical");
  ComplexField out = c;
  to_physical_inplace(g, out);
  return out;
}

inline ModalState forward_transform(const Grid& g, const FieldState& s) {
  return {s.time, to_modal(g, s.u), to_modal(g, s.v)};
}

inline FieldState inverse_transform(const Grid& g, const ModalState& m) {
  return {m.time, to_physical(g, m.u_hat), to_physical(g, m.v_hat)};
}

/// Grid-weighted L^2 norm sqrt(sum |f|^2 dV).
inline double l2_norm(const Grid& g, std::span<const std::complex<double>> f) {
  double acc = 0.0;
  for (const auto& z : f) acc += std::norm(z);
  return std::sqrt(acc * g.cell_volume);
}

/// Grid-weighted joint L^rho norm over x and y; rho may be +inf.
inline double lp_norm(const Grid& g, std::span<const std::complex<double>> f, double rho) {
  if (!(rho >= 1.0)) throw std::invalid_argument("lp_norm: rho must be >= 1");
  if (std::isinf(rho)) {
    double m = 0.0;
    for (const auto& z : f) m = std::max(m, std::abs(z));
    return m;
  }
  double acc = 0.0;
  if (rho == 2.0) return l2_norm(g, f);
  for (const auto& z : f) acc += std::pow(std::abs(z), rho);
  return std::pow(acc * g.cell_volume, 1.0 / rho);
}

/// Mixed norm ||f||_{L^rx_x L^ry_y}: the y-norm per x-point first, then x.
/// Either exponent may be +inf.
inline double mixed_norm(const Grid& g, std::span<const std::complex<double>> f, double rx, double ry) {
  if (!(rx >= 1.0) || !(ry >= 1.0)) throw std::invalid_argument("mixed_norm: exponents must be >= 1");
  double acc = 0.0;
  for (std::size_t ix = 0; ix < g.x_size; ++ix) {
    const auto col = f.subspan(ix * g.y_size, g.y_size);
    double ny = 0.0;
    if (std::isinf(ry)) {
      for (const auto& z : col) ny = std::max(ny, std::abs(z));
    } else if (ry == 2.0) {
      for (const auto& z : col) ny += std::norm(z);
      ny = std::sqrt(ny * g.dy_volume);
    } else {
      for (const auto& z : col) ny += std::pow(std::abs(z), ry);
      ny = std::pow(ny * g.dy_volume, 1.0 / ry);
    }
    if (std::isinf(rx))
      acc = std::max(acc, ny);
    else
      acc += std::pow(ny, rx);
  }
  return std::isinf(rx) ? acc : std::pow(acc * g.dx_volume, 1.0 / rx);
}

/// Plain l^2 norm of coefficient arrays.
inline double coefficient_norm(std::span<const std::complex<double>> c) {
  double acc = 0.0;
  for (const auto& z : c) acc += std::norm(z);
  return std::sqrt(acc);
}

inline bool all_finite(std::span<const std::complex<double>> f) {
  for (const auto& z : f)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

}  // namespace nlkg
