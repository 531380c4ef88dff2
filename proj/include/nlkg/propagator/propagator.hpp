#pragma once

// Exact linear Klein-Gordon flows. Each joint mode (xi, n) is an independent
// oscillator with frequency omega = sqrt(m^2 + lambda_n + |xi|^2), and the
// group e^{tH} acts on the pair (u, v) as the rotation
//
//   u(t) =  cos(wt) u0 + sin(wt)/w v0
//   v(t) = -w sin(wt) u0 + cos(wt) v0

#include "nlkg/spectral/field.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nlkg {

inline constexpr double kDefaultMassSq = 1.0;

struct ModePair {
  std::complex<double> u;
  std::complex<double> v;
};

inline double mode_frequency(double lambda, double xi_sq, double m_sq = kDefaultMassSq) {
  const double w2 = m_sq + lambda + xi_sq;
  if (!(w2 > 0.0)) throw std::invalid_argument("mode_frequency: m^2 + lambda + |xi|^2 must be positive");
  return std::sqrt(w2);
}

inline ModePair mode_flow(std::complex<double> u0, std::complex<double> v0, double lambda, double xi_sq, double t,
                          double m_sq = kDefaultMassSq) {
  const double w = mode_frequency(lambda, xi_sq, m_sq);
  const double c = std::cos(w * t);
  const double s = std::sin(w * t);
  return {c * u0 + (s / w) * v0, -w * s * u0 + c * v0};
}

/// e^{tH} for a fixed t, with the per-mode rotation tabulated once.
class LinearPropagator {
 public:
  LinearPropagator(const Grid& g, double t, double m_sq = kDefaultMassSq) : t_(t) {
    cos_.resize(g.size);
    sin_over_w_.resize(g.size);
    w_sin_.resize(g.size);
    for (std::size_t ix = 0; ix < g.x_size; ++ix) {
      for (std::size_t iy = 0; iy < g.y_size; ++iy) {
        const std::size_t i = ix * g.y_size + iy;
        const double w = mode_frequency(g.lambda[iy], g.xi_sq[ix], m_sq);
        const double c = std::cos(w * t);
        const double s = std::sin(w * t);
        cos_[i] = c;
        sin_over_w_[i] = s / w;
        w_sin_[i] = w * s;
      }
    }
  }

  double time() const { return t_; }

  void apply(ComplexField& u_hat, ComplexField& v_hat) const {
    if (u_hat.size() != cos_.size() || v_hat.size() != cos_.size())
      throw std::invalid_argument("LinearPropagator: shape mismatch");
    for (std::size_t i = 0; i < cos_.size(); ++i) {
      const auto u = u_hat[i];
      const auto v = v_hat[i];
      u_hat[i] = cos_[i] * u + sin_over_w_[i] * v;
      v_hat[i] = -w_sin_[i] * u + cos_[i] * v;
    }
  }

  void apply(ModalState& m) const {
    apply(m.u_hat, m.v_hat);
    m.time += t_;
  }

 private:
  double t_;
  std::vector<double> cos_;
  std::vector<double> sin_over_w_;
  std::vector<double> w_sin_;
};

/// e^{tH} applied directly on modal arrays without tabulation.
inline void flow_modal(const Grid& g, ComplexField& u_hat, ComplexField& v_hat, double t,
                       double m_sq = kDefaultMassSq) {
  check_shape(g, u_hat, "flow_modal");
  check_shape(g, v_hat, "flow_modal");
  for (std::size_t ix = 0; ix < g.x_size; ++ix) {
    for (std::size_t iy = 0; iy < g.y_size; ++iy) {
      const std::size_t i = ix * g.y_size + iy;
      const auto r = mode_flow(u_hat[i], v_hat[i], g.lambda[iy], g.xi_sq[ix], t, m_sq);
      u_hat[i] = r.u;
      v_hat[i] = r.v;
    }
  }
}

/// S(t)(f, g) and its time derivative, evaluated on the grid.
inline FieldState linear_flow(const Grid& g, const FieldState& state, double t, double m_sq = kDefaultMassSq) {
  check_shape(g, state.u, "linear_flow");
  check_shape(g, state.v, "linear_flow");
  ModalState m = forward_transform(g, state);
  flow_modal(g, m.u_hat, m.v_hat, t, m_sq);
  FieldState out = inverse_transform(g, m);
  out.time = state.time + t;
  return out;
}

/// V(t) = e^{-tH}(u, u_t): pulls a state at time t back to time zero.
inline FieldState inverse_wave(const Grid& g, const FieldState& state, double t, double m_sq = kDefaultMassSq) {
  FieldState out = linear_flow(g, state, -t, m_sq);
  out.time = state.time - t;
  return out;
}

/// Modal multiplier (1 + lambda_n)^{gamma/2}, i.e. (1 - Delta_y)^{gamma/2}.
inline void apply_sobolev_y_modal(const Grid& g, ComplexField& c, double gamma) {
  check_shape(g, c, "apply_sobolev_y_modal");
  std::vector<double> w(g.y_size);
  for (std::size_t iy = 0; iy < g.y_size; ++iy) w[iy] = std::pow(1.0 + g.lambda[iy], 0.5 * gamma);
  for (std::size_t ix = 0; ix < g.x_size; ++ix)
    for (std::size_t iy = 0; iy < g.y_size; ++iy) c[ix * g.y_size + iy] *= w[iy];
}

}  // namespace nlkg
