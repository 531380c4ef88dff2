#pragma once

// Nonlinear evolution of u_tt - Delta u + u = sign |u|^{p-1} u by Strang
// splitting: half kick, exact linear flow, half kick. Both substeps are exact;
// the kick keeps u and shifts v by (dt/2) sign |u|^{p-1} u.

#include "nlkg/propagator/propagator.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlkg {

enum class Sign : int { defocusing = -1, off = 0, focusing = 1 };

inline double sign_value(Sign s) { return static_cast<double>(static_cast<int>(s)); }

/// sign |z|^{p-1} z, with 0 -> 0.
inline std::complex<double> nonlinear_term(std::complex<double> z, double p, Sign sign) {
  if (sign == Sign::off) return {0.0, 0.0};
  const double a2 = std::norm(z);
  double w;
  if (p == 3.0)
    w = a2;
  else if (p == 5.0)
    w = a2 * a2;
  else if (p == 2.0)
    w = std::sqrt(a2);
  else
    w = a2 > 0.0 ? std::pow(a2, 0.5 * (p - 1.0)) : 0.0;
  return sign_value(sign) * w * z;
}

inline ComplexField nonlinearity(std::span<const std::complex<double>> u, double p, Sign sign) {
  if (!(p >= 2.0)) throw std::invalid_argument("nonlinearity: p must be >= 2");
  ComplexField out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = nonlinear_term(u[i], p, sign);
  return out;
}

struct EvolveConfig {
  double p = 3.0;
  Sign sign = Sign::defocusing;
  double dt = 0.01;
  double T = 1.0;
  int snapshot_stride = 1;
  double blowup_ceiling = 1e6;  // on ||u||_{L^inf}

  /// Number of steps; T must be an integer multiple of dt.
  long steps() const {
    if (!(dt > 0.0) || !(T > 0.0)) throw std::invalid_argument("EvolveConfig: dt and T must be positive");
    if (dt > T) throw std::invalid_argument("EvolveConfig: dt must not exceed T");
    const double n = T / dt;
    const long r = std::lround(n);
    if (std::abs(n - static_cast<double>(r)) > 1e-9 * n)
      throw std::invalid_argument("EvolveConfig: T must be an integer multiple of dt");
    return r;
  }

  void validate() const {
    if (!(p >= 2.0)) throw std::invalid_argument("EvolveConfig: p must be >= 2");
    if (snapshot_stride < 1) throw std::invalid_argument("EvolveConfig: snapshot_stride must be >= 1");
    (void)steps();
  }
};

struct Trajectory {
  EvolveConfig config;
  std::vector<FieldState> snapshots;

  double spacing() const { return config.dt * config.snapshot_stride; }
};

class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything an observer sees at a recorded time. u is physical, the modal
/// pair is the full state.
struct StepView {
  double time;
  const Grid& grid;
  std::span<const std::complex<double>> u;
  std::span<const std::complex<double>> u_hat;
  std::span<const std::complex<double>> v_hat;
};

using StepObserver = std::function<void(const StepView&)>;

enum class EvolveStatus { ok, blowup };

inline const char* to_string(EvolveStatus s) { return s == EvolveStatus::ok ? "OK" : "BLOWUP"; }

struct EvolveResult {
  Trajectory trajectory;
  EvolveStatus status = EvolveStatus::ok;
  double stop_time = 0.0;
  double max_spectral_tail = 0.0;  // fraction of ||u_hat||^2 in the outer third of the x-lattice
};

namespace detail {

inline double max_abs(std::span<const std::complex<double>> f) {
  double m = 0.0;
  for (const auto& z : f) m = std::max(m, std::norm(z));
  return std::sqrt(m);
}

inline void kick(ComplexField& v_hat, const ComplexField& f_hat, double h) {
  for (std::size_t i = 0; i < v_hat.size(); ++i) v_hat[i] += h * f_hat[i];
}

inline ComplexField nonlinearity_modal(const Grid& g, std::span<const std::complex<double>> u, double p, Sign sign) {
  ComplexField f = nonlinearity(u, p, sign);
  to_modal_inplace(g, f);
  return f;
}

}  // namespace detail

/// Share of the coefficient energy sitting in the outer third of any x-axis.
inline double spectral_tail(const Grid& g, std::span<const std::complex<double>> c) {
  double total = 0.0;
  double tail = 0.0;
  for (std::size_t ix = 0; ix < g.x_size; ++ix) {
    const auto slots = g.x_multi_index(ix);
    bool outer = false;
    for (std::size_t a = 0; a < slots.size(); ++a) {
      const int n = g.spec.nx[a];
      if (3 * std::abs(lattice_index(slots[a], n)) > n) outer = true;
    }
    for (std::size_t iy = 0; iy < g.y_size; ++iy) {
      const double e = std::norm(c[ix * g.y_size + iy]);
      total += e;
      if (outer) tail += e;
    }
  }
  return total > 0.0 ? tail / total : 0.0;
}

inline FieldState strang_step(const Grid& g, const FieldState& state, double dt, const EvolveConfig& cfg) {
  check_shape(g, state.u, "strang_step");
  check_shape(g, state.v, "strang_step");
  ModalState m = forward_transform(g, state);
  detail::kick(m.v_hat, detail::nonlinearity_modal(g, state.u, cfg.p, cfg.sign), 0.5 * dt);
  flow_modal(g, m.u_hat, m.v_hat, dt);
  const ComplexField u = to_physical(g, m.u_hat);
  detail::kick(m.v_hat, detail::nonlinearity_modal(g, u, cfg.p, cfg.sign), 0.5 * dt);
  FieldState out = inverse_transform(g, m);
  out.time = state.time + dt;
  if (!all_finite(out.u) || !all_finite(out.v)) throw NumericFailure("strang_step: non-finite values");
  return out;
}

/// Repeated Strang steps from `initial`. Snapshots (including t = 0 and the
/// final time) are stored every snapshot_stride steps when `store` is set, and
/// always passed to `observer`.
inline EvolveResult evolve(const Grid& g, const FieldState& initial, const EvolveConfig& cfg,
                           const StepObserver& observer = {}, bool store = true) {
  cfg.validate();
  check_shape(g, initial.u, "evolve");
  check_shape(g, initial.v, "evolve");
  if (!all_finite(initial.u) || !all_finite(initial.v)) throw NumericFailure("evolve: non-finite initial data");

  const long n_steps = cfg.steps();
  const LinearPropagator flow(g, cfg.dt);
  EvolveResult result;
  result.trajectory.config = cfg;

  ModalState m = forward_transform(g, initial);
  ComplexField u = initial.u;
  ComplexField f_hat = detail::nonlinearity_modal(g, u, cfg.p, cfg.sign);

  auto record = [&](double t) {
    result.max_spectral_tail = std::max(result.max_spectral_tail, spectral_tail(g, m.u_hat));
    if (observer) observer(StepView{t, g, u, m.u_hat, m.v_hat});
    if (store) result.trajectory.snapshots.push_back(FieldState{t, u, to_physical(g, m.v_hat)});
  };

  record(initial.time);
  for (long step = 1; step <= n_steps; ++step) {
    detail::kick(m.v_hat, f_hat, 0.5 * cfg.dt);
    flow.apply(m.u_hat, m.v_hat);
    u = m.u_hat;
    to_physical_inplace(g, u);
    f_hat = detail::nonlinearity_modal(g, u, cfg.p, cfg.sign);
    detail::kick(m.v_hat, f_hat, 0.5 * cfg.dt);

    const double t = initial.time + static_cast<double>(step) * cfg.dt;
    if (!all_finite(u) || !all_finite(m.v_hat))
      throw NumericFailure("evolve: non-finite values at t = " + std::to_string(t));
    if (detail::max_abs(u) > cfg.blowup_ceiling) {
      result.status = EvolveStatus::blowup;
      result.stop_time = t;
      record(t);
      return result;
    }
    if (step % cfg.snapshot_stride == 0 || step == n_steps) record(t);
  }
  result.stop_time = initial.time + static_cast<double>(n_steps) * cfg.dt;
  return result;
}

}  // namespace nlkg
