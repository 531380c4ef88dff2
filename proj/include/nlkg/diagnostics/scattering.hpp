#pragma once

// Scattering measurements along a trajectory.
//
// V(t) = e^{-tH}(u, u_t)(t) is constant for free solutions. For the nonlinear
// flow ||V(t) - V(tau)||_{H^1 x L^2} <= int_tau^t ||F(s)||_{L^2} ds, and since
// ||F||_{L^2} = ||u||_{L^{2p}}^p the right side is the p-th power of the
// L^p_t L^{2p} Strichartz norm over [tau, t]. The ratio of the two sides is
// reported as an empirical factor.
//
// The accumulator consumes states one at a time (an evolve observer) and keeps
// only O(1) fields, so it scales to runs whose snapshots do not fit in memory.

#include "nlkg/diagnostics/norms.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace nlkg {

struct ScatteringConfig {
  double p = 3.0;
  Sign sign = Sign::defocusing;
  std::optional<double> gamma;  // set: weighted variant on (1 - Delta_y)^{gamma/2} u, mixed L^{2p}_x L^2_y
  double window = 1.0;          // width of the V-increment windows
};

struct ScatteringReport {
  std::vector<double> times;
  std::vector<double> energy;       // conserved energy
  std::vector<double> energy_norm;  // (||u||_{H^1}^2 + ||v||_{L^2}^2)^{1/2}
  std::vector<double> spatial_norms;
  std::vector<double> strichartz_partials;  // ||u||_{L^p([0,t], X)}
  std::vector<double> tail_norms;           // ||u||_{L^p([t,T], X)}
  std::vector<double> v_increments;         // ||V(t_i) - V(t_{i-1})||, 0 at i = 0
  std::vector<double> window_times;         // right ends of complete windows
  std::vector<double> window_increments;    // ||V(t) - V(t - window)||
  FieldState scatter_state;                 // V(T), physical
  double scatter_state_norm = 0.0;
  double max_energy_drift = 0.0;            // relative to |E(0)|, or absolute when E(0) = 0
  double section_factor = 0.0;              // max_i increment / forcing integral
  double energy_inequality_margin = kInfinity;  // min over t of rhs + slack - lhs
  bool energy_inequality_holds = true;
  double p = 3.0;
  bool weighted = false;

  double total_norm() const { return strichartz_partials.empty() ? 0.0 : strichartz_partials.back(); }

  /// Tail norm at a recorded time (within 1e-9).
  double tail_at(double t) const {
    for (std::size_t i = 0; i < times.size(); ++i)
      if (std::abs(times[i] - t) < 1e-9) return tail_norms[i];
    throw std::invalid_argument("ScatteringReport: time not recorded");
  }
};

class ScatteringAccumulator {
 public:
  ScatteringAccumulator(const Grid& g, ScatteringConfig cfg) : g_(g), cfg_(cfg) {
    if (!(cfg_.p >= 2.0)) throw std::invalid_argument("ScatteringAccumulator: p must be >= 2");
    if (cfg_.gamma && !(*cfg_.gamma >= 0.0)) throw std::invalid_argument("ScatteringAccumulator: gamma must be >= 0");
    rep_.p = cfg_.p;
    rep_.weighted = cfg_.gamma.has_value();
  }

  void add(double t, std::span<const std::complex<double>> u, std::span<const std::complex<double>> u_hat,
           std::span<const std::complex<double>> v_hat) {
    check_shape(g_, u, "ScatteringAccumulator");
    if (!rep_.times.empty() && !(t > rep_.times.back()))
      throw std::invalid_argument("ScatteringAccumulator: times must increase");
    const double e = conserved_energy_modal(g_, u, u_hat, v_hat, cfg_.p, cfg_.sign);
    const double en = energy_norm_modal(g_, u_hat, v_hat);

    // ||F||_{L^2} = ||u||_{L^{2p}}^p on the unweighted field.
    const double forcing = std::pow(lp_norm(g_, u, 2.0 * cfg_.p), cfg_.p);

    ComplexField wu(u_hat.begin(), u_hat.end());
    ComplexField wv(v_hat.begin(), v_hat.end());
    double spatial;
    if (cfg_.gamma) {
      apply_sobolev_y_modal(g_, wu, *cfg_.gamma);
      apply_sobolev_y_modal(g_, wv, *cfg_.gamma);
      ComplexField phys = wu;
      to_physical_inplace(g_, phys);
      spatial = mixed_norm(g_, phys, 2.0 * cfg_.p, 2.0);
    } else {
      spatial = lp_norm(g_, u, 2.0 * cfg_.p);
    }
    // V(t) = e^{-tH}(u_hat, v_hat).
    flow_modal(g_, wu, wv, -t);

    double increment = 0.0;
    if (!rep_.times.empty()) {
      increment = distance(wu, wv, vu_, vv_);
      const double h = t - rep_.times.back();
      const double integral = 0.5 * h * (forcing + forcing_prev_);
      const double slack = 0.5 * h * std::abs(forcing - forcing_prev_) + 1e-12 * (1.0 + en0_);
      forcing_integral_ += integral;
      slack_ += slack;
      if (integral > 0.0) rep_.section_factor = std::max(rep_.section_factor, increment / integral);
      const double margin = en0_ + forcing_integral_ + slack_ - en;
      rep_.energy_inequality_margin = std::min(rep_.energy_inequality_margin, margin);
      if (margin < 0.0) rep_.energy_inequality_holds = false;
    } else {
      en0_ = en;
      e0_ = e;
      window_u_ = wu;
      window_v_ = wv;
      window_start_ = t;
    }
    const double drift = std::abs(e - e0_) / (e0_ != 0.0 ? std::abs(e0_) : 1.0);
    rep_.max_energy_drift = std::max(rep_.max_energy_drift, drift);

    if (t - window_start_ >= cfg_.window - 1e-9) {
      rep_.window_times.push_back(t);
      rep_.window_increments.push_back(distance(wu, wv, window_u_, window_v_));
      window_u_ = wu;
      window_v_ = wv;
      window_start_ = t;
    }

    rep_.times.push_back(t);
    rep_.energy.push_back(e);
    rep_.energy_norm.push_back(en);
    rep_.spatial_norms.push_back(spatial);
    rep_.v_increments.push_back(increment);
    forcing_prev_ = forcing;
    vu_ = std::move(wu);
    vv_ = std::move(wv);
  }

  void add(const StepView& s) { add(s.time, s.u, s.u_hat, s.v_hat); }

  ScatteringReport finish() {
    if (rep_.times.empty()) throw std::invalid_argument("ScatteringAccumulator: no states recorded");
    const std::size_t n = rep_.times.size();
    const double q = cfg_.p;
    std::vector<double> cum(n, 0.0);
    for (std::size_t i = 1; i < n; ++i)
      cum[i] = cum[i - 1] + 0.5 * (rep_.times[i] - rep_.times[i - 1]) *
                                (std::pow(rep_.spatial_norms[i], q) + std::pow(rep_.spatial_norms[i - 1], q));
    // Tails summed backwards so they are exactly nonincreasing.
    std::vector<double> tail(n, 0.0);
    for (std::size_t i = n - 1; i-- > 0;)
      tail[i] = tail[i + 1] + 0.5 * (rep_.times[i + 1] - rep_.times[i]) *
                                  (std::pow(rep_.spatial_norms[i + 1], q) + std::pow(rep_.spatial_norms[i], q));
    rep_.strichartz_partials.resize(n);
    rep_.tail_norms.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      rep_.strichartz_partials[i] = std::pow(cum[i], 1.0 / q);
      rep_.tail_norms[i] = std::pow(tail[i], 1.0 / q);
    }
    rep_.scatter_state_norm = energy_norm_modal(g_, vu_, vv_);
    rep_.scatter_state = inverse_transform(g_, ModalState{0.0, vu_, vv_});
    return rep_;
  }

  /// V at the latest recorded time, modal.
  ModalState current_v() const { return {0.0, vu_, vv_}; }

 private:
  double distance(const ComplexField& au, const ComplexField& av, const ComplexField& bu,
                  const ComplexField& bv) const {
    ComplexField du(au.size());
    ComplexField dv(av.size());
    for (std::size_t i = 0; i < au.size(); ++i) {
      du[i] = au[i] - bu[i];
      dv[i] = av[i] - bv[i];
    }
    return energy_norm_modal(g_, du, dv);
  }

  const Grid& g_;
  ScatteringConfig cfg_;
  ScatteringReport rep_;
  ComplexField vu_, vv_;
  ComplexField window_u_, window_v_;
  double window_start_ = 0.0;
  double forcing_prev_ = 0.0;
  double forcing_integral_ = 0.0;
  double slack_ = 0.0;
  double en0_ = 0.0;
  double e0_ = 0.0;
};

inline ScatteringReport scattering_profile(const Grid& g, const Trajectory& traj, const ScatteringConfig& cfg) {
  ScatteringAccumulator acc(g, cfg);
  for (const auto& s : traj.snapshots) {
    const ModalState m = forward_transform(g, s);
    acc.add(s.time, s.u, m.u_hat, m.v_hat);
  }
  return acc.finish();
}

/// Desk-scale stand-in for convergence as t -> inf: tail norms drop by at
/// least `min_factor` each time the window start doubles, and the window
/// increments of V are nonincreasing up to a relative `slack`.
struct DecayCheck {
  std::vector<double> starts;
  std::vector<double> tails;
  std::vector<double> factors;  // tails[i] / tails[i+1]
  bool tails_ok = false;
  double worst_window_growth = 0.0;  // max_i w[i+1]/w[i]
  bool windows_monotone = false;
  bool ok = false;
};

inline DecayCheck decay_check(const ScatteringReport& r, std::vector<double> starts = {2.0, 4.0, 8.0},
                              double min_factor = 2.0, double slack = 0.05) {
  DecayCheck c;
  c.starts = std::move(starts);
  c.tails_ok = true;
  for (double t : c.starts) c.tails.push_back(r.tail_at(t));
  for (std::size_t i = 0; i + 1 < c.tails.size(); ++i) {
    const double f = c.tails[i + 1] > 0.0 ? c.tails[i] / c.tails[i + 1] : kInfinity;
    c.factors.push_back(f);
    if (!(f >= min_factor)) c.tails_ok = false;
  }
  c.windows_monotone = true;
  const auto& w = r.window_increments;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const double growth = w[i] > 0.0 ? w[i + 1] / w[i] : (w[i + 1] > 0.0 ? kInfinity : 0.0);
    c.worst_window_growth = std::max(c.worst_window_growth, growth);
    if (w[i + 1] > (1.0 + slack) * w[i]) c.windows_monotone = false;
  }
  c.ok = c.tails_ok && c.windows_monotone;
  return c;
}

inline ScatteringConfig scattering_config_for(const EvolveConfig& cfg) {
  ScatteringConfig s;
  s.p = cfg.p;
  s.sign = cfg.sign;
  return s;
}

}  // namespace nlkg
