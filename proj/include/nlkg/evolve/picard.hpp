#pragma once

// Picard iteration for the Duhamel map
//
//   Phi0 u(t) = S(t)(f, g) + int_0^t S(t - s)(0, sign |u|^{p-1} u(s)) ds
//
// on snapshots spaced h = dt * snapshot_stride. The integral is the composite
// trapezoid rule in s. Writing A_i = e^{t_i H}((f, g) + W_i) for the modal
// state at t_i, the trapezoid recursion becomes
//
//   A_i = e^{hH}(A_{i-1} + (h/2)(0, F_{i-1})) + (h/2)(0, F_i),
//
// so one tabulated propagator serves every step. Each iterate only needs
// F(u_j) for j <= i, which lets the update overwrite the candidate in place.

#include "nlkg/evolve/evolve.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlkg {

enum class PicardStatus { converged, max_iter, noncontractive };

inline const char* to_string(PicardStatus s) {
  switch (s) {
    case PicardStatus::converged: return "OK";
    case PicardStatus::max_iter: return "MAX_ITER";
    case PicardStatus::noncontractive: return "NONCONTRACTIVE";
  }
  return "?";
}

struct PicardResult {
  Trajectory trajectory;
  std::vector<double> differences;  // ||u^(n+1) - u^(n)|| in L^p_t L^{2p}_{x,y}
  std::vector<double> ratios;       // differences[n] / differences[n-1]
  PicardStatus status = PicardStatus::max_iter;
  int iterations = 0;
  double quadrature_error = 0.0;  // Richardson estimate, stride h vs 2h, on the first map
  double tol = 0.0;
};

namespace detail {

inline long picard_snapshot_count(const EvolveConfig& cfg) {
  const long steps = cfg.steps();
  if (steps % cfg.snapshot_stride != 0)
    throw std::invalid_argument("picard: T / dt must be a multiple of snapshot_stride");
  return steps / cfg.snapshot_stride + 1;
}

inline void check_candidate(const Grid& g, const Trajectory& c, const EvolveConfig& cfg) {
  const long n = picard_snapshot_count(cfg);
  const double h = cfg.dt * cfg.snapshot_stride;
  if (static_cast<long>(c.snapshots.size()) != n)
    throw std::invalid_argument("picard: candidate has " + std::to_string(c.snapshots.size()) +
                                " snapshots, expected " + std::to_string(n));
  for (long i = 0; i < n; ++i) {
    const auto& s = c.snapshots[static_cast<std::size_t>(i)];
    if (std::abs(s.time - static_cast<double>(i) * h) > 1e-9 * (1.0 + cfg.T))
      throw std::invalid_argument("picard: candidate stride does not match the configured spacing");
    check_shape(g, s.u, "picard");
  }
}

/// Trapezoid in time of the per-snapshot spatial norms raised to q.
inline double time_norm(const std::vector<double>& spatial, double h, double q) {
  if (spatial.size() == 1) return spatial[0];
  double acc = 0.0;
  for (std::size_t i = 0; i < spatial.size(); ++i) {
    const double w = (i == 0 || i + 1 == spatial.size()) ? 0.5 : 1.0;
    acc += w * std::pow(spatial[i], q);
  }
  return std::pow(acc * h, 1.0 / q);
}

/// One sweep of Phi0 over the candidate. When `overwrite` is set the candidate
/// is replaced by the image; returns the discrete L^p_t L^{2p} distance between
/// the candidate and its image. With `coarse` set, also returns the distance
/// between the stride-h and stride-2h quadratures at even snapshots.
struct SweepResult {
  double difference = 0.0;
  double quadrature_error = 0.0;
};

inline SweepResult picard_sweep(const Grid& g, const ModalState& data, Trajectory& candidate, const EvolveConfig& cfg,
                                bool overwrite, bool coarse) {
  const double h = cfg.dt * cfg.snapshot_stride;
  const double rho = 2.0 * cfg.p;
  const std::size_t n = candidate.snapshots.size();
  const LinearPropagator step(g, h);
  std::optional<LinearPropagator> step2;
  if (coarse) step2.emplace(g, 2.0 * h);

  ModalState a = data;
  ModalState a2 = data;
  ComplexField f_prev;
  ComplexField f_prev2;
  ComplexField u_new(g.size);
  std::vector<double> diffs(n);
  std::vector<double> qerr;

  for (std::size_t i = 0; i < n; ++i) {
    auto& snap = candidate.snapshots[i];
    ComplexField f_hat = nonlinearity_modal(g, snap.u, cfg.p, cfg.sign);
    if (i > 0) {
      kick(a.v_hat, f_prev, 0.5 * h);
      step.apply(a.u_hat, a.v_hat);
      kick(a.v_hat, f_hat, 0.5 * h);
    }
    u_new = a.u_hat;
    to_physical_inplace(g, u_new);

    if (coarse && i % 2 == 0) {
      if (i > 0) {
        kick(a2.v_hat, f_prev2, h);
        step2->apply(a2.u_hat, a2.v_hat);
        kick(a2.v_hat, f_hat, h);
      }
      ComplexField u2 = a2.u_hat;
      to_physical_inplace(g, u2);
      for (std::size_t j = 0; j < u2.size(); ++j) u2[j] = (u2[j] - u_new[j]) / 3.0;
      qerr.push_back(lp_norm(g, u2, rho));
      f_prev2 = f_hat;
    }

    for (std::size_t j = 0; j < u_new.size(); ++j) snap.u[j] -= u_new[j];
    diffs[i] = lp_norm(g, snap.u, rho);
    if (overwrite) {
      snap.u.swap(u_new);
      snap.v = to_physical(g, a.v_hat);
    } else {
      for (std::size_t j = 0; j < u_new.size(); ++j) snap.u[j] += u_new[j];
    }
    f_prev.swap(f_hat);
  }

  SweepResult r;
  r.difference = time_norm(diffs, h, cfg.p);
  if (coarse) r.quadrature_error = time_norm(qerr, 2.0 * h, cfg.p);
  return r;
}

}  // namespace detail

/// Linear evolution of the data sampled at the Picard spacing.
inline Trajectory linear_trajectory(const Grid& g, const FieldState& data, const EvolveConfig& cfg) {
  const long n = detail::picard_snapshot_count(cfg);
  const double h = cfg.dt * cfg.snapshot_stride;
  const LinearPropagator step(g, h);
  Trajectory t;
  t.config = cfg;
  ModalState m = forward_transform(g, data);
  for (long i = 0; i < n; ++i) {
    if (i > 0) step.apply(m.u_hat, m.v_hat);
    FieldState s = inverse_transform(g, m);
    s.time = static_cast<double>(i) * h;
    t.snapshots.push_back(std::move(s));
  }
  return t;
}

/// Phi0 applied to `candidate`, returned as a new trajectory.
inline Trajectory picard_map(const Grid& g, const FieldState& data, const Trajectory& candidate,
                             const EvolveConfig& cfg) {
  cfg.validate();
  detail::check_candidate(g, candidate, cfg);
  Trajectory out = candidate;
  out.config = cfg;
  detail::picard_sweep(g, forward_transform(g, data), out, cfg, true, false);
  return out;
}

/// ||Phi0 u - u|| in the discrete L^p_t L^{2p}_{x,y} norm, without storing Phi0 u.
inline double fixed_point_residual(const Grid& g, const FieldState& data, const Trajectory& candidate,
                                   const EvolveConfig& cfg) {
  cfg.validate();
  detail::check_candidate(g, candidate, cfg);
  Trajectory work = candidate;
  return detail::picard_sweep(g, forward_transform(g, data), work, cfg, false, false).difference;
}

/// Iterates u^(n+1) = Phi0 u^(n) from the linear flow until the step falls
/// below `tol` (absolute, in L^p_t L^{2p}_{x,y}).
inline PicardResult picard_solve(const Grid& g, const FieldState& data, const EvolveConfig& cfg, double tol,
                                 int max_iter) {
  cfg.validate();
  if (!(tol > 0.0)) throw std::invalid_argument("picard_solve: tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("picard_solve: max_iter must be >= 1");
  check_shape(g, data.u, "picard_solve");
  check_shape(g, data.v, "picard_solve");
  if (!all_finite(data.u) || !all_finite(data.v)) throw NumericFailure("picard_solve: non-finite data");

  PicardResult res;
  res.tol = tol;
  res.trajectory = linear_trajectory(g, data, cfg);
  const ModalState modal = forward_transform(g, data);
  int above_one = 0;
  for (int it = 1; it <= max_iter; ++it) {
    const auto sweep = detail::picard_sweep(g, modal, res.trajectory, cfg, true, it == 1);
    if (it == 1) res.quadrature_error = sweep.quadrature_error;
    if (!std::isfinite(sweep.difference)) throw NumericFailure("picard_solve: iterate became non-finite");
    res.iterations = it;
    res.differences.push_back(sweep.difference);
    if (res.differences.size() > 1) {
      const double prev = res.differences[res.differences.size() - 2];
      const double ratio = prev > 0.0 ? sweep.difference / prev : 0.0;
      res.ratios.push_back(ratio);
      above_one = ratio > 1.0 ? above_one + 1 : 0;
      if (above_one >= 3) {
        res.status = PicardStatus::noncontractive;
        return res;
      }
    }
    if (sweep.difference < tol) {
      res.status = PicardStatus::converged;
      return res;
    }
  }
  res.status = PicardStatus::max_iter;
  return res;
}

}  // namespace nlkg
