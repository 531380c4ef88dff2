#include "nlkg/diagnostics/algebra.hpp"
#include "nlkg/diagnostics/scattering.hpp"
#include "nlkg/evolve/picard.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace nlkg;
using namespace nlkg::testing;

namespace {

FieldState bump(const Grid& g, double amp, double width) {
  FieldState s = zero_state(g);
  for (std::size_t ix = 0; ix < g.x_size; ++ix) {
    const auto slots = g.x_multi_index(ix);
    double r2 = 0.0;
    for (std::size_t a = 0; a < slots.size(); ++a) r2 += std::pow(g.x_coord(a, slots[a]), 2);
    for (std::size_t iy = 0; iy < g.y_size; ++iy) {
      const double y = g.y_coord(0, g.y_multi_index(iy)[0]);
      s.u[ix * g.y_size + iy] = amp * std::exp(-r2 / (width * width)) * (1.0 + 0.3 * std::cos(y));
    }
  }
  return s;
}

EvolveConfig config(Sign sign, double dt, double T, int stride) {
  EvolveConfig c;
  c.p = 3.0;
  c.sign = sign;
  c.dt = dt;
  c.T = T;
  c.snapshot_stride = stride;
  return c;
}

}  // namespace

TEST(Norms, SingleModeEnergy) {
  // |xi|^2 = 2, lambda = 5: (1 + 5 + 2)^{1/2} = sqrt(8)
  const Grid g = make_grid(domain(2, 2, 2.0 * M_PI, 8, 2.0 * M_PI, 8));
  ComplexField c(g.size);
  const auto idx = mode_index(g, {1, 1}, {1, 2});
  c[idx] = 1.0;
  ASSERT_DOUBLE_EQ(g.xi_sq_of(idx), 2.0);
  ASSERT_DOUBLE_EQ(g.lambda_of(idx), 5.0);
  FieldState s{0.0, to_physical(g, c), ComplexField(g.size)};
  EXPECT_NEAR(energy_norm(g, s), std::sqrt(8.0), 1e-13);
  for (double t : {0.3, 1.7, 12.0}) EXPECT_NEAR(energy_norm(g, linear_flow(g, s, t)), std::sqrt(8.0), 1e-12);
}

TEST(Norms, ConservedEnergyOfConstantField) {
  const Grid g = make_grid(domain(1, 1, 4.0, 8, 2.0, 4));
  FieldState s = zero_state(g);
  std::fill(s.u.begin(), s.u.end(), 2.0);
  const double vol = g.volume();
  EXPECT_NEAR(conserved_energy(g, s, 3.0, Sign::off), 0.5 * 4.0 * vol, 1e-12);
  EXPECT_NEAR(conserved_energy(g, s, 3.0, Sign::focusing), 2.0 * vol - 16.0 / 4.0 * vol, 1e-12);
  EXPECT_NEAR(conserved_energy(g, s, 3.0, Sign::defocusing), 2.0 * vol + 16.0 / 4.0 * vol, 1e-12);
}

TEST(Norms, TimeLebesgue) {
  const std::vector<double> t{0.0, 0.5, 1.0}, v{0.0, 0.5, 1.0};
  EXPECT_NEAR(time_lebesgue_norm(t, v, 1.0), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(time_lebesgue_norm(t, v, kInfinity), 1.0);
  const std::vector<double> t1{0.0}, v1{3.0};
  EXPECT_EQ(time_lebesgue_norm(t1, v1, 2.0), 0.0);
  EXPECT_ANY_THROW(time_lebesgue_norm(t, v1, 2.0));
}

TEST(Norms, StrichartzOfStaticConstantField) {
  const Grid g = make_grid(domain(1, 1, 4.0, 8, 2.0, 4));
  Trajectory tr;
  for (int i = 0; i <= 4; ++i) {
    FieldState s = zero_state(g, 0.5 * i);
    std::fill(s.u.begin(), s.u.end(), 3.0);
    tr.snapshots.push_back(s);
  }
  const double vol = g.volume();
  EXPECT_NEAR(strichartz_norm(g, tr, {3.0, SpatialMode::Lrho_xy, 6.0, 0.0}), std::cbrt(2.0) * 3.0 * std::pow(vol, 1.0 / 6.0), 1e-12);
  EXPECT_NEAR(strichartz_norm(g, tr, {kInfinity, SpatialMode::Lrho_xy, 2.0, 0.0}), 3.0 * std::sqrt(vol), 1e-12);
  EXPECT_NEAR(strichartz_norm(g, tr, {2.0, SpatialMode::Lrho_x_L2_y, 4.0, 0.0}),
              std::sqrt(2.0) * 3.0 * std::pow(g.volume_x, 0.25) * std::sqrt(g.volume_y), 1e-12);
  EXPECT_NEAR(strichartz_norm(g, tr, {kInfinity, SpatialMode::H1xL2_energy, 2.0, 0.0}), 3.0 * std::sqrt(vol), 1e-12);
  EXPECT_ANY_THROW(strichartz_norm(g, Trajectory{}, {2.0, SpatialMode::Lrho_xy, 2.0, 0.0}));
}

TEST(Norms, SobolevYMultiplier) {
  const Grid g = make_grid(domain(1, 1, 6.0, 8, 2.0 * M_PI, 8));
  std::mt19937_64 rng(1);
  const ComplexField f = random_field(g, rng);
  EXPECT_LT(max_diff(sobolev_y_apply(g, f, 0.0), f), 1e-14);
  const ComplexField twice = sobolev_y_apply(g, sobolev_y_apply(g, f, 1.0), 1.0);
  EXPECT_LT(max_diff(twice, sobolev_y_apply(g, f, 2.0)), 1e-12);
  // e^{3iy}: (1 - d_y^2) gives a factor 10
  ComplexField e(g.size);
  for (std::size_t ix = 0; ix < g.x_size; ++ix)
    for (std::size_t iy = 0; iy < g.y_size; ++iy)
      e[ix * g.y_size + iy] = std::exp(std::complex<double>(0.0, 3.0 * g.y_coord(0, static_cast<int>(iy))));
  const ComplexField e2 = sobolev_y_apply(g, e, 2.0);
  for (std::size_t i = 0; i < g.size; ++i) EXPECT_NEAR(std::abs(e2[i] - 10.0 * e[i]), 0.0, 1e-12);
  // y-independent fields are untouched
  ComplexField flat(g.size);
  for (std::size_t ix = 0; ix < g.x_size; ++ix)
    for (std::size_t iy = 0; iy < g.y_size; ++iy) flat[ix * g.y_size + iy] = std::sin(0.7 * ix);
  EXPECT_LT(max_diff(sobolev_y_apply(g, flat, 1.7), flat), 1e-13);
  EXPECT_ANY_THROW(sobolev_y_apply(g, f, -1.0));
}

TEST(Norms, L2YBoundedByLInfYTimesVolume) {
  const Grid g = make_grid(domain(2, 2, 10.0, 8, 3.0, 8));
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const ComplexField f = random_field(g, rng);
    EXPECT_LE(mixed_norm(g, f, 4.0, 2.0), mixed_norm(g, f, 4.0, kInfinity) * std::sqrt(g.volume_y) * (1 + 1e-14));
  }
}

TEST(Algebra, RejectsSubcriticalGamma) {
  EXPECT_ANY_THROW(algebra_check(2, 1.0, 10, 16));
  EXPECT_ANY_THROW(algebra_check(1, 0.4, 10, 16));
  EXPECT_NO_THROW(algebra_check(1, 0.6, 10, 16));
}

TEST(Algebra, ClosedForms) {
  const Grid tg = make_torus_grid({2.0 * M_PI, 2.0 * M_PI}, {16, 16});
  const double vol = tg.volume();
  const ComplexField one(tg.size, 1.0);
  EXPECT_NEAR(algebra_ratio(tg, one, one, 1.1), 1.0 / std::sqrt(vol), 1e-13);
  // e^{i n.y} e^{i m.y} with n = (1, 0), m = (0, 2): lambda 1, 4 and 5
  ComplexField f(tg.size), h(tg.size);
  for (std::size_t iy = 0; iy < tg.size; ++iy) {
    const auto s = tg.y_multi_index(iy);
    const double y0 = tg.y_coord(0, s[0]), y1 = tg.y_coord(1, s[1]);
    f[iy] = std::exp(std::complex<double>(0.0, y0));
    h[iy] = std::exp(std::complex<double>(0.0, 2.0 * y1));
  }
  const double gam = 1.3;
  const double expect = std::pow(6.0, gam / 2) / (std::sqrt(vol) * std::pow(2.0, gam / 2) * std::pow(5.0, gam / 2));
  EXPECT_NEAR(algebra_ratio(tg, f, h, gam), expect, 1e-12);
}

TEST(Algebra, RandomTrialsAreDeterministicAndBounded) {
  const auto a = algebra_check(2, 1.1, 200, 16, 7);
  const auto b = algebra_check(2, 1.1, 200, 16, 7);
  EXPECT_EQ(a.max_ratio, b.max_ratio);
  EXPECT_GT(a.mean_ratio, 0.0);
  EXPECT_GE(a.max_ratio, a.mean_ratio);
  EXPECT_TRUE(std::isfinite(a.max_ratio));
}

TEST(Scattering, FreeSolutionHasConstantProfile) {
  const Grid g = make_grid(domain(1, 1, 30.0, 64, 2.0 * M_PI, 4));
  const FieldState data = bump(g, 0.5, 2.0);
  const auto cfg = config(Sign::off, 0.01, 3.0, 10);
  const auto traj = evolve(g, data, cfg).trajectory;
  ScatteringConfig scfg = scattering_config_for(cfg);
  const auto rep = scattering_profile(g, traj, scfg);
  for (double inc : rep.v_increments) EXPECT_LT(inc, 1e-10);
  for (double w : rep.window_increments) EXPECT_LT(w, 1e-10);
  EXPECT_LT(max_diff(rep.scatter_state.u, data.u), 1e-10);
  EXPECT_LT(max_diff(rep.scatter_state.v, data.v), 1e-10);
  EXPECT_NEAR(rep.scatter_state_norm, energy_norm(g, data), 1e-10);
  EXPECT_LT(rep.max_energy_drift, 1e-12);
  EXPECT_EQ(rep.window_times.size(), 3u);
}

TEST(Scattering, NonlinearProfileInvariants) {
  const Grid g = make_grid(domain(1, 1, 30.0, 64, 2.0 * M_PI, 4));
  const FieldState data = bump(g, 1.0, 2.0);
  const auto cfg = config(Sign::defocusing, 0.005, 4.0, 2);
  const auto traj = evolve(g, data, cfg).trajectory;
  const auto rep = scattering_profile(g, traj, scattering_config_for(cfg));
  for (std::size_t i = 1; i < rep.times.size(); ++i) {
    EXPECT_GE(rep.strichartz_partials[i], rep.strichartz_partials[i - 1]);
    EXPECT_LE(rep.tail_norms[i], rep.tail_norms[i - 1]);
  }
  EXPECT_EQ(rep.tail_norms.back(), 0.0);
  EXPECT_NEAR(rep.tail_norms.front(), rep.total_norm(), 1e-12 * rep.total_norm());
  // Triangle chain: sum of increments dominates the net change of V.
  double chain = 0.0;
  for (double inc : rep.v_increments) chain += inc;
  ModalState v0 = forward_transform(g, data);
  ModalState vt = forward_transform(g, rep.scatter_state);
  ComplexField du(g.size), dv(g.size);
  for (std::size_t i = 0; i < g.size; ++i) {
    du[i] = vt.u_hat[i] - v0.u_hat[i];
    dv[i] = vt.v_hat[i] - v0.v_hat[i];
  }
  const double net = energy_norm_modal(g, du, dv);
  EXPECT_GT(net, 0.0);
  EXPECT_LE(net, chain * (1.0 + 1e-12));
  // The increment over a step is bounded by the forcing integral.
  EXPECT_LT(rep.section_factor, 1.05);
  EXPECT_GT(rep.section_factor, 0.5);
  EXPECT_TRUE(rep.energy_inequality_holds);
  EXPECT_LT(rep.max_energy_drift, 1e-4);
  // Replay: the free flow of V(T) reproduces the final state.
  const FieldState replay = linear_flow(g, rep.scatter_state, 4.0);
  EXPECT_LT(max_diff(replay.u, traj.snapshots.back().u), 1e-10);
}

TEST(Scattering, StreamingMatchesSnapshotReplay) {
  const Grid g = make_grid(domain(1, 1, 30.0, 64, 2.0 * M_PI, 4));
  const FieldState data = bump(g, 1.0, 2.0);
  const auto cfg = config(Sign::focusing, 0.01, 2.0, 5);
  ScatteringAccumulator acc(g, scattering_config_for(cfg));
  const auto traj = evolve(g, data, cfg, [&](const StepView& s) { acc.add(s); }).trajectory;
  const auto streamed = acc.finish();
  const auto replayed = scattering_profile(g, traj, scattering_config_for(cfg));
  ASSERT_EQ(streamed.times.size(), replayed.times.size());
  for (std::size_t i = 0; i < streamed.times.size(); ++i) {
    EXPECT_NEAR(streamed.strichartz_partials[i], replayed.strichartz_partials[i], 1e-12);
    EXPECT_NEAR(streamed.v_increments[i], replayed.v_increments[i], 1e-12);
  }
}

TEST(Scattering, WeightedVariantWithZeroGammaIsTheMixedNorm) {
  const Grid g = make_grid(domain(1, 1, 30.0, 32, 2.0 * M_PI, 4));
  const auto traj = evolve(g, bump(g, 1.0, 2.0), config(Sign::defocusing, 0.01, 1.0, 10)).trajectory;
  ScatteringConfig scfg;
  scfg.gamma = 0.0;
  const auto rep = scattering_profile(g, traj, scfg);
  EXPECT_TRUE(rep.weighted);
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i)
    EXPECT_NEAR(rep.spatial_norms[i], mixed_norm(g, traj.snapshots[i].u, 6.0, 2.0), 1e-12);
}

TEST(Scattering, RejectsOutOfOrderTimes) {
  const Grid g = make_grid(domain(1, 1, 8.0, 8, 2.0, 4));
  ScatteringAccumulator acc(g, {});
  const ComplexField z(g.size);
  acc.add(1.0, z, z, z);
  EXPECT_ANY_THROW(acc.add(1.0, z, z, z));
  EXPECT_ANY_THROW(ScatteringAccumulator(g, ScatteringConfig{1.5, Sign::focusing, std::nullopt, 1.0}));
}

TEST(Scattering, DecayCheckOnSyntheticTails) {
  ScatteringReport r;
  r.times = {0.0, 2.0, 4.0, 8.0};
  r.tail_norms = {1.0, 0.8, 0.3, 0.1};
  r.window_increments = {1.0, 0.9, 0.91};
  auto c = decay_check(r);
  EXPECT_TRUE(c.tails_ok);
  EXPECT_TRUE(c.windows_monotone);
  EXPECT_NEAR(c.factors[0], 0.8 / 0.3, 1e-15);
  r.tail_norms = {1.0, 0.8, 0.5, 0.3};
  EXPECT_FALSE(decay_check(r).tails_ok);
  r.window_increments = {1.0, 1.2};
  EXPECT_FALSE(decay_check(r).windows_monotone);
  EXPECT_ANY_THROW(decay_check(r, {3.0}));
}

TEST(Strichartz, RatioIsStableUnderRefinement) {
  // ||u||_{L^3 L^6} / ||(u0, u1)||_E for a free wave on two grids.
  auto ratio = [](int n) {
    const Grid g = make_grid(domain(2, 1, 24.0, n, 2.0 * M_PI, 4));
    FieldState data = bump(g, 1.0, 2.0);
    const double e = energy_norm(g, data);
    for (auto& z : data.u) z /= e;
    const auto traj = evolve(g, data, config(Sign::off, 0.05, 4.0, 1));
    return strichartz_norm(g, traj.trajectory, {3.0, SpatialMode::Lrho_xy, 6.0, 0.0});
  };
  const double a = ratio(32), b = ratio(64);
  EXPECT_NEAR(a / b, 1.0, 0.2);
}
