#include "nlkg/cli/initial_data.hpp"
#include "nlkg/diagnostics/norms.hpp"
#include "nlkg/evolve/picard.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace nlkg;
using namespace nlkg::testing;

namespace {

FieldState gaussian_state(const Grid& g, double amp, double width = 2.0) {
  FieldState s = zero_state(g);
  for (std::size_t ix = 0; ix < g.x_size; ++ix) {
    const auto slots = g.x_multi_index(ix);
    double r2 = 0.0;
    for (std::size_t a = 0; a < slots.size(); ++a) r2 += std::pow(g.x_coord(a, slots[a]), 2);
    for (std::size_t iy = 0; iy < g.y_size; ++iy) {
      const double y = g.y_coord(0, static_cast<int>(g.y_multi_index(iy)[0]));
      s.u[ix * g.y_size + iy] = amp * std::exp(-r2 / (width * width)) * (1.0 + 0.3 * std::cos(2.0 * M_PI * y / g.spec.torus_lengths[0]));
    }
  }
  return s;
}

EvolveConfig config(double p, Sign sign, double dt, double T, int stride = 1) {
  EvolveConfig c;
  c.p = p;
  c.sign = sign;
  c.dt = dt;
  c.T = T;
  c.snapshot_stride = stride;
  return c;
}

}  // namespace

TEST(Nonlinearity, Examples) {
  EXPECT_EQ(nonlinear_term(0.0, 3.0, Sign::focusing), std::complex<double>(0.0));
  EXPECT_NEAR(std::abs(nonlinear_term(2.0, 3.0, Sign::focusing) - 8.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(nonlinear_term({0.0, 1.0}, 5.0, Sign::defocusing) - std::complex<double>(0.0, -1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(nonlinear_term(-2.0, 2.0, Sign::focusing) + 4.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(nonlinear_term(4.0, 3.5, Sign::focusing) - std::pow(4.0, 3.5)), 0.0, 1e-9);
  EXPECT_EQ(nonlinear_term(3.0, 3.0, Sign::off), std::complex<double>(0.0));
  EXPECT_ANY_THROW(nonlinearity(ComplexField(3), 1.5, Sign::focusing));
}

TEST(Nonlinearity, LocalLipschitzBound) {
  // |F(u) - F(w)| <= p max(|u|,|w|)^{p-1} |u - w|
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  for (double p : {2.0, 3.0, 5.0, 3.5}) {
    for (int i = 0; i < 250000; ++i) {
      const std::complex<double> u(n(rng), n(rng)), w(n(rng), n(rng));
      const double lhs = std::abs(nonlinear_term(u, p, Sign::focusing) - nonlinear_term(w, p, Sign::focusing));
      const double rhs = p * std::pow(std::max(std::abs(u), std::abs(w)), p - 1.0) * std::abs(u - w);
      ASSERT_LE(lhs, rhs * (1.0 + 1e-12) + 1e-300) << "p=" << p;
    }
  }
}

TEST(Nonlinearity, GeneralPathAgreesWithFastPaths) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const std::complex<double> z(n(rng), n(rng));
    for (double p : {2.0, 3.0, 5.0}) {
      const auto slow = std::pow(std::abs(z), p - 1.0) * z;
      EXPECT_NEAR(std::abs(nonlinear_term(z, p, Sign::focusing) - slow), 0.0, 1e-12 * (1.0 + std::abs(slow)));
    }
  }
}

TEST(EvolveConfig, Validation) {
  EXPECT_ANY_THROW(config(3.0, Sign::focusing, 0.3, 1.0).validate());
  EXPECT_ANY_THROW(config(3.0, Sign::focusing, 2.0, 1.0).validate());
  EXPECT_ANY_THROW(config(1.5, Sign::focusing, 0.1, 1.0).validate());
  EXPECT_ANY_THROW(config(3.0, Sign::focusing, 0.1, 1.0, 0).validate());
  EXPECT_EQ(config(3.0, Sign::focusing, 0.1, 1.0).steps(), 10);
}

TEST(Evolve, SignOffReproducesTheLinearFlow) {
  const Grid g = make_grid(domain(1, 1, 20.0, 64, 2.0, 4));
  std::mt19937_64 rng(3);
  const FieldState s = random_state(g, rng);
  const auto r = evolve(g, s, config(3.0, Sign::off, 0.01, 2.0, 50));
  const FieldState lin = linear_flow(g, s, 2.0);
  EXPECT_LT(max_diff(r.trajectory.snapshots.back().u, lin.u), 1e-10);
  EXPECT_LT(max_diff(r.trajectory.snapshots.back().v, lin.v), 1e-10);
  EXPECT_EQ(r.trajectory.snapshots.size(), 5u);
}

TEST(Evolve, ZeroDataStaysZero) {
  const Grid g = make_grid(domain(2, 1, 10.0, 8, 2.0, 4));
  const auto r = evolve(g, zero_state(g), config(3.0, Sign::focusing, 0.1, 1.0));
  for (const auto& s : r.trajectory.snapshots) EXPECT_EQ(max_abs(s.u) + max_abs(s.v), 0.0);
}

TEST(Evolve, SingleStepOnConstantDataMatchesClosedForm) {
  // A constant field only excites the zero mode, omega = 1.
  const Grid g = make_grid(domain(1, 1, 10.0, 8, 2.0, 4));
  const double c = 0.7, dt = 0.1, p = 3.0;
  FieldState s = zero_state(g);
  std::fill(s.u.begin(), s.u.end(), c);
  const FieldState out = strang_step(g, s, dt, config(p, Sign::defocusing, dt, dt));
  const double v_half = -0.5 * dt * std::pow(c, p);
  const double u1 = std::cos(dt) * c + std::sin(dt) * v_half;
  const double v1 = -std::sin(dt) * c + std::cos(dt) * v_half - 0.5 * dt * std::pow(std::abs(u1), p - 1.0) * u1;
  for (std::size_t i = 0; i < g.size; ++i) {
    EXPECT_NEAR(out.u[i].real(), u1, 1e-14);
    EXPECT_NEAR(out.v[i].real(), v1, 1e-14);
  }
  // evolve() and strang_step() agree.
  const auto r = evolve(g, s, config(p, Sign::defocusing, dt, dt));
  EXPECT_LT(max_diff(r.trajectory.snapshots.back().u, out.u), 1e-14);
}

TEST(Evolve, StrangIsSecondOrder) {
  const Grid g = make_grid(domain(1, 1, 20.0, 64, 2.0, 4));
  const FieldState s = gaussian_state(g, 0.8);
  auto final_u = [&](double dt) { return evolve(g, s, config(3.0, Sign::defocusing, dt, 1.0, 1000000)).trajectory.snapshots.back().u; };
  const auto ref = final_u(0.00125);
  const double e1 = l2_norm(g, [&] { auto d = final_u(0.02); for (std::size_t i = 0; i < d.size(); ++i) d[i] -= ref[i]; return d; }());
  const double e2 = l2_norm(g, [&] { auto d = final_u(0.01); for (std::size_t i = 0; i < d.size(); ++i) d[i] -= ref[i]; return d; }());
  const double order = std::log2(e1 / e2);
  EXPECT_GT(order, 1.8);
  EXPECT_LT(order, 2.2);
}

TEST(Evolve, EnergyDriftIsSmallForSmallBumpData) {
  const Grid g = make_grid(domain(2, 1, 56.0, 64, 2.0 * M_PI, 4));
  const FieldState s = bump_data(g, 0.01, 5.0);
  const auto r = evolve(g, s, config(3.0, Sign::defocusing, 0.01, 20.0, 100));
  const double e0 = conserved_energy(g, r.trajectory.snapshots.front(), 3.0, Sign::defocusing);
  for (const auto& snap : r.trajectory.snapshots)
    EXPECT_LT(std::abs(conserved_energy(g, snap, 3.0, Sign::defocusing) - e0), 1e-6 * std::abs(e0));
}

TEST(Evolve, RealDataStaysReal) {
  const Grid g = make_grid(domain(1, 1, 20.0, 32, 2.0, 4));
  const auto r = evolve(g, gaussian_state(g, 0.5), config(3.0, Sign::focusing, 0.01, 1.0, 100));
  for (const auto& s : r.trajectory.snapshots)
    for (const auto& z : s.u) EXPECT_LT(std::abs(z.imag()), 1e-13);
}

TEST(Evolve, ObserverSeesEveryRecordedTime) {
  const Grid g = make_grid(domain(1, 1, 20.0, 16, 2.0, 4));
  std::vector<double> seen;
  const auto r = evolve(g, gaussian_state(g, 0.1), config(3.0, Sign::focusing, 0.1, 1.0, 3),
                        [&](const StepView& v) { seen.push_back(v.time); }, false);
  EXPECT_TRUE(r.trajectory.snapshots.empty());
  ASSERT_EQ(seen.size(), 5u);  // 0, 0.3, 0.6, 0.9, 1.0
  EXPECT_NEAR(seen.back(), 1.0, 1e-12);
}

TEST(Evolve, FocusingBlowupIsReported) {
  const Grid g = make_grid(domain(1, 1, 20.0, 64, 2.0, 4));
  auto cfg = config(5.0, Sign::focusing, 0.001, 2.0, 100);
  cfg.blowup_ceiling = 50.0;
  const auto r = evolve(g, gaussian_state(g, 3.0), cfg);
  EXPECT_EQ(r.status, EvolveStatus::blowup);
  EXPECT_LT(r.stop_time, 2.0);
  EXPECT_NEAR(r.trajectory.snapshots.back().time, r.stop_time, 1e-12);
}

TEST(Evolve, RejectsNonFiniteData) {
  const Grid g = make_grid(domain(1, 1, 20.0, 16, 2.0, 4));
  FieldState s = zero_state(g);
  s.u[3] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(evolve(g, s, config(3.0, Sign::focusing, 0.1, 1.0)), NumericFailure);
}

TEST(Picard, ZeroDataConvergesImmediately) {
  const Grid g = make_grid(domain(1, 1, 16.0, 32, 2.0, 4));
  const auto r = picard_solve(g, zero_state(g), config(3.0, Sign::focusing, 0.01, 1.0, 10), 1e-12, 10);
  EXPECT_EQ(r.status, PicardStatus::converged);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_EQ(r.differences.front(), 0.0);
}

TEST(Picard, MapOfZeroCandidateIsTheLinearFlow) {
  const Grid g = make_grid(domain(1, 1, 16.0, 32, 2.0, 4));
  const auto cfg = config(3.0, Sign::focusing, 0.01, 1.0, 10);
  const FieldState data = gaussian_state(g, 0.5);
  Trajectory zero = linear_trajectory(g, zero_state(g), cfg);
  const Trajectory mapped = picard_map(g, data, zero, cfg);
  const Trajectory lin = linear_trajectory(g, data, cfg);
  ASSERT_EQ(mapped.snapshots.size(), 11u);
  for (std::size_t i = 0; i < lin.snapshots.size(); ++i) {
    EXPECT_NEAR(mapped.snapshots[i].time, 0.1 * static_cast<double>(i), 1e-12);
    EXPECT_LT(max_diff(mapped.snapshots[i].u, lin.snapshots[i].u), 1e-13);
    EXPECT_LT(max_diff(mapped.snapshots[i].u, linear_flow(g, data, 0.1 * static_cast<double>(i)).u), 1e-12);
  }
}

TEST(Picard, SmallDataContractsToAFixedPoint) {
  const Grid g = make_grid(domain(1, 1, 16.0, 32, 2.0, 4));
  const auto cfg = config(3.0, Sign::defocusing, 0.01, 2.0, 5);
  const FieldState data = gaussian_state(g, 0.3);
  const double tol = 1e-12;
  const auto r = picard_solve(g, data, cfg, tol, 40);
  ASSERT_EQ(r.status, PicardStatus::converged);
  for (double q : r.ratios) EXPECT_LT(q, 1.0);
  EXPECT_LT(fixed_point_residual(g, data, r.trajectory, cfg), 10.0 * tol);
  EXPECT_GT(r.quadrature_error, 0.0);
}

TEST(Picard, AgreesWithStrangUpToDiscretisation) {
  const Grid g = make_grid(domain(1, 1, 16.0, 32, 2.0, 4));
  const FieldState data = gaussian_state(g, 0.6);
  const auto pic = picard_solve(g, data, config(3.0, Sign::defocusing, 0.005, 2.0, 2), 1e-12, 40);
  ASSERT_EQ(pic.status, PicardStatus::converged);
  const auto strang = evolve(g, data, config(3.0, Sign::defocusing, 0.001, 2.0, 2000));
  const FieldState lin = linear_flow(g, data, 2.0);
  const auto& a = pic.trajectory.snapshots.back().u;
  const auto& b = strang.trajectory.snapshots.back().u;
  EXPECT_LT(max_diff(a, b), 0.02 * max_diff(b, lin.u));
}

TEST(Picard, LargeFocusingDataIsNoncontractive) {
  const Grid g = make_grid(domain(1, 1, 16.0, 32, 2.0, 4));
  const auto r = picard_solve(g, gaussian_state(g, 4.0), config(3.0, Sign::focusing, 0.01, 4.0, 10), 1e-12, 30);
  EXPECT_EQ(r.status, PicardStatus::noncontractive);
}

TEST(Picard, RejectsMismatchedSpacing) {
  const Grid g = make_grid(domain(1, 1, 16.0, 32, 2.0, 4));
  EXPECT_ANY_THROW(picard_solve(g, zero_state(g), config(3.0, Sign::focusing, 0.01, 1.0, 7), 1e-12, 5));
  const auto cfg = config(3.0, Sign::focusing, 0.01, 1.0, 10);
  Trajectory t = linear_trajectory(g, zero_state(g), cfg);
  t.snapshots.pop_back();
  EXPECT_ANY_THROW(picard_map(g, zero_state(g), t, cfg));
  EXPECT_ANY_THROW(picard_solve(g, zero_state(g), cfg, 0.0, 5));
}
