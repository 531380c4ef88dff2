#include "nlkg/propagator/propagator.hpp"
#include "nlkg/propagator/rescale.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace nlkg;
using namespace nlkg::testing;

namespace {

double energy_sq(const Grid& g, const ModalState& m) {
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size; ++i)
    acc += (1.0 + g.lambda_of(i) + g.xi_sq_of(i)) * std::norm(m.u_hat[i]) + std::norm(m.v_hat[i]);
  return acc;
}

}  // namespace

TEST(ModeFlow, IdentityAtZeroAndClosedForm) {
  const auto r0 = mode_flow({1.0, 2.0}, {-0.5, 0.25}, 3.0, 5.0, 0.0);
  EXPECT_EQ(r0.u, std::complex<double>(1.0, 2.0));
  EXPECT_EQ(r0.v, std::complex<double>(-0.5, 0.25));
  // omega = 3: u(t) = cos(3t), v = -3 sin(3t)
  const auto r = mode_flow(1.0, 0.0, 3.0, 5.0, 0.7);
  EXPECT_NEAR(r.u.real(), std::cos(2.1), 1e-15);
  EXPECT_NEAR(r.v.real(), -3.0 * std::sin(2.1), 1e-15);
  EXPECT_ANY_THROW(mode_frequency(-2.0, 0.5));
}

TEST(ModeFlow, SolvesTheOscillatorOde) {
  // u'' = -omega^2 u via a centered difference.
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 20.0);
  for (int t = 0; t < 100; ++t) {
    const double lam = u(rng), xi = u(rng), s = 0.25 * u(rng), h = 1e-4;
    const auto a = mode_flow({0.3, -1.0}, {0.7, 0.2}, lam, xi, s - h);
    const auto b = mode_flow({0.3, -1.0}, {0.7, 0.2}, lam, xi, s);
    const auto c = mode_flow({0.3, -1.0}, {0.7, 0.2}, lam, xi, s + h);
    const double w2 = 1.0 + lam + xi;
    EXPECT_LT(std::abs((a.u - 2.0 * b.u + c.u) / (h * h) + w2 * b.u), 1e-4 * w2);
    EXPECT_LT(std::abs((c.u - a.u) / (2 * h) - b.v), 1e-6 * w2);
  }
}

TEST(LinearFlow, IsometryGroupLawInverse) {
  const Grid g = make_grid(domain(2, 1, 12.0, 16, 2.0, 4));
  std::mt19937_64 rng(2);
  for (int t = 0; t < 5; ++t) {
    const FieldState s = random_state(g, rng);
    const double e0 = energy_sq(g, forward_transform(g, s));
    const FieldState a = linear_flow(g, s, 0.9);
    EXPECT_NEAR(energy_sq(g, forward_transform(g, a)), e0, 1e-12 * e0);
    const FieldState ab = linear_flow(g, a, -2.3);
    const FieldState direct = linear_flow(g, s, -1.4);
    EXPECT_LT(max_diff(ab.u, direct.u), 1e-12);
    EXPECT_LT(max_diff(ab.v, direct.v), 1e-12);
    const FieldState back = linear_flow(g, a, -0.9);
    EXPECT_LT(max_diff(back.u, s.u), 1e-12);
    const FieldState zero = linear_flow(g, s, 0.0);
    EXPECT_LT(max_diff(zero.u, s.u), 1e-14);
    EXPECT_NEAR(a.time, 0.9, 1e-15);
  }
}

TEST(LinearFlow, TabulatedMatchesDirect) {
  const Grid g = make_grid(domain(1, 2, 9.0, 16, 3.0, 4));
  std::mt19937_64 rng(3);
  const FieldState s = random_state(g, rng);
  ModalState a = forward_transform(g, s);
  ModalState b = a;
  LinearPropagator(g, 0.37).apply(a);
  flow_modal(g, b.u_hat, b.v_hat, 0.37);
  EXPECT_LT(max_diff(a.u_hat, b.u_hat), 1e-14);
  EXPECT_LT(max_diff(a.v_hat, b.v_hat), 1e-14);
}

TEST(LinearFlow, CommutesWithYMultipliers) {
  const Grid g = make_grid(domain(1, 1, 9.0, 16, 3.0, 8));
  std::mt19937_64 rng(4);
  const ModalState m = forward_transform(g, random_state(g, rng));
  ModalState a = m, b = m;
  apply_sobolev_y_modal(g, a.u_hat, 1.3);
  apply_sobolev_y_modal(g, a.v_hat, 1.3);
  flow_modal(g, a.u_hat, a.v_hat, 0.8);
  flow_modal(g, b.u_hat, b.v_hat, 0.8);
  apply_sobolev_y_modal(g, b.u_hat, 1.3);
  apply_sobolev_y_modal(g, b.v_hat, 1.3);
  EXPECT_LT(max_diff(a.u_hat, b.u_hat), 1e-13);
}

TEST(LinearFlow, ModesStayConfined) {
  const Grid g = make_grid(domain(1, 1, 2.0 * M_PI, 16, 2.0 * M_PI, 8));
  ComplexField c(g.size);
  const auto idx = mode_index(g, {3}, {-2});
  c[idx] = 1.0;
  FieldState s{0.0, to_physical(g, c), ComplexField(g.size)};
  const ModalState m = forward_transform(g, linear_flow(g, s, 1.1));
  for (std::size_t i = 0; i < g.size; ++i)
    if (i != idx) {
      EXPECT_LT(std::abs(m.u_hat[i]) + std::abs(m.v_hat[i]), 1e-13);
    }
  EXPECT_NEAR(m.u_hat[idx].real(), std::cos(std::sqrt(14.0) * 1.1), 1e-13);
}

TEST(LinearFlow, InverseWavePullsBack) {
  const Grid g = make_grid(domain(1, 1, 9.0, 16, 3.0, 4));
  std::mt19937_64 rng(5);
  const FieldState s = random_state(g, rng);
  const FieldState later = linear_flow(g, s, 2.0);
  const FieldState v = inverse_wave(g, later, 2.0);
  EXPECT_LT(max_diff(v.u, s.u), 1e-12);
  EXPECT_LT(max_diff(v.v, s.v), 1e-12);
}

TEST(Rescale, UnitLambdaIsIdentity) {
  const Grid g = make_grid(domain(1, 1, 20.0, 32, 2.0, 4));
  FieldState s = zero_state(g);
  for (std::size_t ix = 0; ix < g.x_size; ++ix)
    for (std::size_t iy = 0; iy < g.y_size; ++iy) {
      const double x = g.x_coord(0, static_cast<int>(ix));
      s.u[ix * g.y_size + iy] = std::exp(-x * x);
      s.v[ix * g.y_size + iy] = x * std::exp(-x * x);
    }
  const std::vector<FieldState> snaps{s};
  const auto r = rescale_solution(g, snaps, 1.0);
  EXPECT_LT(max_diff(r.snapshots[0].u, s.u), 1e-13);
  EXPECT_LT(max_diff(r.snapshots[0].v, s.v), 1e-13);
}

TEST(Rescale, ModeScalesWithRootLambda) {
  // u(sqrt(lambda) x) with lambda = 4 doubles the frequency; time rescales by 1/2.
  const double L = 2.0 * M_PI * 8;
  const Grid g = make_grid(domain(1, 1, L, 32, 2.0, 4));
  ComplexField c(g.size);
  c[mode_index(g, {3}, {0})] = 1.0;
  FieldState s{2.0, to_physical(g, c), ComplexField(g.size)};
  const std::vector<FieldState> snaps{s};
  const auto r = rescale_solution(g, snaps, 4.0, std::vector<double>{L});
  EXPECT_NEAR(r.snapshots[0].time, 1.0, 1e-15);
  for (std::size_t ix = 0; ix < g.x_size; ++ix) {
    const double x = g.x_coord(0, static_cast<int>(ix));
    const auto z = r.snapshots[0].u[ix * g.y_size];
    const auto z0 = s.u[0];
    const auto phase = std::exp(std::complex<double>(0.0, 6.0 * 2.0 * M_PI / L * (x - g.x_coord(0, 0))));
    EXPECT_NEAR(std::abs(z - z0 * phase), 0.0, 1e-12);
  }
}

TEST(Rescale, RejectsOffLatticeAndYDependentData) {
  const double L = 2.0 * M_PI * 8;
  const Grid g = make_grid(domain(1, 1, L, 32, 2.0, 4));
  ComplexField c(g.size);
  c[mode_index(g, {3}, {0})] = 1.0;
  const std::vector<FieldState> odd{{0.0, to_physical(g, c), ComplexField(g.size)}};
  EXPECT_ANY_THROW(rescale_solution(g, odd, 4.0, std::vector<double>{L / 4}));
  EXPECT_ANY_THROW(rescale_solution(g, odd, 0.0));
  ComplexField cy(g.size);
  cy[mode_index(g, {1}, {1})] = 1.0;
  const std::vector<FieldState> ydep{{0.0, to_physical(g, cy), ComplexField(g.size)}};
  EXPECT_ANY_THROW(rescale_solution(g, ydep, 1.0));
}
