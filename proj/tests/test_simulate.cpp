#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pwlnet/simulate.hpp"

#include <cmath>

using namespace pwlnet;

TEST_CASE("single absolute oscillator stays on its orbit for one period") {
  PeriodicOrbit orbit = zoo_orbit("absolute");
  SimOptions opts;
  opts.t_max = orbit.period;
  opts.dt_out = orbit.period / 200.0;
  Vec x0 = orbit.state(0.37 * orbit.period);
  Trajectory traj = simulate_single(orbit.system, x0, opts);
  CHECK((traj.states.back() - x0).norm() < 1e-7);
}

TEST_CASE("logged events satisfy the manifold residual bound") {
  auto sys = std::make_shared<PwlSystem>(builtin_model("planar_if"));
  SimOptions opts;
  opts.t_max = 30.0;
  opts.dt_out = 0.01;
  Trajectory traj = simulate_single(sys, (Vec(2) << 0.3, 0.2).finished(), opts);
  REQUIRE(!traj.events.empty());
  for (const auto& ev : traj.events) {
    const auto& mf = sys->manifolds[static_cast<size_t>(ev.manifold)];
    CHECK(std::abs(mf.h(ev.pre_state)) <= 1e-10);
  }
  CHECK(!traj.spikes[0].empty());
}

TEST_CASE("restarting from a sample reproduces later samples") {
  auto sys = std::make_shared<PwlSystem>(builtin_model("absolute"));
  SimOptions opts;
  opts.t_max = 12.0;
  opts.dt_out = 0.05;
  Vec x0 = (Vec(2) << 0.4, -0.3).finished();
  Trajectory full = simulate_single(sys, x0, opts);

  const int restart = 60;
  SimOptions tail_opts = opts;
  tail_opts.t_max = 12.0 - full.times[restart];
  Trajectory tail = simulate_single(sys, full.states[restart], tail_opts);
  for (size_t s = 0; s < tail.states.size(); ++s) {
    CHECK((tail.states[s] - full.states[restart + s]).norm() < 1e-9);
  }
}

TEST_CASE("Franklin bell with k=1 and no damping preserves impact speed") {
  auto sys = std::make_shared<PwlSystem>(
      builtin_model("franklin", {{"k", 1.0}, {"gamma1", 0.0}}));
  SimOptions opts;
  opts.t_max = 20.0;
  opts.dt_out = 0.01;
  Trajectory traj =
      simulate_single(sys, (Vec(2) << 0.0, 0.6).finished(), opts);
  int impacts = 0;
  for (const auto& ev : traj.events) {
    if (ev.manifold == 1 || ev.manifold == 2) {
      ++impacts;
      CHECK(std::abs(std::abs(ev.post_state(1)) - std::abs(ev.pre_state(1))) <
            1e-9);
    }
  }
  CHECK(impacts >= 2);
}

namespace {

// Attracting-sliding Filippov system: both fields push toward v = 0 while
// -1 < w < 1; the slide carries w upward past 1, where the flow escapes
// into the upper zone. (The McKean sliding segment is repulsive, so forward
// trajectories never stick to it.)
std::shared_ptr<PwlSystem> attracting_slider() {
  auto sys = std::make_shared<PwlSystem>();
  sys->dimension = 2;
  sys->smoothness = SmoothnessClass::Filippov;
  Mat A(2, 2);
  A << 0, 1, 0, -1;
  sys->zones = {{A, (Vec(2) << -1.0, 1.5).finished(), {+1}, "R1"},
                {A, (Vec(2) << 1.0, 1.5).finished(), {-1}, "R2"}};
  Manifold mf;
  mf.normal = (Vec(2) << 1.0, 0.0).finished();
  mf.offset = 0.0;
  mf.jump = JumpRule::identity(2);
  mf.target_up = 0;
  mf.target_down = 1;
  sys->manifolds = {mf};
  sys->validate();
  return sys;
}

}  // namespace

TEST_CASE("trajectory enters and leaves an attracting sliding segment") {
  auto sys = attracting_slider();
  SimOptions opts;
  opts.t_max = 4.0;
  opts.dt_out = 0.002;
  Trajectory traj =
      simulate_single(sys, (Vec(2) << 0.05, 0.0).finished(), opts);
  double t_enter = -1, t_exit = -1;
  for (const auto& ev : traj.events) {
    if (ev.entered_sliding && t_enter < 0) t_enter = ev.time;
    if (ev.exited_sliding && t_exit < 0) t_exit = ev.time;
  }
  REQUIRE(t_enter >= 0);
  REQUIRE(t_exit > t_enter);
  // While sliding, the state stays on the manifold and w increases.
  bool checked = false;
  for (size_t s = 0; s < traj.times.size(); ++s) {
    const double t = traj.times[s];
    if (t > t_enter + 1e-6 && t < t_exit - 1e-6) {
      CHECK(std::abs(traj.states[s](0)) < 1e-9);
      checked = true;
    }
  }
  CHECK(checked);
  // The exit happens where the upper field turns tangent: w = 1.
  for (const auto& ev : traj.events) {
    if (ev.exited_sliding) {
      CHECK(ev.pre_state(1) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("two-node Kuramoto pair with H = -sin synchronizes for sigma > 0") {
  FourierSeries H(4);
  H.set_coeff(1, Complex(0.0, 0.5));    // -sin(theta)
  H.set_coeff(-1, Complex(0.0, -0.5));
  Network net = make_network("global", {{"N", 2}});
  Vec theta0 = (Vec(2) << 0.2, 2.3).finished();
  // H'(0) = -1, so sigma < 0 makes synchrony stable for this pair
  // (stability requires sigma H'(0) > 0).
  PhaseTrajectory traj = phase_network_sim(H, net, -1.0, 1.0, theta0, 60.0);
  const Vec& last = traj.phases.back();
  double diff = std::abs(last(0) - last(1));
  diff = std::min(diff, 2.0 * M_PI - diff);
  CHECK(diff < 1e-3);
  CHECK(order_parameter(last) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("order parameter is 0 for a splay state and 1 for synchrony") {
  Vec splay(4);
  for (int i = 0; i < 4; ++i) splay(i) = i * M_PI / 2.0;
  CHECK(order_parameter(splay) < 1e-14);
  CHECK(order_parameter(Vec::Constant(6, 1.234)) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("FC matrix: synchronized trajectory gives all ones") {
  PhaseTrajectory traj;
  for (int s = 0; s <= 100; ++s) {
    traj.times.push_back(0.1 * s);
    traj.phases.push_back(Vec::Constant(3, wrap_two_pi(0.1 * s)));
  }
  Mat fc = fc_matrix(traj, 1.0);
  CHECK((fc - Mat::Constant(3, 3, 1.0)).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("FC matrix: detuned uncoupled pair decorrelates") {
  PhaseTrajectory traj;
  const double T = 400.0, dt = 0.05;
  for (double t = 0; t <= T; t += dt) {
    traj.times.push_back(t);
    Vec th(2);
    th << wrap_two_pi(1.0 * t), wrap_two_pi(1.37 * t);
    traj.phases.push_back(th);
  }
  Mat fc = fc_matrix(traj, 10.0);
  CHECK(fc(0, 1) < 0.05);
  CHECK(fc(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("simulate rejects mismatched initial data") {
  auto sys = std::make_shared<PwlSystem>(builtin_model("absolute"));
  Network net = make_network("global", {{"N", 2}});
  SimOptions opts;
  CHECK_THROWS_AS(simulate_network(sys, net, 0.1, CouplingSpec::diffusive(),
                                   Mat::Zero(2, 3), opts),
                  DimensionError);
}
