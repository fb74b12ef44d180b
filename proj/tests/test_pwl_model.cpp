#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pwlnet/pwl_model.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <random>

using namespace pwlnet;

TEST_CASE("absolute model matches the reference coefficients") {
  PwlSystem sys = builtin_model(
      "absolute", {{"a", 0.0}, {"wbar", -0.1}, {"vbar", 0.1}, {"d", 0.5}});
  Mat A1(2, 2);
  A1 << 1, -1, 1, -0.5;
  CHECK((sys.zones[0].A - A1).lpNorm<Eigen::Infinity>() < 1e-15);
  CHECK(sys.zones[0].b(0) == doctest::Approx(0.0));
  CHECK(sys.zones[0].b(1) == doctest::Approx(-0.15));
  CHECK(sys.smoothness == SmoothnessClass::Continuous);
}

TEST_CASE("zone_of picks the v > a region and flags boundary states") {
  PwlSystem sys = builtin_model("absolute");
  CHECK(zone_of(sys, (Vec(2) << 0.5, 0.0).finished()) == 0);
  CHECK(zone_of(sys, (Vec(2) << -0.5, 0.0).finished()) == 1);
  CHECK_THROWS_AS(zone_of(sys, (Vec(2) << 0.0, 0.3).finished()), BoundaryError);
}

TEST_CASE("flow is the identity at t = 0 and integrates constant fields") {
  PwlSystem sys = builtin_model("absolute");
  Vec x0 = (Vec(2) << 0.4, -0.2).finished();
  CHECK((flow(sys, 0, x0, 0.0) - x0).norm() < 1e-15);

  PwlSystem constant;
  constant.dimension = 2;
  constant.zones = {{Mat::Zero(2, 2), (Vec(2) << 1.0, 0.0).finished(), {}, "z"}};
  constant.smoothness = SmoothnessClass::Continuous;
  Vec moved = flow(constant, 0, Vec::Zero(2), 2.0);
  CHECK(moved(0) == doctest::Approx(2.0));
  CHECK(moved(1) == doctest::Approx(0.0));
  CHECK_THROWS_AS(flow(constant, 3, Vec::Zero(2), 1.0), ValidationError);
}

TEST_CASE("planar IF jump rule resets v and kicks w") {
  PwlSystem sys = builtin_model(
      "planar_if", {{"vth", 1.0}, {"vr", 0.2}, {"tau", 1.0}, {"kappa", 0.5}});
  const auto& threshold = sys.manifolds[1];
  CHECK(threshold.fires);
  Vec hit = (Vec(2) << 1.0, 0.3).finished();
  Vec reset = threshold.jump.apply(hit);
  CHECK(reset(0) == doctest::Approx(0.2));
  CHECK(reset(1) == doctest::Approx(0.8));
}

TEST_CASE("cow builder exposes the state-indexed rate matrices") {
  PwlSystem sys = builtin_model("cow", {{"delta", 0.25},
                                        {"alpha1", 0.05},
                                        {"beta1", 0.05},
                                        {"beta2", 0.125}});
  // alpha2 defaults to 0.95 alpha1; state E decays hunger and grows the
  // desire to lie down.
  CHECK(sys.zones[0].A(0, 0) == doctest::Approx(-0.0475));
  CHECK(sys.zones[0].A(1, 1) == doctest::Approx(0.05));
  CHECK(sys.smoothness == SmoothnessClass::Automaton);
  CHECK_THROWS_AS(zone_of(sys, (Vec(2) << 0.5, 0.5).finished()),
                  ValidationError);
}

TEST_CASE("unknown models and parameters are rejected") {
  CHECK_THROWS_AS(builtin_model("nope"), ValidationError);
  CHECK_THROWS_AS(builtin_model("absolute", {{"bogus", 1.0}}), ValidationError);
  CHECK_THROWS_AS(builtin_model("pwl_ml", {{"b", 0.05}}), ValidationError);
}

TEST_CASE("continuous zoo models pass the field-agreement check") {
  for (const auto& name : {"absolute", "homoclinic", "pwl_ml", "mckean3",
                           "wilson_cowan"}) {
    CHECK_NOTHROW(builtin_model(name));
  }
}

TEST_CASE("vector_field substitutes directly off the manifolds") {
  PwlSystem sys = builtin_model("absolute");
  Vec x = (Vec(2) << 0.5, 0.0).finished();
  Vec f = vector_field(sys, x);
  Vec expect = sys.zones[0].A * x + sys.zones[0].b;
  CHECK((f - expect).norm() < 1e-15);
}

TEST_CASE("Filippov sliding field is tangent and symmetric cases give 1/2") {
  // Hand-built Filippov system: f1 = (1,0), f2 = (-1,0), manifold x = 0.
  PwlSystem sys;
  sys.dimension = 2;
  sys.smoothness = SmoothnessClass::Filippov;
  sys.zones = {{Mat::Zero(2, 2), (Vec(2) << -1.0, 0.0).finished(), {+1}, "R1"},
               {Mat::Zero(2, 2), (Vec(2) << 1.0, 0.0).finished(), {-1}, "R2"}};
  Manifold mf;
  mf.normal = (Vec(2) << 1.0, 0.0).finished();
  mf.offset = 0.0;
  mf.jump = JumpRule::identity(2);
  mf.target_up = 0;
  mf.target_down = 1;
  sys.manifolds = {mf};
  sys.validate();

  const double s = sliding_weight(sys, 0, Vec::Zero(2));
  CHECK(s == doctest::Approx(0.5));
  Vec f = vector_field(sys, Vec::Zero(2));
  CHECK(f.norm() < 1e-14);
}

TEST_CASE("McKean sliding weight matches the closed form (gamma a + w)/I") {
  const double a = 0.3, gamma = 1.0, I = 3.0;
  PwlSystem sys = builtin_model("mckean2");
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> uni(-gamma * a + 0.05,
                                             -gamma * a + I - 0.05);
  for (int k = 0; k < 20; ++k) {
    const double w = uni(rng);
    Vec x = (Vec(2) << a, w).finished();
    CHECK(sliding_weight(sys, 0, x) ==
          doctest::Approx((gamma * a + w) / I).epsilon(1e-12));
    // Tangency of the sliding field.
    Vec f = vector_field(sys, x);
    CHECK(std::abs(sys.manifolds[0].normal.dot(f)) < 1e-12);
  }
}

TEST_CASE("alpha-synapse augmentation wires the (s, u) block") {
  PwlSystem base = builtin_model("planar_if");
  PwlSystem aug = with_alpha_synapse(base, 0.4);
  CHECK(aug.dimension == 4);
  CHECK(aug.zones[0].A(2, 2) == doctest::Approx(-0.4));
  CHECK(aug.zones[0].A(2, 3) == doctest::Approx(0.4));
  CHECK(aug.zones[0].A(3, 3) == doctest::Approx(-0.4));
  // Firing kicks u by alpha and still resets (v, w).
  Vec hit = (Vec(4) << 1.0, 0.3, 0.1, 0.2).finished();
  Vec post = aug.manifolds[1].jump.apply(hit);
  CHECK(post(0) == doctest::Approx(0.2));
  CHECK(post(3) == doctest::Approx(0.2 + 0.4));
  CHECK(post(2) == doctest::Approx(0.1));
}

TEST_CASE("model JSON round trip preserves the system") {
  for (const auto& name : builtin_model_names()) {
    PwlSystem sys = builtin_model(name);
    PwlSystem back = system_from_json(to_json(sys));
    CHECK(back.dimension == sys.dimension);
    CHECK(back.num_zones() == sys.num_zones());
    CHECK(back.num_manifolds() == sys.num_manifolds());
    for (int z = 0; z < sys.num_zones(); ++z) {
      CHECK((back.zones[z].A - sys.zones[z].A).lpNorm<Eigen::Infinity>() == 0.0);
      CHECK((back.zones[z].b - sys.zones[z].b).lpNorm<Eigen::Infinity>() == 0.0);
    }
    for (int k = 0; k < sys.num_manifolds(); ++k) {
      CHECK((back.manifolds[k].normal - sys.manifolds[k].normal).norm() == 0.0);
      CHECK(back.manifolds[k].offset == sys.manifolds[k].offset);
      CHECK(back.manifolds[k].fires == sys.manifolds[k].fires);
    }
  }
}

TEST_CASE("zone_of against flow stays consistent within a zone") {
  PwlSystem sys = builtin_model("pwl_ml");
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> uv(0.51, 0.62), uw(-0.2, 0.6);
  for (int trial = 0; trial < 25; ++trial) {
    Vec x = (Vec(2) << uv(rng), uw(rng)).finished();
    int z;
    try {
      z = zone_of(sys, x);
    } catch (const BoundaryError&) {
      continue;
    }
    // Short flows that stay inside the zone must not change zone_of.
    for (double t : {1e-4, 5e-4, 1e-3}) {
      Vec y = flow(sys, z, x, t);
      bool inside = true;
      for (int kk = 0; kk < sys.num_manifolds(); ++kk) {
        const auto& sgn = sys.zones[z].signs[static_cast<size_t>(kk)];
        if (sgn != 0 && sgn * sys.manifolds[kk].h(y) <= 1e-12) inside = false;
      }
      if (inside) CHECK(zone_of(sys, y) == z);
    }
  }
}
