#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "autocrat/enforce.hpp"
#include "autocrat/games.hpp"
#include "autocrat/synth.hpp"
#include "oracles.hpp"

using namespace autocrat;

namespace {

// sum_t lambda^t (phi(tau_t, s_t) - K) along the chain, computed directly.
double direct_sum(const TwoPointStrategy& st, const ObjectiveMatrix& phi,
                  const std::vector<std::size_t>& hist, double* final_p) {
  double p = st.p0(), w = 1.0, sum = 0.0;
  for (std::size_t s : hist) {
    double v = 0.0;
    for (std::size_t i = 0; i < phi.rows(); ++i) {
      v += (p * st.tau_plus()[i] + (1 - p) * st.tau_minus()[i]) * phi(i, s);
    }
    sum += w * (v - st.k());
    w *= st.lambda();
    p = st.respond(p, s);
  }
  *final_p = p;
  return sum;
}

struct Instance {
  ObjectiveMatrix phi;
  LambdaMinResult lm;
};

// Random integer objective that is enforceable below lambda = 1.
Instance random_instance(std::mt19937_64& rng) {
  while (true) {
    const std::size_t m = 2 + rng() % 3, n = 2 + rng() % 3;
    ObjectiveMatrix phi(oracle::random_int_matrix(rng, m, n, -5, 5));
    const auto sep = separation_witnesses(phi);
    if (!sep.tau_plus || !sep.tau_minus) continue;
    auto lm = lambda_min(phi);
    if (lm.lambda_min >= 0.999) continue;
    return {phi, lm};
  }
}

}  // namespace

TEST_CASE("donation strategy at lambda_min") {
  ObjectiveMatrix phi({{2, 7}, {-5, 0}});
  const auto s = synthesize_two_point(phi, 5.0 / 7.0, MixedAction::pure(2, 0),
                                      MixedAction::pure(2, 1));
  CHECK(s.p0() == 0.0);
  CHECK(s.psi_plus() == doctest::Approx(7.0));
  CHECK(s.psi_minus() == 0.0);
  for (double p : {0.0, 0.3, 1.0}) {
    CHECK(s.respond(p, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.respond(p, 1) == doctest::Approx(0.0).epsilon(1e-12));
  }
  CHECK(verify_correction_condition(s, phi, 5.0 / 7.0));
  CHECK_THROWS_AS(synthesize_two_point(phi, 0.7, MixedAction::pure(2, 0),
                                       MixedAction::pure(2, 1)),
                  NotEnforceable);
  CHECK_THROWS_AS(synthesize_two_point(phi, 1.0, MixedAction::pure(2, 0),
                                       MixedAction::pure(2, 1)),
                  InvalidInput);
  // correction condition fails when checked at the wrong discount factor
  CHECK_FALSE(verify_correction_condition(s, phi, 0.9));
}

TEST_CASE("mixed witness at lambda = 2/3") {
  ObjectiveMatrix phi({{4, 1}, {-1, 0}});
  const auto s = synthesize_two_point(phi, 2.0 / 3.0, MixedAction({0.5, 0.5}),
                                      MixedAction::pure(2, 1));
  CHECK(verify_correction_condition(s, phi, 2.0 / 3.0));
  for (std::size_t y = 0; y < 2; ++y) {
    CHECK(s.respond(0.0, y) >= 0.0);
    CHECK(s.respond(1.0, y) <= 1.0);
  }
}

TEST_CASE("target value K and lambda = 0") {
  ObjectiveMatrix phi({{2, 7}, {-5, 0}});
  CHECK_THROWS_AS(synthesize_two_point(phi, 0.8, MixedAction::pure(2, 0),
                                       MixedAction::pure(2, 1), 3.0),
                  NotEnforceable);
  const auto s = synthesize_two_point(phi, 0.9, MixedAction::pure(2, 0),
                                      MixedAction::pure(2, 1), 1.0);
  CHECK(s.k() == 1.0);
  CHECK(verify_correction_condition(s, phi, 0.9));
  // a trivial action is enforced with no memory at all
  ObjectiveMatrix triv({{-1, -2}, {1, 2}});
  const auto t = synthesize_two_point(triv, 0.0, MixedAction({0.5, 0.5}),
                                      MixedAction({0.5, 0.5}));
  CHECK(t.initial()[0] == doctest::Approx(0.5));
  CHECK(t.respond(0.4, 1) == 1.0);
}

TEST_CASE("undiscounted tit-for-tat potential") {
  // phi = u_X - u_Y in PD(3,0,5,1): the potential gap is T - S
  const auto game = make_pd(3, 0, 5, 1);
  const auto phi = build_linear_phi(game, AlphaBetaGamma{1, -1, 0});
  const auto s = synthesize_undiscounted(phi, MixedAction::pure(2, 1), MixedAction::pure(2, 0));
  CHECK(s.mode() == Mode::kUndiscounted);
  CHECK(s.gap() == doctest::Approx(5.0));
  CHECK(s.psi_minus() == 0.0);
  // weight on D: copy the opponent's last move
  for (double p : {0.0, 1.0}) {
    CHECK(s.respond(p, 0) == doctest::Approx(0.0));
    CHECK(s.respond(p, 1) == doctest::Approx(1.0));
  }
  CHECK(verify_correction_condition(s, phi, 1.0));
  CHECK_THROWS_AS(synthesize_undiscounted(phi, MixedAction::pure(2, 0), MixedAction::pure(2, 1)),
                  NotEnforceable);
}

TEST_CASE("reactive strategy for the donation game") {
  ObjectiveMatrix phi({{2, 7}, {-5, 0}});
  const auto r = synthesize_reactive(phi, 5.0 / 7.0, MixedAction::pure(2, 0),
                                     MixedAction::pure(2, 1));
  CHECK(r.response[0] == doctest::Approx(1.0));
  CHECK(r.response[1] == doctest::Approx(0.0));
  CHECK(r.p0_lo <= r.p0_hi);
  for (double p : {0.0, 0.25, 0.5, 1.0}) {
    CHECK(std::abs(r.chain.respond(p, 0) - r.response[0]) <= 1e-12);
    CHECK(std::abs(r.chain.respond(p, 1) - r.response[1]) <= 1e-12);
  }
  CHECK(verify_correction_condition(r.chain, phi, 5.0 / 7.0));
  // K = 0 is attained by (D, D), pinning p0 to 0; an interior K leaves room
  CHECK(r.p0_hi == doctest::Approx(0.0));
  const auto wide =
      synthesize_reactive(phi, 0.9, MixedAction::pure(2, 0), MixedAction::pure(2, 1), 1.0);
  CHECK(wide.p0_lo == doctest::Approx(0.0));
  CHECK(wide.p0_hi == doctest::Approx(1.0));
  CHECK(verify_correction_condition(wide.chain, phi, 0.9));
  CHECK(wide.chain.p0() == doctest::Approx(0.5 * (wide.p0_lo + wide.p0_hi)));
  CHECK_THROWS_AS(synthesize_reactive(phi, 0.6, MixedAction::pure(2, 0), MixedAction::pure(2, 1)),
                  NotEnforceable);
  CHECK_THROWS_AS(synthesize_reactive(ObjectiveMatrix({{4, 1}, {-1, 0}}), 0.9,
                                      MixedAction({0.5, 0.5}), MixedAction::pure(2, 1)),
                  InvalidInput);
}

TEST_CASE("convex combination") {
  // 8x and 8x - 8 on donation b=3,c=1 share the gap
  const auto game = make_donation(3, 1);
  const auto phi1 = build_linear_phi(game, AlphaBetaGamma{1, 3, 0});
  const auto phi2 = build_linear_phi(game, AlphaBetaGamma{1, 3, -8});
  const auto c = MixedAction::pure(2, 0), d = MixedAction::pure(2, 1);
  const auto s1 = synthesize_two_point(phi1, 0.9, c, d);
  const auto s2 = synthesize_two_point(phi2, 0.9, c, d);
  const auto at0 = combine_convex(s1, s2, 0.0);
  CHECK(at0.p0() == s1.p0());
  CHECK(at0.at_zero() == s1.at_zero());
  const auto at1 = combine_convex(s1, s2, 1.0);
  CHECK(at1.p0() == doctest::Approx(s2.p0()));
  for (double q : {0.25, 0.5, 0.75}) {
    const auto mix = combine_convex(s1, s2, q);
    CHECK(verify_correction_condition(mix, blend(phi1, phi2, q), 0.9));
  }
  const auto s3 = synthesize_two_point(phi1, 0.95, c, d);
  CHECK_THROWS_AS(combine_convex(s1, s3, 0.5), InvalidInput);
  CHECK_THROWS_AS(combine_convex(s1, s2, 1.5), InvalidInput);
}

TEST_CASE("potential reconstruction") {
  ObjectiveMatrix phi({{2, 7}, {-5, 0}});
  const auto s = synthesize_two_point(phi, 0.8, MixedAction::pure(2, 0), MixedAction::pure(2, 1));
  const std::vector<std::size_t> hist{0, 1, 1, 0, 1};
  const auto ps = s.chain(hist);
  REQUIRE(ps.size() == hist.size() + 1);
  // -lambda^-T sum lambda^t phi_t = Psi(p_T) - Psi(p_0)
  const double want = s.potential(ps.back()) - s.potential(ps.front());
  CHECK(reconstruct_potential(s, phi, 0.8, hist) == doctest::Approx(want).epsilon(1e-12));
  HistoryMap as_map = [&](std::span<const std::size_t> h) {
    return s.mixed(s.chain(h).back());
  };
  CHECK(reconstruct_potential(as_map, phi, 0.8, hist) == doctest::Approx(want).epsilon(1e-12));
  CHECK_THROWS_AS(reconstruct_potential(s, phi, 0.0, hist), InvalidInput);
}

TEST_CASE("strategy validation") {
  const auto c = MixedAction::pure(2, 0), d = MixedAction::pure(2, 1);
  CHECK_THROWS_AS(TwoPointStrategy(c, d, 1, 0, 1.5, 0.5, 0, Mode::kDiscounted, {0, 0}, {1, 1}),
                  InvalidInput);
  CHECK_THROWS_AS(TwoPointStrategy(c, d, 0, 1, 0.5, 0.5, 0, Mode::kDiscounted, {0, 0}, {1, 1}),
                  InvalidInput);
  CHECK_THROWS_AS(TwoPointStrategy(c, d, 1, 0, 0.5, 0.5, 0, Mode::kDiscounted, {0, 2}, {1, 1}),
                  InvalidInput);
  CHECK_THROWS_AS(TwoPointStrategy(c, d, 1, 0, 0.5, 0.5, 0, Mode::kDiscounted, {0}, {1, 1}),
                  InvalidInput);
  const auto b = make_behavioral(c, d, 0.5, {0, 1}, {1, 0}, 0.9);
  CHECK(b.respond(0.5, 0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(b.respond(1.5, 0), InvalidInput);
  CHECK_THROWS_AS(b.respond(0.5, 2), InvalidInput);
}

TEST_CASE("property: synthesized strategies satisfy the correction condition") {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = random_instance(rng);
    const double lambda = inst.lm.lambda_min + (0.999 - inst.lm.lambda_min) * u(rng);
    const auto& w = inst.lm.optimizer;
    const auto s = synthesize_two_point(inst.phi, lambda, w.tau_plus, w.tau_minus);
    const auto check = verify_correction_condition(s, inst.phi, lambda);
    CHECK_MESSAGE(check.ok, "trial " << trial << " worst " << check.worst);
    // also at lambda_min itself
    const auto tight = synthesize_two_point(inst.phi, inst.lm.lambda_min, w.tau_plus, w.tau_minus);
    CHECK(verify_correction_condition(tight, inst.phi, inst.lm.lambda_min).ok);

    // residual identity against a direct summation
    const std::size_t horizon = 1 + rng() % 64;
    std::vector<std::size_t> hist(horizon);
    for (auto& h : hist) h = rng() % inst.phi.cols();
    double p_t = 0.0;
    const double sum = direct_sum(s, inst.phi, hist, &p_t);
    const double predicted = std::pow(lambda, static_cast<double>(horizon)) * (s.p0() - p_t) * s.gap();
    CHECK(std::abs(sum - predicted) <= 1e-9);
  }
}

TEST_CASE("property: reactive responses ignore p for additive objectives") {
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<int> v(-5, 5);
  int built = 0;
  for (int trial = 0; trial < 300 && built < 100; ++trial) {
    const std::size_t m = 2 + rng() % 3, n = 2 + rng() % 3;
    std::vector<double> fx(m), fy(n);
    for (auto& x : fx) x = v(rng);
    for (auto& y : fy) y = v(rng);
    Matrix a(m, std::vector<double>(n));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) a[i][j] = fx[i] + fy[j];
    }
    ObjectiveMatrix phi(a);
    const auto sep = separation_witnesses(phi);
    if (!sep.tau_plus || !sep.tau_minus) continue;
    const auto lm = lambda_min(phi);
    if (lm.lambda_min >= 0.999 || lm.lambda_min <= 0.0) continue;
    const auto add = additive_lambda_min(phi);
    REQUIRE(add);
    CHECK(std::abs(*add - lm.lambda_min) <= 1e-9);
    const double lambda = 0.5 * (lm.lambda_min + 1.0);
    const auto r = synthesize_reactive(phi, lambda, lm.optimizer.tau_plus, lm.optimizer.tau_minus);
    for (std::size_t s = 0; s < n; ++s) {
      CHECK(std::abs(r.chain.respond(0.0, s) - r.chain.respond(1.0, s)) <= 1e-12);
    }
    CHECK(verify_correction_condition(r.chain, phi, lambda).ok);
    ++built;
  }
  CHECK(built >= 50);
}
