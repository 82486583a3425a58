#include <cmath>
#include <set>

#include "doctest.h"
#include "puzzlelab/error.hpp"
#include "puzzlelab/probability.hpp"
#include "puzzlelab/rng.hpp"

using namespace puzzlelab;
using namespace puzzlelab::prob;

namespace {

// Frozen from an exact rational evaluation of the product (Python fractions).
constexpr double kExact23 = 0.5072972343239854;
// Frozen from 40-digit evaluation of 1 - (364/365)^253.
constexpr double kApprox23 = 0.5004771540365820;
constexpr double kApprox22 = 0.4693991596297204;
constexpr double kExact22 = 0.4756953076625501;

double three_sigma(double p, std::uint64_t trials) {
  return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

}  // namespace

TEST_CASE("rational arithmetic") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(1, -3) == Rational(-1, 3));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 3) * Rational(1, 2) == Rational(1, 6));
  CHECK(Rational(8) / Rational(2) == Rational(4));
  CHECK(Rational(2, 3).to_string() == "2/3");
  CHECK(Rational::parse("-6/4") == Rational(-3, 2));
  CHECK(Rational::parse("11") == Rational(11));
  CHECK_THROWS_AS(Rational::parse("1/0"), Error);
  CHECK_THROWS_AS(Rational::parse("x"), Error);
  CHECK(Rational(1, 3) < Rational(1, 2));
}

TEST_CASE("generator is fixed and reproducible") {
  Xoshiro256 a(42);
  Xoshiro256 b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  // Reference outputs of splitmix64 seeded with 0.
  std::uint64_t state = 0;
  CHECK(splitmix64(state) == 0xE220A8397B1DCDAFULL);
  CHECK(splitmix64(state) == 0x6E789E6AA1B965F4ULL);
  Xoshiro256 c(7);
  for (int i = 0; i < 1000; ++i) CHECK(c.uniform(3) < 3);
  CHECK(shard_seed(1, 0) != shard_seed(1, 1));
}

TEST_CASE("Monty Hall tree") {
  const MontyTree tree = monty_tree();
  REQUIRE(tree.leaves.size() == 4);
  std::multiset<std::pair<std::int64_t, std::int64_t>> probabilities;
  for (const auto& leaf : tree.leaves) {
    probabilities.insert({leaf.probability.numerator(), leaf.probability.denominator()});
    CHECK(leaf.probability.is_probability());
    CHECK(leaf.opened_door != tree.picked_door);
    CHECK(leaf.opened_door != leaf.car_door);
  }
  CHECK(probabilities == std::multiset<std::pair<std::int64_t, std::int64_t>>{{1, 6}, {1, 6}, {1, 3}, {1, 3}});
  CHECK(tree.total() == Rational(1));
  for (const auto& leaf : tree.leaves) {
    if (leaf.if_stay == Prize::Car) {
      CHECK(leaf.probability == Rational(1, 6));
    } else {
      CHECK(leaf.probability == Rational(1, 3));
    }
    CHECK(leaf.if_stay != leaf.if_switch);
  }
}

TEST_CASE("Monty Hall exact") {
  CHECK(monty_exact(Strategy::Switch) == Rational(2, 3));
  CHECK(monty_exact(Strategy::Stay) == Rational(1, 3));
  CHECK(monty_exact(Strategy::Switch) + monty_exact(Strategy::Stay) == Rational(1));
  CHECK(parse_strategy("SWITCH") == Strategy::Switch);
  CHECK(parse_strategy("stay") == Strategy::Stay);
  CHECK_FALSE(parse_strategy("dither").has_value());
}

TEST_CASE("Monty Hall simulation") {
  for (std::uint64_t seed : {0ULL, 1ULL, 12345ULL, 0xDEADBEEFULL}) {
    const TrialConfig cfg{100000, seed};
    CHECK(std::abs(monty_simulate(Strategy::Switch, cfg) - 2.0 / 3.0) < 0.01);
    CHECK(std::abs(monty_simulate(Strategy::Stay, cfg) - 1.0 / 3.0) < 0.01);
  }
  const TrialConfig cfg{20000, 99};
  CHECK(monty_simulate(Strategy::Switch, cfg) == monty_simulate(Strategy::Switch, cfg));
  const TrialConfig sharded{100000, 5, 4};
  CHECK(monty_simulate(Strategy::Switch, sharded) == monty_simulate(Strategy::Switch, sharded));
  CHECK(std::abs(monty_simulate(Strategy::Switch, sharded) - 2.0 / 3.0) < 0.01);
  CHECK_THROWS_AS(monty_simulate(Strategy::Stay, TrialConfig{0, 1}), Error);
}

TEST_CASE("host reveal never shows the car or the pick") {
  Xoshiro256 rng(3);
  for (int picked = 1; picked <= 3; ++picked) {
    for (int car = 1; car <= 3; ++car) {
      for (int i = 0; i < 20; ++i) {
        const int shown = host_reveal(picked, car, rng);
        CHECK(shown != picked);
        CHECK(shown != car);
      }
    }
  }
  CHECK(host_reveal(1, 3, rng) == 2);
}

TEST_CASE("birthday exact and approximate") {
  CHECK(birthday_exact(1) == 0.0);
  CHECK(birthday_exact(366) == 1.0);
  CHECK(birthday_exact(400) == 1.0);
  CHECK(std::abs(birthday_exact(23) - kExact23) < 1e-12);
  CHECK(std::abs(birthday_exact(22) - kExact22) < 1e-12);
  CHECK(std::abs(birthday_approx(23) - 0.500477) < 1e-6);
  CHECK(std::abs(birthday_approx(23) - kApprox23) < 1e-12);
  CHECK(std::abs(birthday_approx(22) - kApprox22) < 1e-12);
  CHECK(birthday_approx(1) == 0.0);
  CHECK(std::abs(birthday_approx(2) - 1.0 / 365.0) < 1e-12);
  CHECK_THROWS_AS(birthday_exact(0), Error);
  CHECK_THROWS_AS(birthday_approx(-3), Error);
}

TEST_CASE("birthday curves are monotone, bounded and close") {
  double prev_exact = 0.0;
  double prev_approx = 0.0;
  for (int n = 1; n <= 400; ++n) {
    const double e = birthday_exact(n);
    const double a = birthday_approx(n);
    CHECK(e >= prev_exact);
    CHECK(a >= prev_approx);
    CHECK(e >= 0.0);
    CHECK(e <= 1.0);
    CHECK(a >= 0.0);
    CHECK(a <= 1.0);
    if (n <= 60) CHECK(std::abs(e - a) < 0.01);
    prev_exact = e;
    prev_approx = a;
  }
}

TEST_CASE("birthday thresholds") {
  CHECK(birthday_threshold(0.5, BirthdayFormula::Exact) == 23);
  CHECK(birthday_threshold(0.5, BirthdayFormula::Approx) == 23);
  CHECK(birthday_threshold(0.99, BirthdayFormula::Exact) == 57);
  CHECK(birthday_threshold(0.99, BirthdayFormula::Approx) == 59);
  CHECK_THROWS_AS(birthday_threshold(1.0, BirthdayFormula::Exact), Error);
  CHECK_THROWS_AS(birthday_threshold(0.0, BirthdayFormula::Approx), Error);
  CHECK(parse_formula("approx") == BirthdayFormula::Approx);
  CHECK(parse_formula("EXACT") == BirthdayFormula::Exact);
}

TEST_CASE("birthday simulation") {
  CHECK(birthday_simulate(1, TrialConfig{1000, 4}) == 0.0);
  CHECK(birthday_simulate(366, TrialConfig{1000, 4}) == 1.0);
  const double est = birthday_simulate(23, TrialConfig{100000, 2024});
  CHECK(std::abs(est - kExact23) < 0.01);
  CHECK(birthday_simulate(23, TrialConfig{5000, 8}) == birthday_simulate(23, TrialConfig{5000, 8}));
  CHECK_THROWS_AS(birthday_simulate(0, TrialConfig{10, 1}), Error);
}

TEST_CASE("simulators stay inside the shrinking envelope as trials double") {
  for (std::uint64_t trials = 10000; trials <= 160000; trials *= 2) {
    CAPTURE(trials);
    const double sw = monty_simulate(Strategy::Switch, TrialConfig{trials, 77});
    CHECK(std::abs(sw - 2.0 / 3.0) <= three_sigma(2.0 / 3.0, trials));
    const double bd = birthday_simulate(23, TrialConfig{trials, 77});
    CHECK(std::abs(bd - kExact23) <= three_sigma(kExact23, trials));
  }
}
