#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "puzzlelab/rational.hpp"

namespace puzzlelab::prob {

enum class Strategy { Switch, Stay };
std::string_view to_string(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view text);

enum class Prize { Car, Goat };
std::string_view to_string(Prize p);

struct MontyLeaf {
  std::string path;  // e.g. "car=1,open=2" with the contestant on door 1
  int car_door = 0;
  int opened_door = 0;
  Rational probability;
  Prize if_stay = Prize::Goat;
  Prize if_switch = Prize::Goat;
};

struct MontyTree {
  int picked_door = 1;
  std::vector<MontyLeaf> leaves;

  Rational total() const;
};

/// The game tree with the contestant fixed on door 1: car uniform over three
/// doors, host opening a goat door uniformly among the legal ones.
MontyTree monty_tree();

/// Winning probability, summed from the tree leaves.
Rational monty_exact(Strategy s);

struct TrialConfig {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  /// Shards run on their own threads with seeds derived by shard_seed().
  /// jobs = 1 uses the base seed directly.
  int jobs = 1;
};

/// The host's goat reveal given the pick and the car: uniform among legal
/// doors, drawing from `rng` only when two doors qualify. Doors are 1..3.
template <typename Rng>
int host_reveal(int picked, int car, Rng& rng) {
  int legal[2];
  int count = 0;
  for (int door = 1; door <= 3; ++door) {
    if (door != picked && door != car) legal[count++] = door;
  }
  return count == 1 ? legal[0] : legal[rng.uniform(2)];
}

inline int other_closed_door(int picked, int revealed) { return 6 - picked - revealed; }

/// Fraction of games won. Deterministic for a fixed config.
double monty_simulate(Strategy s, const TrialConfig& cfg);

enum class BirthdayFormula { Exact, Approx };
std::optional<BirthdayFormula> parse_formula(std::string_view text);

inline constexpr int kDaysInYear = 365;

/// 1 - prod_{i=1}^{n-1} (1 - i/365); 1 for n >= 366. Throws Error{InvalidN} when n < 1.
double birthday_exact(int n);
/// 1 - (364/365)^(n(n-1)/2). Throws Error{InvalidN} when n < 1.
double birthday_approx(int n);
double birthday(int n, BirthdayFormula formula);
/// Smallest n with the formula reaching `target`. Throws Error{InvalidArgument}
/// unless 0 < target < 1.
int birthday_threshold(double target, BirthdayFormula formula);
/// Fraction of trials where some day repeats among n uniform draws.
double birthday_simulate(int n, const TrialConfig& cfg);

}  // namespace puzzlelab::prob
