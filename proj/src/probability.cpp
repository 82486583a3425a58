#include "puzzlelab/probability.hpp"

#include <algorithm>
#include <bitset>
#include <cctype>
#include <cmath>
#include <functional>
#include <thread>

#include "puzzlelab/error.hpp"
#include "puzzlelab/rng.hpp"

namespace puzzlelab::prob {

namespace {

std::string lower(std::string_view text) {
  std::string out;
  for (char ch : text) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  return out;
}

void require_n(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidN, "group size must be at least 1, got " + std::to_string(n));
}

void require_trials(const TrialConfig& cfg) {
  if (cfg.trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
}

// Splits cfg.trials over cfg.jobs shards; `count(seed, trials)` returns hits.
double run_sharded(const TrialConfig& cfg, const std::function<std::uint64_t(std::uint64_t, std::uint64_t)>& count) {
  require_trials(cfg);
  const auto jobs = static_cast<std::uint64_t>(std::max(1, cfg.jobs));
  if (jobs == 1) return static_cast<double>(count(cfg.seed, cfg.trials)) / static_cast<double>(cfg.trials);
  std::vector<std::uint64_t> hits(jobs, 0);
  std::vector<std::thread> pool;
  for (std::uint64_t shard = 0; shard < jobs; ++shard) {
    const std::uint64_t share = cfg.trials / jobs + (shard < cfg.trials % jobs ? 1 : 0);
    pool.emplace_back([&, shard, share] { hits[shard] = count(shard_seed(cfg.seed, shard), share); });
  }
  for (auto& t : pool) t.join();
  std::uint64_t total = 0;
  for (std::uint64_t h : hits) total += h;
  return static_cast<double>(total) / static_cast<double>(cfg.trials);
}

}  // namespace

std::string_view to_string(Strategy s) { return s == Strategy::Switch ? "SWITCH" : "STAY"; }

std::optional<Strategy> parse_strategy(std::string_view text) {
  const std::string t = lower(text);
  if (t == "switch") return Strategy::Switch;
  if (t == "stay") return Strategy::Stay;
  return std::nullopt;
}

std::string_view to_string(Prize p) { return p == Prize::Car ? "CAR" : "GOAT"; }

Rational MontyTree::total() const {
  Rational sum;
  for (const MontyLeaf& leaf : leaves) sum = sum + leaf.probability;
  return sum;
}

MontyTree monty_tree() {
  MontyTree tree;
  const int picked = tree.picked_door;
  const Rational car_branch(1, 3);
  for (int car = 1; car <= 3; ++car) {
    std::vector<int> legal;
    for (int door = 1; door <= 3; ++door) {
      if (door != picked && door != car) legal.push_back(door);
    }
    const Rational host_branch(1, static_cast<std::int64_t>(legal.size()));
    for (int opened : legal) {
      MontyLeaf leaf;
      leaf.path = "car=" + std::to_string(car) + ",open=" + std::to_string(opened);
      leaf.car_door = car;
      leaf.opened_door = opened;
      leaf.probability = car_branch * host_branch;
      leaf.if_stay = car == picked ? Prize::Car : Prize::Goat;
      leaf.if_switch = car == other_closed_door(picked, opened) ? Prize::Car : Prize::Goat;
      tree.leaves.push_back(leaf);
    }
  }
  return tree;
}

Rational monty_exact(Strategy s) {
  Rational win;
  for (const MontyLeaf& leaf : monty_tree().leaves) {
    const Prize prize = s == Strategy::Stay ? leaf.if_stay : leaf.if_switch;
    if (prize == Prize::Car) win = win + leaf.probability;
  }
  return win;
}

double monty_simulate(Strategy s, const TrialConfig& cfg) {
  return run_sharded(cfg, [s](std::uint64_t seed, std::uint64_t trials) {
    Xoshiro256 rng(seed);
    std::uint64_t wins = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
      const int car = 1 + static_cast<int>(rng.uniform(3));
      const int picked = 1 + static_cast<int>(rng.uniform(3));
      const int revealed = host_reveal(picked, car, rng);
      const int final_door = s == Strategy::Stay ? picked : other_closed_door(picked, revealed);
      if (final_door == car) ++wins;
    }
    return wins;
  });
}

std::optional<BirthdayFormula> parse_formula(std::string_view text) {
  const std::string t = lower(text);
  if (t == "exact") return BirthdayFormula::Exact;
  if (t == "approx" || t == "approximate") return BirthdayFormula::Approx;
  return std::nullopt;
}

double birthday_exact(int n) {
  require_n(n);
  if (n > kDaysInYear) return 1.0;
  long double none_shared = 1.0L;
  for (int i = 1; i < n; ++i) none_shared *= 1.0L - static_cast<long double>(i) / kDaysInYear;
  return static_cast<double>(1.0L - none_shared);
}

double birthday_approx(int n) {
  require_n(n);
  const long double pairs = static_cast<long double>(n) * static_cast<long double>(n - 1) / 2.0L;
  return static_cast<double>(1.0L - std::pow(364.0L / 365.0L, pairs));
}

double birthday(int n, BirthdayFormula formula) {
  return formula == BirthdayFormula::Exact ? birthday_exact(n) : birthday_approx(n);
}

int birthday_threshold(double target, BirthdayFormula formula) {
  if (!(target > 0.0 && target < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "threshold target must lie strictly between 0 and 1");
  }
  // Both curves are non-decreasing in n and approach 1, so the scan ends.
  int n = 1;
  while (birthday(n, formula) < target) ++n;
  return n;
}

double birthday_simulate(int n, const TrialConfig& cfg) {
  require_n(n);
  return run_sharded(cfg, [n](std::uint64_t seed, std::uint64_t trials) {
    Xoshiro256 rng(seed);
    std::uint64_t collisions = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
      std::bitset<kDaysInYear> seen;
      for (int person = 0; person < n; ++person) {
        const auto day = static_cast<std::size_t>(rng.uniform(kDaysInYear));
        if (seen.test(day)) {
          ++collisions;
          break;
        }
        seen.set(day);
      }
    }
    return collisions;
  });
}

}  // namespace puzzlelab::prob
