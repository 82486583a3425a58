#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "puzzlelab/rational.hpp"

namespace puzzlelab::comb {

// ---- Tower of Hanoi -------------------------------------------------------

struct HanoiMove {
  int from_rod = 0;
  int to_rod = 0;
  friend bool operator==(const HanoiMove&, const HanoiMove&) = default;
};

struct HanoiSolution {
  std::vector<HanoiMove> moves;
  std::uint64_t count = 0;
};

inline constexpr int kHanoiCap = 20;

/// Moves all n disks from rod 0 to rod 2; count = 2^n - 1.
HanoiSolution hanoi(int n, int cap = kHanoiCap);

/// Replays moves from n disks on rod 0. Returns the index of the first illegal
/// move (empty rod, larger onto smaller, bad rod index), or moves.size() if the
/// sequence is legal but does not end with every disk on rod 2, or nullopt if
/// the sequence is a complete solution.
std::optional<std::size_t> hanoi_first_error(int n, const std::vector<HanoiMove>& moves);
inline bool hanoi_valid(int n, const std::vector<HanoiMove>& moves) { return !hanoi_first_error(n, moves); }

// ---- Chessboards ----------------------------------------------------------

struct Square {
  int row = 0;
  int col = 0;
  friend auto operator<=>(const Square&, const Square&) = default;
};

struct BoardPlacement {
  int size = 0;
  std::vector<Square> squares;
  friend bool operator==(const BoardPlacement&, const BoardPlacement&) = default;
};

bool queens_attack(Square a, Square b);

inline constexpr int kQueensCap = 10;

struct QueensResult {
  std::uint64_t count = 0;
  std::vector<BoardPlacement> solutions;  // lexicographic by column of each row
};

/// Every placement of n mutually non-attacking queens, one per row.
/// `jobs` > 1 splits the first-row choices over threads.
QueensResult queens(int n, int cap = kQueensCap, int jobs = 1);

struct KnightTour {
  int rows = 0;
  int cols = 0;
  std::vector<Square> path;
};

inline constexpr int kKnightCellCap = 42;

/// Open tour from `start` by Warnsdorff-ordered backtracking, exhaustive within
/// the cap, so nullopt means no tour exists. `closed` also demands the last
/// square be a knight's move from the start.
std::optional<KnightTour> knight_tour(int rows, int cols, Square start, bool closed = false,
                                      int cell_cap = kKnightCellCap);

/// Move legality plus exactly-once coverage.
bool knight_tour_valid(const KnightTour& tour);

inline constexpr int kDominationCap = 8;

struct Domination {
  int k = 0;
  BoardPlacement placement;
};

/// Fewest queens covering every square (occupied or attacked), by trying
/// k = 1, 2, ... over all k-subsets in lexicographic order.
Domination queens_domination(int n, int cap = kDominationCap);

/// True when every square is occupied or attacked by a queen in `p`.
bool dominates(const BoardPlacement& p);

// ---- Micro-solvers --------------------------------------------------------

using MagicSquare = std::array<std::array<int, 3>, 3>;

/// All 3x3 magic squares over 1..9, lexicographic by rows. Throws
/// Error{UnsupportedOrder} for any other order.
std::vector<MagicSquare> magic_squares(int order);
bool is_magic(const MagicSquare& square);

/// x with a*x + b = c. Throws Error{NoUniqueSolution} (a = 0, b != c) or
/// Error{Indeterminate} (a = 0, b = c).
Rational solve_linear(Rational a, Rational b, Rational c);

}  // namespace puzzlelab::comb
