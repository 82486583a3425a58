#include "puzzlelab/combinatorics.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <numeric>
#include <thread>

#include "puzzlelab/error.hpp"

namespace puzzlelab::comb {

namespace {

void require_range(int value, int lo, int hi, const char* what) {
  if (value < lo || value > hi) {
    throw Error(value < lo ? ErrorCode::InvalidN : ErrorCode::CapExceeded, std::string(what) + " must lie in [" + std::to_string(lo) + ", " +
                                            std::to_string(hi) + "], got " + std::to_string(value));
  }
}

void hanoi_recurse(int disks, int from, int to, int spare, std::vector<HanoiMove>& out) {
  if (disks == 0) return;
  hanoi_recurse(disks - 1, from, spare, to, out);
  out.push_back({from, to});
  hanoi_recurse(disks - 1, spare, to, from, out);
}

// Bitmask backtracking over rows; cols/diag masks hold attacked squares of the current row.
void queens_rows(int n, int row, std::uint32_t cols, std::uint32_t left, std::uint32_t right,
                 std::vector<int>& placed, std::vector<BoardPlacement>& out) {
  if (row == n) {
    BoardPlacement p{n, {}};
    for (int r = 0; r < n; ++r) p.squares.push_back({r, placed[static_cast<std::size_t>(r)]});
    out.push_back(std::move(p));
    return;
  }
  const std::uint32_t full = (1u << n) - 1;
  std::uint32_t free = full & ~(cols | left | right);
  while (free) {
    const std::uint32_t bit = free & -free;
    free ^= bit;
    placed[static_cast<std::size_t>(row)] = std::countr_zero(bit);
    queens_rows(n, row + 1, cols | bit, ((left | bit) << 1) & full, (right | bit) >> 1, placed, out);
  }
}

constexpr std::array<std::pair<int, int>, 8> kKnightSteps{
    {{-2, -1}, {-2, 1}, {-1, -2}, {-1, 2}, {1, -2}, {1, 2}, {2, -1}, {2, 1}}};

class KnightSearch {
 public:
  KnightSearch(int rows, int cols, bool closed) : rows_(rows), cols_(cols), closed_(closed) {
    const int cells = rows * cols;
    neighbours_.resize(static_cast<std::size_t>(cells));
    visited_.assign(static_cast<std::size_t>(cells), false);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        for (const auto& [dr, dc] : kKnightSteps) {
          const int nr = r + dr;
          const int nc = c + dc;
          if (nr >= 0 && nr < rows && nc >= 0 && nc < cols) neighbours_[at(r, c)].push_back(nr * cols + nc);
        }
      }
    }
  }

  std::optional<std::vector<int>> run(int start) {
    start_ = start;
    path_.clear();
    path_.push_back(start);
    visited_[static_cast<std::size_t>(start)] = true;
    if (extend()) return path_;
    return std::nullopt;
  }

 private:
  std::size_t at(int r, int c) const { return static_cast<std::size_t>(r * cols_ + c); }

  int onward(int cell) const {
    int d = 0;
    for (int n : neighbours_[static_cast<std::size_t>(cell)]) d += visited_[static_cast<std::size_t>(n)] ? 0 : 1;
    return d;
  }

  bool adjacent(int a, int b) const {
    const auto& ns = neighbours_[static_cast<std::size_t>(a)];
    return std::find(ns.begin(), ns.end(), b) != ns.end();
  }

  // Sound dead-end tests on the unvisited squares left after reaching `current`.
  bool hopeless(int current) const {
    const int remaining = rows_ * cols_ - static_cast<int>(path_.size());
    if (remaining == 0) return false;
    int forced_ends = 0;
    for (int cell = 0; cell < rows_ * cols_; ++cell) {
      if (visited_[static_cast<std::size_t>(cell)]) continue;
      const int degree = onward(cell);
      const bool next_to_current = adjacent(cell, current);
      if (degree == 0 && !(next_to_current && remaining == 1)) return true;
      // Entered from its only free neighbour and never left: it must end the tour.
      if (degree == 1 && !next_to_current && ++forced_ends > 1) return true;
    }
    return false;
  }

  bool extend() {
    const int current = path_.back();
    if (static_cast<int>(path_.size()) == rows_ * cols_) return !closed_ || adjacent(current, start_);
    if (hopeless(current)) return false;
    std::vector<std::pair<int, int>> options;  // (onward degree, cell)
    for (int n : neighbours_[static_cast<std::size_t>(current)]) {
      if (!visited_[static_cast<std::size_t>(n)]) options.push_back({onward(n), n});
    }
    std::sort(options.begin(), options.end());
    for (const auto& [degree, cell] : options) {
      visited_[static_cast<std::size_t>(cell)] = true;
      path_.push_back(cell);
      if (extend()) return true;
      path_.pop_back();
      visited_[static_cast<std::size_t>(cell)] = false;
    }
    return false;
  }

  int rows_;
  int cols_;
  bool closed_;
  int start_ = 0;
  std::vector<std::vector<int>> neighbours_;
  std::vector<bool> visited_;
  std::vector<int> path_;
};

std::vector<std::uint64_t> queen_cover_masks(int n) {
  std::vector<std::uint64_t> masks(static_cast<std::size_t>(n * n), 0);
  for (int i = 0; i < n * n; ++i) {
    const Square a{i / n, i % n};
    for (int j = 0; j < n * n; ++j) {
      const Square b{j / n, j % n};
      if (a == b || queens_attack(a, b)) masks[static_cast<std::size_t>(i)] |= std::uint64_t{1} << j;
    }
  }
  return masks;
}

struct DominationSearch {
  int cells;
  std::uint64_t full;
  std::vector<std::uint64_t> masks;
  // covered_by[u]: squares whose queen covers u, ascending.
  std::vector<std::vector<int>> covered_by;
  std::vector<int> chosen;

  bool search(int k, int next, std::uint64_t covered) {
    if (covered == full) return true;
    if (static_cast<int>(chosen.size()) == k) return false;
    // The lowest uncovered square needs a coverer among the squares still allowed.
    const int first_gap = std::countr_zero(~covered & full);
    const auto& coverers = covered_by[static_cast<std::size_t>(first_gap)];
    if (coverers.empty() || coverers.back() < next) return false;
    for (int s = next; s < cells; ++s) {
      chosen.push_back(s);
      if (search(k, s + 1, covered | masks[static_cast<std::size_t>(s)])) return true;
      chosen.pop_back();
    }
    return false;
  }
};

}  // namespace

HanoiSolution hanoi(int n, int cap) {
  require_range(n, 0, cap, "disk count");
  HanoiSolution s;
  s.moves.reserve((std::size_t{1} << n) - 1);
  hanoi_recurse(n, 0, 2, 1, s.moves);
  s.count = s.moves.size();
  return s;
}

std::optional<std::size_t> hanoi_first_error(int n, const std::vector<HanoiMove>& moves) {
  std::array<std::vector<int>, 3> rods;
  for (int disk = n; disk >= 1; --disk) rods[0].push_back(disk);
  for (std::size_t i = 0; i < moves.size(); ++i) {
    const HanoiMove m = moves[i];
    if (m.from_rod < 0 || m.from_rod > 2 || m.to_rod < 0 || m.to_rod > 2 || m.from_rod == m.to_rod) return i;
    auto& from = rods[static_cast<std::size_t>(m.from_rod)];
    auto& to = rods[static_cast<std::size_t>(m.to_rod)];
    if (from.empty()) return i;
    if (!to.empty() && to.back() < from.back()) return i;
    to.push_back(from.back());
    from.pop_back();
  }
  if (static_cast<int>(rods[2].size()) != n) return moves.size();
  return std::nullopt;
}

bool queens_attack(Square a, Square b) {
  if (a == b) return false;
  return a.row == b.row || a.col == b.col || std::abs(a.row - b.row) == std::abs(a.col - b.col);
}

QueensResult queens(int n, int cap, int jobs) {
  require_range(n, 1, std::min(cap, 30), "board size");
  const int workers = std::clamp(jobs, 1, n);
  std::vector<std::vector<BoardPlacement>> by_column(static_cast<std::size_t>(n));
  auto work = [&](int first) {
    for (int col = first; col < n; col += workers) {
      std::vector<int> placed(static_cast<std::size_t>(n), 0);
      placed[0] = col;
      const std::uint32_t bit = 1u << col;
      const std::uint32_t full = (1u << n) - 1;
      queens_rows(n, 1, bit, (bit << 1) & full, bit >> 1, placed, by_column[static_cast<std::size_t>(col)]);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  QueensResult result;
  for (auto& group : by_column) {
    for (auto& p : group) result.solutions.push_back(std::move(p));
  }
  result.count = result.solutions.size();
  return result;
}

std::optional<KnightTour> knight_tour(int rows, int cols, Square start, bool closed, int cell_cap) {
  if (rows < 1 || cols < 1) throw Error(ErrorCode::InvalidN, "board dimensions must be positive");
  if (rows * cols > cell_cap) {
    throw Error(ErrorCode::CapExceeded, "board " + std::to_string(rows) + "x" + std::to_string(cols) +
                                            " outside the " + std::to_string(cell_cap) + "-square search cap");
  }
  if (start.row < 0 || start.row >= rows || start.col < 0 || start.col >= cols) {
    throw Error(ErrorCode::OffBoardStart, "start square is off the board");
  }
  const int cells = rows * cols;
  // A knight alternates colours; with an odd square count the tour must start
  // and end on the majority colour.
  if (cells % 2 == 1 && (start.row + start.col) % 2 == 1) return std::nullopt;
  if (closed && cells % 2 == 1 && cells > 1) return std::nullopt;
  KnightSearch search(rows, cols, closed);
  auto path = search.run(start.row * cols + start.col);
  if (!path) return std::nullopt;
  KnightTour tour{rows, cols, {}};
  for (int cell : *path) tour.path.push_back({cell / cols, cell % cols});
  return tour;
}

bool knight_tour_valid(const KnightTour& tour) {
  if (tour.rows < 1 || tour.cols < 1) return false;
  if (static_cast<int>(tour.path.size()) != tour.rows * tour.cols) return false;
  std::vector<bool> seen(static_cast<std::size_t>(tour.rows * tour.cols), false);
  for (std::size_t i = 0; i < tour.path.size(); ++i) {
    const Square s = tour.path[i];
    if (s.row < 0 || s.row >= tour.rows || s.col < 0 || s.col >= tour.cols) return false;
    const auto idx = static_cast<std::size_t>(s.row * tour.cols + s.col);
    if (seen[idx]) return false;
    seen[idx] = true;
    if (i > 0) {
      const int dr = std::abs(s.row - tour.path[i - 1].row);
      const int dc = std::abs(s.col - tour.path[i - 1].col);
      if (!((dr == 1 && dc == 2) || (dr == 2 && dc == 1))) return false;
    }
  }
  return true;
}

Domination queens_domination(int n, int cap) {
  require_range(n, 1, std::min(cap, 8), "board size");
  DominationSearch search;
  search.cells = n * n;
  search.full = search.cells == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << search.cells) - 1;
  search.masks = queen_cover_masks(n);
  search.covered_by.resize(static_cast<std::size_t>(search.cells));
  for (int s = 0; s < search.cells; ++s) {
    for (int u = 0; u < search.cells; ++u) {
      if (search.masks[static_cast<std::size_t>(s)] >> u & 1) search.covered_by[static_cast<std::size_t>(u)].push_back(s);
    }
  }
  for (int k = 1;; ++k) {
    search.chosen.clear();
    if (search.search(k, 0, 0)) {
      Domination d{k, BoardPlacement{n, {}}};
      for (int s : search.chosen) d.placement.squares.push_back({s / n, s % n});
      return d;
    }
  }
}

bool dominates(const BoardPlacement& p) {
  for (int r = 0; r < p.size; ++r) {
    for (int c = 0; c < p.size; ++c) {
      const Square sq{r, c};
      const bool covered = std::any_of(p.squares.begin(), p.squares.end(),
                                       [sq](Square q) { return q == sq || queens_attack(q, sq); });
      if (!covered) return false;
    }
  }
  return true;
}

bool is_magic(const MagicSquare& sq) {
  std::array<bool, 10> used{};
  for (const auto& row : sq) {
    for (int v : row) {
      if (v < 1 || v > 9 || used[static_cast<std::size_t>(v)]) return false;
      used[static_cast<std::size_t>(v)] = true;
    }
  }
  const int target = sq[0][0] + sq[0][1] + sq[0][2];
  for (std::size_t i = 0; i < 3; ++i) {
    if (sq[i][0] + sq[i][1] + sq[i][2] != target) return false;
    if (sq[0][i] + sq[1][i] + sq[2][i] != target) return false;
  }
  return sq[0][0] + sq[1][1] + sq[2][2] == target && sq[0][2] + sq[1][1] + sq[2][0] == target;
}

std::vector<MagicSquare> magic_squares(int order) {
  if (order != 3) throw Error(ErrorCode::UnsupportedOrder, "only order 3 is supported");
  constexpr int kLineSum = 15;  // (1 + ... + 9) / 3
  std::vector<MagicSquare> out;
  MagicSquare sq{};
  std::array<bool, 10> used{};
  // Fill row-major; prune each completed row and the first two columns' partial sums.
  auto fill = [&](auto&& self, int pos) -> void {
    if (pos == 9) {
      if (is_magic(sq)) out.push_back(sq);
      return;
    }
    const auto r = static_cast<std::size_t>(pos / 3);
    const auto c = static_cast<std::size_t>(pos % 3);
    for (int v = 1; v <= 9; ++v) {
      if (used[static_cast<std::size_t>(v)]) continue;
      sq[r][c] = v;
      if (c == 2 && sq[r][0] + sq[r][1] + v != kLineSum) continue;
      if (r == 2 && sq[0][c] + sq[1][c] + v != kLineSum) continue;
      used[static_cast<std::size_t>(v)] = true;
      self(self, pos + 1);
      used[static_cast<std::size_t>(v)] = false;
    }
  };
  fill(fill, 0);
  return out;
}

Rational solve_linear(Rational a, Rational b, Rational c) {
  if (a == Rational(0)) {
    if (b == c) throw Error(ErrorCode::Indeterminate, "every x satisfies the equation");
    throw Error(ErrorCode::NoUniqueSolution, "no x satisfies the equation");
  }
  return (c - b) / a;
}

}  // namespace puzzlelab::comb
