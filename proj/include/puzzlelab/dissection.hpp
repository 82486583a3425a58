#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "puzzlelab/polyomino.hpp"

namespace puzzlelab::dissect {

using poly::Cell;
using poly::Polyomino;

// SingleSplit: one piece, exactly two parts, every severed edge between them.
// FullLine: one piece, every internal edge of that piece on one grid line.
// GlobalLine: one infinite grid line through every piece in place.
enum class CutModel { SingleSplit, FullLine, GlobalLine };

std::string_view to_string(CutModel model);
/// Accepts "single-split", "SINGLE_SPLIT", "full-line", "global", ... (case-insensitive).
std::optional<CutModel> parse_cut_model(std::string_view text);

enum class Axis { Horizontal, Vertical };

using PieceId = std::uint32_t;

/// A segment on a grid line. A vertical cut sits on x = line and runs from
/// y = lo to y = hi, severing the edge between cells (line-1, t) and (line, t)
/// for every lo <= t < hi where both cells belong to the target. Horizontal
/// cuts mirror this with x and y exchanged. An empty target means GLOBAL.
struct CutSegment {
  Axis axis = Axis::Vertical;
  int line = 0;
  int lo = 0;
  int hi = 0;
  std::optional<PieceId> target;

  bool is_global() const noexcept { return !target.has_value(); }
  friend bool operator==(const CutSegment&, const CutSegment&) = default;
};

std::string describe(const CutSegment& cut);

struct Piece {
  PieceId id = 0;
  std::vector<Cell> cells;  // sorted, absolute coordinates

  bool is_unit() const noexcept { return cells.size() == 1; }
  friend bool operator==(const Piece&, const Piece&) = default;
};

/// Pieces in place plus the cut history. Values are immutable: apply_cut
/// returns a new state.
class DissectionState {
 public:
  static DissectionState start(const Polyomino& p, CutModel model);

  CutModel model() const noexcept { return model_; }
  const std::vector<Piece>& pieces() const noexcept { return pieces_; }
  const std::vector<CutSegment>& history() const noexcept { return history_; }
  std::size_t total_cells() const noexcept;
  bool finished() const noexcept;
  const Piece* find(PieceId id) const noexcept;
  PieceId next_id() const noexcept { return next_id_; }

 private:
  friend DissectionState apply_cut(const DissectionState& state, const CutSegment& cut);

  CutModel model_ = CutModel::SingleSplit;
  std::vector<Piece> pieces_;  // ascending id
  std::vector<CutSegment> history_;
  PieceId next_id_ = 0;
};

/// Every admissible cut under state.model(), each of which strictly increases
/// the piece count. Ordered by target id, then horizontal before vertical,
/// then line, then span.
std::vector<CutSegment> legal_cuts(const DissectionState& state);

/// Applies a cut whose severed edge set matches a legal cut; the history
/// records the legal cut's tight span. Throws Error{WrongModel|IllegalCut}.
DissectionState apply_cut(const DissectionState& state, const CutSegment& cut);

/// Replays cuts from the start state of p. Throws like apply_cut.
DissectionState replay(const Polyomino& p, CutModel model, const std::vector<CutSegment>& cuts);

/// n - 1 SingleSplit cuts. Detaches the lexicographically smallest leaf cell
/// of the dual graph while any piece has one; a straight cut can only free a
/// cell with a single neighbour. Otherwise takes the first legal cut of the
/// piece holding the smallest non-unit cell.
std::vector<CutSegment> greedy_dissect(const Polyomino& p);

/// Each SingleSplit cut adds exactly one piece, and n pieces are needed.
int single_split_lower_bound(const Polyomino& p);

struct SearchConfig {
  int per_piece_cap = 8;
  int global_cap = 6;
};

struct MinCutResult {
  int count = 0;
  std::vector<CutSegment> witness;
};

/// Exact minimum cut search. Per-piece models recurse over canonical piece
/// keys (folded over the 8 symmetries) with a memo shared by all callers;
/// GlobalLine runs a breadth-first search over whole placed states.
/// Thread-safe.
class MinCutSolver {
 public:
  explicit MinCutSolver(SearchConfig config = {});

  const SearchConfig& config() const noexcept { return config_; }

  MinCutResult min_cuts(const Polyomino& p, CutModel model) const;
  /// Minimum number of further cuts to reach all unit squares.
  int hint(const DissectionState& state) const;
  /// Cheapest continuation from `state`, replayable with apply_cut.
  std::vector<CutSegment> best_continuation(const DissectionState& state) const;

  std::size_t memo_size(CutModel model) const;

 private:
  struct Memo {
    mutable std::shared_mutex mutex;
    std::unordered_map<std::string, int> values;
  };

  int piece_min(const std::vector<Cell>& cells, CutModel model) const;
  Memo& memo_for(CutModel model) const;
  void check_cap(std::size_t cells, CutModel model) const;

  SearchConfig config_;
  std::unique_ptr<Memo> single_split_memo_;
  std::unique_ptr<Memo> full_line_memo_;
};

MinCutResult min_cuts(const Polyomino& p, CutModel model, const SearchConfig& config = {});
int hint(const DissectionState& state, const SearchConfig& config = {});

struct SurveyRow {
  int n = 0;
  poly::ShapeKey shape_key;
  Polyomino shape;
  int min_cuts = 0;
  bool has_holes = false;

  int n_minus_1() const noexcept { return n - 1; }
  bool matches() const noexcept { return min_cuts == n - 1; }
};

struct SurveyAggregate {
  int n = 0;
  int shapes = 0;
  int flagged = 0;
  int min_cuts_low = 0;
  int min_cuts_high = 0;
};

struct SurveyReport {
  CutModel model = CutModel::SingleSplit;
  std::vector<SurveyRow> rows;  // by n, then enumeration order
  std::vector<SurveyAggregate> per_n;

  int flagged() const noexcept;
  std::string to_csv() const;
};

/// Runs min_cuts over every fixed polyomino with n <= n_max. `jobs` > 1 fans
/// the shapes out over worker threads; the report is identical either way.
SurveyReport survey_conjecture(int n_max, CutModel model, const MinCutSolver& solver, int jobs = 1);

}  // namespace puzzlelab::dissect
