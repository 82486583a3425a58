#include "puzzlelab/dissection.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "puzzlelab/error.hpp"

namespace puzzlelab::dissect {

namespace {

using poly::InternalEdge;
using CellSet = std::vector<Cell>;

constexpr int kUnreachable = std::numeric_limits<int>::max() / 4;

// A cut candidate on a raw cell set, before piece ids are attached.
struct Candidate {
  Axis axis;
  int line;
  int lo;
  int hi;
  std::vector<CellSet> parts;
};

bool contains(const CellSet& cells, Cell c) { return std::binary_search(cells.begin(), cells.end(), c); }

// Cells on either side of position t of a grid line.
InternalEdge edge_at(Axis axis, int line, int t) {
  if (axis == Axis::Vertical) return {Cell{line - 1, t}, Cell{line, t}};
  return {Cell{t, line - 1}, Cell{t, line}};
}

// Positions t along the line where an internal edge of `cells` crosses it.
std::vector<int> crossings(const CellSet& cells, Axis axis, int line) {
  std::vector<int> ts;
  for (const Cell& c : cells) {
    const bool on_far_side = axis == Axis::Vertical ? c.x == line : c.y == line;
    if (!on_far_side) continue;
    const int t = axis == Axis::Vertical ? c.y : c.x;
    if (contains(cells, edge_at(axis, line, t).a)) ts.push_back(t);
  }
  std::sort(ts.begin(), ts.end());
  return ts;
}

std::vector<InternalEdge> severed_by(const CellSet& cells, Axis axis, int line, int lo, int hi) {
  std::vector<InternalEdge> out;
  for (int t : crossings(cells, axis, line)) {
    if (t >= lo && t < hi) out.push_back(edge_at(axis, line, t));
  }
  return out;
}

// Union-find over the cells with every internal edge kept except `severed`.
std::vector<CellSet> components_without(const CellSet& cells, const std::vector<InternalEdge>& severed) {
  std::vector<std::size_t> parent(cells.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto root = [&parent](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  auto index = [&cells](Cell c) {
    return static_cast<std::size_t>(std::lower_bound(cells.begin(), cells.end(), c) - cells.begin());
  };
  for (const InternalEdge& e : poly::internal_edges(cells)) {
    if (std::find(severed.begin(), severed.end(), e) != severed.end()) continue;
    parent[root(index(e.a))] = root(index(e.b));
  }
  std::vector<CellSet> parts;
  std::vector<std::size_t> part_of_root(cells.size(), cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::size_t r = root(i);
    if (part_of_root[r] == cells.size()) {
      part_of_root[r] = parts.size();
      parts.emplace_back();
    }
    parts[part_of_root[r]].push_back(cells[i]);
  }
  // Cells were visited in sorted order, so parts are ordered by smallest cell
  // and each part is already sorted.
  return parts;
}

struct Bounds {
  int min_x, max_x, min_y, max_y;
};

Bounds bounds_of(const CellSet& cells) {
  Bounds b{cells.front().x, cells.front().x, cells.front().y, cells.front().y};
  for (const Cell& c : cells) {
    b.min_x = std::min(b.min_x, c.x);
    b.max_x = std::max(b.max_x, c.x);
    b.min_y = std::min(b.min_y, c.y);
    b.max_y = std::max(b.max_y, c.y);
  }
  return b;
}

// Every grid line strictly inside the bounding box, horizontal lines first.
template <typename Fn>
void for_each_line(const Bounds& b, Fn&& fn) {
  for (int line = b.min_y + 1; line <= b.max_y; ++line) fn(Axis::Horizontal, line);
  for (int line = b.min_x + 1; line <= b.max_x; ++line) fn(Axis::Vertical, line);
}

bool splits_cleanly(const std::vector<CellSet>& parts, const std::vector<InternalEdge>& severed) {
  if (parts.size() != 2) return false;
  const CellSet& first = parts.front();
  return std::all_of(severed.begin(), severed.end(),
                     [&first](const InternalEdge& e) { return contains(first, e.a) != contains(first, e.b); });
}

std::vector<Candidate> piece_candidates(const CellSet& cells, CutModel model) {
  std::vector<Candidate> out;
  if (cells.size() < 2) return out;
  for_each_line(bounds_of(cells), [&](Axis axis, int line) {
    const std::vector<int> ts = crossings(cells, axis, line);
    if (ts.empty()) return;
    if (model == CutModel::FullLine) {
      std::vector<InternalEdge> severed;
      for (int t : ts) severed.push_back(edge_at(axis, line, t));
      auto parts = components_without(cells, severed);
      if (parts.size() >= 2) out.push_back({axis, line, ts.front(), ts.back() + 1, std::move(parts)});
      return;
    }
    // SingleSplit: any contiguous run of the crossings that cleanly halves the piece.
    for (std::size_t i = 0; i < ts.size(); ++i) {
      std::vector<InternalEdge> severed;
      for (std::size_t j = i; j < ts.size(); ++j) {
        severed.push_back(edge_at(axis, line, ts[j]));
        auto parts = components_without(cells, severed);
        if (splits_cleanly(parts, severed)) out.push_back({axis, line, ts[i], ts[j] + 1, std::move(parts)});
      }
    }
  });
  return out;
}

struct GlobalCandidate {
  Axis axis;
  int line;
  int lo;
  int hi;
  // For each input piece, its parts after the cut (a single part if untouched).
  std::vector<std::vector<CellSet>> parts_per_piece;
};

std::vector<GlobalCandidate> global_candidates(const std::vector<CellSet>& pieces) {
  std::vector<GlobalCandidate> out;
  CellSet all;
  for (const auto& p : pieces) all.insert(all.end(), p.begin(), p.end());
  if (all.empty()) return out;
  for_each_line(bounds_of(all), [&](Axis axis, int line) {
    GlobalCandidate cand{axis, line, std::numeric_limits<int>::max(), std::numeric_limits<int>::min(), {}};
    bool grew = false;
    for (const auto& piece : pieces) {
      const std::vector<int> ts = crossings(piece, axis, line);
      if (ts.empty()) {
        cand.parts_per_piece.push_back({piece});
        continue;
      }
      cand.lo = std::min(cand.lo, ts.front());
      cand.hi = std::max(cand.hi, ts.back() + 1);
      std::vector<InternalEdge> severed;
      for (int t : ts) severed.push_back(edge_at(axis, line, t));
      auto parts = components_without(piece, severed);
      grew = grew || parts.size() > 1;
      cand.parts_per_piece.push_back(std::move(parts));
    }
    if (grew) out.push_back(std::move(cand));
  });
  return out;
}

std::vector<CellSet> cell_sets(const DissectionState& state) {
  std::vector<CellSet> out;
  out.reserve(state.pieces().size());
  for (const Piece& p : state.pieces()) out.push_back(p.cells);
  return out;
}

bool is_per_piece(CutModel model) { return model != CutModel::GlobalLine; }

std::string encode(const std::vector<CellSet>& pieces) {
  std::vector<CellSet> sorted = pieces;
  std::sort(sorted.begin(), sorted.end());
  std::string key;
  for (const auto& piece : sorted) {
    for (const Cell& c : piece) {
      key += std::to_string(c.x);
      key += ',';
      key += std::to_string(c.y);
      key += ';';
    }
    key += '|';
  }
  return key;
}

bool all_units(const std::vector<CellSet>& pieces) {
  return std::all_of(pieces.begin(), pieces.end(), [](const CellSet& p) { return p.size() == 1; });
}

// Shortest GlobalLine cut sequence (axis, line) from `start` to all unit squares.
std::vector<CutSegment> global_bfs(const std::vector<CellSet>& start) {
  if (all_units(start)) return {};
  struct Visit {
    std::string parent;
    CutSegment via;
  };
  std::unordered_map<std::string, Visit> visited;
  std::deque<std::vector<CellSet>> frontier{start};
  const std::string start_key = encode(start);
  visited.emplace(start_key, Visit{});
  while (!frontier.empty()) {
    std::vector<CellSet> current = std::move(frontier.front());
    frontier.pop_front();
    const std::string current_key = encode(current);
    for (auto& cand : global_candidates(current)) {
      std::vector<CellSet> next;
      for (auto& parts : cand.parts_per_piece) {
        for (auto& part : parts) next.push_back(std::move(part));
      }
      std::string key = encode(next);
      if (visited.count(key)) continue;
      visited.emplace(key, Visit{current_key, CutSegment{cand.axis, cand.line, cand.lo, cand.hi, std::nullopt}});
      if (all_units(next)) {
        std::vector<CutSegment> path;
        for (std::string at = key; at != start_key; at = visited.at(at).parent) path.push_back(visited.at(at).via);
        std::reverse(path.begin(), path.end());
        return path;
      }
      frontier.push_back(std::move(next));
    }
  }
  throw std::logic_error("global search exhausted without reaching unit squares");
}

std::string lower(std::string_view text) {
  std::string out;
  for (char ch : text) {
    if (ch == '_' || ch == ' ') ch = '-';
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  return out;
}

}  // namespace

std::string_view to_string(CutModel model) {
  switch (model) {
    case CutModel::SingleSplit: return "SINGLE_SPLIT";
    case CutModel::FullLine: return "FULL_LINE";
    case CutModel::GlobalLine: return "GLOBAL_LINE";
  }
  return "UNKNOWN";
}

std::optional<CutModel> parse_cut_model(std::string_view text) {
  const std::string t = lower(text);
  if (t == "single-split" || t == "single") return CutModel::SingleSplit;
  if (t == "full-line" || t == "full") return CutModel::FullLine;
  if (t == "global-line" || t == "global") return CutModel::GlobalLine;
  return std::nullopt;
}

std::string describe(const CutSegment& cut) {
  std::ostringstream out;
  out << (cut.target ? "p" + std::to_string(*cut.target) : std::string("GLOBAL")) << ' '
      << (cut.axis == Axis::Horizontal ? "H y=" : "V x=") << cut.line << " [" << cut.lo << ',' << cut.hi << ']';
  return out.str();
}

DissectionState DissectionState::start(const Polyomino& p, CutModel model) {
  DissectionState s;
  s.model_ = model;
  s.pieces_.push_back(Piece{0, p.cells()});
  s.next_id_ = 1;
  return s;
}

std::size_t DissectionState::total_cells() const noexcept {
  std::size_t n = 0;
  for (const Piece& p : pieces_) n += p.cells.size();
  return n;
}

bool DissectionState::finished() const noexcept {
  return std::all_of(pieces_.begin(), pieces_.end(), [](const Piece& p) { return p.is_unit(); });
}

const Piece* DissectionState::find(PieceId id) const noexcept {
  auto it = std::lower_bound(pieces_.begin(), pieces_.end(), id,
                             [](const Piece& p, PieceId want) { return p.id < want; });
  return it != pieces_.end() && it->id == id ? &*it : nullptr;
}

std::vector<CutSegment> legal_cuts(const DissectionState& state) {
  std::vector<CutSegment> out;
  if (is_per_piece(state.model())) {
    for (const Piece& piece : state.pieces()) {
      for (const Candidate& c : piece_candidates(piece.cells, state.model())) {
        out.push_back(CutSegment{c.axis, c.line, c.lo, c.hi, piece.id});
      }
    }
    return out;
  }
  for (const GlobalCandidate& c : global_candidates(cell_sets(state))) {
    out.push_back(CutSegment{c.axis, c.line, c.lo, c.hi, std::nullopt});
  }
  return out;
}

DissectionState apply_cut(const DissectionState& state, const CutSegment& cut) {
  if (is_per_piece(state.model()) == cut.is_global()) {
    throw Error(ErrorCode::WrongModel, std::string(cut.is_global() ? "GLOBAL cut" : "piece-targeted cut") +
                                           " is not allowed under " + std::string(to_string(state.model())));
  }
  DissectionState next = state;
  if (!cut.is_global()) {
    const Piece* piece = state.find(*cut.target);
    if (piece == nullptr) throw Error(ErrorCode::IllegalCut, "no piece p" + std::to_string(*cut.target));
    const auto wanted = severed_by(piece->cells, cut.axis, cut.line, cut.lo, cut.hi);
    for (Candidate& c : piece_candidates(piece->cells, state.model())) {
      if (c.axis != cut.axis || c.line != cut.line) continue;
      if (severed_by(piece->cells, c.axis, c.line, c.lo, c.hi) != wanted) continue;
      const PieceId removed = piece->id;
      next.pieces_.erase(std::find_if(next.pieces_.begin(), next.pieces_.end(),
                                      [removed](const Piece& p) { return p.id == removed; }));
      for (CellSet& part : c.parts) next.pieces_.push_back(Piece{next.next_id_++, std::move(part)});
      next.history_.push_back(CutSegment{c.axis, c.line, c.lo, c.hi, removed});
      return next;
    }
    throw Error(ErrorCode::IllegalCut, "cut " + describe(cut) + " is not legal under " +
                                           std::string(to_string(state.model())));
  }

  const std::vector<CellSet> pieces = cell_sets(state);
  std::vector<InternalEdge> wanted;
  for (const CellSet& p : pieces) {
    auto s = severed_by(p, cut.axis, cut.line, cut.lo, cut.hi);
    wanted.insert(wanted.end(), s.begin(), s.end());
  }
  for (GlobalCandidate& c : global_candidates(pieces)) {
    if (c.axis != cut.axis || c.line != cut.line) continue;
    std::vector<InternalEdge> full;
    for (const CellSet& p : pieces) {
      auto s = severed_by(p, c.axis, c.line, c.lo, c.hi);
      full.insert(full.end(), s.begin(), s.end());
    }
    if (full != wanted) continue;
    next.pieces_.clear();
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      auto& parts = c.parts_per_piece[i];
      if (parts.size() == 1) {
        next.pieces_.push_back(state.pieces()[i]);
        continue;
      }
      for (CellSet& part : parts) next.pieces_.push_back(Piece{0, std::move(part)});
    }
    // Survivors keep their ids; new parts are numbered in piece order.
    std::size_t i = 0;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      const std::size_t count = c.parts_per_piece[k].size();
      if (count > 1) {
        for (std::size_t j = 0; j < count; ++j) next.pieces_[i + j].id = next.next_id_++;
      }
      i += count;
    }
    std::sort(next.pieces_.begin(), next.pieces_.end(), [](const Piece& a, const Piece& b) { return a.id < b.id; });
    next.history_.push_back(CutSegment{c.axis, c.line, c.lo, c.hi, std::nullopt});
    return next;
  }
  throw Error(ErrorCode::IllegalCut, "cut " + describe(cut) + " does not separate any piece");
}

DissectionState replay(const Polyomino& p, CutModel model, const std::vector<CutSegment>& cuts) {
  DissectionState state = DissectionState::start(p, model);
  for (const CutSegment& cut : cuts) state = apply_cut(state, cut);
  return state;
}

std::vector<CutSegment> greedy_dissect(const Polyomino& p) {
  DissectionState state = DissectionState::start(p, CutModel::SingleSplit);
  while (!state.finished()) {
    std::optional<CutSegment> cut;
    std::optional<Cell> best_leaf;
    for (const Piece& piece : state.pieces()) {
      if (piece.is_unit()) continue;
      for (const Cell& c : piece.cells) {
        if (best_leaf && !(c < *best_leaf)) break;
        std::vector<Cell> neighbours;
        for (const Cell step : {Cell{1, 0}, Cell{-1, 0}, Cell{0, 1}, Cell{0, -1}}) {
          if (contains(piece.cells, c + step)) neighbours.push_back(c + step);
        }
        if (neighbours.size() != 1) continue;
        const Cell m = neighbours.front();
        best_leaf = c;
        if (m.y == c.y) {
          cut = CutSegment{Axis::Vertical, std::max(c.x, m.x), c.y, c.y + 1, piece.id};
        } else {
          cut = CutSegment{Axis::Horizontal, std::max(c.y, m.y), c.x, c.x + 1, piece.id};
        }
        break;
      }
    }
    if (!cut) {
      // Every cell of every piece has two or more neighbours.
      const Piece* target = nullptr;
      for (const Piece& piece : state.pieces()) {
        if (!piece.is_unit() && (target == nullptr || piece.cells.front() < target->cells.front())) target = &piece;
      }
      const auto candidates = piece_candidates(target->cells, CutModel::SingleSplit);
      if (candidates.empty()) throw std::logic_error("piece without a single-split cut");
      const Candidate& c = candidates.front();
      cut = CutSegment{c.axis, c.line, c.lo, c.hi, target->id};
    }
    state = apply_cut(state, *cut);
  }
  return state.history();
}

int single_split_lower_bound(const Polyomino& p) { return static_cast<int>(p.size()) - 1; }

MinCutSolver::MinCutSolver(SearchConfig config)
    : config_(config), single_split_memo_(std::make_unique<Memo>()), full_line_memo_(std::make_unique<Memo>()) {}

MinCutSolver::Memo& MinCutSolver::memo_for(CutModel model) const {
  return model == CutModel::FullLine ? *full_line_memo_ : *single_split_memo_;
}

std::size_t MinCutSolver::memo_size(CutModel model) const {
  if (!is_per_piece(model)) return 0;
  Memo& memo = memo_for(model);
  std::shared_lock lock(memo.mutex);
  return memo.values.size();
}

void MinCutSolver::check_cap(std::size_t cells, CutModel model) const {
  const int cap = is_per_piece(model) ? config_.per_piece_cap : config_.global_cap;
  if (cells > static_cast<std::size_t>(cap)) {
    throw Error(ErrorCode::CapExceeded, std::to_string(cells) + " cells exceed the " +
                                            std::string(to_string(model)) + " search cap of " +
                                            std::to_string(cap));
  }
}

int MinCutSolver::piece_min(const CellSet& cells, CutModel model) const {
  if (cells.size() <= 1) return 0;
  Memo& memo = memo_for(model);
  std::string key = poly::canonical_key(cells, true).text;
  {
    std::shared_lock lock(memo.mutex);
    if (auto it = memo.values.find(key); it != memo.values.end()) return it->second;
  }
  int best = kUnreachable;
  for (const Candidate& c : piece_candidates(cells, model)) {
    int total = 1;
    for (const CellSet& part : c.parts) total = std::min(kUnreachable, total + piece_min(part, model));
    best = std::min(best, total);
  }
  std::unique_lock lock(memo.mutex);
  memo.values.emplace(std::move(key), best);
  return best;
}

int MinCutSolver::hint(const DissectionState& state) const {
  check_cap(state.total_cells(), state.model());
  if (!is_per_piece(state.model())) return static_cast<int>(global_bfs(cell_sets(state)).size());
  int total = 0;
  for (const Piece& p : state.pieces()) total += piece_min(p.cells, state.model());
  return total;
}

std::vector<CutSegment> MinCutSolver::best_continuation(const DissectionState& state) const {
  check_cap(state.total_cells(), state.model());
  const std::size_t already = state.history().size();
  DissectionState current = state;
  if (!is_per_piece(state.model())) {
    for (const CutSegment& cut : global_bfs(cell_sets(state))) current = apply_cut(current, cut);
  } else {
    while (!current.finished()) {
      const Piece* piece = nullptr;
      for (const Piece& p : current.pieces()) {
        if (!p.is_unit()) {
          piece = &p;
          break;
        }
      }
      const int goal = piece_min(piece->cells, state.model());
      std::optional<CutSegment> chosen;
      for (const Candidate& c : piece_candidates(piece->cells, state.model())) {
        int total = 1;
        for (const CellSet& part : c.parts) total += piece_min(part, state.model());
        if (total == goal) {
          chosen = CutSegment{c.axis, c.line, c.lo, c.hi, piece->id};
          break;
        }
      }
      if (!chosen) throw std::logic_error("memoized minimum has no realizing cut");
      current = apply_cut(current, *chosen);
    }
  }
  return {current.history().begin() + static_cast<std::ptrdiff_t>(already), current.history().end()};
}

MinCutResult MinCutSolver::min_cuts(const Polyomino& p, CutModel model) const {
  check_cap(p.size(), model);
  MinCutResult result;
  result.witness = best_continuation(DissectionState::start(p, model));
  result.count = static_cast<int>(result.witness.size());
  return result;
}

MinCutResult min_cuts(const Polyomino& p, CutModel model, const SearchConfig& config) {
  return MinCutSolver(config).min_cuts(p, model);
}

int hint(const DissectionState& state, const SearchConfig& config) { return MinCutSolver(config).hint(state); }

int SurveyReport::flagged() const noexcept {
  return static_cast<int>(std::count_if(rows.begin(), rows.end(), [](const SurveyRow& r) { return !r.matches(); }));
}

std::string SurveyReport::to_csv() const {
  std::ostringstream out;
  out << "n,shape_key,min_cuts,n_minus_1,matches\n";
  for (const SurveyRow& r : rows) {
    out << r.n << ',' << r.shape_key.text << ',' << r.min_cuts << ',' << r.n_minus_1() << ','
        << (r.matches() ? "true" : "false") << '\n';
  }
  return out.str();
}

SurveyReport survey_conjecture(int n_max, CutModel model, const MinCutSolver& solver, int jobs) {
  const int cap = is_per_piece(model) ? solver.config().per_piece_cap : solver.config().global_cap;
  if (n_max < 1 || n_max > cap || n_max > poly::kDefaultEnumerationCap) {
    throw Error(ErrorCode::CapExceeded, "survey size " + std::to_string(n_max) + " exceeds the search cap");
  }
  std::vector<Polyomino> shapes;
  for (int n = 1; n <= n_max; ++n) {
    auto level = poly::enumerate_fixed(n);
    shapes.insert(shapes.end(), level.begin(), level.end());
  }

  std::vector<int> counts(shapes.size(), 0);
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < shapes.size(); i += stride) counts[i] = solver.min_cuts(shapes[i], model).count;
  };
  const std::size_t workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& t : pool) t.join();
  }

  SurveyReport report;
  report.model = model;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    const int n = static_cast<int>(shapes[i].size());
    report.rows.push_back(
        SurveyRow{n, poly::canonical_key(shapes[i], false), shapes[i], counts[i], poly::has_holes(shapes[i])});
    if (report.per_n.empty() || report.per_n.back().n != n) {
      report.per_n.push_back(SurveyAggregate{n, 0, 0, counts[i], counts[i]});
    }
    SurveyAggregate& agg = report.per_n.back();
    ++agg.shapes;
    if (counts[i] != n - 1) ++agg.flagged;
    agg.min_cuts_low = std::min(agg.min_cuts_low, counts[i]);
    agg.min_cuts_high = std::max(agg.min_cuts_high, counts[i]);
  }
  return report;
}

}  // namespace puzzlelab::dissect
