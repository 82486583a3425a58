#include <algorithm>
#include <chrono>
#include <limits>
#include <set>
#include <vector>

#include "doctest.h"
#include "puzzlelab/dissection.hpp"
#include "puzzlelab/error.hpp"

using namespace puzzlelab;
using namespace puzzlelab::dissect;
using poly::Cell;

namespace {

Polyomino shape(std::vector<Cell> cells) { return Polyomino::from_cells(cells); }

const Polyomino kDomino = shape({{0, 0}, {1, 0}});
const Polyomino kLTromino = shape({{0, 0}, {0, 1}, {1, 0}});
const Polyomino kSquare = shape({{0, 0}, {0, 1}, {1, 0}, {1, 1}});
const Polyomino kUPentomino = shape({{0, 0}, {1, 0}, {2, 0}, {0, 1}, {2, 1}});

Polyomino row(int n) {
  std::vector<Cell> cells;
  for (int x = 0; x < n; ++x) cells.push_back({x, 0});
  return shape(cells);
}

// Oracle: plain exhaustive recursion through the public move generator, no memo.
int naive_min(const DissectionState& state) {
  if (state.finished()) return 0;
  int best = std::numeric_limits<int>::max();
  for (const CutSegment& cut : legal_cuts(state)) best = std::min(best, 1 + naive_min(apply_cut(state, cut)));
  return best;
}

struct RawEdge {
  Cell a, b;
  friend auto operator<=>(const RawEdge&, const RawEdge&) = default;
};

int components(const std::vector<Cell>& cells, const std::set<RawEdge>& cut) {
  std::vector<int> label(cells.size(), -1);
  int next = 0;
  for (std::size_t s = 0; s < cells.size(); ++s) {
    if (label[s] >= 0) continue;
    std::vector<std::size_t> stack{s};
    label[s] = next;
    while (!stack.empty()) {
      const auto i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < cells.size(); ++j) {
        if (label[j] >= 0) continue;
        if (std::abs(cells[i].x - cells[j].x) + std::abs(cells[i].y - cells[j].y) != 1) continue;
        const RawEdge e = cells[i] < cells[j] ? RawEdge{cells[i], cells[j]} : RawEdge{cells[j], cells[i]};
        if (cut.count(e)) continue;
        label[j] = next;
        stack.push_back(j);
      }
    }
    ++next;
  }
  return next;
}

// Oracle: every segment [lo, hi] on every grid line near the piece, severing
// whichever unit edges it covers; keep distinct edge sets that leave exactly
// two parts with every severed edge between them.
std::size_t brute_single_split_count(const std::vector<Cell>& cells) {
  std::set<std::set<RawEdge>> found;
  auto has = [&cells](Cell c) { return std::find(cells.begin(), cells.end(), c) != cells.end(); };
  for (int vertical = 0; vertical < 2; ++vertical) {
    for (int line = -1; line <= 9; ++line) {
      for (int lo = -1; lo <= 9; ++lo) {
        for (int hi = lo + 1; hi <= 10; ++hi) {
          std::set<RawEdge> cut;
          for (int t = lo; t < hi; ++t) {
            const Cell a = vertical ? Cell{line - 1, t} : Cell{t, line - 1};
            const Cell b = vertical ? Cell{line, t} : Cell{t, line};
            if (has(a) && has(b)) cut.insert({a, b});
          }
          if (cut.empty() || components(cells, cut) != 2) continue;
          bool clean = true;
          for (const RawEdge& e : cut) {
            std::set<RawEdge> others = cut;
            others.erase(e);
            // A severed edge lies between the parts iff restoring it reconnects them.
            if (components(cells, others) != 1) clean = false;
          }
          if (clean) found.insert(cut);
        }
      }
    }
  }
  return found.size();
}

}  // namespace

TEST_CASE("cut model names") {
  CHECK(parse_cut_model("single-split") == CutModel::SingleSplit);
  CHECK(parse_cut_model("FULL_LINE") == CutModel::FullLine);
  CHECK(parse_cut_model("global") == CutModel::GlobalLine);
  CHECK_FALSE(parse_cut_model("diagonal").has_value());
  CHECK(to_string(CutModel::GlobalLine) == "GLOBAL_LINE");
}

TEST_CASE("legal cuts on the small shapes") {
  for (CutModel model : {CutModel::SingleSplit, CutModel::FullLine, CutModel::GlobalLine}) {
    const auto cuts = legal_cuts(DissectionState::start(kDomino, model));
    REQUIRE(cuts.size() == 1);
    CHECK(cuts[0].axis == Axis::Vertical);
    CHECK(cuts[0].line == 1);
    CHECK(cuts[0].lo == 0);
    CHECK(cuts[0].hi == 1);
    CHECK(cuts[0].is_global() == (model == CutModel::GlobalLine));
    CHECK(legal_cuts(DissectionState::start(shape({{4, 4}}), model)).empty());
  }

  const auto square = legal_cuts(DissectionState::start(kSquare, CutModel::SingleSplit));
  CHECK(brute_single_split_count(kSquare.cells()) == 2);
  REQUIRE(square.size() == 2);
  CHECK(square[0] == CutSegment{Axis::Horizontal, 1, 0, 2, PieceId{0}});
  CHECK(square[1] == CutSegment{Axis::Vertical, 1, 0, 2, PieceId{0}});
}

TEST_CASE("single-split move generator agrees with segment oracle") {
  for (int n = 2; n <= 5; ++n) {
    for (const Polyomino& p : poly::enumerate_fixed(n)) {
      CAPTURE(poly::canonical_key(p, false).text);
      CHECK(legal_cuts(DissectionState::start(p, CutModel::SingleSplit)).size() ==
            brute_single_split_count(p.cells()));
    }
  }
}

TEST_CASE("apply_cut") {
  SUBCASE("domino") {
    const auto start = DissectionState::start(kDomino, CutModel::SingleSplit);
    const auto done = apply_cut(start, CutSegment{Axis::Vertical, 1, 0, 1, PieceId{0}});
    CHECK(done.pieces().size() == 2);
    CHECK(done.finished());
    CHECK(done.history().size() == 1);
    CHECK(start.pieces().size() == 1);
    CHECK(start.history().empty());
  }
  SUBCASE("U-pentomino full line yields three pieces") {
    const auto start = DissectionState::start(kUPentomino, CutModel::FullLine);
    const auto next = apply_cut(start, CutSegment{Axis::Horizontal, 1, -50, 50, PieceId{0}});
    REQUIRE(next.pieces().size() == 3);
    CHECK(next.pieces()[0].cells == std::vector<Cell>{{0, 0}, {1, 0}, {2, 0}});
    CHECK(next.pieces()[1].cells == std::vector<Cell>{{0, 1}});
    CHECK(next.pieces()[2].cells == std::vector<Cell>{{2, 1}});
    CHECK(next.history().back() == CutSegment{Axis::Horizontal, 1, 0, 3, PieceId{0}});
    CHECK(next.total_cells() == 5);
  }
  SUBCASE("global line through two stacked dominoes") {
    auto state = DissectionState::start(kSquare, CutModel::GlobalLine);
    state = apply_cut(state, CutSegment{Axis::Horizontal, 1, 0, 2, std::nullopt});
    REQUIRE(state.pieces().size() == 2);
    const auto done = apply_cut(state, CutSegment{Axis::Vertical, 1, 0, 2, std::nullopt});
    CHECK(done.pieces().size() == 4);
    CHECK(done.finished());
  }
  SUBCASE("errors") {
    const auto single = DissectionState::start(kSquare, CutModel::SingleSplit);
    try {
      apply_cut(single, CutSegment{Axis::Vertical, 1, 0, 1, PieceId{0}});
      FAIL("partial cut through a cycle must be illegal");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::IllegalCut);
    }
    try {
      apply_cut(single, CutSegment{Axis::Vertical, 1, 0, 2, std::nullopt});
      FAIL("global cut under a per-piece model");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::WrongModel);
    }
    const auto global = DissectionState::start(kSquare, CutModel::GlobalLine);
    try {
      apply_cut(global, CutSegment{Axis::Vertical, 1, 0, 2, PieceId{0}});
      FAIL("piece cut under the global model");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::WrongModel);
    }
    CHECK_THROWS_AS(apply_cut(single, CutSegment{Axis::Vertical, 1, 0, 2, PieceId{7}}), Error);
    CHECK_THROWS_AS(apply_cut(single, CutSegment{Axis::Vertical, 5, 0, 2, PieceId{0}}), Error);
    const auto full = DissectionState::start(kUPentomino, CutModel::FullLine);
    CHECK_THROWS_AS(apply_cut(full, CutSegment{Axis::Horizontal, 1, 0, 1, PieceId{0}}), Error);
  }
}

TEST_CASE("greedy dissection") {
  CHECK(greedy_dissect(kDomino).size() == 1);
  CHECK(greedy_dissect(kLTromino).size() == 2);
  const auto row_cuts = greedy_dissect(row(5));
  REQUIRE(row_cuts.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(row_cuts[static_cast<std::size_t>(i)].axis == Axis::Vertical);
    CHECK(row_cuts[static_cast<std::size_t>(i)].line == i + 1);
  }
  CHECK(greedy_dissect(kSquare).size() == 3);
  for (int n = 1; n <= 6; ++n) {
    for (const Polyomino& p : poly::enumerate_fixed(n)) {
      const auto cuts = greedy_dissect(p);
      CHECK(cuts.size() == static_cast<std::size_t>(n - 1));
      const auto end = replay(p, CutModel::SingleSplit, cuts);
      CHECK(end.finished());
      CHECK(end.pieces().size() == static_cast<std::size_t>(n));
    }
  }
}

TEST_CASE("lower bound") {
  CHECK(single_split_lower_bound(kDomino) == 1);
  CHECK(single_split_lower_bound(shape({{0, 0}})) == 0);
  CHECK(single_split_lower_bound(row(7)) == 6);
}

TEST_CASE("naive exhaustive search values") {
  CHECK(naive_min(DissectionState::start(kSquare, CutModel::SingleSplit)) == 3);
  CHECK(naive_min(DissectionState::start(kUPentomino, CutModel::FullLine)) == 3);
  CHECK(naive_min(DissectionState::start(kSquare, CutModel::GlobalLine)) == 2);
}

TEST_CASE("min_cuts examples") {
  MinCutSolver solver;
  for (CutModel model : {CutModel::SingleSplit, CutModel::FullLine, CutModel::GlobalLine}) {
    const auto mono = solver.min_cuts(shape({{0, 0}}), model);
    CHECK(mono.count == 0);
    CHECK(mono.witness.empty());
  }
  CHECK(solver.min_cuts(kSquare, CutModel::SingleSplit).count == 3);
  CHECK(solver.min_cuts(kUPentomino, CutModel::FullLine).count == 3);
  const auto global = solver.min_cuts(kSquare, CutModel::GlobalLine);
  CHECK(global.count == 2);
  CHECK(replay(kSquare, CutModel::GlobalLine, global.witness).finished());
  CHECK(solver.min_cuts(kLTromino, CutModel::SingleSplit).count == 2);
}

TEST_CASE("memoized solver matches naive search for n <= 4") {
  MinCutSolver solver;
  for (CutModel model : {CutModel::SingleSplit, CutModel::FullLine, CutModel::GlobalLine}) {
    for (int n = 1; n <= 4; ++n) {
      for (const Polyomino& p : poly::enumerate_fixed(n)) {
        const auto start = DissectionState::start(p, model);
        CHECK(solver.min_cuts(p, model).count == naive_min(start));
      }
    }
  }
}

TEST_CASE("model ordering, witness replay and area conservation") {
  MinCutSolver solver;
  for (int n = 1; n <= 6; ++n) {
    for (const Polyomino& p : poly::enumerate_fixed(n)) {
      const auto single = solver.min_cuts(p, CutModel::SingleSplit);
      const auto full = solver.min_cuts(p, CutModel::FullLine);
      const auto global = solver.min_cuts(p, CutModel::GlobalLine);
      CHECK(single.count == n - 1);
      CHECK(full.count <= single.count);
      CHECK(global.count <= full.count);
      for (const auto& [model, result] : {std::pair{CutModel::SingleSplit, &single},
                                          std::pair{CutModel::FullLine, &full},
                                          std::pair{CutModel::GlobalLine, &global}}) {
        auto state = DissectionState::start(p, model);
        std::size_t pieces = 1;
        for (const CutSegment& cut : result->witness) {
          state = apply_cut(state, cut);
          CHECK(state.pieces().size() > pieces);
          pieces = state.pieces().size();
          CHECK(state.total_cells() == static_cast<std::size_t>(n));
          if (model == CutModel::SingleSplit) CHECK(pieces == 1 + state.history().size());
        }
        CHECK(state.finished());
        CHECK(state.pieces().size() == static_cast<std::size_t>(n));
        CHECK(static_cast<int>(result->witness.size()) == result->count);
      }
    }
  }
}

TEST_CASE("hint") {
  MinCutSolver solver;
  CHECK(solver.hint(DissectionState::start(kDomino, CutModel::SingleSplit)) == 1);
  CHECK(solver.hint(DissectionState::start(kUPentomino, CutModel::FullLine)) == 3);
  auto state = DissectionState::start(kUPentomino, CutModel::FullLine);
  state = apply_cut(state, CutSegment{Axis::Horizontal, 1, 0, 3, PieceId{0}});
  CHECK(solver.hint(state) == 2);
  const auto done = replay(kDomino, CutModel::SingleSplit, greedy_dissect(kDomino));
  CHECK(solver.hint(done) == 0);

  auto global = DissectionState::start(kSquare, CutModel::GlobalLine);
  CHECK(solver.hint(global) == 2);
  global = apply_cut(global, CutSegment{Axis::Horizontal, 1, 0, 2, std::nullopt});
  CHECK(solver.hint(global) == 1);
  const auto rest = solver.best_continuation(global);
  REQUIRE(rest.size() == 1);
  CHECK(apply_cut(global, rest[0]).finished());
}

TEST_CASE("caps are configuration") {
  MinCutSolver small(SearchConfig{3, 2});
  CHECK_THROWS_AS(small.min_cuts(kSquare, CutModel::SingleSplit), Error);
  CHECK_THROWS_AS(small.min_cuts(kLTromino, CutModel::GlobalLine), Error);
  CHECK(small.min_cuts(kLTromino, CutModel::SingleSplit).count == 2);
  MinCutSolver wide(SearchConfig{8, 7});
  CHECK_NOTHROW(wide.min_cuts(row(7), CutModel::GlobalLine));
  CHECK_THROWS_AS(min_cuts(row(7), CutModel::GlobalLine), Error);
}

TEST_CASE("survey") {
  MinCutSolver solver;
  const auto three = survey_conjecture(3, CutModel::SingleSplit, solver);
  CHECK(three.rows.size() == 1 + 2 + 6);
  CHECK(three.flagged() == 0);

  const auto two = survey_conjecture(2, CutModel::FullLine, solver);
  CHECK(two.flagged() == 0);

  const auto five = survey_conjecture(5, CutModel::FullLine, solver);
  const auto u_key = poly::canonical_key(kUPentomino, false);
  const auto u_row = std::find_if(five.rows.begin(), five.rows.end(),
                                  [&](const SurveyRow& r) { return r.shape_key == u_key; });
  REQUIRE(u_row != five.rows.end());
  CHECK_FALSE(u_row->matches());
  CHECK(u_row->min_cuts == 3);
  CHECK(five.flagged() >= 1);
  REQUIRE(five.per_n.size() == 5);
  CHECK(five.per_n[4].shapes == 63);

  const std::string csv = five.to_csv();
  CHECK(csv.rfind("n,shape_key,min_cuts,n_minus_1,matches\n", 0) == 0);
  CHECK(csv.find("5,#.#/###,3,4,false\n") != std::string::npos);

  const auto parallel = survey_conjecture(5, CutModel::FullLine, MinCutSolver{}, 4);
  CHECK(parallel.to_csv() == csv);

  CHECK_THROWS_AS(survey_conjecture(7, CutModel::GlobalLine, solver), Error);
}
