#include "puzzlelab/wire.hpp"

#include <charconv>

#include "puzzlelab/error.hpp"

namespace puzzlelab::wire {

json cells_json(const std::vector<poly::Cell>& cells) {
  json out = json::array();
  for (const poly::Cell& c : cells) out.push_back({c.x, c.y});
  return out;
}

json polyomino_json(const poly::Polyomino& p) { return json{{"cells", cells_json(p.cells())}}; }

std::string piece_label(dissect::PieceId id) { return "p" + std::to_string(id); }

json cut_json(const dissect::CutSegment& cut) {
  return json{{"target", cut.target ? piece_label(*cut.target) : std::string("GLOBAL")},
              {"axis", cut.axis == dissect::Axis::Horizontal ? "H" : "V"},
              {"line", cut.line},
              {"span", {cut.lo, cut.hi}}};
}

dissect::CutSegment cut_from_json(const json& j) {
  auto fail = [](const std::string& why) -> dissect::CutSegment {
    throw Error(ErrorCode::ParseError, "bad cut: " + why);
  };
  if (!j.is_object()) return fail("expected an object");
  dissect::CutSegment cut;

  if (!j.contains("target") || !j["target"].is_string()) return fail("target must be a string");
  const std::string target = j["target"].get<std::string>();
  if (target != "GLOBAL") {
    std::string_view digits = target;
    if (!digits.empty() && (digits.front() == 'p' || digits.front() == 'P')) digits.remove_prefix(1);
    dissect::PieceId id = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), id);
    if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size()) {
      return fail("unknown target '" + target + "'");
    }
    cut.target = id;
  }

  if (!j.contains("axis") || !j["axis"].is_string()) return fail("axis must be \"H\" or \"V\"");
  const std::string axis = j["axis"].get<std::string>();
  if (axis == "H") {
    cut.axis = dissect::Axis::Horizontal;
  } else if (axis == "V") {
    cut.axis = dissect::Axis::Vertical;
  } else {
    return fail("axis must be \"H\" or \"V\"");
  }

  if (!j.contains("line") || !j["line"].is_number_integer()) return fail("line must be an integer");
  cut.line = j["line"].get<int>();

  if (!j.contains("span") || !j["span"].is_array() || j["span"].size() != 2 || !j["span"][0].is_number_integer() ||
      !j["span"][1].is_number_integer()) {
    return fail("span must be [lo, hi]");
  }
  cut.lo = j["span"][0].get<int>();
  cut.hi = j["span"][1].get<int>();
  if (cut.lo >= cut.hi) return fail("span needs lo < hi");
  return cut;
}

json pieces_json(const dissect::DissectionState& state) {
  json out = json::array();
  for (const dissect::Piece& p : state.pieces()) {
    out.push_back(json{{"id", piece_label(p.id)}, {"cells", cells_json(p.cells)}});
  }
  return out;
}

json cuts_json(const std::vector<dissect::CutSegment>& cuts) {
  json out = json::array();
  for (const auto& c : cuts) out.push_back(cut_json(c));
  return out;
}

json squares_json(const std::vector<comb::Square>& squares) {
  json out = json::array();
  for (const comb::Square& s : squares) out.push_back({s.row, s.col});
  return out;
}

json hanoi_moves_json(const std::vector<comb::HanoiMove>& moves) {
  json out = json::array();
  for (const comb::HanoiMove& m : moves) out.push_back({m.from_rod, m.to_rod});
  return out;
}

}  // namespace puzzlelab::wire
