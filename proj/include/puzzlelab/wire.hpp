#pragma once

// JSON encodings shared by the CLI and the HTTP service.

#include <nlohmann/json.hpp>

#include "puzzlelab/combinatorics.hpp"
#include "puzzlelab/dissection.hpp"
#include "puzzlelab/polyomino.hpp"

namespace puzzlelab::wire {

using nlohmann::json;

json cells_json(const std::vector<poly::Cell>& cells);
json polyomino_json(const poly::Polyomino& p);

std::string piece_label(dissect::PieceId id);

/// {"target": "p<k>"|"GLOBAL", "axis": "H"|"V", "line": int, "span": [lo, hi]}
json cut_json(const dissect::CutSegment& cut);
/// Throws Error{ParseError} on malformed input. Targets "p3" and "3" are both accepted.
dissect::CutSegment cut_from_json(const json& j);

json pieces_json(const dissect::DissectionState& state);
json cuts_json(const std::vector<dissect::CutSegment>& cuts);

json squares_json(const std::vector<comb::Square>& squares);
json hanoi_moves_json(const std::vector<comb::HanoiMove>& moves);

}  // namespace puzzlelab::wire
