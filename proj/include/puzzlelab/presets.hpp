#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "puzzlelab/polyomino.hpp"

namespace puzzlelab::presets {

struct Preset {
  std::string name;
  std::string description;
  poly::Polyomino shape;
};

/// domino, l-tromino, square-tetromino, u-pentomino, plus row-3 .. row-8.
const std::vector<Preset>& catalog();

/// Looks up a catalog name, its aliases ("2x2", "square"), or "row-N" for any
/// N >= 1.
std::optional<poly::Polyomino> find(std::string_view name);

}  // namespace puzzlelab::presets
