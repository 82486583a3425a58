#include "puzzlelab/presets.hpp"

#include <cctype>
#include <charconv>

namespace puzzlelab::presets {

namespace {

poly::Polyomino row(int n) {
  std::vector<poly::Cell> cells;
  for (int x = 0; x < n; ++x) cells.push_back({x, 0});
  return poly::Polyomino::from_cells(cells);
}

std::vector<Preset> build() {
  using poly::Polyomino;
  std::vector<Preset> out{
      {"domino", "1x2 domino", Polyomino::from_cells(std::vector<poly::Cell>{{0, 0}, {1, 0}})},
      {"l-tromino", "three cells in an L", Polyomino::from_cells(std::vector<poly::Cell>{{0, 0}, {1, 0}, {0, 1}})},
      {"square-tetromino", "2x2 square",
       Polyomino::from_cells(std::vector<poly::Cell>{{0, 0}, {1, 0}, {0, 1}, {1, 1}})},
      {"u-pentomino", "U shape, open at the top",
       Polyomino::from_cells(std::vector<poly::Cell>{{0, 0}, {1, 0}, {2, 0}, {0, 1}, {2, 1}})},
  };
  for (int n = 3; n <= 8; ++n) {
    out.push_back({"row-" + std::to_string(n), "1x" + std::to_string(n) + " straight row", row(n)});
  }
  return out;
}

}  // namespace

const std::vector<Preset>& catalog() {
  static const std::vector<Preset> presets = build();
  return presets;
}

std::optional<poly::Polyomino> find(std::string_view name) {
  std::string key;
  for (char ch : name) key.push_back(ch == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (key == "2x2" || key == "square" || key == "o-tetromino") key = "square-tetromino";
  if (key == "l") key = "l-tromino";
  if (key == "u") key = "u-pentomino";
  for (const Preset& p : catalog()) {
    if (p.name == key) return p.shape;
  }
  if (key.rfind("row-", 0) == 0) {
    int n = 0;
    const char* first = key.data() + 4;
    const char* last = key.data() + key.size();
    auto [ptr, ec] = std::from_chars(first, last, n);
    if (ec == std::errc{} && ptr == last && n >= 1 && n <= 64) return row(n);
  }
  return std::nullopt;
}

}  // namespace puzzlelab::presets
