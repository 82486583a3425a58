#include "puzzlelab/polyomino.hpp"

#include <algorithm>
#include <array>
#include <iterator>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "puzzlelab/error.hpp"

namespace puzzlelab::poly {

namespace {

constexpr std::array<Cell, 4> kSteps{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

bool contains_sorted(std::span<const Cell> sorted, Cell c) {
  return std::binary_search(sorted.begin(), sorted.end(), c);
}

std::size_t index_of(std::span<const Cell> sorted, Cell c) {
  return static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), c) - sorted.begin());
}

Cell transform(Cell c, int symmetry) {
  // symmetry bit 2 mirrors x; bits 0-1 pick a quarter turn count.
  Cell r = (symmetry & 4) ? Cell{-c.x, c.y} : c;
  for (int i = 0; i < (symmetry & 3); ++i) r = Cell{-r.y, r.x};
  return r;
}

std::string picture(std::span<const Cell> normalized_sorted) {
  int w = 0;
  int h = 0;
  for (const Cell& c : normalized_sorted) {
    w = std::max(w, c.x + 1);
    h = std::max(h, c.y + 1);
  }
  std::string out;
  out.reserve(static_cast<std::size_t>((w + 1) * h));
  for (int y = h - 1; y >= 0; --y) {
    for (int x = 0; x < w; ++x) out.push_back(contains_sorted(normalized_sorted, {x, y}) ? '#' : '.');
    if (y > 0) out.push_back('/');
  }
  return out;
}

}  // namespace

Cell operator+(Cell a, Cell b) { return {a.x + b.x, a.y + b.y}; }

std::vector<Cell> sorted_unique(std::span<const Cell> cells) {
  std::vector<Cell> out(cells.begin(), cells.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::vector<Cell>> connected_components(std::span<const Cell> sorted_cells) {
  std::vector<std::vector<Cell>> components;
  std::vector<bool> seen(sorted_cells.size(), false);
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < sorted_cells.size(); ++start) {
    if (seen[start]) continue;
    std::vector<Cell> component;
    seen[start] = true;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      component.push_back(sorted_cells[i]);
      for (const Cell& step : kSteps) {
        const Cell next = sorted_cells[i] + step;
        if (!contains_sorted(sorted_cells, next)) continue;
        const std::size_t j = index_of(sorted_cells, next);
        if (!seen[j]) {
          seen[j] = true;
          stack.push_back(j);
        }
      }
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  return components;
}

bool is_connected(std::span<const Cell> sorted_cells) {
  return connected_components(sorted_cells).size() <= 1;
}

std::vector<InternalEdge> internal_edges(std::span<const Cell> sorted_cells) {
  std::vector<InternalEdge> edges;
  for (const Cell& c : sorted_cells) {
    // Only the +x and +y neighbours, so each pair is emitted once with a < b.
    for (const Cell step : {Cell{1, 0}, Cell{0, 1}}) {
      const Cell next = c + step;
      if (contains_sorted(sorted_cells, next)) edges.push_back({c, next});
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

std::vector<Cell> normalize(std::span<const Cell> cells) {
  if (cells.empty()) return {};
  int min_x = std::numeric_limits<int>::max();
  int min_y = std::numeric_limits<int>::max();
  for (const Cell& c : cells) {
    min_x = std::min(min_x, c.x);
    min_y = std::min(min_y, c.y);
  }
  std::vector<Cell> out;
  out.reserve(cells.size());
  for (const Cell& c : cells) out.push_back({c.x - min_x, c.y - min_y});
  std::sort(out.begin(), out.end());
  return out;
}

Polyomino Polyomino::from_cells(std::span<const Cell> cells) {
  if (cells.empty()) throw Error(ErrorCode::EmptyInput, "polyomino has no cells");
  std::vector<Cell> unique = sorted_unique(cells);
  if (unique.size() != cells.size()) {
    throw Error(ErrorCode::DuplicateCell, "polyomino lists the same cell twice");
  }
  if (!is_connected(unique)) {
    throw Error(ErrorCode::Disconnected, "cells are not 4-connected");
  }
  return Polyomino(normalize(unique));
}

Polyomino Polyomino::from_pairs(std::span<const std::pair<int, int>> pairs) {
  std::vector<Cell> cells;
  cells.reserve(pairs.size());
  for (const auto& [x, y] : pairs) cells.push_back({x, y});
  return from_cells(cells);
}

int Polyomino::width() const noexcept {
  int w = 0;
  for (const Cell& c : cells_) w = std::max(w, c.x + 1);
  return w;
}

int Polyomino::height() const noexcept {
  int h = 0;
  for (const Cell& c : cells_) h = std::max(h, c.y + 1);
  return h;
}

bool Polyomino::contains(Cell c) const { return contains_sorted(cells_, c); }

DualGraph dual_graph(const Polyomino& p) {
  return DualGraph{p.cells(), internal_edges(p.cells())};
}

bool has_holes(const Polyomino& p) {
  // Flood the empty cells of the bounding box grown by one; anything missed is enclosed.
  const int w = p.width() + 2;
  const int h = p.height() + 2;
  std::vector<bool> reached(static_cast<std::size_t>(w * h), false);
  auto at = [w](int x, int y) { return static_cast<std::size_t>(y * w + x); };
  auto filled = [&p](int x, int y) { return p.contains({x - 1, y - 1}); };
  std::vector<Cell> stack{{0, 0}};
  reached[at(0, 0)] = true;
  while (!stack.empty()) {
    const Cell c = stack.back();
    stack.pop_back();
    for (const Cell& step : kSteps) {
      const Cell n = c + step;
      if (n.x < 0 || n.y < 0 || n.x >= w || n.y >= h) continue;
      if (reached[at(n.x, n.y)] || filled(n.x, n.y)) continue;
      reached[at(n.x, n.y)] = true;
      stack.push_back(n);
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!filled(x, y) && !reached[at(x, y)]) return true;
    }
  }
  return false;
}

std::vector<std::vector<Cell>> dihedral_images(std::span<const Cell> cells) {
  std::vector<std::vector<Cell>> images;
  images.reserve(8);
  std::vector<Cell> moved(cells.size());
  for (int s = 0; s < 8; ++s) {
    std::transform(cells.begin(), cells.end(), moved.begin(), [s](Cell c) { return transform(c, s); });
    images.push_back(normalize(moved));
  }
  return images;
}

ShapeKey canonical_key(std::span<const Cell> cells, bool up_to_symmetry) {
  if (!up_to_symmetry) return ShapeKey{picture(normalize(cells))};
  ShapeKey best;
  bool first = true;
  for (const auto& image : dihedral_images(cells)) {
    ShapeKey candidate{picture(image)};
    if (first || candidate < best) {
      best = std::move(candidate);
      first = false;
    }
  }
  return best;
}

ShapeKey canonical_key(const Polyomino& p, bool up_to_symmetry) {
  return canonical_key(p.cells(), up_to_symmetry);
}

std::vector<Polyomino> enumerate_fixed(int n, int cap) {
  if (n < 1 || n > cap) {
    throw Error(ErrorCode::CapExceeded,
                "enumeration size " + std::to_string(n) + " outside [1, " + std::to_string(cap) + "]");
  }
  // Grow every (k-1)-cell shape by one neighbouring cell; normalized sorted
  // cell lists dedupe translations and give the lexicographic order directly.
  std::set<std::vector<Cell>> level{{Cell{0, 0}}};
  for (int k = 2; k <= n; ++k) {
    std::set<std::vector<Cell>> next;
    for (const auto& shape : level) {
      for (const Cell& c : shape) {
        for (const Cell& step : kSteps) {
          const Cell added = c + step;
          if (contains_sorted(shape, added)) continue;
          std::vector<Cell> grown = shape;
          grown.push_back(added);
          next.insert(normalize(grown));
        }
      }
    }
    level = std::move(next);
  }
  std::vector<Polyomino> out;
  out.reserve(level.size());
  for (const auto& shape : level) out.push_back(Polyomino::from_cells(shape));
  return out;
}

Polyomino parse_ascii(std::string_view text) {
  std::vector<std::string> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
    if (line.empty()) continue;
    for (char ch : line) {
      if (ch != '#' && ch != '.' && ch != ' ') {
        throw Error(ErrorCode::ParseError, std::string("unexpected character '") + ch + "' in ASCII polyomino");
      }
    }
    rows.push_back(line);
  }
  std::vector<Cell> cells;
  const int height = static_cast<int>(rows.size());
  for (int r = 0; r < height; ++r) {
    const std::string& row = rows[static_cast<std::size_t>(r)];
    for (std::size_t x = 0; x < row.size(); ++x) {
      if (row[x] == '#') cells.push_back({static_cast<int>(x), height - 1 - r});
    }
  }
  return Polyomino::from_cells(cells);
}

std::string to_ascii(const Polyomino& p) {
  std::string out = picture(p.cells());
  std::replace(out.begin(), out.end(), '/', '\n');
  out.push_back('\n');
  return out;
}

Polyomino parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!doc.is_object() || !doc.contains("cells") || !doc["cells"].is_array()) {
    throw Error(ErrorCode::ParseError, "expected {\"cells\": [[x,y], ...]}");
  }
  std::vector<Cell> cells;
  for (const auto& pair : doc["cells"]) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number_integer()) {
      throw Error(ErrorCode::ParseError, "each cell must be an integer pair [x, y]");
    }
    cells.push_back({pair[0].get<int>(), pair[1].get<int>()});
  }
  return Polyomino::from_cells(cells);
}

std::string to_json(const Polyomino& p) {
  nlohmann::json cells = nlohmann::json::array();
  for (const Cell& c : p.cells()) cells.push_back({c.x, c.y});
  return nlohmann::json{{"cells", cells}}.dump();
}

Polyomino parse_any(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return parse_json(text);
  return parse_ascii(text);
}

}  // namespace puzzlelab::poly
