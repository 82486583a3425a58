#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace puzzlelab::poly {

struct Cell {
  int x = 0;
  int y = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

Cell operator+(Cell a, Cell b);

// Cells sharing an edge; `a < b` always holds for values produced here.
struct InternalEdge {
  Cell a;
  Cell b;

  friend auto operator<=>(const InternalEdge&, const InternalEdge&) = default;
};

struct DualGraph {
  std::vector<Cell> nodes;
  std::vector<InternalEdge> edges;
};

// Opaque comparable shape key. The text is a row picture, top row first,
// rows separated by '/': the L-tromino {(0,0),(1,0),(0,1)} is "#./##".
struct ShapeKey {
  std::string text;

  friend auto operator<=>(const ShapeKey&, const ShapeKey&) = default;
};

/// A finite, 4-connected, duplicate-free set of unit cells, normalized so the
/// minimum x and minimum y are both zero. Cells are kept sorted, which makes
/// equality structural.
class Polyomino {
 public:
  /// Validates and normalizes. Throws Error{EmptyInput|DuplicateCell|Disconnected}.
  static Polyomino from_cells(std::span<const Cell> cells);
  static Polyomino from_pairs(std::span<const std::pair<int, int>> pairs);

  const std::vector<Cell>& cells() const noexcept { return cells_; }
  std::size_t size() const noexcept { return cells_.size(); }
  int width() const noexcept;
  int height() const noexcept;
  bool contains(Cell c) const;

  friend bool operator==(const Polyomino&, const Polyomino&) = default;
  friend auto operator<=>(const Polyomino&, const Polyomino&) = default;

 private:
  explicit Polyomino(std::vector<Cell> cells) : cells_(std::move(cells)) {}
  std::vector<Cell> cells_;
};

// Free helpers over raw (possibly un-normalized) cell sets. They are shared by
// the dissection engine, whose pieces keep absolute coordinates.
std::vector<Cell> sorted_unique(std::span<const Cell> cells);
bool is_connected(std::span<const Cell> sorted_cells);
std::vector<std::vector<Cell>> connected_components(std::span<const Cell> sorted_cells);
std::vector<InternalEdge> internal_edges(std::span<const Cell> sorted_cells);
std::vector<Cell> normalize(std::span<const Cell> cells);

DualGraph dual_graph(const Polyomino& p);

/// True when some empty cell is enclosed by the shape (not reachable from
/// outside the bounding box by 4-steps through empty cells).
bool has_holes(const Polyomino& p);

ShapeKey canonical_key(const Polyomino& p, bool up_to_symmetry);
ShapeKey canonical_key(std::span<const Cell> cells, bool up_to_symmetry);

/// The 8 dihedral images of a cell set, each normalized and sorted. Index 0 is
/// the identity.
std::vector<std::vector<Cell>> dihedral_images(std::span<const Cell> cells);

inline constexpr int kDefaultEnumerationCap = 8;

/// All fixed polyominoes with n cells in lexicographic order of their sorted
/// cell lists. Throws Error{CapExceeded} when n is outside [1, cap].
std::vector<Polyomino> enumerate_fixed(int n, int cap = kDefaultEnumerationCap);

// Text formats. JSON: {"cells": [[x,y], ...]}. ASCII: '#' cell, '.' empty,
// rows top to bottom (the first row has the largest y).
Polyomino parse_ascii(std::string_view text);
std::string to_ascii(const Polyomino& p);
Polyomino parse_json(std::string_view text);
std::string to_json(const Polyomino& p);
/// Detects the format from the first non-blank character.
Polyomino parse_any(std::string_view text);

}  // namespace puzzlelab::poly
