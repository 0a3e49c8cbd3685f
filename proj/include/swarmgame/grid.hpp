#pragma once

#include <algorithm>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "swarmgame/core.hpp"

namespace swarmgame {

/// Square G x G field over the unit arena, row-major. Row r covers
/// y in [r/G, (r+1)/G), column c covers x in [c/G, (c+1)/G).
class Grid {
 public:
  Grid() = default;
  explicit Grid(int size, double fill = 0.0)
      : size_(size), cells_(static_cast<std::size_t>(size) * static_cast<std::size_t>(size), fill) {}

  int size() const { return size_; }
  std::size_t count() const { return cells_.size(); }

  double& at(int row, int col) { return cells_[offset(row, col)]; }
  double at(int row, int col) const { return cells_[offset(row, col)]; }
  double& operator[](std::size_t i) { return cells_[i]; }
  double operator[](std::size_t i) const { return cells_[i]; }

  std::span<double> values() { return cells_; }
  std::span<const double> values() const { return cells_; }

  double max() const { return cells_.empty() ? 0.0 : *std::max_element(cells_.begin(), cells_.end()); }
  double sum() const;

  /// Center of cell (row, col) in arena coordinates.
  Vec2 center(int row, int col) const {
    return {(col + 0.5) / size_, (row + 0.5) / size_};
  }

  bool operator==(const Grid&) const = default;

 private:
  std::size_t offset(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(size_) +
           static_cast<std::size_t>(col);
  }

  int size_ = 0;
  std::vector<double> cells_;
};

struct CellIndex {
  int row = 0;
  int col = 0;
  bool operator==(const CellIndex&) const = default;
};

/// Cell containing s; points on the far walls map to the last row/column.
CellIndex cell_of(Vec2 s, int size);

/// Plain-text grid: `size` lines of `size` space-separated reals.
void write_grid(std::ostream& os, const Grid& g);
Grid read_grid(std::istream& is);  // throws std::runtime_error

}  // namespace swarmgame
