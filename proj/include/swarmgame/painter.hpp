#pragma once

// Gesture strokes -> target density over the arena.
//
// Strokes are stamped onto a signed "raw" layer (attract +1, repel -1 per
// covered cell), the raw layer is blurred with an isotropic Gaussian, floored
// at a small positive value and normalized so the cells sum to one. The raw
// layer persists between commands so new drawings overlay old ones.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "swarmgame/grid.hpp"

namespace swarmgame {

enum class Brush : std::uint8_t { Attract, Repel };

struct Stroke {
  Brush brush = Brush::Attract;
  double radius = 0.03;
  std::vector<Vec2> points;

  void validate() const;  // throws std::invalid_argument
  bool operator==(const Stroke&) const = default;
};

struct PainterConfig {
  int grid_size = 50;
  double sigma_cells = 1.5;
  double truncate_sigmas = 4.0;
  double floor = 1e-6;
};

struct TargetDistribution {
  Grid density;
  std::uint64_t generation = 0;

  /// Uniform density on a size x size grid.
  static TargetDistribution uniform(int size, std::uint64_t generation = 0);
  /// Cells strictly positive and summing to 1 within 1e-9. The floor is
  /// applied before normalization, so cells may sit below it afterwards.
  void validate() const;
};

/// Signed raw layer: base (or zeros) plus one +/-1 stamp per stroke on every
/// cell whose center lies within `radius` of the stroke's polyline.
Grid rasterize(std::span<const Stroke> strokes, const Grid* base, int grid_size);

/// Cells covered by a single stroke, as a 0/1 mask.
std::vector<bool> stroke_coverage(const Stroke& s, int grid_size);

/// Distance from p to segment ab.
double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

/// Blur, floor and normalize a raw layer into a density.
TargetDistribution smooth_and_normalize(const Grid& raw, const PainterConfig& cfg = {},
                                        std::uint64_t generation = 0);

/// Normalized 1-D Gaussian taps, index 0 is the center tap.
std::vector<double> gaussian_taps(double sigma_cells, double truncate_sigmas);

/// Half-sample symmetric reflection of an index into [0, n).
int reflect_index(int i, int n);

}  // namespace swarmgame
