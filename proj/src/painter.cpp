#include "swarmgame/painter.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "swarmgame/kernels.hpp"

namespace swarmgame {

void Stroke::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("stroke radius must be positive");
  if (points.empty()) throw std::invalid_argument("stroke has no points");
  for (const Vec2& p : points) {
    if (!p.finite() || p.x < 0.0 || p.x > 1.0 || p.y < 0.0 || p.y > 1.0) {
      throw std::invalid_argument("stroke point outside [0,1]^2");
    }
  }
}

TargetDistribution TargetDistribution::uniform(int size, std::uint64_t generation) {
  const double v = 1.0 / (static_cast<double>(size) * size);
  return {Grid(size, v), generation};
}

void TargetDistribution::validate() const {
  double s = 0.0;
  for (double v : density.values()) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("density cell not strictly positive");
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-9) throw std::invalid_argument("density does not sum to 1");
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = ab.dot(ab);
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + ab * t)).norm();
}

std::vector<bool> stroke_coverage(const Stroke& s, int grid_size) {
  std::vector<bool> mask(static_cast<std::size_t>(grid_size) * static_cast<std::size_t>(grid_size), false);
  const double cell = 1.0 / grid_size;
  auto stamp_segment = [&](Vec2 a, Vec2 b) {
    // Only visit cells inside the segment's padded bounding box.
    const double lo_x = std::min(a.x, b.x) - s.radius, hi_x = std::max(a.x, b.x) + s.radius;
    const double lo_y = std::min(a.y, b.y) - s.radius, hi_y = std::max(a.y, b.y) + s.radius;
    const int c0 = std::max(0, static_cast<int>(std::floor(lo_x / cell - 0.5)));
    const int c1 = std::min(grid_size - 1, static_cast<int>(std::ceil(hi_x / cell - 0.5)));
    const int r0 = std::max(0, static_cast<int>(std::floor(lo_y / cell - 0.5)));
    const int r1 = std::min(grid_size - 1, static_cast<int>(std::ceil(hi_y / cell - 0.5)));
    for (int r = r0; r <= r1; ++r) {
      for (int c = c0; c <= c1; ++c) {
        const Vec2 center{(c + 0.5) / grid_size, (r + 0.5) / grid_size};
        if (point_segment_distance(center, a, b) <= s.radius) {
          mask[static_cast<std::size_t>(r * grid_size + c)] = true;
        }
      }
    }
  };
  if (s.points.size() == 1) {
    stamp_segment(s.points.front(), s.points.front());
  } else {
    for (std::size_t i = 1; i < s.points.size(); ++i) stamp_segment(s.points[i - 1], s.points[i]);
  }
  return mask;
}

Grid rasterize(std::span<const Stroke> strokes, const Grid* base, int grid_size) {
  Grid raw = base ? *base : Grid(grid_size);
  if (raw.size() != grid_size) throw std::invalid_argument("base layer size mismatch");
  for (const Stroke& s : strokes) {
    s.validate();
    const double ink = s.brush == Brush::Attract ? 1.0 : -1.0;
    const auto mask = stroke_coverage(s, grid_size);
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (mask[i]) raw[i] += ink;
    }
  }
  return raw;
}

std::vector<double> gaussian_taps(double sigma_cells, double truncate_sigmas) {
  const int radius = static_cast<int>(truncate_sigmas * sigma_cells + 0.5);
  std::vector<double> taps(static_cast<std::size_t>(radius) + 1);
  double total = 0.0;
  for (int t = 0; t <= radius; ++t) {
    taps[static_cast<std::size_t>(t)] = std::exp(-0.5 * (t * t) / (sigma_cells * sigma_cells));
    total += t == 0 ? taps[0] : 2.0 * taps[static_cast<std::size_t>(t)];
  }
  for (double& w : taps) w /= total;
  return taps;
}

int reflect_index(int i, int n) {
  // Pattern: ... 1 0 | 0 1 ... n-1 | n-1 n-2 ...
  const int period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

TargetDistribution smooth_and_normalize(const Grid& raw, const PainterConfig& cfg, std::uint64_t generation) {
  for (double v : raw.values()) {
    if (!std::isfinite(v)) throw std::invalid_argument("raw layer has non-finite cells");
  }
  const auto taps = gaussian_taps(cfg.sigma_cells, cfg.truncate_sigmas);
  Grid g = kernels::omp::gaussian_blur(raw, taps);
  double total = 0.0;
  for (double& v : g.values()) {
    v = std::max(v, cfg.floor);
    total += v;
  }
  for (double& v : g.values()) v /= total;
  return {std::move(g), generation};
}

}  // namespace swarmgame
