#include "pswf3d/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pswf3d/errors.hpp"

namespace pswf3d {

double ProcessedData::l2_norm() const {
  double s = 0.0;
  for (std::size_t n = 0; n < values.size(); ++n) s += grid->weight(n) * std::norm(values[n]);
  return std::sqrt(s);
}

ProcessedData born_to_processed(const BornFunction& born,
                                std::shared_ptr<const BallQuadGrid> grid, double c) {
  if (!(c > 0.0)) throw ArgumentError("bandwidth c must be positive");
  ProcessedData data;
  data.c = c;
  data.meta.k = c / 2.0;
  data.meta.delta = 0.0;
  data.meta.source = "born";
  data.values.resize(grid->size());
  data.provenance.assign(grid->size(), NodeProvenance{});
  for (std::size_t n = 0; n < grid->size(); ++n) data.values[n] = born(grid->node(n), c);
  data.grid = std::move(grid);
  return data;
}

ProcessedData with_noise(const ProcessedData& data, double delta, std::uint64_t seed) {
  ProcessedData out = data;
  out.values = add_noise(data.values, delta, seed);
  out.meta.delta = delta;
  return out;
}

NearestPointIndex::NearestPointIndex(std::vector<Vec3> points) : points_(std::move(points)) {
  // Roughly two points per occupied cell for a cloud filling the unit ball.
  cells_ = std::clamp(static_cast<int>(std::cbrt(points_.size() / 2.0)), 1, 128);
  cell_size_ = 2.0 / cells_;
  const std::size_t total = static_cast<std::size_t>(cells_) * cells_ * cells_;
  std::vector<std::uint32_t> counts(total + 1, 0);
  std::vector<std::size_t> cell_ids(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    cell_ids[i] = (static_cast<std::size_t>(cell_of(p[2])) * cells_ + cell_of(p[1])) * cells_ +
                  cell_of(p[0]);
    ++counts[cell_ids[i] + 1];
  }
  for (std::size_t c = 0; c < total; ++c) counts[c + 1] += counts[c];
  offsets_ = counts;
  members_.resize(points_.size());
  std::vector<std::uint32_t> fill(counts.begin(), counts.end() - 1);
  // Ascending point order inside every cell.
  for (std::size_t i = 0; i < points_.size(); ++i) {
    members_[fill[cell_ids[i]]++] = static_cast<std::uint32_t>(i);
  }
}

int NearestPointIndex::cell_of(double v) const {
  return std::clamp(static_cast<int>(std::floor((v + 1.0) / cell_size_)), 0, cells_ - 1);
}

NearestPointIndex::Hit NearestPointIndex::nearest(const Vec3& q) const {
  const int cx = cell_of(q[0]);
  const int cy = cell_of(q[1]);
  const int cz = cell_of(q[2]);
  std::size_t best = std::numeric_limits<std::size_t>::max();
  double best_d2 = std::numeric_limits<double>::infinity();
  auto consider = [&](int x, int y, int z) {
    const std::size_t cell = (static_cast<std::size_t>(z) * cells_ + y) * cells_ + x;
    for (std::uint32_t k = offsets_[cell]; k < offsets_[cell + 1]; ++k) {
      const std::size_t i = members_[k];
      const auto& p = points_[i];
      const double dx = p[0] - q[0];
      const double dy = p[1] - q[1];
      const double dz = p[2] - q[2];
      const double d2 = dx * dx + dy * dy + dz * dz;
      if (d2 < best_d2 || (d2 == best_d2 && i < best)) {
        best_d2 = d2;
        best = i;
      }
    }
  };
  for (int ring = 0; ring <= cells_; ++ring) {
    for (int z = cz - ring; z <= cz + ring; ++z) {
      if (z < 0 || z >= cells_) continue;
      for (int y = cy - ring; y <= cy + ring; ++y) {
        if (y < 0 || y >= cells_) continue;
        const bool face = std::abs(z - cz) == ring || std::abs(y - cy) == ring;
        if (face) {
          for (int x = std::max(0, cx - ring); x <= std::min(cells_ - 1, cx + ring); ++x) {
            consider(x, y, z);
          }
        } else {
          if (cx - ring >= 0) consider(cx - ring, y, z);
          if (ring > 0 && cx + ring < cells_) consider(cx + ring, y, z);
        }
      }
    }
    // Every point outside the examined block lies at least ring * cell_size
    // away from q; a strictly closer incumbent cannot be beaten or tied.
    if (best != std::numeric_limits<std::size_t>::max()) {
      const double reach = ring * cell_size_;
      if (best_d2 < reach * reach) break;
    }
  }
  return {best, std::sqrt(best_d2)};
}

NearestPointIndex::Hit NearestPointIndex::nearest_brute_force(const Vec3& q) const {
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    const double dx = p[0] - q[0];
    const double dy = p[1] - q[1];
    const double dz = p[2] - q[2];
    const double d2 = dx * dx + dy * dy + dz * dz;
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return {best, std::sqrt(best_d2)};
}

ProcessedData extract_processed(const std::vector<FarFieldRecord>& records,
                                std::shared_ptr<const BallQuadGrid> grid, double k,
                                NeighborSearch search) {
  if (records.empty()) throw ArgumentError("extract_processed needs at least one record");
  if (!(k > 0.0)) throw ArgumentError("wave number must be positive");
  std::vector<Vec3> mock(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    mock[i] = {0.5 * (r.incident[0] - r.observation[0]), 0.5 * (r.incident[1] - r.observation[1]),
               0.5 * (r.incident[2] - r.observation[2])};
  }
  const NearestPointIndex index(std::move(mock));
  const double scale = 4.0 * std::numbers::pi / (k * k);

  ProcessedData data;
  data.c = 2.0 * k;
  data.meta.k = k;
  data.meta.source = "farfield";
  data.values.resize(grid->size());
  data.provenance.resize(grid->size());
  for (std::size_t n = 0; n < grid->size(); ++n) {
    const auto hit = search == NeighborSearch::kIndexed ? index.nearest(grid->node(n))
                                                        : index.nearest_brute_force(grid->node(n));
    data.values[n] = scale * records[hit.index].value;
    data.provenance[n] = {NodeProvenance::Kind::kMatched, static_cast<std::int64_t>(hit.index),
                          hit.distance};
  }
  data.grid = std::move(grid);
  return data;
}

}  // namespace pswf3d
