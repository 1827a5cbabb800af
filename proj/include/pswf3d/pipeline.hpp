#pragma once

// Processed data on the ball quadrature grid: sampled directly from a Born
// model, or extracted from discrete far-field records by nearest mock node.

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pswf3d/borndata.hpp"
#include "pswf3d/quadrature.hpp"

namespace pswf3d {

struct NodeProvenance {
  enum class Kind : std::uint8_t { kExact = 0, kMatched = 1 };
  Kind kind = Kind::kExact;
  /// Index of the far-field record used (matched nodes only).
  std::int64_t record = -1;
  /// |p_n - (theta - x)/2| for the record used.
  double distance = 0.0;
};

struct DataMeta {
  double k = 0.0;
  std::optional<double> delta;
  std::string source;
};

/// Complex samples u_b(p_n; c), one per node of a ball grid.
struct ProcessedData {
  double c = 0.0;
  std::shared_ptr<const BallQuadGrid> grid;
  std::vector<cdouble> values;
  std::vector<NodeProvenance> provenance;
  DataMeta meta;

  /// Weighted L2(B) norm of the samples under the grid's quadrature.
  double l2_norm() const;
};

/// Samples born(p_n, c) at every grid node.
ProcessedData born_to_processed(const BornFunction& born,
                                std::shared_ptr<const BallQuadGrid> grid, double c);

/// Applies the multiplicative noise model to the samples and records delta.
ProcessedData with_noise(const ProcessedData& data, double delta, std::uint64_t seed);

enum class NeighborSearch { kIndexed, kBruteForce };

/// For each node p_n picks the record minimizing |p_n - (theta - x)/2| (ties
/// go to the earliest record) and stores (4 pi / k^2) times its value; c = 2k.
ProcessedData extract_processed(const std::vector<FarFieldRecord>& records,
                                std::shared_ptr<const BallQuadGrid> grid, double k,
                                NeighborSearch search = NeighborSearch::kIndexed);

/// Nearest-point lookup over a fixed cloud of points in [-1, 1]^3, backed by a
/// uniform bucket grid. Ties resolve to the smallest point index.
class NearestPointIndex {
public:
  explicit NearestPointIndex(std::vector<Vec3> points);
  struct Hit {
    std::size_t index;
    double distance;
  };
  Hit nearest(const Vec3& q) const;
  Hit nearest_brute_force(const Vec3& q) const;

private:
  std::vector<Vec3> points_;
  int cells_ = 1;
  double cell_size_ = 2.0;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> members_;

  int cell_of(double v) const;
};

}  // namespace pswf3d
