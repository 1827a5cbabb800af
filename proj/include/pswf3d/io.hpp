#pragma once

// File formats: far-field text datasets, processed-data and coefficient-field
// binaries, the basis cache, and volume exports (raw + JSON sidecar, legacy VTK).
//
// All binary formats are little-endian and end with a 64-bit FNV-1a checksum
// of every preceding byte.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pswf3d/borndata.hpp"
#include "pswf3d/pipeline.hpp"
#include "pswf3d/pswf.hpp"
#include "pswf3d/reconstruct.hpp"

namespace pswf3d::io {

namespace fs = std::filesystem;

struct FarFieldData {
  double k = 0.0;
  std::optional<std::int64_t> n1;
  std::optional<std::int64_t> n2;
  std::string source;
  std::vector<FarFieldRecord> records;
};

/// Header block of key=value lines, a "---" separator, a CSV column line,
/// then one row `thx,thy,thz,xhx,xhy,xhz,re,im` per record.
void write_farfield(const FarFieldData& data, const fs::path& path);
void write_farfield(const FarFieldData& data, std::ostream& out);
FarFieldData read_farfield(const fs::path& path);
FarFieldData read_farfield(std::istream& in);

void write_processed(const ProcessedData& data, const fs::path& path);
ProcessedData read_processed(const fs::path& path);

inline constexpr std::uint8_t kBasisCacheVersion = 1;

void write_basis_cache(const PswfBasis& basis, const fs::path& path);
std::shared_ptr<const PswfBasis> read_basis_cache(const fs::path& path);
/// Throws BandwidthMismatchError unless basis.c() equals c.
void require_bandwidth(const PswfBasis& basis, double c);
/// Reads `path` when it holds a basis for (c, K) whose cutoff is at most
/// sigma, trimmed to sigma; otherwise builds one and writes it to `path`.
std::shared_ptr<const PswfBasis> load_or_build_basis(const fs::path& path, double c, int K,
                                                     double sigma,
                                                     const BasisOptions& options = {});

void write_field(const CoefficientField& field, const fs::path& path);
CoefficientField read_field(const fs::path& path);

enum class VolumeFormat { kRaw, kVtk };

struct VolumeMeta {
  double c = 0.0;
  double cutoff = 0.0;
  std::string provenance;
};

/// kRaw: doubles x-fastest, real block then imaginary block, plus
/// `<path>.json` describing the layout. kVtk: legacy ASCII structured points
/// with `real` and `imag` scalars.
void write_volume(const VolumeGrid& volume, const fs::path& path, VolumeFormat format,
                  const VolumeMeta& meta = {});
/// Reads a raw volume through its sidecar.
VolumeGrid read_volume_raw(const fs::path& path);

/// Sidecar path used for raw volumes.
fs::path sidecar_path(const fs::path& raw);

}  // namespace pswf3d::io
