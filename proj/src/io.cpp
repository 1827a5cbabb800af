#include "pswf3d/io.hpp"

#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "pswf3d/errors.hpp"

namespace pswf3d::io {

namespace {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

constexpr std::array<char, 4> kProcessedMagic{'P', 'S', 'W', 'P'};
constexpr std::array<char, 4> kBasisMagic{'P', 'S', 'W', '3'};
constexpr std::array<char, 4> kFieldMagic{'P', 'S', 'W', 'C'};
constexpr std::uint8_t kProcessedVersion = 1;
constexpr std::uint8_t kFieldVersion = 1;

std::uint64_t fnv1a(const char* data, std::size_t n) {
  std::uint64_t h = 14695981039346656037ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 1099511628211ULL;
  }
  return h;
}

class ByteWriter {
public:
  template <typename T>
  void put(T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    const auto* p = reinterpret_cast<const char*>(&v);
    buf_.append(p, sizeof(T));
  }
  void put_magic(const std::array<char, 4>& m) { buf_.append(m.data(), m.size()); }
  void put_string(const std::string& s) {
    put(static_cast<std::uint32_t>(s.size()));
    buf_.append(s);
  }
  void put_complex(cdouble z) {
    put(z.real());
    put(z.imag());
  }

  void save(const fs::path& path) {
    put(fnv1a(buf_.data(), buf_.size()));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    if (!out) throw IoError("write failed for " + path.string());
  }

private:
  std::string buf_;
};

class ByteReader {
public:
  ByteReader(const fs::path& path, const std::array<char, 4>& magic, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    buf_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    if (buf_.size() < magic.size() || std::memcmp(buf_.data(), magic.data(), magic.size()) != 0) {
      throw FormatError(path.string() + " is not a " + what + " file");
    }
    pos_ = magic.size();
    if (buf_.size() < pos_ + 1 + sizeof(std::uint64_t)) {
      throw IntegrityError(path.string() + " is truncated");
    }
    end_ = buf_.size() - sizeof(std::uint64_t);
  }

  std::uint8_t version() { return get<std::uint8_t>(); }

  /// Call after the version check so that a newer format reports a version
  /// problem rather than a checksum problem.
  void verify_checksum(const fs::path& path) const {
    std::uint64_t stored;
    std::memcpy(&stored, buf_.data() + end_, sizeof stored);
    if (stored != fnv1a(buf_.data(), end_)) {
      throw IntegrityError(path.string() + " failed its checksum (truncated or corrupted)");
    }
  }

  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > end_) throw IntegrityError("unexpected end of data");
    T v;
    std::memcpy(&v, buf_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::string get_string() {
    const auto n = get<std::uint32_t>();
    if (pos_ + n > end_) throw IntegrityError("unexpected end of data");
    std::string s(buf_.data() + pos_, n);
    pos_ += n;
    return s;
  }
  cdouble get_complex() {
    const double re = get<double>();
    const double im = get<double>();
    return {re, im};
  }
  void expect_end() const {
    if (pos_ != end_) throw IntegrityError("trailing bytes after payload");
  }
  /// Guards allocations driven by counts read from the file.
  void require_remaining(std::uint64_t count, std::size_t item_size) const {
    if (count > (end_ - pos_) / item_size) throw IntegrityError("record count exceeds file size");
  }

private:
  std::string buf_;
  std::size_t pos_ = 0;
  std::size_t end_ = 0;
};

void encode_basis(ByteWriter& w, const PswfBasis& basis) {
  w.put(basis.c());
  w.put(static_cast<std::int32_t>(basis.K()));
  w.put(basis.sigma());
  w.put_complex(basis.alpha00());
  const auto radials = basis.radial_modes();
  w.put(static_cast<std::uint32_t>(radials.size()));
  for (const auto& r : radials) {
    w.put(static_cast<std::int32_t>(r->m));
    w.put(static_cast<std::int32_t>(r->n));
    w.put(r->chi);
    w.put_complex(r->alpha);
    w.put(static_cast<std::uint32_t>(r->beta.size()));
    for (double b : r->beta) w.put(b);
  }
  w.put(static_cast<std::uint64_t>(basis.size()));
  std::size_t k = 0;
  for (const auto& mode : basis.modes()) {
    while (radials[k].get() != mode.radial.get()) ++k;
    w.put(static_cast<std::uint32_t>(k));
    w.put(static_cast<std::int32_t>(mode.ell));
  }
}

std::shared_ptr<const PswfBasis> decode_basis(ByteReader& r) {
  const double c = r.get<double>();
  const int K = r.get<std::int32_t>();
  const double sigma = r.get<double>();
  const cdouble alpha00 = r.get_complex();
  const auto nrad = r.get<std::uint32_t>();
  r.require_remaining(nrad, 40);
  std::vector<std::shared_ptr<const RadialMode>> radials;
  radials.reserve(nrad);
  for (std::uint32_t i = 0; i < nrad; ++i) {
    auto rad = std::make_shared<RadialMode>();
    rad->m = r.get<std::int32_t>();
    rad->n = r.get<std::int32_t>();
    rad->chi = r.get<double>();
    rad->alpha = r.get_complex();
    const auto nb = r.get<std::uint32_t>();
    r.require_remaining(nb, sizeof(double));
    rad->beta.resize(nb);
    for (auto& b : rad->beta) b = r.get<double>();
    rad->trim();
    radials.push_back(std::move(rad));
  }
  const auto nmodes = r.get<std::uint64_t>();
  r.require_remaining(nmodes, 8);
  std::vector<PswfMode> modes;
  modes.reserve(nmodes);
  for (std::uint64_t i = 0; i < nmodes; ++i) {
    const auto k = r.get<std::uint32_t>();
    const int ell = r.get<std::int32_t>();
    if (k >= radials.size()) throw IntegrityError("mode refers to a missing radial record");
    const auto& rad = radials[k];
    if (ell < -rad->m || ell > rad->m) throw IntegrityError("mode has an invalid harmonic index");
    modes.push_back({rad->m, rad->n, ell, rad});
  }
  return std::make_shared<const PswfBasis>(c, K, sigma, alpha00, std::move(modes));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view s, std::size_t line, const char* what) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(line, std::string("invalid number for ") + what + ": '" + std::string(s) + "'");
  }
  return v;
}

std::int64_t parse_int(std::string_view s, std::size_t line, const char* what) {
  s = trim(s);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(line, std::string("invalid integer for ") + what + ": '" + std::string(s) + "'");
  }
  return v;
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

constexpr const char* kColumns = "thx,thy,thz,xhx,xhy,xhz,re,im";

}  // namespace

void write_farfield(const FarFieldData& data, std::ostream& out) {
  out << "k=" << format_double(data.k) << '\n';
  if (data.n1) out << "N1=" << *data.n1 << '\n';
  if (data.n2) out << "N2=" << *data.n2 << '\n';
  if (!data.source.empty()) out << "source=" << data.source << '\n';
  out << "---\n" << kColumns << '\n';
  std::string row;
  for (const auto& r : data.records) {
    row.clear();
    for (double v : r.incident) row += format_double(v) + ',';
    for (double v : r.observation) row += format_double(v) + ',';
    row += format_double(r.value.real()) + ',' + format_double(r.value.imag());
    out << row << '\n';
  }
}

void write_farfield(const FarFieldData& data, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_farfield(data, out);
  if (!out) throw IoError("write failed for " + path.string());
}

FarFieldData read_farfield(std::istream& in) {
  FarFieldData data;
  std::string raw;
  std::size_t line = 0;
  bool have_k = false;
  bool in_header = true;
  bool saw_columns = false;
  while (std::getline(in, raw)) {
    ++line;
    const auto text = trim(raw);
    if (text.empty() || text.front() == '#') continue;
    if (in_header) {
      if (text == "---") {
        in_header = false;
        continue;
      }
      const auto eq = text.find('=');
      if (eq == std::string_view::npos) throw ParseError(line, "expected key=value in header");
      const auto key = trim(text.substr(0, eq));
      const auto value = trim(text.substr(eq + 1));
      if (key == "k") {
        data.k = parse_double(value, line, "k");
        have_k = true;
      } else if (key == "N1") {
        data.n1 = parse_int(value, line, "N1");
      } else if (key == "N2") {
        data.n2 = parse_int(value, line, "N2");
      } else if (key == "source") {
        data.source = std::string(value);
      } else {
        throw ParseError(line, "unknown header key '" + std::string(key) + "'");
      }
      continue;
    }
    if (!saw_columns) {
      saw_columns = true;
      std::string cols;
      for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch))) cols += ch;
      }
      if (cols != kColumns) throw ParseError(line, std::string("expected column line ") + kColumns);
      continue;
    }
    std::array<double, 8> f{};
    std::size_t start = 0;
    for (std::size_t i = 0; i < 8; ++i) {
      const auto comma = text.find(',', start);
      const bool last = i == 7;
      if (last != (comma == std::string_view::npos)) {
        throw ParseError(line, "expected 8 comma-separated fields");
      }
      const auto field = last ? text.substr(start) : text.substr(start, comma - start);
      f[i] = parse_double(field, line, "record field");
      start = comma + 1;
    }
    data.records.push_back({{f[0], f[1], f[2]}, {f[3], f[4], f[5]}, {f[6], f[7]}});
  }
  if (in_header) throw ParseError(line, "missing '---' separator after header");
  if (!have_k) throw ValidationError("header has no wave number k");
  if (!(data.k > 0.0)) throw ValidationError("header wave number k must be positive");
  if ((data.n1 && *data.n1 < 0) || (data.n2 && *data.n2 < 0)) {
    throw ValidationError("direction counts must be non-negative");
  }
  if (data.n1 && data.n2) {
    const auto expected = static_cast<std::uint64_t>(*data.n1) * static_cast<std::uint64_t>(*data.n2);
    if (expected != data.records.size()) {
      throw ValidationError("header promises " + std::to_string(expected) + " records (N1*N2), found " +
                            std::to_string(data.records.size()));
    }
  }
  return data;
}

FarFieldData read_farfield(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_farfield(in);
}

void write_processed(const ProcessedData& data, const fs::path& path) {
  if (!data.grid || data.values.size() != data.grid->size()) {
    throw ArgumentError("processed data does not match its grid");
  }
  ByteWriter w;
  w.put_magic(kProcessedMagic);
  w.put(kProcessedVersion);
  w.put(data.c);
  w.put(data.meta.k);
  w.put(static_cast<std::uint8_t>(data.meta.delta.has_value()));
  w.put(data.meta.delta.value_or(0.0));
  w.put_string(data.meta.source);
  w.put(static_cast<std::int32_t>(data.grid->T()));
  w.put(static_cast<std::int32_t>(data.grid->m_theta()));
  w.put(static_cast<std::int32_t>(data.grid->m_phi()));
  w.put(static_cast<std::uint64_t>(data.values.size()));
  for (const auto& v : data.values) w.put_complex(v);
  w.put(static_cast<std::uint8_t>(!data.provenance.empty()));
  for (const auto& p : data.provenance) {
    w.put(static_cast<std::uint8_t>(p.kind));
    w.put(p.record);
    w.put(p.distance);
  }
  w.save(path);
}

ProcessedData read_processed(const fs::path& path) {
  ByteReader r(path, kProcessedMagic, "processed-data");
  if (const auto v = r.version(); v != kProcessedVersion) {
    throw FormatError("unsupported processed-data version " + std::to_string(v));
  }
  r.verify_checksum(path);
  ProcessedData data;
  data.c = r.get<double>();
  data.meta.k = r.get<double>();
  const bool has_delta = r.get<std::uint8_t>() != 0;
  const double delta = r.get<double>();
  if (has_delta) data.meta.delta = delta;
  data.meta.source = r.get_string();
  const int T = r.get<std::int32_t>();
  const int mt = r.get<std::int32_t>();
  const int mp = r.get<std::int32_t>();
  if (T < 1 || mt < 1 || mp < 1) throw IntegrityError("invalid grid dimensions");
  const auto n = r.get<std::uint64_t>();
  if (n != static_cast<std::uint64_t>(T) * mt * mp) throw IntegrityError("sample count does not match grid");
  r.require_remaining(n, 16);
  data.values.resize(n);
  for (auto& v : data.values) v = r.get_complex();
  if (r.get<std::uint8_t>() != 0) {
    r.require_remaining(n, 17);
    data.provenance.resize(n);
    for (auto& p : data.provenance) {
      const auto kind = r.get<std::uint8_t>();
      if (kind > 1) throw IntegrityError("invalid provenance tag");
      p.kind = static_cast<NodeProvenance::Kind>(kind);
      p.record = r.get<std::int64_t>();
      p.distance = r.get<double>();
    }
  }
  r.expect_end();
  data.grid = std::make_shared<const BallQuadGrid>(T, mt, mp);
  return data;
}

void write_basis_cache(const PswfBasis& basis, const fs::path& path) {
  ByteWriter w;
  w.put_magic(kBasisMagic);
  w.put(kBasisCacheVersion);
  encode_basis(w, basis);
  w.save(path);
}

std::shared_ptr<const PswfBasis> read_basis_cache(const fs::path& path) {
  ByteReader r(path, kBasisMagic, "basis-cache");
  if (const auto v = r.version(); v != kBasisCacheVersion) {
    throw FormatError("unsupported basis-cache version " + std::to_string(v));
  }
  r.verify_checksum(path);
  auto basis = decode_basis(r);
  r.expect_end();
  return basis;
}

void require_bandwidth(const PswfBasis& basis, double c) {
  if (std::abs(basis.c() - c) > 1e-12 * std::max(1.0, c)) {
    throw BandwidthMismatchError("basis was built for c = " + format_double(basis.c()) +
                                 ", run requests c = " + format_double(c));
  }
}

std::shared_ptr<const PswfBasis> load_or_build_basis(const fs::path& path, double c, int K,
                                                     double sigma, const BasisOptions& options) {
  if (fs::exists(path)) {
    std::shared_ptr<const PswfBasis> cached;
    try {
      cached = read_basis_cache(path);
    } catch (const FormatError&) {
      cached.reset();  // older or foreign file: rebuild below
    }
    if (cached) {
      require_bandwidth(*cached, c);
      if (cached->K() == K && cached->sigma() <= sigma) {
        if (cached->sigma() == sigma) return cached;
        auto trimmed = cached->subset(
            [&](const PswfMode& m) { return sigma == 0.0 || std::abs(m.alpha()) > sigma; }, sigma);
        if (trimmed->empty()) throw EmptyBasisError("no cached mode has |alpha| above the cutoff");
        return trimmed;
      }
    }
  }
  auto basis = build_basis(c, K, sigma, options);
  write_basis_cache(*basis, path);
  return basis;
}

void write_field(const CoefficientField& field, const fs::path& path) {
  if (!field.basis || field.coeffs.size() != field.basis->size()) {
    throw ArgumentError("coefficient field does not match its basis");
  }
  ByteWriter w;
  w.put_magic(kFieldMagic);
  w.put(kFieldVersion);
  w.put(static_cast<std::uint8_t>(field.kind));
  encode_basis(w, *field.basis);
  for (const auto& v : field.coeffs) w.put_complex(v);
  w.save(path);
}

CoefficientField read_field(const fs::path& path) {
  ByteReader r(path, kFieldMagic, "coefficient-field");
  if (const auto v = r.version(); v != kFieldVersion) {
    throw FormatError("unsupported coefficient-field version " + std::to_string(v));
  }
  r.verify_checksum(path);
  CoefficientField field;
  const auto kind = r.get<std::uint8_t>();
  if (kind > 1) throw IntegrityError("invalid field kind");
  field.kind = static_cast<FieldKind>(kind);
  field.basis = decode_basis(r);
  r.require_remaining(field.basis->size(), 16);
  field.coeffs.resize(field.basis->size());
  for (auto& v : field.coeffs) v = r.get_complex();
  r.expect_end();
  return field;
}

fs::path sidecar_path(const fs::path& raw) {
  fs::path p = raw;
  p += ".json";
  return p;
}

void write_volume(const VolumeGrid& volume, const fs::path& path, VolumeFormat format,
                  const VolumeMeta& meta) {
  const auto& res = volume.resolution;
  if (format == VolumeFormat::kRaw) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    std::vector<double> block(volume.size());
    for (std::size_t i = 0; i < block.size(); ++i) block[i] = volume.samples[i].real();
    out.write(reinterpret_cast<const char*>(block.data()),
              static_cast<std::streamsize>(block.size() * sizeof(double)));
    for (std::size_t i = 0; i < block.size(); ++i) block[i] = volume.samples[i].imag();
    out.write(reinterpret_cast<const char*>(block.data()),
              static_cast<std::streamsize>(block.size() * sizeof(double)));
    if (!out) throw IoError("write failed for " + path.string());

    nlohmann::json side;
    side["resolution"] = {res[0], res[1], res[2]};
    side["extent"] = {{"lo", {volume.extent.lo[0], volume.extent.lo[1], volume.extent.lo[2]}},
                      {"hi", {volume.extent.hi[0], volume.extent.hi[1], volume.extent.hi[2]}}};
    side["layout"] = "float64 little-endian, x fastest, real block then imaginary block";
    side["c"] = meta.c;
    side["cutoff"] = meta.cutoff;
    side["provenance"] = meta.provenance;
    std::ofstream sc(sidecar_path(path));
    if (!sc) throw IoError("cannot open " + sidecar_path(path).string() + " for writing");
    sc << side.dump(2) << '\n';
    if (!sc) throw IoError("write failed for " + sidecar_path(path).string());
    return;
  }

  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  Vec3 spacing{};
  for (int d = 0; d < 3; ++d) spacing[d] = (volume.extent.hi[d] - volume.extent.lo[d]) / res[d];
  const Vec3 origin = volume.center(0, 0, 0);
  out << "# vtk DataFile Version 3.0\n";
  out << "pswf3d volume c=" << format_double(meta.c) << " cutoff=" << format_double(meta.cutoff)
      << '\n';
  out << "ASCII\nDATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << res[0] << ' ' << res[1] << ' ' << res[2] << '\n';
  out << "ORIGIN " << format_double(origin[0]) << ' ' << format_double(origin[1]) << ' '
      << format_double(origin[2]) << '\n';
  out << "SPACING " << format_double(spacing[0]) << ' ' << format_double(spacing[1]) << ' '
      << format_double(spacing[2]) << '\n';
  out << "POINT_DATA " << volume.size() << '\n';
  for (int part = 0; part < 2; ++part) {
    out << "SCALARS " << (part == 0 ? "real" : "imag") << " double 1\nLOOKUP_TABLE default\n";
    for (const auto& z : volume.samples) out << format_double(part == 0 ? z.real() : z.imag()) << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

VolumeGrid read_volume_raw(const fs::path& path) {
  std::ifstream sc(sidecar_path(path));
  if (!sc) throw IoError("cannot open sidecar " + sidecar_path(path).string());
  nlohmann::json side;
  try {
    sc >> side;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("malformed volume sidecar: " + std::string(e.what()));
  }
  VolumeGrid vol;
  try {
    for (int d = 0; d < 3; ++d) {
      vol.resolution[d] = side.at("resolution").at(d).get<int>();
      vol.extent.lo[d] = side.at("extent").at("lo").at(d).get<double>();
      vol.extent.hi[d] = side.at("extent").at("hi").at(d).get<double>();
      if (vol.resolution[d] < 1) throw FormatError("volume sidecar has a non-positive resolution");
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("incomplete volume sidecar: " + std::string(e.what()));
  }
  const std::size_t n = static_cast<std::size_t>(vol.resolution[0]) * vol.resolution[1] *
                        vol.resolution[2];
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<double> re(n), im(n);
  in.read(reinterpret_cast<char*>(re.data()), static_cast<std::streamsize>(n * sizeof(double)));
  in.read(reinterpret_cast<char*>(im.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw IntegrityError(path.string() + " is shorter than its sidecar declares");
  if (in.peek() != std::char_traits<char>::eof()) {
    throw IntegrityError(path.string() + " is longer than its sidecar declares");
  }
  vol.samples.resize(n);
  vol.outside.resize(n);
  for (int k = 0; k < vol.resolution[2]; ++k) {
    for (int j = 0; j < vol.resolution[1]; ++j) {
      for (int i = 0; i < vol.resolution[0]; ++i) {
        const auto idx = vol.index(i, j, k);
        vol.samples[idx] = {re[idx], im[idx]};
        vol.outside[idx] = norm(vol.center(i, j, k)) > 1.0 ? 1 : 0;
      }
    }
  }
  return vol;
}

}  // namespace pswf3d::io
