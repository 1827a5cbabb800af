#include "pswf3d/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "pswf3d/errors.hpp"

namespace pswf3d {

void RunConfig::validate() const {
  const bool has_k = k.has_value();
  const bool has_c = c.has_value();
  if (has_k == has_c) throw ValidationError("give exactly one of k and c");
  if (has_k && !(*k > 0.0)) throw ValidationError("k must be positive");
  if (has_c && !(*c > 0.0)) throw ValidationError("c must be positive");
  if (K < 1 || T < 1 || m_theta < 1 || m_phi < 1) throw ValidationError("counts must be >= 1");
  for (int r : resolution) {
    if (r < 1) throw ValidationError("resolution must be >= 1");
  }
  for (int d = 0; d < 3; ++d) {
    if (!(extent.hi[d] > extent.lo[d])) throw ValidationError("extent must have positive size");
  }
  if (sigma && !(*sigma >= 0.0)) throw ValidationError("sigma must be >= 0");
  if (!(eta >= 0.0)) throw ValidationError("eta must be >= 0");
  if (!(s >= 0.0)) throw ValidationError("s must be >= 0");
  if (!(delta >= 0.0 && delta < 1.0)) throw ValidationError("delta must lie in [0, 1)");
}

double RunConfig::bandwidth() const {
  validate();
  return c ? *c : 2.0 * *k;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed config " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  static const std::set<std::string> known{"k",     "c",   "K",     "T",    "m_theta",
                                           "m_phi", "sigma", "eta", "s",    "delta",
                                           "seed",  "resolution", "extent", "basis_cache"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ValidationError("unknown config key '" + key + "'");
  }
  RunConfig cfg;
  try {
    if (j.contains("k")) cfg.k = j["k"].get<double>();
    if (j.contains("c")) cfg.c = j["c"].get<double>();
    if (j.contains("K")) cfg.K = j["K"].get<int>();
    if (j.contains("T")) cfg.T = j["T"].get<int>();
    if (j.contains("m_theta")) cfg.m_theta = j["m_theta"].get<int>();
    if (j.contains("m_phi")) cfg.m_phi = j["m_phi"].get<int>();
    if (j.contains("sigma") && !j["sigma"].is_null()) cfg.sigma = j["sigma"].get<double>();
    if (j.contains("eta")) cfg.eta = j["eta"].get<double>();
    if (j.contains("s")) cfg.s = j["s"].get<double>();
    if (j.contains("delta")) cfg.delta = j["delta"].get<double>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("resolution")) {
      const auto& r = j["resolution"];
      if (r.is_number_integer()) {
        cfg.resolution.fill(r.get<int>());
      } else {
        for (int d = 0; d < 3; ++d) cfg.resolution[d] = r.at(d).get<int>();
      }
    }
    if (j.contains("extent")) {
      // {"lo": [x, y, z], "hi": [x, y, z]}, [lo, hi], or [lo_x, lo_y, lo_z, hi_x, hi_y, hi_z].
      const auto& e = j["extent"];
      if (e.is_object()) {
        for (int d = 0; d < 3; ++d) {
          cfg.extent.lo[d] = e.at("lo").at(d).get<double>();
          cfg.extent.hi[d] = e.at("hi").at(d).get<double>();
        }
      } else if (e.is_array() && e.size() == 2) {
        cfg.extent.lo.fill(e[0].get<double>());
        cfg.extent.hi.fill(e[1].get<double>());
      } else if (e.is_array() && e.size() == 6) {
        for (int d = 0; d < 3; ++d) {
          cfg.extent.lo[d] = e[d].get<double>();
          cfg.extent.hi[d] = e[d + 3].get<double>();
        }
      } else {
        throw ValidationError("extent must be an object with lo/hi or an array of 2 or 6 numbers");
      }
    }
    if (j.contains("basis_cache")) cfg.basis_cache = j["basis_cache"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("bad config value: " + std::string(e.what()));
  }
  // The bandwidth may still come from the command line, so only check the
  // rest when the file leaves it out.
  RunConfig probe = cfg;
  if (!probe.k && !probe.c) probe.c = 1.0;
  probe.validate();
  return cfg;
}

}  // namespace pswf3d
