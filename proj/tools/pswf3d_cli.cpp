// Command-line front end: basis precomputation, synthetic data generation,
// far-field processing, reconstruction and volume export.

#include <cmath>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pswf3d/borndata.hpp"
#include "pswf3d/config.hpp"
#include "pswf3d/errors.hpp"
#include "pswf3d/io.hpp"
#include "pswf3d/pipeline.hpp"
#include "pswf3d/pswf.hpp"
#include "pswf3d/quadrature.hpp"
#include "pswf3d/reconstruct.hpp"

namespace {

using namespace pswf3d;

enum ExitCode { kOk = 0, kUsage = 1, kValidation = 2, kNumeric = 3 };

/// Flag values that override the config file when given on the command line.
struct Overrides {
  double k = 0.0, c = 0.0;
  int K = 0;
  std::array<int, 3> grid{};
  double sigma = 0.0, eta = 0.0, s = 0.0, delta = 0.0;
  std::uint64_t seed = 0;
  std::vector<int> resolution;
  std::vector<double> extent;
  std::string basis_cache;

  // The same flag is registered on several subcommands; only the parsed one
  // can have a nonzero count.
  using Opts = std::vector<CLI::Option*>;
  Opts k_opt, c_opt, K_opt, grid_opt, sigma_opt, eta_opt, s_opt, delta_opt, seed_opt, res_opt,
      extent_opt, cache_opt;
};

void add_bandwidth(CLI::App* cmd, Overrides& o) {
  o.k_opt.push_back(cmd->add_option("--k", o.k, "wave number (c = 2k)"));
  o.c_opt.push_back(cmd->add_option("--c", o.c, "bandwidth")->excludes(o.k_opt.back()));
}
void add_K(CLI::App* cmd, Overrides& o) {
  o.K_opt.push_back(cmd->add_option("--K", o.K, "expansion terms per degree")->check(CLI::PositiveNumber));
}
void add_grid(CLI::App* cmd, Overrides& o) {
  o.grid_opt.push_back(cmd->add_option("--grid", o.grid, "ball grid T M_theta M_phi"));
}
void add_sigma(CLI::App* cmd, Overrides& o) {
  o.sigma_opt.push_back(cmd->add_option("--sigma", o.sigma, "cutoff on |alpha| (default: policy)"));
}
void add_noise(CLI::App* cmd, Overrides& o) {
  o.delta_opt.push_back(cmd->add_option("--delta", o.delta, "relative noise level in [0, 1)"));
  o.seed_opt.push_back(cmd->add_option("--seed", o.seed, "noise seed"));
}
void add_cache(CLI::App* cmd, Overrides& o) {
  o.cache_opt.push_back(cmd->add_option("--basis", o.basis_cache, "basis cache file (built if missing)"));
}

RunConfig resolve(const std::string& config_path, const Overrides& o) {
  RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
  auto given = [](const Overrides::Opts& opts) {
    for (const auto* opt : opts) {
      if (opt->count() > 0) return true;
    }
    return false;
  };
  if (given(o.k_opt)) {
    cfg.k = o.k;
    cfg.c.reset();
  }
  if (given(o.c_opt)) {
    cfg.c = o.c;
    cfg.k.reset();
  }
  if (given(o.K_opt)) cfg.K = o.K;
  if (given(o.grid_opt)) {
    cfg.T = o.grid[0];
    cfg.m_theta = o.grid[1];
    cfg.m_phi = o.grid[2];
  }
  if (given(o.sigma_opt)) cfg.sigma = o.sigma;
  if (given(o.eta_opt)) cfg.eta = o.eta;
  if (given(o.s_opt)) cfg.s = o.s;
  if (given(o.delta_opt)) cfg.delta = o.delta;
  if (given(o.seed_opt)) cfg.seed = o.seed;
  if (given(o.res_opt)) {
    if (o.resolution.size() == 1) {
      cfg.resolution.fill(o.resolution[0]);
    } else if (o.resolution.size() == 3) {
      for (int d = 0; d < 3; ++d) cfg.resolution[d] = o.resolution[d];
    } else {
      throw ValidationError("--resolution takes 1 or 3 values");
    }
  }
  if (given(o.extent_opt)) {
    if (o.extent.size() == 2) {
      cfg.extent = {{o.extent[0], o.extent[0], o.extent[0]}, {o.extent[1], o.extent[1], o.extent[1]}};
    } else if (o.extent.size() == 6) {
      cfg.extent = {{o.extent[0], o.extent[1], o.extent[2]}, {o.extent[3], o.extent[4], o.extent[5]}};
    } else {
      throw ValidationError("--extent takes 2 values (lo hi) or 6 values (lo xyz, hi xyz)");
    }
  }
  if (given(o.cache_opt)) cfg.basis_cache = o.basis_cache;
  return cfg;
}

/// Config validation without the k/c requirement, for verbs that read c from files.
void validate_without_bandwidth(RunConfig cfg) {
  if (!cfg.k && !cfg.c) cfg.c = 1.0;
  cfg.validate();
}

struct ContrastOptions {
  std::string kind = "ball";
  double radius = 0.5;
  int osc_m = 8;
  double amplitude = 1.0;
};

void add_contrast(CLI::App* cmd, ContrastOptions& c) {
  cmd->add_option("--contrast", c.kind, "ball | cube | three-cubes | oscillatory")
      ->check(CLI::IsMember({"ball", "cube", "three-cubes", "oscillatory"}));
  cmd->add_option("--radius", c.radius, "ball radius");
  cmd->add_option("--osc-m", c.osc_m, "oscillation index of the oscillatory contrast");
  cmd->add_option("--amplitude", c.amplitude, "contrast amplitude");
}

ContrastSpec make_contrast(const ContrastOptions& c) {
  ContrastSpec spec;
  spec.amplitude = c.amplitude;
  if (c.kind == "ball") {
    spec.kind = contrast::Ball{c.radius};
  } else if (c.kind == "cube") {
    spec.kind = contrast::Cube{};
  } else if (c.kind == "three-cubes") {
    spec.kind = contrast::ThreeCubes{};
  } else {
    spec.kind = contrast::Oscillatory{c.osc_m};
  }
  return spec;
}

double auto_sigma(const RunConfig& cfg, double abs_alpha00, std::optional<double> delta,
                  bool outside = false) {
  if (cfg.sigma) return *cfg.sigma;
  return default_cutoff(abs_alpha00, delta, outside);
}

std::shared_ptr<const PswfBasis> obtain_basis(const RunConfig& cfg, double c, double sigma) {
  if (cfg.basis_cache.empty()) return build_basis(c, cfg.K, sigma);
  return io::load_or_build_basis(cfg.basis_cache, c, cfg.K, sigma);
}

void print_json(const nlohmann::json& j) { std::cout << j.dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-dimensional PSWF toolkit for Born inverse scattering"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);

  Overrides o;
  ContrastOptions contrast_opts;
  std::string out_path, in_path, data_path, format = "raw";
  int n1 = 201, n2 = 201;
  bool brute_force = false, fill_outside = false, outside_support = false;

  auto* basis = app.add_subcommand("basis", "precompute or inspect a PSWF basis");
  basis->require_subcommand(1);
  auto* basis_build = basis->add_subcommand("build", "build a basis and write the cache file");
  add_bandwidth(basis_build, o);
  add_K(basis_build, o);
  add_sigma(basis_build, o);
  o.delta_opt.push_back(
      basis_build->add_option("--delta", o.delta, "noise level used by the default cutoff"));
  basis_build->add_option("-o,--output", out_path, "cache file")->required();
  auto* basis_info = basis->add_subcommand("info", "summarize a basis cache file");
  basis_info->add_option("cache", in_path, "cache file")->required()->check(CLI::ExistingFile);

  auto* gen = app.add_subcommand("gen", "synthesize Born data");
  gen->require_subcommand(1);
  auto* gen_born = gen->add_subcommand("born", "processed data sampled on the ball grid");
  add_contrast(gen_born, contrast_opts);
  add_bandwidth(gen_born, o);
  add_grid(gen_born, o);
  add_noise(gen_born, o);
  gen_born->add_option("-o,--output", out_path, "processed-data file")->required();
  auto* gen_ff = gen->add_subcommand("farfield", "far-field records over Fibonacci directions");
  add_contrast(gen_ff, contrast_opts);
  add_bandwidth(gen_ff, o);
  add_noise(gen_ff, o);
  gen_ff->add_option("--n1", n1, "incident directions")->check(CLI::PositiveNumber);
  gen_ff->add_option("--n2", n2, "observation directions")->check(CLI::PositiveNumber);
  gen_ff->add_option("-o,--output", out_path, "far-field text file")->required();

  auto* process = app.add_subcommand("process", "map far-field records onto the ball grid");
  process->add_option("farfield", in_path, "far-field text file")->required()->check(CLI::ExistingFile);
  add_grid(process, o);
  process->add_flag("--brute-force", brute_force, "exhaustive nearest-pair search");
  process->add_option("-o,--output", out_path, "processed-data file")->required();

  auto* recon = app.add_subcommand("reconstruct", "invert processed data");
  recon->require_subcommand(1);
  std::vector<CLI::App*> recon_verbs;
  for (const char* name : {"lowrank", "tikhonov", "localized"}) {
    auto* cmd = recon->add_subcommand(name, std::string(name) + " reconstruction");
    cmd->add_option("--data", data_path, "processed-data file")->required()->check(CLI::ExistingFile);
    add_K(cmd, o);
    add_sigma(cmd, o);
    add_cache(cmd, o);
    cmd->add_option("-o,--output", out_path, "coefficient-field file")->required();
    recon_verbs.push_back(cmd);
  }
  o.eta_opt.push_back(recon_verbs[1]->add_option("--eta", o.eta, "penalty weight"));
  o.s_opt.push_back(recon_verbs[1]->add_option("--s", o.s, "smoothness order"));
  recon_verbs[0]->add_flag("--outside-support", outside_support,
                           "use the cutoff for contrasts that may extend beyond the unit ball");

  auto* export_cmd = app.add_subcommand("export", "evaluate a coefficient field on a voxel grid");
  export_cmd->add_option("field", in_path, "coefficient-field file")->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--format", format, "raw | vtk")->check(CLI::IsMember({"raw", "vtk"}));
  o.res_opt.push_back(export_cmd->add_option("--resolution", o.resolution, "voxels per axis (1 or 3 values)"));
  o.extent_opt.push_back(export_cmd->add_option("--extent", o.extent, "lo hi, or lo_x lo_y lo_z hi_x hi_y hi_z"));
  export_cmd->add_flag("--fill-outside", fill_outside, "continue the field outside the unit ball");
  add_grid(export_cmd, o);
  export_cmd->add_option("-o,--output", out_path, "volume file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    RunConfig cfg = resolve(config_path, o);

    if (*basis_build) {
      const double c = cfg.bandwidth();
      const double a00 = std::abs(leading_prolate_eigenvalue(c, cfg.K));
      const double sigma = auto_sigma(cfg, a00, cfg.delta);
      const auto b = build_basis(c, cfg.K, sigma);
      io::write_basis_cache(*b, out_path);
      print_json({{"c", c}, {"K", cfg.K}, {"sigma", sigma}, {"modes", b->size()},
                  {"max_degree", b->max_degree()}, {"abs_alpha00", a00}, {"output", out_path}});
    } else if (*basis_info) {
      const auto b = io::read_basis_cache(in_path);
      double chi_max = 0.0;
      double alpha_min = std::abs(b->alpha00());
      for (const auto& m : b->modes()) {
        chi_max = std::max(chi_max, m.chi());
        alpha_min = std::min(alpha_min, std::abs(m.alpha()));
      }
      print_json({{"c", b->c()}, {"K", b->K()}, {"sigma", b->sigma()}, {"modes", b->size()},
                  {"radial_modes", b->radial_modes().size()}, {"max_degree", b->max_degree()},
                  {"abs_alpha00", std::abs(b->alpha00())}, {"min_abs_alpha", alpha_min},
                  {"max_chi", chi_max}});
    } else if (*gen_born) {
      const double c = cfg.bandwidth();
      auto grid = std::make_shared<const BallQuadGrid>(cfg.T, cfg.m_theta, cfg.m_phi);
      const auto spec = make_contrast(contrast_opts);
      auto data = born_to_processed(born_function(spec), grid, c);
      data.meta.source = "born:" + spec.name();
      if (cfg.delta > 0.0) data = with_noise(data, cfg.delta, cfg.seed);
      io::write_processed(data, out_path);
      print_json({{"c", c}, {"nodes", data.values.size()}, {"delta", cfg.delta}, {"output", out_path}});
    } else if (*gen_ff) {
      const double k = cfg.wave_number();
      const auto spec = make_contrast(contrast_opts);
      io::FarFieldData ff;
      ff.k = k;
      ff.n1 = n1;
      ff.n2 = n2;
      ff.source = "born:" + spec.name();
      ff.records = farfield_from_born(born_function(spec), k, fibonacci_sphere(n1), fibonacci_sphere(n2));
      if (cfg.delta > 0.0) ff.records = add_noise(ff.records, cfg.delta, cfg.seed);
      io::write_farfield(ff, out_path);
      print_json({{"k", k}, {"records", ff.records.size()}, {"output", out_path}});
    } else if (*process) {
      validate_without_bandwidth(cfg);
      const auto ff = io::read_farfield(in_path);
      if (ff.records.empty()) throw ValidationError("far-field file has no records");
      auto grid = std::make_shared<const BallQuadGrid>(cfg.T, cfg.m_theta, cfg.m_phi);
      auto data = extract_processed(ff.records, grid, ff.k,
                                    brute_force ? NeighborSearch::kBruteForce : NeighborSearch::kIndexed);
      data.meta.source = ff.source.empty() ? "farfield" : ff.source;
      double worst = 0.0;
      for (const auto& p : data.provenance) worst = std::max(worst, p.distance);
      io::write_processed(data, out_path);
      print_json({{"c", data.c}, {"nodes", data.values.size()}, {"records", ff.records.size()},
                  {"max_match_distance", worst}, {"output", out_path}});
    } else if (*recon) {
      validate_without_bandwidth(cfg);
      const auto data = io::read_processed(data_path);
      const double a00 = std::abs(leading_prolate_eigenvalue(data.c, cfg.K));
      const bool localized = recon_verbs[2]->parsed();
      const bool tikhonov = recon_verbs[1]->parsed();
      // Tikhonov uses the same policy cutoff as lowrank; the localized verb
      // projects on the usual basis and cuts afterwards.
      const double sigma = auto_sigma(cfg, a00, data.meta.delta, localized || outside_support);
      const double basis_sigma = localized ? std::min(sigma, 0.1 * a00) : sigma;
      const auto b = obtain_basis(cfg, data.c, basis_sigma);
      io::require_bandwidth(*b, data.c);
      const auto proj = project(data, b);
      CoefficientField field;
      if (localized) {
        field = localized_reconstruct(proj, sigma);
      } else if (tikhonov) {
        field = tikhonov_reconstruct(proj, cfg.eta, cfg.s);
      } else {
        field = lowrank_reconstruct(proj);
      }
      io::write_field(field, out_path);
      nlohmann::json j{{"c", data.c},         {"sigma", sigma},         {"modes", field.size()},
                       {"l2_norm", field.l2_norm()}, {"output", out_path}};
      if (tikhonov) {
        j["eta"] = cfg.eta;
        j["s"] = cfg.s;
      }
      print_json(j);
    } else if (*export_cmd) {
      validate_without_bandwidth(cfg);
      const auto field = io::read_field(in_path);
      VolumeSpec spec;
      spec.resolution = cfg.resolution;
      spec.extent = cfg.extent;
      if (fill_outside) spec.continuation = std::make_shared<const BallQuadGrid>(cfg.T, cfg.m_theta, cfg.m_phi);
      const auto vol = evaluate_volume(field, spec);
      io::VolumeMeta meta{field.basis->c(), field.basis->sigma(), "field:" + in_path};
      io::write_volume(vol, out_path, format == "vtk" ? io::VolumeFormat::kVtk : io::VolumeFormat::kRaw, meta);
      print_json({{"voxels", vol.size()}, {"format", format}, {"output", out_path}});
    }
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const EmptyBasisError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const RangeError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kOk;
}
