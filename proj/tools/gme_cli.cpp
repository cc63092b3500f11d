// gme: entanglement eigenvalue of W-type three-qubit states.
//
// Subcommands: eval, sweep, validate, surface. Machine-readable output is
// CSV (RFC-4180-style, '.' decimal, 17 significant digits) and JSON; file
// outputs are written atomically and accompanied by a manifest sidecar.
// Exit codes: 0 success, 1 validation failure, 2 usage/input error.

#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gme/gme.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 12345;

std::string fmt17(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// --seed wins over GME_SEED wins over the default.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("GME_SEED")) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(env, env + std::string_view(env).size(), v);
    if (ec != std::errc() || *ptr != '\0')
      throw CLI::ValidationError("GME_SEED", "GME_SEED must be a nonnegative integer");
    return v;
  }
  return kDefaultSeed;
}

json make_manifest(const std::string& command, json options, std::uint64_t seed) {
  return json{{"command", command},
              {"options", std::move(options)},
              {"library_version", std::string(gme::version)},
              {"rng_seed", seed},
              {"timestamp", utc_timestamp()}};
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << contents;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_manifest_sidecar(const fs::path& out, const json& manifest) {
  write_file_atomic(out.string() + ".manifest.json", manifest.dump(2) + "\n");
}

json complex_json(const std::complex<double>& z) {
  return json{{"re", z.real()}, {"im", z.imag()}};
}

json vec_json(const gme::Vec3& v) { return json::array({v.x, v.y, v.z}); }

json measure_json(const gme::MeasureResult& res) {
  json product{{"u", vec_json(res.closest_product.u)},
               {"v", vec_json(res.closest_product.v)},
               {"qubit_c", json::array({complex_json(res.closest_product.qubit_c[0]),
                                        complex_json(res.closest_product.qubit_c[1])})}};
  json amps = json::array();
  for (const auto& z : res.closest_product.to_state().amp) amps.push_back(complex_json(z));
  product["amplitudes"] = amps;

  json out{{"lambda_max_sq", res.lambda_max_sq},
           {"geometric_measure", res.geometric_measure},
           {"regime", std::string(gme::to_string(res.regime))},
           {"closest_product", std::move(product)},
           {"overlap_residual", res.overlap_residual}};
  if (res.lagrange)
    out["lagrange"] = json{{"lambda1", res.lagrange->first}, {"lambda2", res.lagrange->second}};
  else
    out["lagrange"] = nullptr;
  return out;
}

struct CliError {
  int code;
  std::string message;
};

int emit_error(const CliError& err, bool as_json) {
  if (as_json) {
    std::cout << json{{"error", {{"code", err.code == 1 ? "validation_failure" : "invalid_input"},
                                 {"message", err.message}}}}
                     .dump(2)
              << "\n";
  } else {
    std::cerr << "error: " << err.message << "\n";
  }
  return err.code;
}

// ---------------------------------------------------------------- eval ----

int cmd_eval(const std::vector<double>& coeffs, bool renormalize, bool as_json,
             std::uint64_t seed) {
  gme::MeasureResult res;
  try {
    const gme::WStateParams params =
        renormalize ? gme::WStateParams::renormalized(coeffs[0], coeffs[1], coeffs[2], coeffs[3])
                    : gme::WStateParams(coeffs[0], coeffs[1], coeffs[2], coeffs[3]);
    res = gme::lambda_max_sq(params);

    json options{{"coeffs", coeffs}, {"renormalize", renormalize}, {"json", as_json}};
    if (as_json) {
      json out = measure_json(res);
      out["input"] = json{{"a", params.a}, {"b", params.b}, {"c", params.c}, {"d", params.d},
                          {"renormalized", renormalize}};
      out["manifest"] = make_manifest("eval", options, seed);
      std::cout << out.dump(2) << "\n";
      return 0;
    }
    std::cout << "lambda_max_sq      " << fmt17(res.lambda_max_sq) << "\n"
              << "geometric_measure  " << fmt17(res.geometric_measure) << "\n"
              << "regime             " << gme::to_string(res.regime) << "\n";
    if (res.lagrange)
      std::cout << "lambda1            " << fmt17(res.lagrange->first) << "\n"
                << "lambda2            " << fmt17(res.lagrange->second) << "\n";
    const auto& cp = res.closest_product;
    std::cout << "u                  [" << fmt17(cp.u.x) << ", " << fmt17(cp.u.y) << ", "
              << fmt17(cp.u.z) << "]\n"
              << "v                  [" << fmt17(cp.v.x) << ", " << fmt17(cp.v.y) << ", "
              << fmt17(cp.v.z) << "]\n"
              << "qubit_c            [" << fmt17(cp.qubit_c[0].real()) << "+"
              << fmt17(cp.qubit_c[0].imag()) << "i, " << fmt17(cp.qubit_c[1].real()) << "+"
              << fmt17(cp.qubit_c[1].imag()) << "i]\n";
    std::cout << "product_amplitudes [";
    const auto amps = cp.to_state().amp;
    for (int i = 0; i < 8; ++i)
      std::cout << fmt17(amps[i].real()) << (i + 1 < 8 ? ", " : "");
    std::cout << "]\n"
              << "overlap_residual   " << fmt17(res.overlap_residual) << "\n";
    return 0;
  } catch (const std::invalid_argument& e) {
    return emit_error({2, e.what()}, as_json);
  }
}

// ---------------------------------------------------------------- sweep ----

int cmd_sweep(const std::string& family_spec, const std::string& param, const std::string& range,
              int steps, const std::string& out_path, bool with_oracle, std::uint64_t seed) {
  double lo = 0.0, hi = 0.0;
  const auto colon = range.find(':');
  if (colon == std::string::npos) return emit_error({2, "--range expects LO:HI"}, false);
  try {
    lo = std::stod(range.substr(0, colon));
    hi = std::stod(range.substr(colon + 1));
  } catch (const std::exception&) {
    return emit_error({2, "--range expects numeric LO:HI"}, false);
  }

  try {
    const auto family = gme::FamilySpec::parse(family_spec, param);
    const auto rows = gme::sweep(family, lo, hi, steps);

    gme::OracleConfig oracle_cfg;
    oracle_cfg.rng_seed = seed;

    std::string csv = "param_value,a,b,c,d,lambda_max_sq,regime,transition";
    if (with_oracle) csv += ",oracle_lambda_sq";
    csv += "\n";
    for (const auto& row : rows) {
      csv += fmt17(row.t) + "," + fmt17(row.params.a) + "," + fmt17(row.params.b) + "," +
             fmt17(row.params.c) + "," + fmt17(row.params.d) + "," +
             fmt17(row.result.lambda_max_sq) + "," + std::string(gme::to_string(row.result.regime)) +
             "," + (row.regime_change ? "1" : "0");
      if (with_oracle) {
        const auto oracle = gme::alternating_ascent(gme::embed_w_state(row.params), oracle_cfg);
        csv += "," + fmt17(oracle.lambda_sq);
      }
      csv += "\n";
    }
    write_file_atomic(out_path, csv);
    write_manifest_sidecar(out_path,
                           make_manifest("sweep",
                                         json{{"family", family_spec},
                                              {"param", param},
                                              {"range", range},
                                              {"steps", steps},
                                              {"out", out_path},
                                              {"with_oracle", with_oracle}},
                                         seed));
    return 0;
  } catch (const std::invalid_argument& e) {
    return emit_error({2, e.what()}, false);
  }
}

// -------------------------------------------------------------- validate ----

int cmd_validate(int samples, std::uint64_t seed, double tol) {
  // Stronger-than-default oracle settings: near-surface states converge
  // sublinearly and need the headroom.
  gme::OracleConfig cfg;
  cfg.restarts = 32;
  cfg.max_iterations = 50000;
  cfg.convergence_threshold = 1e-14;
  cfg.rng_seed = seed;

  double max_dev = 0.0, sum_dev = 0.0;
  long exceedances = 0;
  std::array<double, 4> worst{};
  double worst_analytic = 0.0, worst_oracle = 0.0;

  for (int i = 0; i < samples; ++i) {
    gme::SplitMix64 rng = gme::SplitMix64::keyed(seed, 0x76616c6964617465ULL + i);
    const auto v = gme::sample_positive_unit4(rng);
    const gme::WStateParams params(v[0], v[1], v[2], v[3]);
    const double analytic = gme::lambda_max_sq(params).lambda_max_sq;
    const double oracle = gme::alternating_ascent(gme::embed_w_state(params), cfg).lambda_sq;
    const double dev = std::abs(analytic - oracle);
    sum_dev += dev;
    if (dev > max_dev) {
      max_dev = dev;
      worst = v;
      worst_analytic = analytic;
      worst_oracle = oracle;
    }
    if (dev > tol) ++exceedances;
  }

  std::cout << "samples            " << samples << "\n"
            << "seed               " << seed << "\n"
            << "tolerance          " << fmt17(tol) << "\n"
            << "max_abs_deviation  " << fmt17(max_dev) << "\n"
            << "mean_abs_deviation " << fmt17(samples > 0 ? sum_dev / samples : 0.0) << "\n"
            << "exceedances        " << exceedances << "\n"
            << "worst_case         a=" << fmt17(worst[0]) << " b=" << fmt17(worst[1])
            << " c=" << fmt17(worst[2]) << " d=" << fmt17(worst[3]) << "\n"
            << "worst_analytic     " << fmt17(worst_analytic) << "\n"
            << "worst_oracle       " << fmt17(worst_oracle) << "\n";
  return exceedances == 0 ? 0 : 1;
}

// --------------------------------------------------------------- surface ----

int cmd_surface(const std::string& which, int samples, std::uint64_t seed,
                const std::string& out_path) {
  try {
    gme::SurfaceSamples surf;
    if (which == "r0")
      surf = gme::sample_r0_surface(samples, seed);
    else if (which == "shared")
      surf = gme::sample_shared_surface(samples, seed);
    else
      return emit_error({2, "--which must be r0 or shared"}, false);

    std::string csv = "a,b,c,d,lambda_max_sq,regime\n";
    for (const auto& w : surf.points) {
      const auto res = gme::lambda_max_sq(w);
      csv += fmt17(w.a) + "," + fmt17(w.b) + "," + fmt17(w.c) + "," + fmt17(w.d) + "," +
             fmt17(res.lambda_max_sq) + "," + std::string(gme::to_string(res.regime)) + "\n";
    }
    write_file_atomic(out_path, csv);
    write_manifest_sidecar(
        out_path, make_manifest("surface",
                                json{{"which", which},
                                     {"samples", samples},
                                     {"out", out_path},
                                     {"emitted", static_cast<int>(surf.points.size())},
                                     {"skipped_rays", surf.skipped}},
                                seed));
    return 0;
  } catch (const std::invalid_argument& e) {
    return emit_error({2, e.what()}, false);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entanglement eigenvalue of W-type three-qubit states"};
  app.require_subcommand(1);

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate one coefficient tuple");
  std::vector<double> coeffs;
  bool renormalize = false, as_json = false;
  eval->add_option("--coeffs", coeffs, "coefficients a,b,c,d")
      ->required()
      ->delimiter(',')
      ->expected(4);
  eval->add_flag("--renormalize", renormalize, "rescale the tuple to unit norm");
  eval->add_flag("--json", as_json, "emit JSON");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "evaluate a one-parameter family into CSV");
  std::string family_spec, param, range = "0:1", out_path;
  int steps = 101;
  bool with_oracle = false;
  std::optional<std::uint64_t> seed_flag;
  sweep_cmd->add_option("--family", family_spec, "equality constraints, e.g. \"a=b=c\"")->required();
  sweep_cmd->add_option("--param", param, "sweep coefficient (a|b|c|d)")->required();
  sweep_cmd->add_option("--range", range, "LO:HI inclusive")->required();
  sweep_cmd->add_option("--steps", steps, "grid size")->required()->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--out", out_path, "output CSV path")->required();
  sweep_cmd->add_flag("--with-oracle", with_oracle, "add an alternating-ascent column");
  sweep_cmd->add_option("--seed", seed_flag, "oracle RNG seed (default: GME_SEED or 12345)");

  // validate
  auto* validate = app.add_subcommand("validate", "analytic vs numeric oracle over random states");
  int samples = 1000;
  double tol = 1e-8;
  std::optional<std::uint64_t> v_seed_flag;
  validate->add_option("--samples", samples, "number of random tuples")
      ->required()
      ->check(CLI::PositiveNumber);
  validate->add_option("--seed", v_seed_flag, "RNG seed (default: GME_SEED or 12345)");
  validate->add_option("--tol", tol, "per-sample deviation tolerance")->required();

  // surface
  auto* surface = app.add_subcommand("surface", "sample a separating surface into CSV");
  std::string which;
  int s_samples = 1000;
  std::optional<std::uint64_t> s_seed_flag;
  std::string s_out;
  surface->add_option("--which", which, "r0 | shared")->required();
  surface->add_option("--samples", s_samples, "number of points")
      ->required()
      ->check(CLI::PositiveNumber);
  surface->add_option("--seed", s_seed_flag, "RNG seed (default: GME_SEED or 12345)");
  surface->add_option("--out", s_out, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*eval) return cmd_eval(coeffs, renormalize, as_json, resolve_seed(std::nullopt));
    if (*sweep_cmd)
      return cmd_sweep(family_spec, param, range, steps, out_path, with_oracle,
                       resolve_seed(seed_flag));
    if (*validate) return cmd_validate(samples, resolve_seed(v_seed_flag), tol);
    if (*surface) return cmd_surface(which, s_samples, resolve_seed(s_seed_flag), s_out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
