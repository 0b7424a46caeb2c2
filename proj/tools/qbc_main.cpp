// Copyright 2026 The qbc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Batch front-end: computes rate regions, symmetric rate-sum sweeps, QKD
// key-rate regions, interferometer reductions and self-verification reports,
// and writes plot-ready CSV/JSON with fixed formatting. Exit codes:
// 0 success, 2 invalid parameters, 3 invalid input file, 4 verification
// failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <memory>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qbc/capacity.hpp"
#include "qbc/channel.hpp"
#include "qbc/fock.hpp"
#include "qbc/gaussian.hpp"
#include "qbc/io.hpp"
#include "qbc/qkd.hpp"
#include "qbc/verify.hpp"

namespace fs = std::filesystem;
using qbc::io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadParams = 2;
constexpr int kExitBadInput = 3;
constexpr int kExitVerifyFailed = 4;

struct CommonOpts {
  std::string output;
  std::string format = "csv";
  int precision = 9;
  std::string config;  // consumed by the pre-parse step
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--output", opts.output,
                  "Output directory (default: $QBC_OUTPUT_DIR or .)");
  cmd->add_option("--format", opts.format, "File format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--precision", opts.precision,
                  "Significant digits in CSV floats")
      ->check(CLI::Range(3, 17));
  cmd->add_option("--config", opts.config,
                  "JSON file whose keys mirror the long option names");
}

fs::path resolve_outdir(const CommonOpts& opts) {
  if (!opts.output.empty()) return opts.output;
  if (const char* env = std::getenv("QBC_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

fs::path prepare_outdir(const CommonOpts& opts) {
  const fs::path dir = resolve_outdir(opts);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << content;
}

void write_json(const fs::path& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

std::string receiver_set_label(std::uint32_t mask, int m) {
  std::string label;
  for (int i = 0; i < m; ++i) {
    if (!(mask >> i & 1)) continue;
    if (!label.empty()) label += '+';
    label += "B" + std::to_string(i + 1);
  }
  return label;
}

/// Pulls defaults for unset long options out of a JSON config file and
/// appends them to the argument list (command-line values win).
std::vector<std::string> apply_config_file(std::vector<std::string> args) {
  std::string config_path;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size())
      config_path = args[k + 1];
    else if (args[k].rfind("--config=", 0) == 0)
      config_path = args[k].substr(9);
  }
  if (config_path.empty()) return args;
  std::ifstream in(config_path);
  if (!in) throw CLI::ValidationError("--config", "cannot read " + config_path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const std::exception& e) {
    throw CLI::ValidationError("--config", e.what());
  }
  if (!cfg.is_object())
    throw CLI::ValidationError("--config", "config must be a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    std::string flag = "--" + key;
    for (char& c : flag)
      if (c == '_') c = '-';
    bool present = false;
    for (const auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
    if (present) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& item : value) {
        if (!joined.empty()) joined += ',';
        joined += item.is_string() ? item.get<std::string>() : item.dump();
      }
      args.push_back(flag + "=" + joined);
    } else if (value.is_string()) {
      args.push_back(flag + "=" + value.get<std::string>());
    } else {
      args.push_back(flag + "=" + value.dump());
    }
  }
  return args;
}

struct RegionArgs {
  std::vector<double> eta;
  std::vector<double> mean_photons;
  int resolution = 0;
  CommonOpts common;
};

int run_region(const RegionArgs& a) {
  const qbc::BroadcastChannel ch(a.eta);
  const qbc::RateRegion region = qbc::capacity_region(ch);
  const int m = ch.n_receivers();
  const fs::path dir = prepare_outdir(a.common);
  std::vector<std::string> written;

  if (a.common.format == "json") {
    write_json(dir / "region_constraints.json", qbc::io::region_to_json(region));
    written.push_back("region_constraints.json");
  } else {
    std::ostringstream out;
    qbc::io::CsvWriter csv(out, a.common.precision);
    csv.cells({"subset_mask", "receivers", "bound_bits"});
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask)
      csv.cells({std::to_string(mask), receiver_set_label(mask, m),
                 csv.num(region.bound(mask))});
    write_text(dir / "region_constraints.csv", out.str());
    written.push_back("region_constraints.csv");
  }

  if (m == 2 && ch.total_transmittance() < 1.0) {
    const auto boundary = qbc::region_boundary_1to2(ch, a.resolution);
    const auto ts = qbc::time_sharing_region(ch);
    if (a.common.format == "json") {
      json j;
      json pts = json::array();
      for (const auto& p : boundary) pts.push_back({p.rate_b, p.rate_c});
      j["boundary"] = std::move(pts);
      j["time_sharing_vertices"] = {{ts.intercepts()[0], 0.0},
                                    {0.0, ts.intercepts()[1]}};
      json ach = json::array();
      for (double n : a.mean_photons) {
        json curve;
        curve["mean_photons"] = n;
        json cpts = json::array();
        for (const auto& p : qbc::achievable_boundary_1to2(ch, n, a.resolution))
          cpts.push_back({p.rate_b, p.rate_c});
        curve["points"] = std::move(cpts);
        ach.push_back(std::move(curve));
      }
      if (!ach.empty()) j["achievable"] = std::move(ach);
      write_json(dir / "region_boundary.json", j);
      written.push_back("region_boundary.json");
    } else {
      {
        std::ostringstream out;
        qbc::io::CsvWriter csv(out, a.common.precision);
        csv.cells({"rate_b", "rate_c"});
        for (const auto& p : boundary)
          csv.cells({csv.num(p.rate_b), csv.num(p.rate_c)});
        write_text(dir / "region_boundary.csv", out.str());
        written.push_back("region_boundary.csv");
      }
      {
        std::ostringstream out;
        qbc::io::CsvWriter csv(out, a.common.precision);
        csv.cells({"rate_b", "rate_c"});
        csv.cells({csv.num(ts.intercepts()[0]), csv.num(0.0)});
        csv.cells({csv.num(0.0), csv.num(ts.intercepts()[1])});
        write_text(dir / "region_time_sharing.csv", out.str());
        written.push_back("region_time_sharing.csv");
      }
      if (!a.mean_photons.empty()) {
        std::ostringstream out;
        qbc::io::CsvWriter csv(out, a.common.precision);
        csv.cells({"mean_photons", "rate_b", "rate_c"});
        for (double n : a.mean_photons)
          for (const auto& p : qbc::achievable_boundary_1to2(ch, n, a.resolution))
            csv.cells({csv.num(n), csv.num(p.rate_b), csv.num(p.rate_c)});
        write_text(dir / "region_achievable.csv", out.str());
        written.push_back("region_achievable.csv");
      }
    }
  }

  for (const auto& f : written) std::cout << (dir / f).string() << "\n";
  return kExitOk;
}

struct SymmetricArgs {
  double eta = 0.0;
  int m_max = 16;
  CommonOpts common;
};

int run_symmetric(const SymmetricArgs& a) {
  if (a.m_max < 1) throw std::invalid_argument("--m-max must be at least 1");
  const fs::path dir = prepare_outdir(a.common);
  if (a.common.format == "json") {
    json rows = json::array();
    for (int m = 1; m <= a.m_max; ++m) {
      const auto [optimal, shared] = qbc::symmetric_rate_sums(a.eta, m);
      rows.push_back({{"m", m}, {"optimal_sum", optimal}, {"time_share_sum", shared}});
    }
    json j;
    j["eta"] = a.eta;
    j["rows"] = std::move(rows);
    write_json(dir / "symmetric_rates.json", j);
    std::cout << (dir / "symmetric_rates.json").string() << "\n";
  } else {
    std::ostringstream out;
    qbc::io::CsvWriter csv(out, a.common.precision);
    csv.cells({"m", "optimal_sum", "time_share_sum"});
    for (int m = 1; m <= a.m_max; ++m) {
      const auto [optimal, shared] = qbc::symmetric_rate_sums(a.eta, m);
      csv.cells({std::to_string(m), csv.num(optimal), csv.num(shared)});
    }
    write_text(dir / "symmetric_rates.csv", out.str());
    std::cout << (dir / "symmetric_rates.csv").string() << "\n";
  }
  return kExitOk;
}

struct QkdArgs {
  double eta_b = 0.0;
  double eta_c = 0.0;
  std::vector<double> mu;
  int resolution = 32;
  bool clamp = false;
  CommonOpts common;
};

int run_qkd(const QkdArgs& a) {
  const fs::path dir = prepare_outdir(a.common);
  auto display = [&](double k) { return a.clamp ? std::max(0.0, k) : k; };
  if (a.common.format == "json") {
    json scenarios = json::array();
    for (double mu : a.mu) {
      const qbc::QkdScenario s(a.eta_b, a.eta_c, mu);
      const auto curves = qbc::bc_rate_region(s, a.resolution);
      auto pts = [&](const std::vector<qbc::KeyRatePair>& curve) {
        json arr = json::array();
        for (const auto& p : curve)
          arr.push_back({display(p.k_ab), display(p.k_ac)});
        return arr;
      };
      json entry = qbc::io::scenario_to_json(s);
      entry["curves"] = {{"bc", pts(curves.bc)},
                         {"simultaneous", pts(curves.simultaneous)},
                         {"time_sharing", pts(curves.time_sharing)}};
      scenarios.push_back(std::move(entry));
    }
    json j;
    j["scenarios"] = std::move(scenarios);
    write_json(dir / "qkd_region.json", j);
    std::cout << (dir / "qkd_region.json").string() << "\n";
  } else {
    std::ostringstream out;
    qbc::io::CsvWriter csv(out, a.common.precision);
    csv.cells({"curve", "mu", "k_ab", "k_ac"});
    for (double mu : a.mu) {
      const qbc::QkdScenario s(a.eta_b, a.eta_c, mu);
      const auto curves = qbc::bc_rate_region(s, a.resolution);
      auto emit = [&](const std::string& name,
                      const std::vector<qbc::KeyRatePair>& curve) {
        for (const auto& p : curve)
          csv.cells({name, csv.num(mu), csv.num(display(p.k_ab)),
                     csv.num(display(p.k_ac))});
      };
      emit("bc", curves.bc);
      emit("simultaneous", curves.simultaneous);
      emit("time_sharing", curves.time_sharing);
    }
    write_text(dir / "qkd_region.csv", out.str());
    std::cout << (dir / "qkd_region.csv").string() << "\n";
  }
  return kExitOk;
}

struct DecomposeArgs {
  std::string network_path;
  CommonOpts common;
};

int run_decompose(const DecomposeArgs& a) {
  json net_json;
  std::unique_ptr<qbc::LinearOpticalNetwork> net;
  try {
    std::ifstream in(a.network_path);
    if (!in) throw std::runtime_error("cannot read " + a.network_path);
    net_json = json::parse(in);
    net = std::make_unique<qbc::LinearOpticalNetwork>(
        qbc::io::network_from_json(net_json));
  } catch (const std::exception& e) {
    std::cerr << "invalid network file: " << e.what() << "\n";
    return kExitBadInput;
  }
  const auto dec = qbc::reck_decompose(*net);
  const double residual =
      (qbc::reconstruct_unitary(dec, net->n_modes()) - net->unitary()).norm();
  const auto [ch, casc] = qbc::prune_to_cascade(*net);

  json j;
  j["channel"] = qbc::io::channel_to_json(ch);
  j["cascade"] = qbc::io::cascade_to_json(ch, casc);
  j["element_count"] = dec.elements.size();
  j["reconstruction_residual"] = residual;
  const fs::path dir = prepare_outdir(a.common);
  write_json(dir / "cascade.json", j);
  std::cout << (dir / "cascade.json").string() << "\n";
  return kExitOk;
}

struct VerifyArgs {
  bool quick = false;
  std::string report = "verify_report.json";
  double entropy_bias = 0.0;
  CommonOpts common;
};

int run_verify(const VerifyArgs& a) {
  qbc::verify::Options opt;
  opt.quick = a.quick;
  opt.entropy_bias = a.entropy_bias;
  const auto results = qbc::verify::run_checks(opt);
  for (const auto& r : results) {
    std::cout << (r.passed ? "ok   " : "FAIL ") << r.name << " (error "
              << qbc::io::format_double(r.error, 3) << ", tolerance "
              << qbc::io::format_double(r.tolerance, 3) << ")\n";
  }
  const bool passed = qbc::verify::all_passed(results);
  std::cout << (passed ? "all checks passed" : "verification FAILED") << "\n";
  const fs::path dir = prepare_outdir(a.common);
  write_json(dir / a.report, qbc::verify::report_json(results, opt));
  return passed ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "rate regions, key rates and channel reductions for pure-loss optical "
      "broadcast channels"};
  app.name("qbc");
  app.require_subcommand(1);

  RegionArgs region_args;
  auto* region = app.add_subcommand(
      "region", "Subset rate constraints and boundary polylines of a channel");
  region->add_option("--eta", region_args.eta, "Receiver transmittances")
      ->required()
      ->delimiter(',');
  region
      ->add_option("--n-s", region_args.mean_photons,
                   "Mean photon numbers for finite-energy boundaries (2 receivers)")
      ->delimiter(',');
  region->add_option("--resolution", region_args.resolution,
                     "Extra points along boundary faces");
  add_common(region, region_args.common);

  SymmetricArgs symmetric_args;
  auto* symmetric = app.add_subcommand(
      "symmetric", "Equal-rate sum comparison for the symmetric 1-to-m channel");
  symmetric->add_option("--eta", symmetric_args.eta, "Total transmittance")
      ->required();
  symmetric->add_option("--m-max", symmetric_args.m_max, "Largest receiver count");
  add_common(symmetric, symmetric_args.common);

  QkdArgs qkd_args;
  auto* qkd = app.add_subcommand(
      "qkd", "Key-rate region curves for the two-receiver CV-QKD protocols");
  qkd->add_option("--eta-b", qkd_args.eta_b, "Transmittance to Bob")->required();
  qkd->add_option("--eta-c", qkd_args.eta_c, "Transmittance to Charlie")
      ->required();
  qkd->add_option("--mu", qkd_args.mu, "TMSV mean photon numbers")
      ->required()
      ->delimiter(',');
  qkd->add_option("--resolution", qkd_args.resolution,
                  "Points along time-shared segments");
  qkd->add_flag("--clamp", qkd_args.clamp, "Clamp displayed rates at zero");
  add_common(qkd, qkd_args.common);

  DecomposeArgs decompose_args;
  auto* decompose = app.add_subcommand(
      "decompose", "Reduce an interferometer to its equivalent splitter chain");
  decompose
      ->add_option("--network", decompose_args.network_path,
                   "Network description (JSON)")
      ->required();
  add_common(decompose, decompose_args.common);

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand(
      "verify", "Cross-check closed forms, pipelines and the Fock oracle");
  verify->add_flag("--quick", verify_args.quick,
                   "Skip the Fock-space checks (finishes in seconds)");
  verify->add_option("--report", verify_args.report, "Report file name");
  verify
      ->add_option("--test-bias-entropy", verify_args.entropy_bias,
                   "Fault-injection hook: relative bias on closed-form entropies")
      ->group("");  // hidden
  add_common(verify, verify_args.common);

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = apply_config_file(std::move(args));
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadParams;
  }

  try {
    if (region->parsed()) return run_region(region_args);
    if (symmetric->parsed()) return run_symmetric(symmetric_args);
    if (qkd->parsed()) return run_qkd(qkd_args);
    if (decompose->parsed()) return run_decompose(decompose_args);
    if (verify->parsed()) return run_verify(verify_args);
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return kExitBadParams;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return kExitBadParams;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
