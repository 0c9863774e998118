// Copyright 2026 The hbnpuf Authors
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

// Batch driver for the whole pipeline: gen -> collect -> metrics / entropy /
// sensitivity / cherry / export-hdl. Datasets are the expensive artifacts, so
// each analysis stage consumes the files of an earlier stage rather than
// recomputing. Every piece of randomness derives from an explicit --seed.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hbnpuf/ctw.hpp"
#include "hbnpuf/entropy.hpp"
#include "hbnpuf/errors.hpp"
#include "hbnpuf/harness.hpp"
#include "hbnpuf/hdl_export.hpp"
#include "hbnpuf/metrics.hpp"
#include "hbnpuf/sensitivity.hpp"
#include "hbnpuf/topology.hpp"
#include "hbnpuf/version.hpp"

namespace {

using namespace hbnpuf;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInfeasible = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << content;
  if (!out) throw DataError("write failed: " + path);
}

std::string hex64(std::uint64_t value) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string command_string(int argc, char** argv) {
  std::string cmd;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) cmd += ' ';
    cmd += argv[i];
  }
  return cmd;
}

PhysicsConfig load_physics_or_default(const std::string& path) {
  if (path.empty()) return PhysicsConfig{};
  return load_physics(path);
}

// ---- gen ------------------------------------------------------------------

struct GenArgs {
  std::uint32_t n = 0;
  std::uint64_t seed = 0;
  bool strict = false;
  std::string out;
};

int run_gen(const GenArgs& args) {
  const NetworkTopology topology = generate_topology(args.n, args.seed, args.strict);
  save_topology(topology, args.out);
  std::cout << "wrote " << args.out << " (n=" << args.n << ", seed=" << args.seed
            << (args.strict ? ", strict" : "") << ")\n";
  if (args.n <= 20) {
    const auto fixed = find_fixed_points_bruteforce(topology);
    std::cout << "fixed points under the synchronous map: " << fixed.size() << "\n";
  } else {
    std::cout << "fixed points: skipped (N > 20, exhaustive search infeasible)\n";
  }
  return kExitOk;
}

// ---- collect ---------------------------------------------------------------

struct CollectArgs {
  std::string topology_path;
  std::string physics_path;
  std::uint64_t seed = 0;
  std::uint64_t salt = 0;
  std::uint32_t chips = 8;
  std::uint32_t repeats = 100;
  bool exhaustive = false;
  std::uint32_t challenges = 1000;
  std::vector<double> temps{20.0};
  std::uint32_t stage_lo = 1;
  std::uint32_t stage_hi = 0;
  std::string role = "query";
  unsigned workers = 0;
  std::string out;
  std::string command;
};

int run_collect(const CollectArgs& args) {
  const NetworkTopology topology = load_topology(args.topology_path);
  const PhysicsConfig config = load_physics_or_default(args.physics_path);

  QueryProtocol protocol;
  if (args.exhaustive) {
    if (topology.n_nodes > 16) {
      throw InfeasibleError("exhaustive collection is limited to N <= 16; drop --exhaustive to "
                            "sample challenges instead (default 1000)");
    }
    protocol.mode = ChallengeMode::kExhaustive;
    protocol.n_challenges = (1u << topology.n_nodes) - 2;
  } else {
    protocol.mode = ChallengeMode::kSampled;
    protocol.n_challenges = args.challenges;
  }
  protocol.n_repeats = args.repeats;
  protocol.sample_seed = derive_seed({args.seed, 0x73616d70u});
  protocol.noise_salt = derive_seed({args.seed, 0x73616c74u, args.salt});
  protocol.stage_lo = args.stage_lo;
  protocol.stage_hi = args.stage_hi;
  protocol.temperatures = args.temps;

  std::vector<std::uint64_t> chip_seeds(args.chips);
  for (std::uint32_t p = 0; p < args.chips; ++p) {
    chip_seeds[p] = derive_seed({args.seed, 0x63686970u, p});
  }

  CRPDataset dataset = collect(topology, config, chip_seeds, protocol, args.role, args.workers);
  // Creation metadata carries no timestamps, so re-runs stay byte-identical.
  dataset.set_creation_metadata(std::string("hbnpuf ") + kVersion, args.command);
  dataset.save(args.out);

  const GlitchReport glitch = glitch_check(dataset);
  std::cout << "wrote " << args.out << ".manifest.json and " << args.out << ".crp.bin\n"
            << "dimensions: " << dataset.n_temps() << " temp(s) x " << dataset.n_chips()
            << " chips x " << dataset.n_challenges() << " challenges x " << dataset.n_repeats()
            << " repeats x " << dataset.n_stages() << " stages, N=" << dataset.n_nodes() << "\n";
  if (glitch.pass) {
    std::cout << "glitch check: PASS (all-zero/all-one challenges reproduce exactly)\n";
  } else {
    std::cout << "glitch check: FAIL (" << glitch.violations << " violations)";
    for (const auto& o : glitch.evidence) {
      std::cout << " [chip " << o.chip << " repeat " << o.repeat << " stage " << o.stage_number
                << " " << (o.kind == 0 ? "all-zero" : "all-one") << "]";
    }
    std::cout << "\nthis PUF class is glitchy and should be discarded\n";
  }
  return kExitOk;
}

// ---- metrics ---------------------------------------------------------------

struct MetricsArgs {
  std::string dataset;
  std::string reference;
  std::string mask;
  std::uint32_t temp_index = 0;
  std::string out_dir = ".";
};

int run_metrics(const MetricsArgs& args) {
  const CRPDataset dataset = CRPDataset::load(args.dataset);
  const std::string manifest_bytes = read_file(args.dataset + ".manifest.json");
  const std::uint64_t input_hash = fnv1a64(manifest_bytes.data(), manifest_bytes.size());
  std::filesystem::create_directories(args.out_dir);
  const std::string dir = args.out_dir + "/";

  const MetricsReport report = metrics_report(dataset, args.temp_index);
  write_mu_curves_csv(dir + "mu_curves.csv", report.curves, input_hash);
  write_hist_csv(dir + "hist.csv", report.histogram, input_hash);
  write_per_challenge_csv(dir + "per_challenge.csv", report, input_hash);
  write_per_chip_csv(dir + "per_chip_reliability.csv", report, input_hash);
  std::cout << "t_opt: stage " << report.curves.t_opt_stage << " (" << report.curves.t_opt_ns
            << " ns), delta_mu=" << report.curves.delta_mu[report.curves.t_opt_index]
            << ", mu_inter=" << report.curves.mu_inter[report.curves.t_opt_index]
            << ", mu_intra=" << report.curves.mu_intra[report.curves.t_opt_index] << "\n";

  if (!args.reference.empty()) {
    const CRPDataset reference = CRPDataset::load(args.reference);
    const HelperMask* mask_ptr = nullptr;
    HelperMask mask(1, 1, 1, 1, 1, 0.0);
    if (!args.mask.empty()) {
      mask = HelperMask::load(args.mask);
      mask_ptr = &mask;
    }
    const std::string ref_bytes = read_file(args.reference + ".manifest.json");
    const std::uint64_t ref_hash =
        mix64(input_hash ^ fnv1a64(ref_bytes.data(), ref_bytes.size()));
    std::vector<std::pair<double, MuRefCurve>> curves;
    for (std::uint32_t t = 0; t < dataset.n_temps(); ++t) {
      curves.emplace_back(dataset.manifest().protocol.temperatures[t],
                          mu_vs_reference(dataset, reference, mask_ptr, t, 0));
    }
    write_mu_ref_csv(dir + "mu_ref.csv", curves, ref_hash);
    std::cout << "wrote " << dir << "mu_ref.csv (" << curves.size() << " temperature(s)"
              << (mask_ptr != nullptr ? ", masked and raw" : ", raw only") << ")\n";
  }
  std::cout << "wrote " << dir << "mu_curves.csv, hist.csv, per_challenge.csv, "
            << "per_chip_reliability.csv\n";
  return kExitOk;
}

// ---- entropy ---------------------------------------------------------------

struct EntropyArgs {
  std::string dataset;
  std::string mode = "all";  // hmin | joint | ctw | all
  std::int64_t stage = -1;   // -1 selects t_opt
  std::uint32_t restarts = 4;
  std::uint64_t seed = 0;
  std::uint32_t ctw_depth_lo = 0;
  std::uint32_t ctw_depth_hi = 20;
  std::string out;
};

int run_entropy(const EntropyArgs& args) {
  const CRPDataset dataset = CRPDataset::load(args.dataset);
  const std::string manifest_bytes = read_file(args.dataset + ".manifest.json");
  const std::uint64_t input_hash = fnv1a64(manifest_bytes.data(), manifest_bytes.size());

  std::uint32_t stage = 0;
  if (args.stage >= 0) {
    if (static_cast<std::uint64_t>(args.stage) >= dataset.n_stages()) {
      throw DataError("--stage out of range (dataset has " + std::to_string(dataset.n_stages()) +
                      " stages)");
    }
    stage = static_cast<std::uint32_t>(args.stage);
  } else {
    if (dataset.n_repeats() < 2 || dataset.n_chips() < 2) {
      throw DataError("cannot locate t_opt on this dataset (needs >= 2 chips and >= 2 repeats); "
                      "pass --stage explicitly");
    }
    const MuCurves curves = mu_curves(dataset);
    stage = curves.t_opt_index;
    std::cout << "using t_opt stage " << curves.t_opt_stage << " (" << curves.t_opt_ns << " ns)\n";
  }

  const bool want_hmin = true;
  const bool want_joint = args.mode == "joint" || args.mode == "all";
  const bool want_ctw = args.mode == "ctw" || args.mode == "all";

  EntropyReportRow row;
  row.n_nodes = dataset.n_nodes();
  row.class_id = std::to_string(dataset.manifest().topology.seed);
  row.mode = dataset.manifest().protocol.mode == ChallengeMode::kExhaustive ? "exhaustive"
                                                                            : "sampled";
  const BitMatrix matrix = build_bit_matrix(dataset, stage);
  if (want_hmin) {
    const HMinResult result = h_min(matrix, dataset.n_nodes());
    row.h_min_bits_log2 = result.h_min_bits_log2;
    row.rho_min = result.rho_min;
    std::cout << "H_min: 2^" << result.h_min_bits_log2 << " bits (rho_min=" << result.rho_min
              << (result.extrapolated ? ", extrapolated from a challenge sample)" : ")") << "\n";
  }
  if (want_joint) {
    if (dataset.manifest().protocol.mode != ChallengeMode::kExhaustive) {
      throw InfeasibleError("joint entropy needs the exhaustive challenge space (N <= 8)");
    }
    const HJointResult joint = h_joint(matrix, dataset.n_nodes(), args.restarts,
                                       derive_seed({args.seed, 0x326f7074u}));
    row.has_joint = true;
    row.h_joint_bits = joint.h_joint_bits;
    row.rho_joint = joint.rho_joint;
    std::cout << "H_joint: " << joint.h_joint_bits << " bits (rho_joint=" << joint.rho_joint
              << ", MI chain penalty " << joint.penalty_bits << " bits)\n";
  }
  if (want_ctw) {
    const CtwReport ctw = h_ctw(dataset, stage, args.ctw_depth_lo, args.ctw_depth_hi);
    row.has_ctw = true;
    row.h_ctw_bits = ctw.h_ctw_bits;
    std::cout << "H_CTW: " << ctw.h_ctw_bits << " bits (leave-one-chip-out, depths "
              << args.ctw_depth_lo << ".." << args.ctw_depth_hi << ")\n";
  }
  write_entropy_csv(args.out, {row}, input_hash);
  std::cout << "wrote " << args.out << "\n";
  return kExitOk;
}

// ---- sensitivity -----------------------------------------------------------

struct SensitivityArgs {
  std::string topology_path;
  std::string physics_path;
  std::uint64_t seed = 0;
  std::uint64_t chip_seed = 0;
  bool chip_seed_set = false;
  std::uint32_t stage = 0;
  std::vector<std::string> targets{"xor", "0"};
  double epsilon = 0.05;
  std::uint64_t samples = 1000;
  std::string out;
};

int run_sensitivity(const SensitivityArgs& args) {
  const NetworkTopology topology = load_topology(args.topology_path);
  const PhysicsConfig config = load_physics_or_default(args.physics_path);
  const std::uint64_t chip_seed =
      args.chip_seed_set ? args.chip_seed : derive_seed({args.seed, 0x63686970u, 0u});
  const ChipInstance chip = sample_chip(topology, config, chip_seed);

  const std::string topo_bytes = read_file(args.topology_path);
  const std::uint64_t input_hash = fnv1a64(topo_bytes.data(), topo_bytes.size());

  std::vector<SensitivityRow> rows;
  for (const std::string& target : args.targets) {
    int index = kTargetXorAll;
    if (target != "xor") {
      try {
        index = std::stoi(target);
      } catch (...) {
        throw ConfigError("--targets entries must be 'xor' or a node index");
      }
    }
    const BitFunction f = response_bit_function(chip, config, args.stage, index);
    SensitivityRow row;
    row.target = target == "xor" ? "xor" : ("bit:" + target);
    row.epsilon = args.epsilon;
    row.as = average_sensitivity(f, topology.n_nodes, args.samples,
                                 derive_seed({args.seed, 0x6173u, fnv1a64(target.data(),
                                                                          target.size())}));
    row.ns = noise_sensitivity(f, topology.n_nodes, args.epsilon, args.samples,
                               derive_seed({args.seed, 0x6e73u, fnv1a64(target.data(),
                                                                        target.size())}));
    std::cout << row.target << ": AS=" << row.as.value << " (se " << row.as.std_error
              << "), NS=" << row.ns.value << " (se " << row.ns.std_error << ")\n";
    rows.push_back(std::move(row));
  }
  write_sensitivity_csv(args.out, rows, input_hash);
  std::cout << "wrote " << args.out << "\n";
  return kExitOk;
}

// ---- cherry ----------------------------------------------------------------

struct CherryArgs {
  std::string enroll;
  double threshold = 0.01;
  std::uint32_t temp_index = 0;
  std::string out;
};

int run_cherry(const CherryArgs& args) {
  const CRPDataset enroll = CRPDataset::load(args.enroll);
  const std::string manifest_bytes = read_file(args.enroll + ".manifest.json");
  const std::uint64_t input_hash = fnv1a64(manifest_bytes.data(), manifest_bytes.size());

  const HelperMask mask = cherry_pick(enroll, args.threshold, args.temp_index);
  mask.save(args.out);

  const std::vector<double> stable = mask.stable_bits_per_stage();
  std::ofstream csv(args.out + ".stable_bits.csv", std::ios::binary);
  if (!csv) throw DataError("cannot open for writing: " + args.out + ".stable_bits.csv");
  csv << "# input_hash=" << hex64(input_hash) << "\n";
  csv << "stage,t_ns,mean_stable_bits\n";
  for (std::uint32_t m = 0; m < stable.size(); ++m) {
    csv << enroll.stage_number(m) << ',' << enroll.stage_time_ns(m) << ',' << stable[m] << '\n';
  }
  std::cout << "wrote " << args.out << ".helper.json/.bin and " << args.out
            << ".stable_bits.csv (threshold " << args.threshold << ")\n";
  const std::uint32_t n = enroll.n_nodes();
  for (std::uint32_t m = 0; m < stable.size(); ++m) {
    if (enroll.stage_time_ns(m) <= 7.0) {
      std::cout << "stage " << enroll.stage_number(m) << ": " << stable[m] << "/" << n
                << " stable bits\n";
    }
  }
  return kExitOk;
}

// ---- export-hdl ------------------------------------------------------------

struct ExportArgs {
  std::string topology_path;
  std::uint32_t m_stages = 32;
  std::string out;
};

int run_export_hdl(const ExportArgs& args) {
  const NetworkTopology topology = load_topology(args.topology_path);
  const std::string network = emit_network_hdl(topology);
  const std::string delayline = emit_delayline_hdl(args.m_stages);
  // Round-trip guard: the emitted text must regenerate the same topology.
  if (parse_network_hdl(network) != topology) {
    throw DataError("internal error: emitted HDL does not round-trip");
  }
  write_file(args.out + "_abn.v", network);
  write_file(args.out + "_tdl.v", delayline);
  std::cout << "wrote " << args.out << "_abn.v (" << topology.n_nodes << " node blocks) and "
            << args.out << "_tdl.v (" << 2 * args.m_stages << " inverters, " << args.m_stages
            << " taps)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hbnpuf: hybrid Boolean network PUF laboratory"};
  app.require_subcommand(1);

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "generate a PUF class topology");
  gen->add_option("--n", gen_args.n, "node count (>= 4)")->required();
  gen->add_option("--seed", gen_args.seed, "topology seed")->required();
  gen->add_flag("--strict", gen_args.strict, "force out-degree 3 everywhere");
  gen->add_option("--out", gen_args.out, "output topology JSON")->required();

  CollectArgs collect_args;
  CLI::App* collect_cmd = app.add_subcommand("collect", "run an enrollment/query campaign");
  collect_cmd->add_option("--topology", collect_args.topology_path, "topology JSON")->required();
  collect_cmd->add_option("--physics", collect_args.physics_path,
                          "physics JSON (defaults when omitted)");
  collect_cmd->add_option("--seed", collect_args.seed, "master seed (chips, challenges, noise)")
      ->required();
  collect_cmd->add_option("--salt", collect_args.salt,
                          "noise-stream salt; collections sharing a seed but differing in salt "
                          "see the same chips and challenges under fresh noise");
  collect_cmd->add_option("--chips", collect_args.chips, "chip count (default 8)");
  collect_cmd->add_option("--repeats", collect_args.repeats, "repeats per challenge (default 100)");
  collect_cmd->add_flag("--exhaustive", collect_args.exhaustive,
                        "use every valid challenge (N <= 16)");
  collect_cmd->add_option("--challenges", collect_args.challenges,
                          "sampled challenge count (default 1000)");
  collect_cmd->add_option("--temps", collect_args.temps,
                          "temperature list in C (default 20)")->delimiter(',');
  collect_cmd->add_option("--stage-lo", collect_args.stage_lo, "first captured stage (1-based)");
  collect_cmd->add_option("--stage-hi", collect_args.stage_hi, "last captured stage (0 = M)");
  collect_cmd->add_option("--role", collect_args.role, "manifest tag, e.g. enroll or query");
  collect_cmd->add_option("--workers", collect_args.workers, "worker threads (0 = all cores)");
  collect_cmd->add_option("--out", collect_args.out, "output prefix")->required();

  MetricsArgs metrics_args;
  CLI::App* metrics_cmd = app.add_subcommand("metrics", "mu curves, histograms, t_opt");
  metrics_cmd->add_option("--dataset", metrics_args.dataset, "dataset prefix")->required();
  metrics_cmd->add_option("--reference", metrics_args.reference,
                          "enrollment dataset prefix for mu-vs-reference");
  metrics_cmd->add_option("--mask", metrics_args.mask, "helper mask prefix (with --reference)");
  metrics_cmd->add_option("--temp-index", metrics_args.temp_index, "temperature index");
  metrics_cmd->add_option("--out-dir", metrics_args.out_dir, "output directory")->required();

  EntropyArgs entropy_args;
  CLI::App* entropy_cmd = app.add_subcommand("entropy", "H_min / H_joint / H_CTW estimates");
  entropy_cmd->add_option("--dataset", entropy_args.dataset, "dataset prefix")->required();
  entropy_cmd->add_option("--mode", entropy_args.mode, "hmin | joint | ctw | all")
      ->check(CLI::IsMember({"hmin", "joint", "ctw", "all"}));
  entropy_cmd->add_option("--stage", entropy_args.stage, "stored stage index (default: t_opt)");
  entropy_cmd->add_option("--restarts", entropy_args.restarts, "2-opt random restarts");
  entropy_cmd->add_option("--seed", entropy_args.seed, "seed for the 2-opt restarts")->required();
  entropy_cmd->add_option("--ctw-depth-lo", entropy_args.ctw_depth_lo, "CTW depth sweep start");
  entropy_cmd->add_option("--ctw-depth-hi", entropy_args.ctw_depth_hi, "CTW depth sweep end");
  entropy_cmd->add_option("--out", entropy_args.out, "output CSV")->required();

  SensitivityArgs sensitivity_args;
  CLI::App* sensitivity_cmd =
      app.add_subcommand("sensitivity", "average and noise sensitivity of response bits");
  sensitivity_cmd->add_option("--topology", sensitivity_args.topology_path, "topology JSON")
      ->required();
  sensitivity_cmd->add_option("--physics", sensitivity_args.physics_path, "physics JSON");
  sensitivity_cmd->add_option("--seed", sensitivity_args.seed, "Monte Carlo seed")->required();
  CLI::Option* chip_seed_opt = sensitivity_cmd->add_option(
      "--chip-seed", sensitivity_args.chip_seed, "explicit chip seed (default: derived)");
  sensitivity_cmd->add_option("--stage", sensitivity_args.stage, "stored stage index");
  sensitivity_cmd->add_option("--targets", sensitivity_args.targets,
                              "comma list of 'xor' and node indices")->delimiter(',');
  sensitivity_cmd->add_option("--epsilon", sensitivity_args.epsilon, "noise rate (default 0.05)");
  sensitivity_cmd->add_option("--samples", sensitivity_args.samples, "Monte Carlo samples");
  sensitivity_cmd->add_option("--out", sensitivity_args.out, "output CSV")->required();

  CherryArgs cherry_args;
  CLI::App* cherry_cmd = app.add_subcommand("cherry", "cherry-pick helper masks from enrollment");
  cherry_cmd->add_option("--enroll", cherry_args.enroll, "enrollment dataset prefix")->required();
  cherry_cmd->add_option("--threshold", cherry_args.threshold, "flip-rate threshold (<= 0.5)");
  cherry_cmd->add_option("--temp-index", cherry_args.temp_index, "enrollment temperature index");
  cherry_cmd->add_option("--out", cherry_args.out, "output mask prefix")->required();

  ExportArgs export_args;
  CLI::App* export_cmd = app.add_subcommand("export-hdl", "emit structural Verilog");
  export_cmd->add_option("--topology", export_args.topology_path, "topology JSON")->required();
  export_cmd->add_option("--m-stages", export_args.m_stages, "delay-line stages (default 32)");
  export_cmd->add_option("--out", export_args.out, "output prefix")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    collect_args.command = command_string(argc, argv);
    sensitivity_args.chip_seed_set = chip_seed_opt->count() > 0;
    if (gen->parsed()) return run_gen(gen_args);
    if (collect_cmd->parsed()) return run_collect(collect_args);
    if (metrics_cmd->parsed()) return run_metrics(metrics_args);
    if (entropy_cmd->parsed()) return run_entropy(entropy_args);
    if (sensitivity_cmd->parsed()) return run_sensitivity(sensitivity_args);
    if (cherry_cmd->parsed()) return run_cherry(cherry_args);
    if (export_cmd->parsed()) return run_export_hdl(export_args);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const SimulationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
