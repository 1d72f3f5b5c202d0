// Copyright 2026 The tsyn developers
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

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <thread>

#include "tsyn/circuit.hpp"
#include "tsyn/core.hpp"
#include "tsyn/errors.hpp"
#include "tsyn/noise.hpp"
#include "tsyn/synth.hpp"
#include "tsyn/tables.hpp"

namespace {

using json = nlohmann::json;
using namespace tsyn;

constexpr const char* kVersion = "1.0.0";

// Exit codes: 0 ok, 2 usage, 3 bad input, 4 threshold not met, 5 corrupt
// or unsupported table file.
enum ExitCode {
  kOk = 0,
  kUsage = 2,
  kBadInput = 3,
  kThresholdNotMet = 4,
  kCorruptTable = 5,
};

double now_ms() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double, std::milli>(clock::now() - start)
      .count();
}

std::uint64_t file_checksum(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return 0;
  const std::string bytes((std::istreambuf_iterator<char>(f)),
                          std::istreambuf_iterator<char>());
  return tables::fnv1a(bytes.data(), bytes.size());
}

struct Manifest {
  json j;

  Manifest(int argc, char** argv) {
    j["schema"] = 1;
    j["tool"] = "tsyn";
    j["version"] = kVersion;
    json cmd = json::array();
    for (int i = 0; i < argc; ++i) cmd.push_back(argv[i]);
    j["command"] = cmd;
  }

  void write_alongside(const std::string& out_path, double wall_ms) {
    j["wall_ms"] = wall_ms;
    std::ofstream f(out_path + ".manifest.json");
    f << j.dump(2) << "\n";
  }
};

struct CommonSynth {
  std::string tables_path;
  std::vector<int> budgets{6, 6, 6};
  std::size_t samples = 40000;
  int attempts = 1;
  std::uint64_t seed = 0;
  std::string mode = "topk";
  double epsilon = -1.0;
  double time_limit = 0.0;

  synth::SynthesisConfig config() const {
    synth::SynthesisConfig cfg;
    cfg.t_budgets = budgets;
    cfg.samples = samples;
    cfg.attempts = attempts;
    cfg.rng_seed = seed;
    cfg.mode = (mode == "stochastic") ? sampler::Mode::Stochastic
                                      : sampler::Mode::TopK;
    if (epsilon >= 0.0) cfg.epsilon = epsilon;
    cfg.time_limit_seconds = time_limit;
    return cfg;
  }

  json config_json() const {
    json c;
    c["t_budgets"] = budgets;
    c["samples"] = samples;
    c["attempts"] = attempts;
    c["seed"] = seed;
    c["mode"] = mode;
    if (epsilon >= 0.0) c["epsilon"] = epsilon;
    if (time_limit > 0.0) c["time_limit_seconds"] = time_limit;
    return c;
  }
};

void add_common(CLI::App* cmd, CommonSynth& cs) {
  const char* env_tables = std::getenv("TSYN_TABLES");
  if (env_tables != nullptr) cs.tables_path = env_tables;
  cmd->add_option("--tables", cs.tables_path,
                  "table file (default: $TSYN_TABLES)");
  cmd->add_option("--t-budgets", cs.budgets, "per-tensor T budgets")
      ->delimiter(',');
  cmd->add_option("--samples", cs.samples, "samples per synthesis (k)");
  cmd->add_option("--attempts", cs.attempts, "reattempts per budget (r)");
  cmd->add_option("--seed", cs.seed, "RNG seed");
  cmd->add_option("--mode", cs.mode, "sampling mode")
      ->check(CLI::IsMember({"topk", "stochastic"}));
  cmd->add_option("--epsilon", cs.epsilon, "target error threshold");
  cmd->add_option("--time-limit", cs.time_limit, "wall-clock limit (s)");
}

tables::BuildResult load_tables_checked(const std::string& path) {
  if (path.empty()) {
    throw InputError("no table file; pass --tables or set TSYN_TABLES");
  }
  return tables::load_table(path);
}

// Statistics block used by the bench reports.
struct Stats {
  double min = 0, mean = 0, geomean = 0, median = 0, max = 0;
};

Stats stats_of(std::vector<double> v) {
  Stats s;
  if (v.empty()) return s;
  std::sort(v.begin(), v.end());
  s.min = v.front();
  s.max = v.back();
  const std::size_t n = v.size();
  s.median = (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  double sum = 0, logsum = 0;
  for (double x : v) {
    sum += x;
    logsum += std::log(std::max(x, 1e-300));
  }
  s.mean = sum / static_cast<double>(n);
  s.geomean = std::exp(logsum / static_cast<double>(n));
  return s;
}

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(12);
  o << v;
  return o.str();
}

// ---------------------------------------------------------------------------
// tables build / verify
// ---------------------------------------------------------------------------

int run_tables_build(int max_t, const std::string& out,
                     std::size_t memory_cap, Manifest& manifest) {
  tables::EnumerationConfig cfg;
  if (memory_cap > 0) cfg.memory_cap_bytes = memory_cap;
  const double t0 = now_ms();
  const tables::BuildResult br = tables::enumerate_table(max_t, cfg);
  std::size_t cum = 0;
  for (int t = 0; t <= max_t; ++t) {
    cum += br.table.entries_by_t[static_cast<std::size_t>(t)].size();
    std::cout << "t=" << t << " cumulative_unique=" << cum << "\n";
  }
  tables::save_table(br.table, br.rewrites, out);
  std::cout << "entries=" << br.table.size()
            << " rewrites=" << br.rewrites.size() << " file=" << out << "\n";
  manifest.j["config"] = {{"max_t", max_t}};
  manifest.j["table_checksum"] = file_checksum(out);
  manifest.write_alongside(out, now_ms() - t0);
  return kOk;
}

int run_tables_verify(const std::string& path) {
  const tables::BuildResult br = tables::load_table(path);
  std::size_t cum = 0;
  for (int t = 0; t <= br.table.max_t; ++t) {
    cum += br.table.entries_by_t[static_cast<std::size_t>(t)].size();
    const std::size_t expect = 24u * ((std::size_t{3} << t) - 2u);
    std::cout << "t=" << t << " cumulative_unique=" << cum
              << " expected=" << expect << "\n";
    if (cum != expect) {
      std::cerr << "counting law violated at t=" << t << "\n";
      return kCorruptTable;
    }
  }
  for (std::size_t i = 0; i < br.table.size(); ++i) {
    const tables::TableEntry& e = br.table.entry(i);
    if (distance(matrix_of(e.sequence), e.matrix.m) > 1e-10) {
      std::cerr << "entry " << i << " sequence does not reproduce matrix\n";
      return kCorruptTable;
    }
  }
  for (const auto& [key, val] : br.rewrites.map) {
    const GateSequence k = GateSequence::from_str(key);
    if (!(cost_of(val) < cost_of(k)) ||
        distance(matrix_of(k), matrix_of(val)) > 1e-10) {
      std::cerr << "invalid rewrite for key " << key << "\n";
      return kCorruptTable;
    }
  }
  std::cout << "ok: " << br.table.size() << " entries, "
            << br.rewrites.size() << " rewrites\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

double parse_angle(const std::string& text) {
  // Reuse the circuit grammar for pi-expressions.
  const circuit::Circuit c =
      circuit::parse("qreg 1;\nrz(" + text + ") 0;\n");
  return c.ops.at(0).a0;
}

Unitary2 unitary_from_flat(const std::vector<double>& v) {
  Unitary2 u;
  for (int k = 0; k < 4; ++k) {
    u.e[static_cast<std::size_t>(k)] =
        cplx(v[static_cast<std::size_t>(2 * k)],
             v[static_cast<std::size_t>(2 * k + 1)]);
  }
  if (!u.finite() || u.unitarity_defect() > 1e-8) {
    throw InputError("matrix is not unitary within 1e-8");
  }
  return u;
}

json result_json(const synth::SynthesisResult& r, double wall_ms) {
  json out;
  out["schema"] = 1;
  out["gates"] = r.sequence.str();
  out["length"] = r.sequence.size();
  out["t_count"] = r.sequence.t_count();
  out["s_count"] = r.sequence.s_count();
  out["h_count"] = r.sequence.h_count();
  out["non_pauli_clifford_count"] = r.sequence.non_pauli_clifford_count();
  out["distance"] = r.error;
  out["tensors_used"] = r.tensors_used;
  out["samples_evaluated"] = r.samples_evaluated;
  out["below_threshold"] = r.below_threshold;
  out["wall_ms"] = wall_ms;
  return out;
}

struct BenchRow {
  std::size_t index;
  double distance;
  int t_count;
  int clifford_count;
  double wall_ms;
};

std::vector<BenchRow> run_bench_targets(const CommonSynth& cs,
                                        const tables::BuildResult& br,
                                        std::size_t n, int jobs,
                                        std::vector<GateSequence>* seqs) {
  std::vector<BenchRow> rows(n);
  if (seqs != nullptr) seqs->resize(n);
  const auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < n; i += step) {
      synth::SynthesisConfig cfg = cs.config();
      cfg.rng_seed = cs.seed + i;
      const Unitary2 u = haar_random_unitary(cs.seed + i);
      const double t0 = now_ms();
      const synth::SynthesisResult r =
          synth::synthesize(u, cfg, br.table, br.rewrites);
      rows[i] = {i, r.error, r.sequence.t_count(),
                 r.sequence.non_pauli_clifford_count(), now_ms() - t0};
      if (seqs != nullptr) (*seqs)[i] = r.sequence;
    }
  };
  if (jobs <= 1 || n < 2) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    const auto nt = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
    for (std::size_t w = 0; w < nt; ++w) pool.emplace_back(work, w, nt);
    for (auto& th : pool) th.join();
  }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "index,distance,t_count,clifford_count,wall_ms\n";
  std::vector<double> d, t, c, w;
  for (const BenchRow& r : rows) {
    out << r.index << "," << fmt(r.distance) << "," << r.t_count << ","
        << r.clifford_count << "," << fmt(r.wall_ms) << "\n";
    d.push_back(r.distance);
    t.push_back(r.t_count);
    c.push_back(r.clifford_count);
    w.push_back(r.wall_ms);
  }
  const Stats sd = stats_of(d), st = stats_of(t), sc = stats_of(c),
              sw = stats_of(w);
  const auto line = [&](const char* name, auto pick) {
    out << name << "," << fmt(pick(sd)) << "," << fmt(pick(st)) << ","
        << fmt(pick(sc)) << "," << fmt(pick(sw)) << "\n";
  };
  line("min", [](const Stats& s) { return s.min; });
  line("mean", [](const Stats& s) { return s.mean; });
  line("geomean", [](const Stats& s) { return s.geomean; });
  line("median", [](const Stats& s) { return s.median; });
  line("max", [](const Stats& s) { return s.max; });
}

int run_synth(const CommonSynth& cs, const std::vector<double>& inline_mat,
              const std::string& json_file, const std::string& rz_angle,
              const std::string& u3_angles, long random_n,
              const std::string& out_path, bool as_json, int jobs,
              Manifest& manifest) {
  const tables::BuildResult br = load_tables_checked(cs.tables_path);
  manifest.j["config"] = cs.config_json();
  manifest.j["table_checksum"] = file_checksum(cs.tables_path);

  if (random_n > 0) {
    const double t0 = now_ms();
    const auto rows = run_bench_targets(
        cs, br, static_cast<std::size_t>(random_n), jobs, nullptr);
    if (out_path.empty()) {
      write_bench_csv(std::cout, rows);
    } else {
      std::ofstream f(out_path);
      if (!f) throw InputError("cannot open '" + out_path + "'");
      write_bench_csv(f, rows);
      manifest.write_alongside(out_path, now_ms() - t0);
    }
    return kOk;
  }

  Unitary2 target;
  int sources = 0;
  if (!inline_mat.empty()) {
    if (inline_mat.size() != 8) {
      throw InputError("inline unitary needs 8 floats (row-major re,im)");
    }
    target = unitary_from_flat(inline_mat);
    ++sources;
  }
  if (!json_file.empty()) {
    std::ifstream f(json_file);
    if (!f) throw InputError("cannot open '" + json_file + "'");
    json j;
    f >> j;
    target = unitary_from_flat(j.at("unitary").get<std::vector<double>>());
    ++sources;
  }
  if (!rz_angle.empty()) {
    target = rz(parse_angle(rz_angle));
    ++sources;
  }
  if (!u3_angles.empty()) {
    std::istringstream ss(u3_angles);
    std::string part;
    std::vector<double> a;
    while (std::getline(ss, part, ',')) a.push_back(parse_angle(part));
    if (a.size() != 3) throw InputError("--u3 needs three angles a,b,c");
    target = u3(a[0], a[1], a[2]);
    ++sources;
  }
  if (sources != 1) {
    throw InputError(
        "give exactly one of: 8 inline floats, --json-file, --rz, --u3, "
        "--random");
  }

  const double t0 = now_ms();
  const synth::SynthesisResult r =
      synth::synthesize(target, cs.config(), br.table, br.rewrites);
  const double wall = now_ms() - t0;
  if (as_json) {
    std::cout << result_json(r, wall).dump(2) << "\n";
  } else {
    std::cout << "gates: " << (r.sequence.empty() ? "(empty)"
                                                  : r.sequence.str())
              << "\n"
              << "t_count: " << r.sequence.t_count() << "\n"
              << "clifford_count: " << r.sequence.non_pauli_clifford_count()
              << "\n"
              << "distance: " << fmt(r.error) << "\n"
              << "tensors_used: " << r.tensors_used << "\n"
              << "wall_ms: " << fmt(wall) << "\n";
  }
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    f << result_json(r, wall).dump(2) << "\n";
    manifest.write_alongside(out_path, wall);
  }
  if (cs.epsilon >= 0.0 && !r.below_threshold) return kThresholdNotMet;
  return kOk;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

int run_bench(const CommonSynth& cs, std::size_t targets, bool compare_3rz,
              const std::string& out_path, int jobs, Manifest& manifest) {
  const tables::BuildResult br = load_tables_checked(cs.tables_path);
  manifest.j["config"] = cs.config_json();
  manifest.j["table_checksum"] = file_checksum(cs.tables_path);
  const double t0 = now_ms();

  std::ostringstream csv;
  if (!compare_3rz) {
    const auto rows = run_bench_targets(cs, br, targets, jobs, nullptr);
    write_bench_csv(csv, rows);
  } else {
    const double eps = cs.epsilon >= 0.0 ? cs.epsilon : 0.06;
    csv << "index,epsilon,err_direct,t_direct,err_3rz,t_3rz,ratio\n";
    long total_direct = 0, total_3rz = 0;
    std::vector<double> ratios;
    std::vector<synth::EconomyPair> pairs(targets);
    const auto work = [&](std::size_t begin, std::size_t step) {
      for (std::size_t i = begin; i < targets; i += step) {
        synth::SynthesisConfig cfg = cs.config();
        cfg.epsilon.reset();
        cfg.rng_seed = cs.seed + i;
        pairs[i] = synth::economy_compare(haar_random_unitary(cs.seed + i),
                                          eps, cfg, br.table, br.rewrites);
      }
    };
    if (jobs <= 1 || targets < 2) {
      work(0, 1);
    } else {
      std::vector<std::thread> pool;
      const auto nt =
          std::min<std::size_t>(static_cast<std::size_t>(jobs), targets);
      for (std::size_t w = 0; w < nt; ++w) pool.emplace_back(work, w, nt);
      for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < targets; ++i) {
      const synth::EconomyPair& p = pairs[i];
      const double ratio =
          p.t_direct > 0
              ? static_cast<double>(p.t_three_rz) / p.t_direct
              : static_cast<double>(p.t_three_rz);
      csv << i << "," << fmt(p.epsilon) << "," << fmt(p.err_direct) << ","
          << p.t_direct << "," << fmt(p.err_three_rz) << "," << p.t_three_rz
          << "," << fmt(ratio) << "\n";
      total_direct += p.t_direct;
      total_3rz += p.t_three_rz;
      ratios.push_back(ratio);
    }
    const Stats rs = stats_of(ratios);
    csv << "total,," << "," << total_direct << ",," << total_3rz << ","
        << fmt(static_cast<double>(total_3rz) /
               std::max<long>(total_direct, 1))
        << "\n";
    std::cout << "t_direct_total=" << total_direct
              << " t_3rz_total=" << total_3rz << " median_ratio_3rz_over_direct="
              << fmt(rs.median) << "\n";
  }

  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(out_path);
    if (!f) throw InputError("cannot open '" + out_path + "'");
    f << csv.str();
    manifest.write_alongside(out_path, now_ms() - t0);
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// circuit synth / metrics
// ---------------------------------------------------------------------------

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

json metrics_json(const circuit::CircuitMetrics& m) {
  return json{{"t_count", m.t_count},
              {"t_depth", m.t_depth},
              {"clifford_count", m.clifford_count},
              {"rotation_count", m.rotation_count}};
}

int run_circuit_synth(const CommonSynth& cs, const std::string& in_path,
                      bool commute, const std::string& out_path,
                      const std::string& metrics_path, int jobs,
                      Manifest& manifest) {
  const tables::BuildResult br = load_tables_checked(cs.tables_path);
  const double t0 = now_ms();
  const circuit::Circuit input = circuit::parse(read_file(in_path));
  const circuit::Circuit merged = circuit::merge_rotations(input, commute);
  const circuit::CircuitSynthesisResult res = circuit::synthesize_circuit(
      merged, cs.config(), br.table, br.rewrites, jobs);
  const double wall = now_ms() - t0;

  json report;
  report["schema"] = 1;
  report["input"] = metrics_json(circuit::metrics(input));
  report["merged"] = metrics_json(circuit::metrics(merged));
  report["output"] = metrics_json(circuit::metrics(res.compiled));
  report["error_bound"] = res.error_bound;
  json rots = json::array();
  for (const auto& r : res.rotations) {
    rots.push_back({{"op_index", r.op_index},
                    {"error", r.error},
                    {"t_count", r.t_count},
                    {"below_threshold", r.below_threshold}});
  }
  report["rotations"] = rots;
  report["threshold_misses"] = res.threshold_misses;
  report["wall_ms"] = wall;

  manifest.j["config"] = cs.config_json();
  manifest.j["config"]["commute"] = commute;
  manifest.j["table_checksum"] = file_checksum(cs.tables_path);

  if (out_path.empty()) {
    std::cout << circuit::emit(res.compiled);
  } else {
    std::ofstream f(out_path);
    if (!f) throw InputError("cannot open '" + out_path + "'");
    f << circuit::emit(res.compiled);
    manifest.write_alongside(out_path, wall);
  }
  if (!metrics_path.empty()) {
    std::ofstream f(metrics_path);
    if (!f) throw InputError("cannot open '" + metrics_path + "'");
    f << report.dump(2) << "\n";
  } else {
    std::cerr << "error_bound=" << fmt(res.error_bound)
              << " t_count=" << circuit::metrics(res.compiled).t_count << "\n";
  }
  if (cs.epsilon >= 0.0 && res.threshold_misses > 0) return kThresholdNotMet;
  return kOk;
}

int run_circuit_metrics(const std::string& in_path, bool as_json) {
  const circuit::Circuit c = circuit::parse(read_file(in_path));
  const circuit::CircuitMetrics m = circuit::metrics(c);
  if (as_json) {
    json j = metrics_json(m);
    j["schema"] = 1;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "t_count: " << m.t_count << "\nt_depth: " << m.t_depth
              << "\nclifford_count: " << m.clifford_count
              << "\nrotation_count: " << m.rotation_count << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// noise sweep
// ---------------------------------------------------------------------------

int run_noise_sweep(const CommonSynth& cs, std::size_t targets,
                    std::vector<double> thresholds, std::vector<double> rates,
                    const std::string& out_path, bool fit, Manifest& manifest) {
  const tables::BuildResult br = load_tables_checked(cs.tables_path);
  const double t0 = now_ms();
  std::vector<Unitary2> us;
  us.reserve(targets);
  for (std::size_t i = 0; i < targets; ++i) {
    us.push_back(haar_random_unitary(cs.seed + i));
  }
  synth::SynthesisConfig base = cs.config();
  base.epsilon.reset();
  const auto points = noise::tradeoff_sweep(us, thresholds, rates, base,
                                            br.table, br.rewrites);
  std::ostringstream csv;
  csv << "threshold,rate,mean_infidelity,std,mean_t_count\n";
  for (const auto& p : points) {
    csv << fmt(p.synthesis_threshold) << "," << fmt(p.logical_rate) << ","
        << fmt(p.mean_process_infidelity) << "," << fmt(p.std) << ","
        << fmt(p.mean_t_count) << "\n";
  }
  manifest.j["config"] = cs.config_json();
  manifest.j["config"]["targets"] = targets;
  manifest.j["config"]["thresholds"] = thresholds;
  manifest.j["config"]["rates"] = rates;
  manifest.j["table_checksum"] = file_checksum(cs.tables_path);

  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(out_path);
    if (!f) throw InputError("cannot open '" + out_path + "'");
    f << csv.str();
  }
  if (fit) {
    const noise::PowerLawFit pf = noise::fit_optimal_threshold(points);
    json j{{"schema", 1},
           {"exponent", pf.exponent},
           {"coefficient", pf.coefficient}};
    std::cout << j.dump(2) << "\n";
    manifest.j["fit"] = j;
  }
  if (!out_path.empty()) manifest.write_alongside(out_path, now_ms() - t0);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clifford+T synthesis toolkit"};
  app.require_subcommand(1);
  Manifest manifest(argc, argv);

  // tables
  auto* tables_cmd = app.add_subcommand("tables", "build or verify tables");
  tables_cmd->require_subcommand(1);
  int build_max_t = 6;
  std::string build_out = "table.tsyn";
  std::size_t build_cap = 0;
  auto* tables_build =
      tables_cmd->add_subcommand("build", "enumerate unique matrices");
  tables_build->add_option("--max-t", build_max_t, "maximum T count")
      ->required();
  tables_build->add_option("--out", build_out, "output file")->required();
  tables_build->add_option("--memory-cap", build_cap, "memory cap in bytes");
  std::string verify_path;
  auto* tables_verify =
      tables_cmd->add_subcommand("verify", "check a table file");
  tables_verify->add_option("file", verify_path, "table file")->required();

  // synth
  CommonSynth synth_cs;
  auto* synth_cmd = app.add_subcommand("synth", "synthesize one unitary");
  add_common(synth_cmd, synth_cs);
  std::vector<double> inline_mat;
  std::string json_file, rz_angle, u3_angles, synth_out;
  long random_n = 0;
  bool synth_json = false;
  int synth_jobs = 1;
  synth_cmd->add_option("matrix", inline_mat,
                        "8 floats: row-major re,im entries");
  synth_cmd->add_option("--json-file", json_file, "JSON file with 'unitary'");
  synth_cmd->add_option("--rz", rz_angle, "Rz angle (float or pi-expression)");
  synth_cmd->add_option("--u3", u3_angles, "U3 angles a,b,c");
  synth_cmd->add_option("--random", random_n, "benchmark N Haar targets");
  synth_cmd->add_option("--out", synth_out, "write JSON/CSV to a file");
  synth_cmd->add_flag("--json", synth_json, "print JSON to stdout");
  synth_cmd->add_option("--jobs", synth_jobs, "parallel targets");

  // bench
  CommonSynth bench_cs;
  auto* bench_cmd = app.add_subcommand("bench", "random-unitary benchmark");
  add_common(bench_cmd, bench_cs);
  std::size_t bench_targets = 100;
  bool bench_compare = false;
  std::string bench_out;
  int bench_jobs = 1;
  bench_cmd->add_option("--targets", bench_targets, "number of Haar targets");
  bench_cmd->add_flag("--compare-3rz", bench_compare,
                      "paired direct-vs-three-Rz T counts");
  bench_cmd->add_option("--out", bench_out, "CSV output file");
  bench_cmd->add_option("--jobs", bench_jobs, "parallel targets");

  // circuit
  auto* circuit_cmd = app.add_subcommand("circuit", "circuit front-end");
  circuit_cmd->require_subcommand(1);
  CommonSynth circ_cs;
  auto* circ_synth = circuit_cmd->add_subcommand(
      "synth", "merge rotations and synthesize to Clifford+T");
  add_common(circ_synth, circ_cs);
  std::string circ_in, circ_out, circ_metrics_json;
  bool circ_commute = false;
  int circ_jobs = 1;
  circ_synth->add_option("input", circ_in, "input circuit file")->required();
  circ_synth->add_flag("--commute", circ_commute,
                       "slide rotations across CNOTs before merging");
  circ_synth->add_option("--out", circ_out, "output circuit file");
  circ_synth->add_option("--metrics-json", circ_metrics_json,
                         "write metrics report");
  circ_synth->add_option("--jobs", circ_jobs, "parallel rotations");
  std::string metrics_in;
  bool metrics_as_json = false;
  auto* circ_metrics =
      circuit_cmd->add_subcommand("metrics", "circuit resource metrics");
  circ_metrics->add_option("input", metrics_in, "input circuit file")
      ->required();
  circ_metrics->add_flag("--json", metrics_as_json, "JSON output");

  // noise
  auto* noise_cmd = app.add_subcommand("noise", "noise tradeoff tools");
  noise_cmd->require_subcommand(1);
  CommonSynth noise_cs;
  noise_cs.budgets = {6, 6, 6};
  noise_cs.samples = 20000;
  auto* noise_sweep = noise_cmd->add_subcommand(
      "sweep", "synthesis-threshold vs logical-rate sweep");
  add_common(noise_sweep, noise_cs);
  std::size_t noise_targets = 100;
  std::vector<double> noise_thresholds{3e-1, 1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  std::vector<double> noise_rates{1e-3, 1e-4, 1e-5};
  std::string noise_out;
  bool noise_fit = false;
  noise_sweep->add_option("--targets", noise_targets, "number of targets");
  noise_sweep->add_option("--thresholds", noise_thresholds, "threshold grid")
      ->delimiter(',');
  noise_sweep->add_option("--rates", noise_rates, "logical error rates")
      ->delimiter(',');
  noise_sweep->add_option("--out", noise_out, "CSV output file");
  noise_sweep->add_flag("--fit", noise_fit, "fit the optimal-threshold law");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (tables_build->parsed()) {
      return run_tables_build(build_max_t, build_out, build_cap, manifest);
    }
    if (tables_verify->parsed()) return run_tables_verify(verify_path);
    if (synth_cmd->parsed()) {
      return run_synth(synth_cs, inline_mat, json_file, rz_angle, u3_angles,
                       random_n, synth_out, synth_json, synth_jobs, manifest);
    }
    if (bench_cmd->parsed()) {
      return run_bench(bench_cs, bench_targets, bench_compare, bench_out,
                       bench_jobs, manifest);
    }
    if (circ_synth->parsed()) {
      return run_circuit_synth(circ_cs, circ_in, circ_commute, circ_out,
                               circ_metrics_json, circ_jobs, manifest);
    }
    if (circ_metrics->parsed()) {
      return run_circuit_metrics(metrics_in, metrics_as_json);
    }
    if (noise_sweep->parsed()) {
      return run_noise_sweep(noise_cs, noise_targets, noise_thresholds,
                             noise_rates, noise_out, noise_fit, manifest);
    }
    std::cerr << "no subcommand\n";
    return kUsage;
  } catch (const CorruptTableError& e) {
    std::cerr << "corrupt table: " << e.what() << "\n";
    return kCorruptTable;
  } catch (const VersionError& e) {
    std::cerr << "unsupported table: " << e.what() << "\n";
    return kCorruptTable;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kBadInput;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kBadInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
}
