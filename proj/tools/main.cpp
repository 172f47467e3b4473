// splitreduc — command-line front end.
//
// Subcommands: split, estimate, quadratize, ramsey gen, ramsey solve, solve,
// replay. Every run with an output directory also writes a manifest
// (resolved options + input digests) from which `replay` reproduces the
// primary outputs byte for byte.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sha256.hpp"
#include "splitreduc/splitreduc.hpp"

namespace fs = std::filesystem;
using namespace splitreduc;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& data) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << data;
}

ordered_json witness_json(const Assignment& a, const SymbolTable& table) {
  ordered_json doc = ordered_json::object();
  for (auto [v, bit] : a.bindings())
    doc[table.has(v) ? table.name(v) : "#" + std::to_string(v)] = bit ? 1 : 0;
  return doc;
}

struct ManifestContext {
  std::string subcommand;
  ordered_json options = ordered_json::object();
  ordered_json inputs = ordered_json::object();  // path -> sha256
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  void record_input(const std::string& path, const std::string& content) {
    inputs[path] = tooling::sha256_hex(content);
  }

  void write(const fs::path& manifest_path, const ordered_json& result) const {
    ordered_json doc;
    doc["tool"] = "splitreduc";
    doc["version"] = kVersion;
    doc["subcommand"] = subcommand;
    doc["options"] = options;
    doc["inputs"] = inputs;
    doc["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();
    doc["result"] = result;
    write_file(manifest_path, doc.dump(2) + "\n");
  }
};

CostConfig cost_from(const ordered_json& o) {
  return CostConfig{o.at("qubits").get<int>(), o.at("target_order").get<int>(),
                    o.at("allow_aux").get<bool>()};
}

// ---------------------------------------------------------------------------
// split

ordered_json run_split(const ordered_json& opts, std::ostream& out_stream,
                       bool json_out) {
  const std::string input_path = opts.at("input").get<std::string>();
  const std::string text = read_file(input_path);
  auto [poly, table] = parse(text);
  const CostConfig cfg = cost_from(opts);

  SplitLimits limits;
  limits.max_leaves = opts.at("max_leaves").get<std::uint64_t>();
  if (!opts.at("max_depth").is_null())
    limits.max_depth = opts.at("max_depth").get<int>();
  TieBreaker tie;
  if (!opts.at("seed").is_null())
    tie = seeded_tie_breaker(opts.at("seed").get<std::uint64_t>());

  const bool summary_only = opts.at("summary_only").get<bool>();
  const std::string out_dir = opts.at("out").get<std::string>();

  std::ofstream leaf_stream;
  if (!out_dir.empty() && !summary_only) {
    fs::create_directories(out_dir);
    leaf_stream.open(fs::path(out_dir) / "leaves.jsonl", std::ios::binary);
    if (!leaf_stream) throw Error("cannot write leaf stream");
  }

  SplitStats stats = for_each_leaf(poly, cfg, limits, [&](const Leaf& leaf) {
    if (leaf_stream.is_open()) {
      ordered_json line;
      line["prefix"] = witness_json(leaf.prefix, table);
      line["polynomial"] = to_json(leaf.hamiltonian, table);
      leaf_stream << line.dump() << "\n";
    }
    return true;
  }, tie);

  ordered_json summary;
  summary["leaf_count"] = stats.leaf_count;
  summary["max_depth"] = stats.max_depth;
  summary["max_leaf_cost"] = stats.max_leaf_cost;
  if (!out_dir.empty())
    write_file(fs::path(out_dir) / "summary.json", summary.dump(2) + "\n");

  if (json_out) {
    out_stream << summary.dump(2) << "\n";
  } else {
    out_stream << "leaves:        " << stats.leaf_count << "\n"
               << "max depth:     " << stats.max_depth << "\n"
               << "max leaf cost: " << stats.max_leaf_cost << "\n";
  }
  return summary;
}

// ---------------------------------------------------------------------------
// estimate

ordered_json run_estimate(const ordered_json& opts, std::ostream& out_stream,
                          bool json_out) {
  const std::string input_path = opts.at("input").get<std::string>();
  auto [poly, table] = parse(read_file(input_path));
  EstimateReport report = estimate(poly, cost_from(opts));
  ordered_json doc = report_to_json(report);

  const std::string out_dir = opts.at("out").get<std::string>();
  if (!out_dir.empty())
    write_file(fs::path(out_dir) / "estimate.json", doc.dump(2) + "\n");

  if (json_out) {
    out_stream << doc.dump(2) << "\n";
  } else {
    out_stream << "shortest zero path:  " << report.shortest_path << "\n"
               << "longest one path:    " << report.longest_path << "\n"
               << "zero-need sequence:  (";
    for (std::size_t i = 0; i < report.zero_need_sequence.size(); ++i)
      out_stream << (i ? "," : "") << report.zero_need_sequence[i];
    out_stream << ")\n"
               << "lower bound (2^s):   " << report.lower_bound << "\n"
               << "upper bound (2^l):   " << report.upper_bound << "\n"
               << "binomial estimate:   " << report.binomial_estimate << "\n"
               << "refined estimate:    " << report.refined_estimate << "\n";
  }
  return doc;
}

// ---------------------------------------------------------------------------
// quadratize

ordered_json run_quadratize(const ordered_json& opts, std::ostream& out_stream,
                            bool json_out) {
  const std::string input_path = opts.at("input").get<std::string>();
  auto [poly, table] = parse(read_file(input_path));
  QuadratizeOptions qopts;
  if (!opts.at("lambda").is_null())
    qopts.lambda = opts.at("lambda").get<std::int64_t>();
  QuadratizationResult r =
      quadratize(poly, opts.at("target_order").get<int>(), qopts);

  // register fresh names for the auxiliaries so the result serializes
  SymbolTable extended = table;
  for (std::size_t i = 0; i < r.aux_defs.size(); ++i) {
    std::string name = "aux" + std::to_string(i);
    while (extended.find(name)) name += "_";
    if (extended.intern(name) != r.aux_defs[i].aux)
      throw Error("auxiliary ids are not dense");
  }

  ordered_json doc;
  doc["lambda"] = r.lambda;
  doc["aux"] = ordered_json::array();
  for (const auto& def : r.aux_defs) {
    ordered_json entry;
    entry["aux"] = extended.name(def.aux);
    entry["first"] = extended.name(def.first);
    entry["second"] = extended.name(def.second);
    doc["aux"].push_back(std::move(entry));
  }
  doc["reduced"] = to_json(r.reduced, extended);
  doc["reduced_text"] = serialize(r.reduced, extended);

  const std::string out_dir = opts.at("out").get<std::string>();
  if (!out_dir.empty())
    write_file(fs::path(out_dir) / "quadratized.json", doc.dump(2) + "\n");

  if (json_out) {
    out_stream << doc.dump(2) << "\n";
  } else {
    out_stream << "auxiliaries: " << r.aux_defs.size() << "\n"
               << "lambda:      " << r.lambda << "\n"
               << "reduced:     " << doc["reduced_text"].get<std::string>()
               << "\n";
  }
  return doc;
}

// ---------------------------------------------------------------------------
// ramsey gen / ramsey solve

ordered_json run_ramsey_gen(const ordered_json& opts, std::ostream& out_stream,
                            bool /*json_out*/) {
  RamseySpec spec{opts.at("m").get<int>(), opts.at("n").get<int>(),
                  opts.at("vertices").get<int>()};
  Polynomial h = ramsey_hamiltonian(spec);
  SymbolTable table = EdgeIndexer(spec.num_vertices).make_symbols();
  const std::string text = serialize(h, table) + "\n";

  const std::string out_file = opts.at("out").get<std::string>();
  if (!out_file.empty())
    write_file(out_file, text);
  else
    out_stream << text;

  ordered_json summary;
  summary["variables"] = h.support().size();
  summary["terms"] = h.num_terms();
  summary["degree"] = h.degree();
  return summary;
}

ordered_json run_ramsey_solve(const ordered_json& opts,
                              std::ostream& out_stream, bool json_out) {
  const int m = opts.at("m").get<int>();
  const int n = opts.at("n").get<int>();
  PipelineConfig cfg;
  const std::string mode = opts.at("mode").get<std::string>();
  cfg.mode = mode == "exhaustive" ? PipelineConfig::Mode::exhaustive
             : mode == "split"    ? PipelineConfig::Mode::split
                                  : PipelineConfig::Mode::automatic;
  cfg.cost = cost_from(opts);
  cfg.workers = opts.at("workers").get<int>();
  cfg.early_exit_zero = opts.at("early_exit").get<bool>();
  cfg.stop_at_first_positive = !opts.at("report_only").get<bool>();

  const int n_start = opts.at("start").is_null() ? std::max(m, n)
                                                 : opts.at("start").get<int>();
  const int n_max = opts.at("max_n").get<int>();
  RamseyResult r = determine_ramsey(m, n, n_start, n_max, cfg);

  ordered_json doc;
  if (r.ramsey_number)
    doc["ramsey_number"] = *r.ramsey_number;
  else
    doc["ramsey_number"] = nullptr;
  doc["evidence"] = ordered_json::object();
  for (const auto& [N, ev] : r.evidence) {
    SymbolTable table = EdgeIndexer(N).make_symbols();
    ordered_json entry;
    entry["min_energy"] = ev.min_energy;
    entry["leaves"] = ev.leaf_count;
    entry["witness"] = witness_json(ev.witness, table);
    entry["evaluations"] = ev.evaluations;
    doc["evidence"][std::to_string(N)] = std::move(entry);
  }

  const std::string out_dir = opts.at("out").get<std::string>();
  if (!out_dir.empty())
    write_file(fs::path(out_dir) / "evidence.json", doc.dump(2) + "\n");

  if (json_out) {
    out_stream << doc.dump(2) << "\n";
  } else {
    for (const auto& [N, ev] : r.evidence)
      out_stream << "N=" << N << ": min energy " << ev.min_energy << " ("
                 << ev.leaf_count << " leaf Hamiltonians, " << ev.evaluations
                 << " evaluations)\n";
    if (r.ramsey_number)
      out_stream << "R(" << m << "," << n << ") = " << *r.ramsey_number << "\n";
    else
      out_stream << "R(" << m << "," << n << ") undetermined up to N=" << n_max
                 << "\n";
  }
  return doc;
}

// ---------------------------------------------------------------------------
// solve

ordered_json run_solve(const ordered_json& opts, std::ostream& out_stream,
                       bool json_out) {
  const std::string input_path = opts.at("input").get<std::string>();
  auto [poly, table] = parse(read_file(input_path));
  SolveOptions sopts;
  sopts.count_minima = opts.at("count_minima").get<bool>();
  sopts.early_exit_zero = opts.at("early_exit_zero").get<bool>();
  sopts.verify_every = opts.at("verify_every").get<std::uint64_t>();
  const int workers = opts.at("workers").get<int>();

  SolveResult r = workers > 1 ? parallel_min(poly, workers, sopts)
                              : exhaustive_min(poly, sopts);

  ordered_json doc;
  doc["min_energy"] = r.min_energy;
  doc["witness"] = witness_json(r.witness, table);
  if (r.num_minima) doc["num_minima"] = *r.num_minima;
  doc["evaluations"] = r.evaluations;

  const std::string out_dir = opts.at("out").get<std::string>();
  if (!out_dir.empty())
    write_file(fs::path(out_dir) / "result.json", doc.dump(2) + "\n");

  if (json_out) {
    out_stream << doc.dump(2) << "\n";
  } else {
    out_stream << "minimum energy: " << r.min_energy << "\n";
    if (r.num_minima) out_stream << "minimizers:     " << *r.num_minima << "\n";
    out_stream << "evaluations:    " << r.evaluations << "\n";
  }
  return doc;
}

// ---------------------------------------------------------------------------
// dispatch + replay

ordered_json dispatch(const std::string& subcommand, const ordered_json& opts,
                      bool json_out) {
  if (subcommand == "split") return run_split(opts, std::cout, json_out);
  if (subcommand == "estimate") return run_estimate(opts, std::cout, json_out);
  if (subcommand == "quadratize")
    return run_quadratize(opts, std::cout, json_out);
  if (subcommand == "ramsey-gen")
    return run_ramsey_gen(opts, std::cout, json_out);
  if (subcommand == "ramsey-solve")
    return run_ramsey_solve(opts, std::cout, json_out);
  if (subcommand == "solve") return run_solve(opts, std::cout, json_out);
  throw Error("unknown subcommand in manifest: " + subcommand);
}

void finish(ManifestContext& ctx, const ordered_json& result) {
  if (!ctx.options.contains("out")) return;
  const std::string out = ctx.options.at("out").get<std::string>();
  if (out.empty()) return;
  // gen writes a single file; everything else fills a directory
  const fs::path manifest_path = ctx.subcommand == "ramsey-gen"
                                     ? fs::path(out + ".manifest.json")
                                     : fs::path(out) / "manifest.json";
  ctx.write(manifest_path, result);
}

int run_replay(const std::string& manifest_path,
               const std::optional<std::string>& out_override, bool json_out) {
  ordered_json manifest = ordered_json::parse(read_file(manifest_path));
  const std::string subcommand = manifest.at("subcommand").get<std::string>();
  ordered_json opts = manifest.at("options");

  for (const auto& [path, digest] : manifest.at("inputs").items()) {
    const std::string current = tooling::sha256_hex(read_file(path));
    if (current != digest.get<std::string>())
      throw Error("input " + path + " no longer matches its recorded digest");
  }
  if (out_override) opts["out"] = *out_override;

  ManifestContext ctx;
  ctx.subcommand = subcommand;
  ctx.options = opts;
  ctx.inputs = manifest.at("inputs");
  ordered_json result = dispatch(subcommand, opts, json_out);
  finish(ctx, result);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"splitreduc: split, estimate, quadratize and exactly solve "
               "pseudo-Boolean objectives"};
  app.require_subcommand(1);
  app.fallthrough();  // accept global flags after the subcommand
  app.set_version_flag("--version", kVersion);

  bool json_out = false;
  app.add_flag("--json", json_out, "machine-readable JSON on stdout");

  // shared option holders
  std::string input, out;
  int qubits = 128, target_order = 2, workers = 1;
  bool allow_aux = false;

  auto add_cost_options = [&](CLI::App* cmd) {
    cmd->add_option("--qubits", qubits, "qubit budget Q")->capture_default_str();
    cmd->add_option("--target-order", target_order,
                    "largest interaction order the device allows")
        ->capture_default_str();
    cmd->add_flag("--allow-aux", allow_aux,
                  "count auxiliary qubits instead of requiring the target "
                  "order outright");
  };

  // --- split
  auto* split_cmd = app.add_subcommand("split",
                                       "split an objective into feasible leaves");
  std::uint64_t max_leaves = 10'000'000;
  int max_depth = -1;
  std::int64_t seed = -1;
  bool summary_only = false;
  split_cmd->add_option("input", input, "objective file (text format)")
      ->required();
  add_cost_options(split_cmd);
  split_cmd->add_option("--max-leaves", max_leaves, "abort beyond this many leaves")
      ->capture_default_str();
  split_cmd->add_option("--max-depth", max_depth,
                        "abort beyond this depth (default: variable count)");
  split_cmd->add_option("--seed", seed,
                        "randomize cost ties with this seed (default: "
                        "deterministic smallest-id ties)");
  split_cmd->add_flag("--summary-only", summary_only,
                      "skip the per-leaf output stream");
  split_cmd->add_option("--out", out, "output directory");

  // --- estimate
  auto* est_cmd = app.add_subcommand(
      "estimate", "predict the number of leaves before splitting");
  est_cmd->add_option("input", input, "objective file")->required();
  add_cost_options(est_cmd);
  est_cmd->add_option("--out", out, "output directory");

  // --- quadratize
  auto* quad_cmd = app.add_subcommand(
      "quadratize", "reduce the interaction order with penalty auxiliaries");
  std::int64_t lambda_override = -1;
  quad_cmd->add_option("input", input, "objective file")->required();
  quad_cmd->add_option("--target-order", target_order, "order to reduce to")
      ->capture_default_str();
  quad_cmd->add_option("--lambda", lambda_override,
                       "penalty weight (default: 1 + coefficient l1 norm)");
  quad_cmd->add_option("--out", out, "output directory");

  // --- ramsey
  auto* ramsey_cmd =
      app.add_subcommand("ramsey", "Ramsey-number objectives and decisions");
  ramsey_cmd->require_subcommand(1);
  int m = 3, n = 3, vertices = 5, start = -1, max_n = 8;
  std::string mode = "auto";
  bool report_only = false, no_early_exit = false;

  auto* gen_cmd = ramsey_cmd->add_subcommand(
      "gen", "write the clique/independent-set counting objective");
  gen_cmd->add_option("m", m, "clique size")->required();
  gen_cmd->add_option("n", n, "independent-set size")->required();
  gen_cmd->add_option("vertices", vertices, "number of vertices")->required();
  gen_cmd->add_option("--out", out, "output file (default: stdout)");

  auto* rsolve_cmd = ramsey_cmd->add_subcommand(
      "solve", "scan N until the minimum energy is positive");
  rsolve_cmd->add_option("m", m, "clique size")->required();
  rsolve_cmd->add_option("n", n, "independent-set size")->required();
  rsolve_cmd->add_option("--start", start, "first N (default: max(m, n))");
  rsolve_cmd->add_option("--max-N", max_n, "last N to try")->capture_default_str();
  rsolve_cmd->add_option("--mode", mode, "auto | exhaustive | split")
      ->check(CLI::IsMember({"auto", "exhaustive", "split"}))
      ->capture_default_str();
  add_cost_options(rsolve_cmd);
  rsolve_cmd->add_option("--workers", workers, "parallel workers")
      ->capture_default_str();
  rsolve_cmd->add_flag("--report-only", report_only,
                       "keep scanning past the first positive minimum");
  rsolve_cmd->add_flag("--no-early-exit", no_early_exit,
                       "always enumerate the full search space");
  rsolve_cmd->add_option("--out", out, "output directory");

  // --- solve
  auto* solve_cmd =
      app.add_subcommand("solve", "exact minimum by Gray-code enumeration");
  bool count_minima = false, early_exit_zero = false;
  std::uint64_t verify_every = 0;
  solve_cmd->add_option("input", input, "objective file")->required();
  solve_cmd->add_option("--workers", workers, "parallel workers")
      ->capture_default_str();
  solve_cmd->add_flag("--count-minima", count_minima,
                      "count minimizing assignments exactly");
  solve_cmd->add_flag("--early-exit-zero", early_exit_zero,
                      "stop once energy 0 is found (objective must be "
                      "nonnegative)");
  solve_cmd->add_option("--verify-every", verify_every,
                        "re-evaluate from scratch every N steps");
  solve_cmd->add_option("--out", out, "output directory");

  // --- replay
  auto* replay_cmd =
      app.add_subcommand("replay", "re-run a recorded manifest");
  std::string manifest_path, replay_out;
  replay_cmd->add_option("manifest", manifest_path, "manifest.json path")
      ->required();
  replay_cmd->add_option("--out", replay_out,
                         "redirect outputs (default: original directory)");

  CLI11_PARSE(app, argc, argv);

  try {
    ManifestContext ctx;

    if (*replay_cmd) {
      std::optional<std::string> redirect;
      if (!replay_out.empty()) redirect = replay_out;
      return run_replay(manifest_path, redirect, json_out);
    }

    if (*split_cmd) {
      ctx.subcommand = "split";
      ctx.options = {{"input", input},
                     {"qubits", qubits},
                     {"target_order", target_order},
                     {"allow_aux", allow_aux},
                     {"max_leaves", max_leaves},
                     {"max_depth", max_depth < 0 ? ordered_json(nullptr)
                                                 : ordered_json(max_depth)},
                     {"seed", seed < 0 ? ordered_json(nullptr)
                                       : ordered_json(static_cast<std::uint64_t>(seed))},
                     {"summary_only", summary_only},
                     {"out", out}};
    } else if (*est_cmd) {
      ctx.subcommand = "estimate";
      ctx.options = {{"input", input},
                     {"qubits", qubits},
                     {"target_order", target_order},
                     {"allow_aux", allow_aux},
                     {"out", out}};
    } else if (*quad_cmd) {
      ctx.subcommand = "quadratize";
      ctx.options = {{"input", input},
                     {"target_order", target_order},
                     {"lambda", lambda_override < 0
                                    ? ordered_json(nullptr)
                                    : ordered_json(lambda_override)},
                     {"out", out}};
    } else if (*gen_cmd) {
      ctx.subcommand = "ramsey-gen";
      ctx.options = {{"m", m}, {"n", n}, {"vertices", vertices}, {"out", out}};
    } else if (*rsolve_cmd) {
      ctx.subcommand = "ramsey-solve";
      ctx.options = {{"m", m},
                     {"n", n},
                     {"start", start < 0 ? ordered_json(nullptr)
                                         : ordered_json(start)},
                     {"max_n", max_n},
                     {"mode", mode},
                     {"qubits", qubits},
                     {"target_order", target_order},
                     {"allow_aux", allow_aux},
                     {"workers", workers},
                     {"report_only", report_only},
                     {"early_exit", !no_early_exit},
                     {"out", out}};
    } else if (*solve_cmd) {
      ctx.subcommand = "solve";
      ctx.options = {{"input", input},
                     {"workers", workers},
                     {"count_minima", count_minima},
                     {"early_exit_zero", early_exit_zero},
                     {"verify_every", verify_every},
                     {"out", out}};
    }

    if (ctx.options.contains("input"))
      ctx.record_input(input, read_file(input));

    ordered_json result = dispatch(ctx.subcommand, ctx.options, json_out);
    finish(ctx, result);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
