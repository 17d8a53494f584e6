#include "gallai/cli.h"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <ostream>
#include <random>

#include "CLI11.hpp"
#include "gallai/cnf.h"
#include "gallai/geometry.h"
#include "gallai/io.h"
#include "gallai/proof.h"
#include "gallai/search.h"

namespace gallai {
namespace {

namespace fs = std::filesystem;

constexpr int kExitPositive = 0;
constexpr int kExitNegative = 1;
constexpr int kExitError = 2;

class Run {
 public:
  Run(std::string command, bool deterministic)
      : command_(std::move(command)),
        deterministic_(deterministic),
        start_(std::chrono::steady_clock::now()) {}

  Json& params() { return params_; }

  std::string read_input(const fs::path& path) {
    std::string bytes = read_file(path);
    inputs_.push_back({{"path", path.string()}, {"sha256", sha256_hex(bytes)}});
    return bytes;
  }

  Json read_json_input(const fs::path& path) {
    const std::string text = read_input(path);
    try {
      return Json::parse(text);
    } catch (const Json::exception& e) {
      throw IoError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
  }

  int finish(std::ostream& out, int code, const std::string& verdict,
             Json report) const {
    Json manifest{{"command", command_},
                  {"parameters", params_},
                  {"version", kToolVersion},
                  {"inputs", inputs_}};
    if (!deterministic_) {
      manifest["wall_seconds"] = std::chrono::duration<double>(
                                     std::chrono::steady_clock::now() - start_)
                                     .count();
    }
    manifest["verdict"] = verdict;
    manifest["exit_code"] = code;
    out << dump_json(Json{{"manifest", std::move(manifest)},
                          {"report", std::move(report)}});
    return code;
  }

  int fail(std::ostream& out, const std::string& message) const {
    return finish(out, kExitError, "error", Json{{"error", message}});
  }

  bool deterministic() const { return deterministic_; }

 private:
  std::string command_;
  bool deterministic_;
  std::chrono::steady_clock::time_point start_;
  Json params_ = Json::object();
  Json inputs_ = Json::array();
};

Configuration load_configuration(Run& run, const fs::path& path) {
  return configuration_from_json(run.read_json_input(path));
}

Json stats_to_json(const SearchStats& stats, bool deterministic) {
  Json j{{"nodes", stats.nodes},
         {"max_depth", stats.max_depth},
         {"mono_prunes", stats.mono_prunes},
         {"rainbow_prunes", stats.rainbow_prunes}};
  if (!deterministic) j["wall_seconds"] = stats.wall_seconds;
  return j;
}

// ---- build ---------------------------------------------------------------

struct BuildArgs {
  std::string kind;
  int n = 0;
  double side = 0.0;
  int t = 0;
  double endpoint = 0.0;
  double edge = 0.0;
  std::string left;
  std::string right;
  double a = 0.0;
  double b = 0.0;
  std::string out;
};

int cmd_build(const BuildArgs& args, bool deterministic, std::ostream& out) {
  Run run("build " + args.kind, deterministic);
  try {
    std::optional<Configuration> cfg;
    if (args.kind == "simplex") {
      run.params() = {{"n", args.n}, {"side", args.side}};
      cfg = build_simplex(args.n, args.side);
    } else if (args.kind == "path") {
      run.params() = {{"t", args.t}, {"endpoint", args.endpoint}, {"edge", args.edge}};
      cfg = build_path(args.t, args.endpoint, args.edge);
    } else {
      run.params() = {{"left", args.left}, {"right", args.right}, {"a", args.a},
                      {"b", args.b}};
      const Configuration left = load_configuration(run, args.left);
      const Configuration right = load_configuration(run, args.right);
      cfg = product(left, right, args.a, args.b);
    }
    run.params()["out"] = args.out;
    write_json_file(args.out, configuration_to_json(*cfg));
    Json report{{"out", args.out},
                {"points", cfg->size()},
                {"dim", cfg->dim()},
                {"side_a_pairs", cfg->side_a().pairs.size()},
                {"side_b_pairs", cfg->side_b().pairs.size()},
                {"affine_rank", affine_rank(*cfg)}};
    return run.finish(out, kExitPositive, "built", std::move(report));
  } catch (const std::exception& e) {
    return run.fail(out, e.what());
  }
}

// ---- verify --------------------------------------------------------------

struct VerifyArgs {
  std::string config;
  int r = 0;
  double a = 0.0;
  double b = 0.0;
  std::string engine = "backtrack";
  int workers = 1;
  std::string coloring_out;
};

std::string default_sibling(const std::string& path, const std::string& suffix) {
  fs::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix)).string();
}

int cmd_verify(const VerifyArgs& args, bool deterministic, std::ostream& out) {
  Run run("verify", deterministic);
  run.params() = {{"config", args.config}, {"r", args.r},     {"a", args.a},
                  {"b", args.b},           {"engine", args.engine},
                  {"workers", deterministic ? 1 : args.workers}};
  try {
    AvoidanceProblem problem =
        make_avoidance_problem(load_configuration(run, args.config), args.r,
                               args.a, args.b);
    SearchOptions options;
    options.engine = args.engine == "exhaustive" ? Engine::kExhaustive
                                                 : Engine::kBacktrack;
    options.deterministic = deterministic;
    options.workers = args.workers;
    const SearchOutcome outcome = verify_gallai_arrow(problem, options);

    Json report{{"verdict", verdict_name(outcome.verdict)},
                {"engine", engine_name(options.engine)},
                {"points", problem.cfg.size()},
                {"mono_forbidden", problem.mono_forbidden.size()},
                {"rainbow_forbidden", problem.rainbow_forbidden.size()},
                {"stats", stats_to_json(outcome.stats, deterministic)}};
    if (outcome.verdict == Verdict::kArrowHolds) {
      if (!outcome.infeasible_family.empty()) {
        report["infeasible_family"] = outcome.infeasible_family;
      }
      report["dominant_pruning"] =
          outcome.stats.rainbow_prunes > outcome.stats.mono_prunes ? "rainbow"
                                                                   : "mono";
      return run.finish(out, kExitPositive, verdict_name(outcome.verdict),
                        std::move(report));
    }
    const std::string path = args.coloring_out.empty()
                                 ? default_sibling(args.config, ".counterexample.json")
                                 : args.coloring_out;
    write_json_file(path, coloring_to_json(*outcome.counterexample));
    report["counterexample"] = path;
    report["coloring"] = coloring_to_json(*outcome.counterexample);
    return run.finish(out, kExitNegative, verdict_name(outcome.verdict),
                      std::move(report));
  } catch (const std::exception& e) {
    return run.fail(out, e.what());
  }
}

// ---- extract -------------------------------------------------------------

struct ExtractArgs {
  std::string config;
  std::string coloring;
  int s = 2;
  double a = 0.0;
  double b = 0.0;
  std::string out;
};

int cmd_extract(const ExtractArgs& args, bool deterministic, std::ostream& out) {
  Run run("extract", deterministic);
  run.params() = {{"config", args.config}, {"coloring", args.coloring},
                  {"s", args.s},           {"a", args.a},
                  {"b", args.b},           {"out", args.out}};
  try {
    const LemmaGround ground(load_configuration(run, args.config), args.s,
                             args.a, args.b);
    const Coloring coloring = coloring_from_json(run.read_json_input(args.coloring));
    coloring.check(ground.cfg().size());
    const Witness witness = extract_lemma_witness(ground, coloring.colors);
    if (auto problem = witness_problem(ground.cfg(), coloring.colors, witness,
                                       args.a, args.b)) {
      return run.fail(out, "witness failed validation: " + *problem);
    }
    const Json witness_json = witness_to_json(witness, ground.cfg());
    if (!args.out.empty()) write_json_file(args.out, witness_json);
    const bool rainbow = witness.kind == Witness::Kind::kRainbowRectangle;
    return run.finish(out, rainbow ? kExitPositive : kExitNegative,
                      witness_kind_name(witness.kind),
                      Json{{"witness", witness_json}});
  } catch (const std::exception& e) {
    return run.fail(out, e.what());
  }
}

// ---- replay --------------------------------------------------------------

struct ReplayArgs {
  double x = 0.0;
  double y = 0.0;
  std::string coloring;
  std::string out;
  std::string world_out;
};

int cmd_replay(const ReplayArgs& args, bool deterministic, std::ostream& out) {
  Run run("replay", deterministic);
  run.params() = {{"x", args.x},     {"y", args.y},
                  {"coloring", args.coloring}, {"out", args.out},
                  {"world_out", args.world_out}};
  try {
    const ProofReplay replay(args.x, args.y);
    if (!args.world_out.empty()) {
      write_json_file(args.world_out, configuration_to_json(replay.world()));
    }
    Json report{{"m", replay.m()},
                {"q", replay.labeling().size()},
                {"world_points", replay.world().size()}};
    if (args.coloring.empty()) {
      return run.finish(out, kExitPositive, "world", std::move(report));
    }
    const Coloring chi = coloring_from_json(run.read_json_input(args.coloring));
    chi.check(replay.world().size());
    const PipelineVerdict verdict = replay.run(chi.colors);
    const Json verdict_json = verdict_to_json(verdict, replay.world());
    if (!args.out.empty()) write_json_file(args.out, verdict_json);
    report["verdict"] = verdict_json;
    const bool unmet =
        verdict.outcome == PipelineVerdict::Outcome::kAssumptionUnmet;
    return run.finish(out, unmet ? kExitNegative : kExitPositive,
                      outcome_name(verdict.outcome), std::move(report));
  } catch (const std::exception& e) {
    return run.fail(out, e.what());
  }
}

// ---- encode / decode -----------------------------------------------------

struct EncodeArgs {
  std::string config;
  int r = 0;
  double a = 0.0;
  double b = 0.0;
  std::string out;
  std::string meta_out;
};

int cmd_encode(const EncodeArgs& args, bool deterministic, std::ostream& out) {
  Run run("encode", deterministic);
  const std::string meta_path =
      args.meta_out.empty() ? args.out + ".meta.json" : args.meta_out;
  run.params() = {{"config", args.config}, {"r", args.r},   {"a", args.a},
                  {"b", args.b},           {"out", args.out}, {"meta_out", meta_path}};
  try {
    const Json cfg_json = run.read_json_input(args.config);
    AvoidanceProblem problem = make_avoidance_problem(
        configuration_from_json(cfg_json), args.r, args.a, args.b);
    const CnfInstance instance = encode_cnf(problem);
    write_file(args.out, to_dimacs(instance));
    Json meta{{"r", args.r},
              {"a", args.a},
              {"b", args.b},
              {"num_points", instance.num_points},
              {"num_vars", instance.num_vars},
              {"num_clauses", instance.clauses.size()},
              {"assignment_vars", instance.num_points * instance.r},
              {"equality_vars", instance.equality_pairs.size()},
              {"config", cfg_json}};
    write_json_file(meta_path, meta);
    meta.erase("config");
    meta["out"] = args.out;
    meta["meta"] = meta_path;
    return run.finish(out, kExitPositive, "encoded", std::move(meta));
  } catch (const std::exception& e) {
    return run.fail(out, e.what());
  }
}

struct DecodeArgs {
  std::string meta;
  std::string model;
  std::string out;
};

int cmd_decode(const DecodeArgs& args, bool deterministic, std::ostream& out) {
  Run run("decode", deterministic);
  run.params() = {{"meta", args.meta}, {"model", args.model}, {"out", args.out}};
  try {
    const Json meta = run.read_json_input(args.meta);
    AvoidanceProblem problem = make_avoidance_problem(
        configuration_from_json(meta.at("config")), meta.at("r").get<int>(),
        meta.at("a").get<double>(), meta.at("b").get<double>());
    const CnfInstance instance = encode_cnf(problem);
    if (instance.num_vars != meta.at("num_vars").get<int>() ||
        instance.clauses.size() != meta.at("num_clauses").get<std::size_t>()) {
      return run.fail(out, "instance metadata does not match the re-encoded problem");
    }
    const auto decoded = parse_model(instance, run.read_input(args.model));
    if (std::holds_alternative<Unsatisfiable>(decoded)) {
      return run.finish(out, kExitPositive, verdict_name(Verdict::kArrowHolds),
                        Json{{"verdict", verdict_name(Verdict::kArrowHolds)}});
    }
    const Coloring& coloring = std::get<Coloring>(decoded);
    if (!avoids_all(problem, coloring.colors)) {
      return run.fail(out, "decoded coloring violates the avoidance constraints");
    }
    if (!args.out.empty()) write_json_file(args.out, coloring_to_json(coloring));
    return run.finish(out, kExitNegative, verdict_name(Verdict::kCounterexample),
                      Json{{"verdict", verdict_name(Verdict::kCounterexample)},
                           {"coloring", coloring_to_json(coloring)}});
  } catch (const std::exception& e) {
    return run.fail(out, e.what());
  }
}

// ---- stress --------------------------------------------------------------

struct StressArgs {
  int s = 2;
  double a = 1.0;
  double b = 0.8;
  int r_min = 7;
  int r_max = 10;
  int count = 1000;
  std::uint64_t seed = 0;
};

int cmd_stress(const StressArgs& args, bool deterministic, std::ostream& out) {
  Run run("stress", deterministic);
  run.params() = {{"s", args.s},         {"a", args.a},
                  {"b", args.b},         {"r_min", args.r_min},
                  {"r_max", args.r_max}, {"count", args.count},
                  {"seed", args.seed}};
  try {
    if (args.r_min > args.r_max) throw std::invalid_argument("r_min > r_max");
    const LemmaGround ground(args.s, args.a, args.b);
    std::mt19937_64 rng(args.seed);
    std::uniform_int_distribution<int> pick_r(args.r_min, args.r_max);
    int validated = 0;
    int contradictions = 0;
    int invalid = 0;
    for (int trial = 0; trial < args.count; ++trial) {
      const Coloring coloring = sample_avoiding_coloring(ground, pick_r(rng), rng);
      try {
        const Witness w = extract_lemma_witness(ground, coloring.colors);
        const bool ok = w.kind == Witness::Kind::kRainbowRectangle &&
                        !witness_problem(ground.cfg(), coloring.colors, w,
                                         args.a, args.b);
        ok ? ++validated : ++invalid;
      } catch (const InternalContradiction&) {
        ++contradictions;
      }
    }
    const bool all_ok = validated == args.count;
    return run.finish(out, all_ok ? kExitPositive : kExitNegative,
                      all_ok ? "all-validated" : "failures",
                      Json{{"trials", args.count},
                           {"validated", validated},
                           {"invalid", invalid},
                           {"internal_contradictions", contradictions}});
  } catch (const std::exception& e) {
    return run.fail(out, e.what());
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Gallai-Ramsey rectangle workbench"};
  app.require_subcommand(1);
  app.fallthrough();
  bool deterministic = false;
  app.add_flag("--deterministic", deterministic,
               "single-threaded search, no timings in reports");

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build", "construct a configuration file");
  build_cmd->require_subcommand(1);
  auto* simplex_cmd = build_cmd->add_subcommand("simplex", "regular simplex S_n(side)");
  simplex_cmd->add_option("--n", build.n)->required();
  simplex_cmd->add_option("--side", build.side)->required();
  simplex_cmd->add_option("--out", build.out)->required();
  auto* path_cmd = build_cmd->add_subcommand("path", "planar path B_t(endpoint, edge)");
  path_cmd->add_option("--t", build.t)->required();
  path_cmd->add_option("--endpoint", build.endpoint)->required();
  path_cmd->add_option("--edge", build.edge)->required();
  path_cmd->add_option("--out", build.out)->required();
  auto* product_cmd = build_cmd->add_subcommand("product", "Cartesian product");
  product_cmd->add_option("--left", build.left)->required();
  product_cmd->add_option("--right", build.right)->required();
  product_cmd->add_option("--a", build.a)->required();
  product_cmd->add_option("--b", build.b)->required();
  product_cmd->add_option("--out", build.out)->required();

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "decide the arrow on a configuration");
  verify_cmd->add_option("--config", verify.config)->required();
  verify_cmd->add_option("--r", verify.r)->required();
  verify_cmd->add_option("--a", verify.a)->required();
  verify_cmd->add_option("--b", verify.b)->required();
  verify_cmd->add_option("--engine", verify.engine)
      ->check(CLI::IsMember({"backtrack", "exhaustive"}));
  verify_cmd->add_option("--workers", verify.workers)->check(CLI::Range(1, 256));
  verify_cmd->add_option("--coloring-out", verify.coloring_out);

  ExtractArgs extract;
  auto* extract_cmd = app.add_subcommand("extract", "extract a rainbow rectangle");
  extract_cmd->add_option("--config", extract.config)->required();
  extract_cmd->add_option("--coloring", extract.coloring)->required();
  extract_cmd->add_option("--s", extract.s)->required();
  extract_cmd->add_option("--a", extract.a)->required();
  extract_cmd->add_option("--b", extract.b)->required();
  extract_cmd->add_option("--out", extract.out);

  ReplayArgs replay;
  auto* replay_cmd = app.add_subcommand("replay", "replay the rectangle reduction");
  replay_cmd->add_option("--x", replay.x)->required();
  replay_cmd->add_option("--y", replay.y)->required();
  replay_cmd->add_option("--coloring", replay.coloring);
  replay_cmd->add_option("--out", replay.out);
  replay_cmd->add_option("--world-out", replay.world_out);

  EncodeArgs encode;
  auto* encode_cmd = app.add_subcommand("encode", "write a DIMACS CNF instance");
  encode_cmd->add_option("--config", encode.config)->required();
  encode_cmd->add_option("--r", encode.r)->required();
  encode_cmd->add_option("--a", encode.a)->required();
  encode_cmd->add_option("--b", encode.b)->required();
  encode_cmd->add_option("--out", encode.out)->required();
  encode_cmd->add_option("--meta-out", encode.meta_out);

  DecodeArgs decode;
  auto* decode_cmd = app.add_subcommand("decode", "decode SAT solver output");
  decode_cmd->add_option("--meta", decode.meta)->required();
  decode_cmd->add_option("--model", decode.model)->required();
  decode_cmd->add_option("--out", decode.out);

  StressArgs stress;
  auto* stress_cmd = app.add_subcommand("stress", "run the extractor on sampled colorings");
  stress_cmd->add_option("--s", stress.s);
  stress_cmd->add_option("--a", stress.a);
  stress_cmd->add_option("--b", stress.b);
  stress_cmd->add_option("--r-min", stress.r_min);
  stress_cmd->add_option("--r-max", stress.r_max);
  stress_cmd->add_option("--count", stress.count);
  stress_cmd->add_option("--seed", stress.seed);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    Run run("parse", true);
    return run.fail(out, e.what());
  }

  if (simplex_cmd->parsed()) build.kind = "simplex";
  if (path_cmd->parsed()) build.kind = "path";
  if (product_cmd->parsed()) build.kind = "product";
  if (build_cmd->parsed()) return cmd_build(build, deterministic, out);
  if (verify_cmd->parsed()) return cmd_verify(verify, deterministic, out);
  if (extract_cmd->parsed()) return cmd_extract(extract, deterministic, out);
  if (replay_cmd->parsed()) return cmd_replay(replay, deterministic, out);
  if (encode_cmd->parsed()) return cmd_encode(encode, deterministic, out);
  if (decode_cmd->parsed()) return cmd_decode(decode, deterministic, out);
  if (stress_cmd->parsed()) return cmd_stress(stress, deterministic, out);
  return kExitError;
}

}  // namespace gallai
