#include "mttkit_tools/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mttkit/mttkit.hpp"
#include "mttkit_tools/families.hpp"

namespace mttkit::cli {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

/// Command-line or file-system problem, reported with exit code kUsage.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw UsageError("cannot write '" + path.string() + "'");
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  auto d = std::chrono::steady_clock::now() - start;
  return std::chrono::duration<double, std::milli>(d).count();
}

std::string human_value(const Json& v) {
  if (v.is_null()) return "-";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(3);
    os << v.get<double>();
    return os.str();
  }
  return v.dump();
}

/// One record: `key: value` lines (nested objects flattened with dots), or
/// a single JSON line.
void print_record(std::ostream& out, const Json& record, bool json) {
  if (json) {
    out << record.dump() << '\n';
    return;
  }
  std::function<void(const Json&, const std::string&)> walk = [&](const Json& obj,
                                                                  const std::string& prefix) {
    for (const auto& [key, value] : obj.items()) {
      if (value.is_object()) walk(value, prefix + key + ".");
      else out << prefix << key << ": " << human_value(value) << '\n';
    }
  };
  walk(record, "");
}

void report_error(std::ostream& err, const std::exception& e) {
  err << "error: " << e.what() << '\n';
}

// ---------------------------------------------------------------------------
// budgets

struct BudgetFlags {
  std::optional<std::size_t> max_set;
  std::optional<std::size_t> max_steps;
  std::optional<std::size_t> max_tree;
  std::optional<std::size_t> max_env;

  void attach(CLI::App& cmd) {
    cmd.add_option("--max-set", max_set, "Oracle: largest tree set (env MTTKIT_MAX_SET)");
    cmd.add_option("--max-steps", max_steps, "Oracle: step limit (env MTTKIT_MAX_STEPS)");
    cmd.add_option("--max-tree", max_tree, "Oracle: largest tree kept (default 4*|t|)");
    cmd.add_option("--max-env", max_env, "mr-io: environment cap per right-hand side");
  }
};

std::optional<std::size_t> env_size(const char* name) {
  const char* raw = std::getenv(name);
  if (!raw || !*raw) return std::nullopt;
  char* stop = nullptr;
  unsigned long long v = std::strtoull(raw, &stop, 10);
  if (*stop != '\0' || raw[0] == '-')
    throw UsageError(std::string(name) + " must be a non-negative integer, got '" + raw + "'");
  return static_cast<std::size_t>(v);
}

Budget make_budget(const BudgetFlags& flags) {
  Budget b;
  if (auto v = flags.max_set ? flags.max_set : env_size("MTTKIT_MAX_SET")) b.max_set_size = *v;
  if (auto v = flags.max_steps ? flags.max_steps : env_size("MTTKIT_MAX_STEPS")) b.max_steps = *v;
  b.max_tree_size = flags.max_tree;
  b.check();
  return b;
}

Json budget_json(const Budget& b) {
  Json j;
  j["max_set"] = b.max_set_size;
  j["max_steps"] = b.max_steps;
  j["max_tree"] = b.max_tree_size ? Json(*b.max_tree_size) : Json(nullptr);
  return j;
}

// ---------------------------------------------------------------------------
// validate

struct ValidateArgs {
  std::string model;
  bool json = false;
};

std::string_view kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::mtt: return "mtt";
    case ModelKind::tac_mtt: return "tac-mtt";
    case ModelKind::mrtt: return "mrtt";
  }
  return "mtt";
}

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
  const std::string text = read_file(a.model);
  const ModelKind kind = detect_model_kind(text);
  Json j;
  j["kind"] = kind_name(kind);
  std::string line;
  if (kind == ModelKind::mrtt) {
    MrMtt m = parse_mrtt(text);
    MrClass c = validate(m);
    j["name"] = m.name;
    j["deterministic"] = c.deterministic;
    j["total"] = c.total;
    j["m"] = c.max_state_rank;
    j["d"] = c.max_dimension;
    j["rules"] = m.rule_count();
    std::ostringstream os;
    os << std::boolalpha << "deterministic: " << c.deterministic << ", total: " << c.total
       << ", m: " << c.max_state_rank << ", d: " << c.max_dimension;
    line = os.str();
  } else {
    MttClass c;
    std::string name;
    std::size_t rules = 0;
    if (kind == ModelKind::tac_mtt) {
      TacMtt m = parse_tac_mtt(text);
      c = validate(m);
      name = m.base.name;
      rules = m.base.rule_count() + m.rules.size();
    } else {
      Mtt m = parse_mtt(text);
      c = validate(m);
      name = m.name;
      rules = m.rule_count();
    }
    j["name"] = name;
    j["deterministic"] = c.deterministic;
    j["total"] = c.total;
    j["linear_input"] = c.linear_input;
    j["linear_params"] = c.linear_params;
    j["m"] = c.max_state_rank;
    j["rules"] = rules;
    line = to_string(c);
  }
  if (a.json) out << j.dump() << '\n';
  else out << line << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// member

struct MemberArgs {
  std::string engine;
  std::optional<std::string> mode;
  std::string model;
  std::string s;
  std::string t;
  std::vector<std::string> then;
  std::size_t copy_bound = 1;
  bool terms = false;
  bool json = false;
  BudgetFlags budget;
};

[[noreturn]] void mismatch(const std::string& what) { throw Error(ErrorKind::engine_mismatch, what); }

int cmd_member(const MemberArgs& a, std::ostream& out) {
  const std::string text = read_file(a.model);
  const ModelKind kind = detect_model_kind(text);
  const Tree s = parse_term(a.terms ? a.s : read_file(a.s));
  const Tree t = parse_term(a.terms ? a.t : read_file(a.t));
  const Mode mode = !a.mode ? (a.engine == "oi-fc" ? Mode::oi : Mode::io)
                            : (*a.mode == "oi" ? Mode::oi : Mode::io);
  const Budget budget = make_budget(a.budget);
  MrLimits limits;
  if (a.budget.max_env) limits.max_environments = *a.budget.max_env;

  auto need = [&](bool ok, const char* requirement) {
    if (!ok) mismatch("engine '" + a.engine + "' " + requirement);
  };
  if (!a.then.empty()) need(a.engine == "det", "does not take --then stages");

  Json stats;
  stats["s_size"] = s.size();
  stats["t_size"] = t.size();
  stats["s_dag_nodes"] = build_dag(s).dag.node_count();
  const DagBuild target = build_dag(t);
  stats["t_dag_nodes"] = target.dag.node_count();
  stats["root_entries"] = nullptr;
  stats["det_nodes_built"] = nullptr;
  stats["det_bound"] = nullptr;
  stats["budget"] = budget_json(budget);

  Verdict verdict = Verdict::no;
  Json note = nullptr;
  auto yes_no = [](bool b) { return b ? Verdict::yes : Verdict::no; };
  const auto start = std::chrono::steady_clock::now();
  double ms = 0;
  try {
    if (a.engine == "io") {
      need(kind == ModelKind::mtt, "needs a plain mtt");
      need(mode == Mode::io, "is IO only");
      Mtt m = parse_mtt(text);
      verdict = yes_no(member_io(m, s, t));
      ms = elapsed_ms(start);
      stats["root_entries"] = run_io(m, s, target.dag).entry_count();
    } else if (a.engine == "oi-fc") {
      need(kind == ModelKind::mtt, "needs a plain mtt");
      need(mode == Mode::oi, "is OI only");
      Mtt m = parse_mtt(text);
      verdict = yes_no(member_oi_fc(m, CopyBound{a.copy_bound}, s, t));
      ms = elapsed_ms(start);
      stats["root_entries"] = run_oi_fc(m, CopyBound{a.copy_bound}, s, target.dag).entry_count();
    } else if (a.engine == "io-tac") {
      need(kind != ModelKind::mrtt, "needs an mtt, with or without look-ahead");
      need(mode == Mode::io, "is IO only");
      TacMtt m = kind == ModelKind::tac_mtt ? parse_tac_mtt(text)
                                            : with_trivial_lookahead(parse_mtt(text));
      verdict = yes_no(member_io_tac(m, s, t));
      ms = elapsed_ms(start);
    } else if (a.engine == "mr-io") {
      need(kind != ModelKind::tac_mtt, "does not support look-ahead");
      need(mode == Mode::io, "is IO only");
      MrMtt m = kind == ModelKind::mrtt ? parse_mrtt(text) : embed_mtt(parse_mtt(text));
      verdict = yes_no(member_mr_io(m, s, t, limits));
      ms = elapsed_ms(start);
      stats["root_entries"] = run_mr_io(m, s, target.dag, limits).entry_count();
    } else if (a.engine == "det") {
      need(kind == ModelKind::mtt, "needs plain mtts");
      std::vector<Mtt> stages{parse_mtt(text)};
      for (const auto& path : a.then) {
        const std::string stage = read_file(path);
        need(detect_model_kind(stage) == ModelKind::mtt, "needs plain mtts");
        stages.push_back(parse_mtt(stage));
      }
      verdict = yes_no(member_det(stages, mode, s, t));
      ms = elapsed_ms(start);
      DetStats d = last_det_stats();
      stats["det_nodes_built"] = d.nodes_built;
      stats["det_bound"] = d.bound;
      if (d.aborted) note = "size bound exceeded";
    } else {
      OracleOptions options;
      options.budget = budget;
      if (kind == ModelKind::mrtt) {
        need(mode == Mode::io, "runs multi-return transducers in IO mode only");
        verdict = oracle_member_mr(parse_mrtt(text), s, t, options);
      } else if (kind == ModelKind::tac_mtt) {
        verdict = oracle_member(parse_tac_mtt(text), mode, s, t, options);
      } else {
        verdict = oracle_member(parse_mtt(text), mode, s, t, options);
      }
      ms = elapsed_ms(start);
      if (verdict == Verdict::unknown) note = "budget exhausted";
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::budget_exceeded) throw;
    verdict = Verdict::unknown;
    ms = elapsed_ms(start);
    note = e.what();
  }

  Json record;
  record["result"] = to_string(verdict);
  record["engine"] = a.engine;
  record["mode"] = to_string(mode);
  record["elapsed_ms"] = ms;
  record["note"] = note;
  record["stats"] = stats;
  print_record(out, record, a.json);
  switch (verdict) {
    case Verdict::yes: return kYes;
    case Verdict::no: return kNo;
    case Verdict::unknown: return kUnknown;
  }
  return kUnknown;
}

// ---------------------------------------------------------------------------
// sat

struct SatArgs {
  std::string cnf;
  std::optional<std::string> out_dir;
  bool json = false;
  BudgetFlags budget;
};

int cmd_sat(const SatArgs& a, std::ostream& out) {
  const Cnf3 f = parse_dimacs(read_file(a.cnf));
  const Budget budget = make_budget(a.budget);
  const SatInstance inst = encode(f);

  const fs::path source(a.cnf);
  const fs::path dir = a.out_dir ? fs::path(*a.out_dir) : source.parent_path();
  if (!dir.empty()) fs::create_directories(dir);
  const std::string stem = source.stem().string();
  const fs::path s_file = dir / (stem + ".s.term");
  const fs::path t_file = dir / (stem + ".t.term");
  write_file(s_file, to_string(inst.s) + "\n");
  write_file(t_file, to_string(inst.t) + "\n");

  const auto start = std::chrono::steady_clock::now();
  const SatVerdict verdict = sat_check_small(f, budget);
  const double ms = elapsed_ms(start);

  Json record;
  record["result"] = to_string(verdict);
  record["vars"] = f.num_vars;
  record["clauses"] = f.clauses.size();
  record["formula"] = to_string(f);
  record["encoded"] = render_formula(inst.t);
  record["s_size"] = inst.s.size();
  record["t_size"] = inst.t.size();
  record["s_file"] = s_file.string();
  record["t_file"] = t_file.string();
  record["elapsed_ms"] = ms;
  record["budget"] = budget_json(budget);
  print_record(out, record, a.json);
  switch (verdict) {
    case SatVerdict::sat: return kYes;
    case SatVerdict::unsat: return kNo;
    case SatVerdict::unknown: return kUnknown;
  }
  return kUnknown;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  std::string family;
  std::size_t from = 1;
  std::size_t to = 0;
  std::size_t step = 1;
  std::size_t reps = 1;
  bool json = false;
};

/// Trees of the double family are written out in full; beyond this the
/// instance is skipped.
constexpr std::uint64_t kDoubleTreeLimit = 64;

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  if (a.step == 0) throw UsageError("--step must be positive");
  if (a.reps == 0) throw UsageError("--reps must be positive");
  const bool copy_free = a.family == "copyfree";
  const Mtt m = copy_free ? families::copy_free() : families::double_mtt();

  Json rows = Json::array();
  for (std::size_t n = a.from; n <= a.to; n += a.step) {
    if (!copy_free && families::double_output_size(n) > kDoubleTreeLimit) {
      err << "warning: skipping n=" << n << ": |t| = " << families::double_output_size(n)
          << " nodes exceeds the limit of " << kDoubleTreeLimit << '\n';
      continue;
    }
    const Tree s = copy_free ? families::copy_free_input(n) : families::double_input(n);
    const Tree t = copy_free ? families::copy_free_output(n) : families::double_output(n);
    std::vector<double> times;
    bool result = false;
    for (std::size_t r = 0; r < a.reps; ++r) {
      const auto start = std::chrono::steady_clock::now();
      result = member_io(m, s, t);
      times.push_back(elapsed_ms(start));
    }
    std::sort(times.begin(), times.end());
    Json row;
    row["n"] = n;
    row["s_size"] = s.size();
    row["t_size"] = t.size();
    row["result"] = result ? "yes" : "no";
    row["ms"] = times[times.size() / 2];
    rows.push_back(row);
    if (a.to - n < a.step) break;  // no wrap-around
  }

  if (a.json) {
    out << rows.dump() << '\n';
    return 0;
  }
  out << "n\ts_size\tt_size\tresult\tms\n";
  for (const auto& row : rows)
    out << human_value(row["n"]) << '\t' << human_value(row["s_size"]) << '\t'
        << human_value(row["t_size"]) << '\t' << human_value(row["result"]) << '\t'
        << human_value(row["ms"]) << '\n';
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Translation membership for macro tree transducers", "mttkit"};
  app.require_subcommand(1);

  ValidateArgs validate_args;
  auto* validate_cmd = app.add_subcommand("validate", "Check a transducer file and classify it");
  validate_cmd->add_option("model", validate_args.model, "Transducer file (.mtt / .mrtt)")->required();
  validate_cmd->add_flag("--json", validate_args.json, "Print one JSON object");

  MemberArgs member_args;
  auto* member_cmd = app.add_subcommand("member", "Decide whether (s, t) is in the translation");
  member_cmd->add_option("--engine", member_args.engine, "Membership engine")
      ->required()
      ->check(CLI::IsMember({"io", "oi-fc", "io-tac", "mr-io", "det", "oracle"}));
  member_cmd->add_option("--mode", member_args.mode, "Semantics (default: oi for oi-fc, else io)")
      ->check(CLI::IsMember({"io", "oi"}));
  member_cmd->add_option("--copy-bound", member_args.copy_bound, "Declared copying bound for oi-fc");
  member_cmd->add_option("--then", member_args.then, "Further det stages, applied in order");
  member_cmd->add_flag("--terms", member_args.terms, "Read s and t as term text, not file names");
  member_cmd->add_flag("--json", member_args.json, "Print one JSON object");
  member_args.budget.attach(*member_cmd);
  member_cmd->add_option("model", member_args.model, "Transducer file")->required();
  member_cmd->add_option("s", member_args.s, "Input term file")->required();
  member_cmd->add_option("t", member_args.t, "Output term file")->required();

  SatArgs sat_args;
  auto* sat_cmd = app.add_subcommand("sat", "Decide a 3-CNF through its membership encoding");
  sat_cmd->add_option("cnf", sat_args.cnf, "DIMACS file, exactly three literals per clause")->required();
  sat_cmd->add_option("--out-dir", sat_args.out_dir, "Where to write <stem>.s.term / <stem>.t.term");
  sat_cmd->add_flag("--json", sat_args.json, "Print one JSON object");
  sat_args.budget.attach(*sat_cmd);

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Time member_io over a parametric family");
  bench_cmd->add_option("--family", bench_args.family, "Instance family")
      ->required()
      ->check(CLI::IsMember({"double", "copyfree"}));
  bench_cmd->add_option("--from", bench_args.from, "First n")->required();
  bench_cmd->add_option("--to", bench_args.to, "Last n")->required();
  bench_cmd->add_option("--step", bench_args.step, "Increment of n");
  bench_cmd->add_option("--reps", bench_args.reps, "Repetitions per row (median reported)");
  bench_cmd->add_flag("--json", bench_args.json, "Print one JSON array");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    if (app.get_subcommands().empty()) err << app.help();
    return kUsage;
  }

  try {
    if (validate_cmd->parsed()) {
      try {
        return cmd_validate(validate_args, out);
      } catch (const std::exception& e) {
        report_error(err, e);
        return 1;
      }
    }
    if (member_cmd->parsed()) return cmd_member(member_args, out);
    if (sat_cmd->parsed()) return cmd_sat(sat_args, out);
    return cmd_bench(bench_args, out, err);
  } catch (const UsageError& e) {
    report_error(err, e);
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    report_error(err, e);
    return kUsage;
  } catch (const std::exception& e) {
    report_error(err, e);
    return kError;
  }
}

}  // namespace mttkit::cli
