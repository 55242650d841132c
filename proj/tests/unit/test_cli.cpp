#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "mttkit/mttkit.hpp"
#include "mttkit_tools/cli.hpp"
#include "mttkit_tools/families.hpp"

using namespace mttkit;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "mttkit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(MTTKIT_DATA_DIR) + "/" + name; }

std::string scratch(const std::string& name) {
  fs::create_directories(MTTKIT_SCRATCH_DIR);
  return std::string(MTTKIT_SCRATCH_DIR) + "/" + name;
}

std::string write(const std::string& name, const std::string& text) {
  std::string path = scratch(name);
  std::ofstream(path) << text;
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

nlohmann::ordered_json member_json(const std::string& engine, const std::string& model,
                                   const std::string& s, const std::string& t,
                                   std::vector<std::string> extra = {}) {
  std::vector<std::string> args{"member", "--json", "--terms", "--engine", engine};
  args.insert(args.end(), extra.begin(), extra.end());
  args.insert(args.end(), {model, s, t});
  Result r = run(args);
  REQUIRE_MESSAGE(r.code <= 2, r.err);
  return nlohmann::ordered_json::parse(r.out);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("validate") {
    Result r = run({"validate", data("double.mtt")});
    CHECK(r.code == 0);
    CHECK(r.out == to_string(validate(parse_mtt(slurp(data("double.mtt"))))) + "\n");
    CHECK(run({"validate", data("reverse.mrtt")}).out ==
          "deterministic: false, total: true, m: 1, d: 2\n");

    Result bad = run({"validate", data("malformed.mtt")});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("5:") != std::string::npos);
    CHECK(run({"validate", data("no_such_file.mtt")}).code == 1);

    std::string sat = write("sat.mtt", pretty_print(build_sat_mtt()));
    Result s = run({"validate", "--json", sat});
    CHECK(s.code == 0);
    CHECK(nlohmann::json::parse(s.out)["m"] == 3);
  }

  TEST_CASE("member record layout and exit codes") {
    Result yes = run({"member", "--engine", "io", data("double.mtt"), data("double.s.term"),
                      data("double.t.term")});
    CHECK(yes.code == cli::kYes);
    CHECK(yes.out.rfind("result: yes\nengine: io\nmode: io\nelapsed_ms: ", 0) == 0);

    Result no = run({"member", "--engine", "io", data("double.mtt"), data("double.s.term"),
                     data("double_mixed.t.term")});
    CHECK(no.code == cli::kNo);

    Result oi = run({"member", "--engine", "oracle", "--mode", "oi", data("double.mtt"),
                     data("double.s.term"), data("double_mixed.t.term")});
    CHECK(oi.code == cli::kYes);

    auto j = member_json("io", data("double.mtt"), "a(e)", "f(f(e,e),f(e,e))");
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"result", "engine", "mode", "elapsed_ms", "note", "stats"});
    CHECK(j["stats"]["t_dag_nodes"] == 3);
    CHECK(j["stats"]["s_size"] == 2);
  }

  TEST_CASE("every engine is a thin wrapper") {
    Mtt d = parse_mtt(slurp(data("double.mtt")));
    for (const Tree& t : translate(d, Mode::oi, parse_term("a(e)"))) {
      const std::string text = to_string(t);
      const bool io = member_io(d, parse_term("a(e)"), t);
      CHECK((member_json("io", data("double.mtt"), "a(e)", text)["result"] == "yes") == io);
      CHECK((member_json("io-tac", data("double.mtt"), "a(e)", text)["result"] == "yes") == io);
      CHECK((member_json("mr-io", data("double.mtt"), "a(e)", text)["result"] == "yes") == io);
      CHECK(member_json("oi-fc", data("double.mtt"), "a(e)", text, {"--copy-bound", "2"})["result"] ==
            "yes");
      CHECK(member_json("oracle", data("double.mtt"), "a(e)", text, {"--mode", "oi"})["result"] ==
            "yes");
    }
    CHECK(member_json("mr-io", data("reverse.mrtt"), "s(s(s(z)))", "r(a(a(b(e))),B(A(A(E))))")
              ["result"] == "yes");
    CHECK(member_json("oracle", data("reverse.mrtt"), "s(z)", "r(a(e),B(E))")["result"] == "no");
    CHECK(member_json("io-tac", data("pair_equality.mtt"), "pi(a(e),a(e))", "e")["result"] == "yes");
    CHECK(member_json("io-tac", data("pair_equality.mtt"), "pi(a(e),e)", "e")["result"] == "no");
  }

  TEST_CASE("det engine and composition") {
    std::string twice = write("twice.mtt", R"(mtt Twice {
  input  { a:1, e:0 }
  output { a:1, e:0 }
  state q0:0 init
  rule q0(a(x1)) -> a(a(q0[x1]))
  rule q0(e) -> e
}
)");
    auto j = member_json("det", twice, "a(e)", "a(a(a(a(e))))", {"--then", twice});
    CHECK(j["result"] == "yes");
    CHECK(j["stats"]["det_bound"] == 4 * 5);
    Result nondet = run({"member", "--engine", "det", data("double.mtt"), data("double.s.term"),
                         data("double.t.term")});
    CHECK(nondet.code == cli::kError);
    CHECK(nondet.err.find("NotDeterministic") != std::string::npos);
  }

  TEST_CASE("engine and model mismatches") {
    auto code = [](std::vector<std::string> args) { return run(args).code; };
    CHECK(code({"member", "--terms", "--engine", "io", data("reverse.mrtt"), "z", "e"}) == cli::kError);
    CHECK(code({"member", "--terms", "--engine", "io", "--mode", "oi", data("double.mtt"), "e", "e"}) ==
          cli::kError);
    CHECK(code({"member", "--terms", "--engine", "oi-fc", "--mode", "io", data("double.mtt"), "e", "e"}) ==
          cli::kError);
    CHECK(code({"member", "--terms", "--engine", "mr-io", data("pair_equality.mtt"), "e", "e"}) ==
          cli::kError);
    CHECK(code({"member", "--terms", "--engine", "io", "--then", data("double.mtt"),
                data("double.mtt"), "e", "e"}) == cli::kError);
    CHECK(code({"member", "--terms", "--engine", "warp", data("double.mtt"), "e", "e"}) == cli::kUsage);
    CHECK(code({"member", "--engine", "io", data("double.mtt"), "missing.term", "e"}) == cli::kUsage);
    CHECK(code({"member", "--terms", "--engine", "io", data("double.mtt"), "f(", "e"}) == cli::kError);
    CHECK(code({}) == cli::kUsage);
  }

  TEST_CASE("budgets: flags win over the environment") {
    const std::string s = "a(a(e))";
    const std::string t = to_string(families::double_output(2));
    setenv("MTTKIT_MAX_STEPS", "5", 1);
    auto env = member_json("oracle", data("double.mtt"), s, t, {"--mode", "oi"});
    CHECK(env["result"] == "unknown");
    CHECK(env["stats"]["budget"]["max_steps"] == 5);
    auto flag = member_json("oracle", data("double.mtt"), s, t, {"--mode", "oi", "--max-steps", "100000000"});
    CHECK(flag["result"] == "yes");
    setenv("MTTKIT_MAX_STEPS", "lots", 1);
    CHECK(run({"member", "--terms", "--engine", "oracle", data("double.mtt"), s, "e"}).code ==
          cli::kUsage);
    unsetenv("MTTKIT_MAX_STEPS");
    setenv("MTTKIT_MAX_SET", "3", 1);
    CHECK(member_json("oracle", data("double.mtt"), "a(a(e))", "e")["stats"]["budget"]["max_set"] == 3);
    unsetenv("MTTKIT_MAX_SET");
  }

  TEST_CASE("sat") {
    fs::remove_all(scratch("sat_out"));
    Result r = run({"sat", data("sat_example.cnf"), "--out-dir", scratch("sat_out")});
    CHECK(r.code == cli::kYes);
    CHECK(r.out.rfind("result: sat\n", 0) == 0);
    CHECK(r.out.find("encoded: ∧(∨(e, ¬ve, vve), ∨(¬e, ve, vve))\n") != std::string::npos);
    CHECK(slurp(scratch("sat_out/sat_example.s.term")) == "a(b(b(c(d),d,d),d,d))\n");
    Cnf3 f = parse_dimacs(slurp(data("sat_example.cnf")));
    CHECK(parse_term(slurp(scratch("sat_out/sat_example.t.term"))) == encode(f).t);

    Result unsat = run({"sat", data("contradiction.cnf"), "--out-dir", scratch("sat_out")});
    CHECK(unsat.code == cli::kNo);
    CHECK(unsat.out.rfind("result: unsat\n", 0) == 0);

    // 8 variables, 6 clauses: far beyond what the oracle enumerates in 1000 steps
    std::string big = "p cnf 8 6\n1 2 3 0\n-4 5 6 0\n7 -8 1 0\n-2 -3 4 0\n5 6 -7 0\n8 1 -5 0\n";
    Result unknown = run({"sat", write("big.cnf", big), "--max-steps", "1000"});
    CHECK(unknown.code == cli::kUnknown);
    CHECK(unknown.out.rfind("result: unknown\n", 0) == 0);

    CHECK(run({"sat", write("broken.cnf", "p cnf 2 1\n1 2 0\n")}).code == cli::kError);
  }

  TEST_CASE("bench") {
    Result empty = run({"bench", "--family", "copyfree", "--from", "5", "--to", "4"});
    CHECK(empty.code == 0);
    CHECK(empty.out == "n\ts_size\tt_size\tresult\tms\n");
    CHECK(run({"bench", "--json", "--family", "double", "--from", "5", "--to", "4"}).out == "[]\n");

    Result dbl = run({"bench", "--json", "--family", "double", "--from", "1", "--to", "3"});
    CHECK(dbl.code == 0);
    auto rows = nlohmann::json::parse(dbl.out);
    CHECK(rows.size() == 2);
    CHECK(dbl.err.find("skipping n=3") != std::string::npos);

    Result cf = run({"bench", "--json", "--family", "copyfree", "--from", "4", "--to", "12", "--step", "2"});
    auto cf_rows = nlohmann::json::parse(cf.out);
    REQUIRE(cf_rows.size() == 5);
    for (const auto& row : cf_rows) {
      CHECK(row["result"] == "yes");
      CHECK(row["s_size"] == row["n"]);
      CHECK(row["t_size"] == row["n"]);
    }
  }

  TEST_CASE("bench families") {
    Mtt cf = families::copy_free();
    for (std::size_t n = 1; n <= 8; ++n) {
      CHECK(families::copy_free_input(n).size() == n);
      CHECK(member_io(cf, families::copy_free_input(n), families::copy_free_output(n)));
    }
    Mtt d = families::double_mtt();
    CHECK(families::double_output(2).size() == families::double_output_size(2));
    CHECK(member_io(d, families::double_input(2), families::double_output(2)));
  }

  TEST_CASE("output is stable across runs") {
    auto strip = [](std::string s) {
      auto at = s.find("elapsed_ms");
      auto end = s.find('\n', at);
      return s.erase(at, end - at);
    };
    std::vector<std::string> args{"member", "--engine", "io", data("double.mtt"),
                                  data("double.s.term"), data("double.t.term")};
    CHECK(strip(run(args).out) == strip(run(args).out));
  }
}
