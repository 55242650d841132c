#include "mttkit/sat.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

#include "mttkit/errors.hpp"

namespace mttkit {

std::string to_string(const Cnf3& f) {
  std::string out;
  for (std::size_t i = 0; i < f.clauses.size(); ++i) {
    if (i) out += " ∧ ";
    out += '(';
    for (std::size_t j = 0; j < 3; ++j) {
      if (j) out += " ∨ ";
      const Literal& l = f.clauses[i][j];
      out += (l.negated ? "¬p" : "p") + std::to_string(l.var);
    }
    out += ')';
  }
  return out;
}

Cnf3 parse_dimacs(std::string_view text) {
  Cnf3 f;
  bool header = false;
  std::size_t declared = 0;
  std::vector<Literal> pending;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    if (line[first] == 'c' || line[first] == '%') continue;
    std::istringstream in{std::string(line)};
    if (line[first] == 'p') {
      std::string p, kind;
      long long n = -1, m = -1;
      in >> p >> kind >> n >> m;
      if (header || p != "p" || kind != "cnf" || !in || n < 0 || m < 0)
        throw SyntaxError(line_no, first + 1, "expected 'p cnf <vars> <clauses>'");
      header = true;
      f.num_vars = static_cast<std::size_t>(n);
      declared = static_cast<std::size_t>(m);
      continue;
    }
    if (!header) throw SyntaxError(line_no, first + 1, "clause before the 'p cnf' header");
    std::string token;
    while (in >> token) {
      char* stop = nullptr;
      long long x = std::strtoll(token.c_str(), &stop, 10);
      std::size_t col = line.find(token) + 1;
      if (*stop != '\0') throw SyntaxError(line_no, col, "expected an integer, got '" + token + "'");
      if (x == 0) {
        if (pending.size() != 3)
          throw SyntaxError(line_no, col, "clause has " + std::to_string(pending.size()) +
                                              " literals, expected 3");
        f.clauses.push_back(Clause3{pending[0], pending[1], pending[2]});
        pending.clear();
        continue;
      }
      std::size_t var = static_cast<std::size_t>(x < 0 ? -x : x);
      if (var > f.num_vars)
        throw SyntaxError(line_no, col, "variable " + std::to_string(var) + " exceeds " +
                                            std::to_string(f.num_vars));
      pending.push_back(Literal{var - 1, x < 0});
    }
  }
  if (!header) throw SyntaxError(1, 1, "missing 'p cnf' header");
  if (!pending.empty()) throw SyntaxError(line_no, 1, "last clause is not terminated by 0");
  if (f.clauses.size() != declared)
    throw SyntaxError(line_no, 1, "header declares " + std::to_string(declared) +
                                      " clauses, found " + std::to_string(f.clauses.size()));
  return f;
}

std::string to_dimacs(const Cnf3& f) {
  std::string out = "p cnf " + std::to_string(f.num_vars) + " " +
                    std::to_string(f.clauses.size()) + "\n";
  for (const auto& c : f.clauses) {
    for (const auto& l : c) out += (l.negated ? "-" : "") + std::to_string(l.var + 1) + " ";
    out += "0\n";
  }
  return out;
}

namespace {

Rhs out(std::string sym, std::vector<Rhs> kids = {}) { return Rhs::output(std::move(sym), std::move(kids)); }
Rhs y(std::size_t i) { return Rhs::param(i); }

}  // namespace

Mtt build_sat_mtt() {
  Mtt m;
  m.name = "Sat3";
  m.input = RankedAlphabet{{"a", 1}, {"b", 3}, {"c", 1}, {"d", 0}};
  m.output = RankedAlphabet{{"and", 2}, {"or", 3}, {"not", 1}, {"v", 1}, {"e", 0}};
  const std::size_t q0 = m.add_state("q0", 0);
  const std::size_t qc = m.add_state("qc", 2);
  const std::size_t q = m.add_state("q", 3);
  m.initial = q0;

  // p0 is true or false; y_v starts at p1
  m.add_rule(q0, "a", Rhs::call(q, 0, {out("v", {out("e")}), out("e"), out("not", {out("e")})}));
  m.add_rule(q0, "a", Rhs::call(q, 0, {out("v", {out("e")}), out("not", {out("e")}), out("e")}));

  const Rhs yv = y(0), yt = y(1), yf = y(2);
  m.add_rule(q, "b", Rhs::call(q, 0, {out("v", {yv}), Rhs::call(qc, 1, {yt, yv}),
                                      Rhs::call(qc, 2, {yf, out("not", {yv})})}));
  m.add_rule(q, "b", Rhs::call(q, 0, {out("v", {yv}), Rhs::call(qc, 1, {yt, out("not", {yv})}),
                                      Rhs::call(qc, 2, {yf, yv})}));

  m.add_rule(qc, "d", y(0));
  m.add_rule(qc, "d", y(1));

  // every clause pattern with at least one true literal
  for (int bits = 1; bits < 8; ++bits) {
    std::vector<Rhs> lits;
    for (int j = 0; j < 3; ++j) lits.push_back((bits >> (2 - j)) & 1 ? yt : yf);
    Rhs clause = out("or", lits);
    m.add_rule(q, "c", out("and", {clause, Rhs::call(q, 0, {yv, yt, yf})}));
    m.add_rule(q, "d", clause);
  }
  validate(m);
  return m;
}

namespace {

Tree literal_tree(const Literal& l) {
  Tree t("e");
  for (std::size_t i = 0; i < l.var; ++i) t = Tree("v", {std::move(t)});
  return l.negated ? Tree("not", {std::move(t)}) : t;
}

}  // namespace

SatInstance encode(const Cnf3& f) {
  if (f.num_vars == 0 || f.clauses.empty())
    throw Error(ErrorKind::empty_formula, "a formula needs at least one variable and one clause");
  for (const auto& c : f.clauses)
    for (const auto& l : c)
      if (l.var >= f.num_vars)
        throw Error(ErrorKind::unknown_symbol, "variable p" + std::to_string(l.var) +
                                                   " outside p0..p" +
                                                   std::to_string(f.num_vars - 1));
  SatInstance inst;
  Tree chain("d");
  for (std::size_t i = 1; i < f.clauses.size(); ++i) chain = Tree("c", {std::move(chain)});
  for (std::size_t i = 1; i < f.num_vars; ++i)
    chain = Tree("b", {std::move(chain), Tree("d"), Tree("d")});
  inst.s = Tree("a", {std::move(chain)});

  std::vector<Tree> clauses;
  for (const auto& c : f.clauses)
    clauses.push_back(Tree("or", {literal_tree(c[0]), literal_tree(c[1]), literal_tree(c[2])}));
  Tree t = std::move(clauses.back());
  for (std::size_t i = clauses.size() - 1; i-- > 0;)
    t = Tree("and", {std::move(clauses[i]), std::move(t)});
  inst.t = std::move(t);
  return inst;
}

std::string render_formula(const Tree& t) {
  std::string name = t.label;
  if (name == "and") name = "∧";
  else if (name == "or") name = "∨";
  else if (name == "not") name = "¬";
  if (t.children.empty()) return name;
  if (t.children.size() == 1) return name + render_formula(t.children[0]);
  std::string out = name + "(";
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (i) out += ", ";
    out += render_formula(t.children[i]);
  }
  return out + ")";
}

std::string_view to_string(SatVerdict v) {
  switch (v) {
    case SatVerdict::sat: return "sat";
    case SatVerdict::unsat: return "unsat";
    case SatVerdict::unknown: return "unknown";
  }
  return "unknown";
}

SatVerdict sat_check_small(const Cnf3& f, const Budget& budget) {
  static const Mtt m = build_sat_mtt();
  SatInstance inst = encode(f);
  OracleOptions options;
  options.budget = budget;
  switch (oracle_member(m, Mode::oi, inst.s, inst.t, options)) {
    case Verdict::yes: return SatVerdict::sat;
    case Verdict::no: return SatVerdict::unsat;
    case Verdict::unknown: return SatVerdict::unknown;
  }
  return SatVerdict::unknown;
}

bool truth_table_sat(const Cnf3& f) {
  if (f.num_vars > 20)
    throw Error(ErrorKind::budget_exceeded, "truth tables are limited to 20 variables");
  for (std::uint32_t a = 0; a < (1u << f.num_vars); ++a) {
    bool all = true;
    for (const auto& c : f.clauses) {
      bool any = false;
      for (const auto& l : c) any = any || (((a >> l.var) & 1) != 0) != l.negated;
      if (!any) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

}  // namespace mttkit
