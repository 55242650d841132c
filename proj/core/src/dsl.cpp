#include "mttkit/dsl.hpp"

#include <sstream>

#include "lexer.hpp"
#include "mttkit/errors.hpp"

namespace mttkit {

namespace {

using detail::Lexer;
using detail::Tok;
using detail::Token;

struct Pos {
  std::size_t line = 0;
  std::size_t column = 0;
};

Pos pos_of(const Token& t) { return {t.line, t.column}; }

[[noreturn]] void fail(ErrorKind kind, Pos p, const std::string& what) {
  if (kind == ErrorKind::syntax_error) throw SyntaxError(p.line, p.column, what);
  throw Error(kind, std::to_string(p.line) + ":" + std::to_string(p.column) + ": " + what);
}

/// Index of a reserved variable `<prefix><n>` as 0-based n-1.
std::optional<std::size_t> var_index(std::string_view name, char prefix) {
  if (!is_reserved_name(name) || name[0] != prefix) return std::nullopt;
  return std::stoul(std::string(name.substr(1))) - 1;
}

struct RawTerm {
  std::string name;
  Pos pos;
  std::optional<std::size_t> input;  // set for state calls q[xj]
  std::vector<RawTerm> args;
};

struct RawLet {
  Pos pos;
  std::vector<std::pair<std::size_t, Pos>> targets;
  RawTerm call;
};

struct Constraints {
  std::vector<ChildPair> eq;
  std::vector<ChildPair> neq;
};

struct RawGuard {
  Pos pos;
  std::vector<std::pair<std::string, Pos>> states;
  Constraints constraints;
};

struct RawRule {
  Pos pos;
  std::string state;
  std::string symbol;
  Pos symbol_pos;
  std::size_t written_inputs = 0;
  std::optional<std::size_t> written_params;
  std::optional<RawGuard> guard;
  std::vector<RawLet> lets;
  std::vector<RawTerm> result;
  bool tuple = false;
};

struct RawState {
  Pos pos;
  std::string name;
  std::size_t rank = 0;
  std::optional<std::size_t> dimension;
  bool init = false;
};

struct RawTrans {
  Pos pos;
  std::string symbol;
  std::vector<std::pair<std::string, Pos>> children;
  Constraints constraints;
  std::string target;
  Pos target_pos;
};

struct RawDecl {
  Pos pos;
  std::string name;
  std::size_t rank;
};

struct RawDoc {
  bool multi_return = false;
  std::string name;
  std::vector<RawDecl> input;
  std::vector<RawDecl> output;
  std::vector<RawState> states;
  std::vector<RawRule> rules;
  bool has_tac = false;
  std::vector<std::pair<std::string, Pos>> tac_states;
  std::vector<RawTrans> transitions;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text, true) {}

  RawDoc document() {
    RawDoc doc;
    if (lex_.at_ident("mrtt")) {
      doc.multi_return = true;
    } else if (!lex_.at_ident("mtt")) {
      lex_.fail("expected 'mtt' or 'mrtt'");
    }
    lex_.next();
    doc.name = lex_.expect_ident("transducer name").text;
    lex_.expect_punct('{');
    while (!lex_.at_punct('}')) item(doc);
    lex_.next();
    if (lex_.peek().kind != Tok::end) lex_.fail("trailing input after transducer");
    return doc;
  }

 private:
  void item(RawDoc& doc) {
    if (lex_.at_ident("input")) {
      lex_.next();
      decls(doc.input);
    } else if (lex_.at_ident("output")) {
      lex_.next();
      decls(doc.output);
    } else if (lex_.at_ident("state")) {
      lex_.next();
      doc.states.push_back(state_decl());
    } else if (lex_.at_ident("rule")) {
      lex_.next();
      doc.rules.push_back(rule(doc.multi_return));
    } else if (lex_.at_ident("tac")) {
      if (doc.multi_return) lex_.fail("look-ahead is not supported for mrtt");
      lex_.next();
      doc.has_tac = true;
      tac_block(doc);
    } else {
      lex_.fail("expected 'input', 'output', 'state', 'rule' or 'tac'");
    }
  }

  void decls(std::vector<RawDecl>& out) {
    lex_.expect_punct('{');
    if (!lex_.at_punct('}')) {
      while (true) {
        Token name = lex_.expect_ident("symbol name");
        lex_.expect_punct(':');
        std::size_t rank = lex_.expect_number();
        out.push_back({pos_of(name), name.text, rank});
        if (!lex_.at_punct(',')) break;
        lex_.next();
      }
    }
    lex_.expect_punct('}');
  }

  RawState state_decl() {
    RawState s;
    Token name = lex_.expect_ident("state name");
    s.pos = pos_of(name);
    s.name = name.text;
    lex_.expect_punct(':');
    s.rank = lex_.expect_number();
    if (lex_.at_punct('/')) {
      lex_.next();
      s.dimension = lex_.expect_number();
    }
    if (lex_.at_ident("init")) {
      lex_.next();
      s.init = true;
    }
    return s;
  }

  std::size_t variable(char prefix) {
    Token t = lex_.expect_ident(std::string("variable ") + prefix + "<n>");
    auto i = var_index(t.text, prefix);
    if (!i) fail(ErrorKind::syntax_error, pos_of(t), std::string("expected ") + prefix + "<n>, got '" + t.text + "'");
    return *i;
  }

  /// Parses `(v1, ..., vn)` and checks the variables are numbered 1..n.
  std::size_t variable_list(char prefix) {
    lex_.expect_punct('(');
    std::size_t n = 0;
    if (!lex_.at_punct(')')) {
      while (true) {
        Pos p = pos_of(lex_.peek());
        std::size_t i = variable(prefix);
        if (i != n)
          fail(ErrorKind::syntax_error, p,
               std::string("expected ") + prefix + std::to_string(n + 1));
        ++n;
        if (!lex_.at_punct(',')) break;
        lex_.next();
      }
    }
    lex_.expect_punct(')');
    return n;
  }

  Constraints constraint_list() {
    Constraints c;
    while (lex_.at_punct(';')) {
      lex_.next();
      bool is_eq = lex_.at_ident("eq");
      if (!is_eq && !lex_.at_ident("neq")) lex_.fail("expected 'eq' or 'neq'");
      lex_.next();
      Pos p = pos_of(lex_.peek());
      std::size_t i = lex_.expect_number();
      std::size_t j = lex_.expect_number();
      if (i == 0 || j == 0) fail(ErrorKind::syntax_error, p, "constraint indices are 1-based");
      (is_eq ? c.eq : c.neq).push_back({i - 1, j - 1});
    }
    return c;
  }

  std::vector<std::pair<std::string, Pos>> name_list() {
    std::vector<std::pair<std::string, Pos>> out;
    if (lex_.at_punct(';') || lex_.at_punct(')')) return out;
    while (true) {
      Token t = lex_.expect_ident("state name");
      out.emplace_back(t.text, pos_of(t));
      if (!lex_.at_punct(',')) break;
      lex_.next();
    }
    return out;
  }

  RawRule rule(bool multi_return) {
    RawRule r;
    Token q = lex_.expect_ident("state name");
    r.pos = pos_of(q);
    r.state = q.text;
    lex_.expect_punct('(');
    Token sigma = lex_.expect_ident("input symbol");
    r.symbol = sigma.text;
    r.symbol_pos = pos_of(sigma);
    if (lex_.at_punct('(')) r.written_inputs = variable_list('x');
    lex_.expect_punct(')');
    if (lex_.at_punct('(')) r.written_params = variable_list('y');
    if (lex_.at_ident("when")) {
      if (multi_return) lex_.fail("look-ahead is not supported for mrtt");
      Token w = lex_.next();
      RawGuard g;
      g.pos = pos_of(w);
      lex_.expect_punct('(');
      g.states = name_list();
      g.constraints = constraint_list();
      lex_.expect_punct(')');
      r.guard = std::move(g);
    }
    lex_.expect_arrow();
    if (multi_return) {
      while (lex_.at_ident("let")) r.lets.push_back(let_binding());
      if (lex_.at_punct('(')) {
        r.tuple = true;
        lex_.next();
        r.result.push_back(term());
        while (lex_.at_punct(',')) {
          lex_.next();
          r.result.push_back(term());
        }
        lex_.expect_punct(')');
      } else {
        r.result.push_back(term());
      }
    } else {
      if (lex_.peek().kind == Tok::end || lex_.at_ident("rule") || lex_.at_punct('}'))
        lex_.fail("empty rule body");
      r.result.push_back(term());
    }
    return r;
  }

  RawLet let_binding() {
    RawLet l;
    l.pos = pos_of(lex_.next());
    auto target = [&] {
      Pos p = pos_of(lex_.peek());
      l.targets.emplace_back(variable('z'), p);
    };
    if (lex_.at_punct('(')) {
      lex_.next();
      target();
      while (lex_.at_punct(',')) {
        lex_.next();
        target();
      }
      lex_.expect_punct(')');
    } else {
      target();
    }
    lex_.expect_punct('=');
    l.call = term();
    if (!l.call.input) fail(ErrorKind::malformed_let, l.call.pos, "let must bind a state call q[xi](...)");
    lex_.expect_keyword("in");
    return l;
  }

  RawTerm term() {
    if (lex_.peek().kind == Tok::end || lex_.at_punct('}'))
      lex_.fail("expected a term");
    RawTerm t;
    Token name = lex_.expect_ident("term");
    t.name = name.text;
    t.pos = pos_of(name);
    if (lex_.at_punct('[')) {
      lex_.next();
      t.input = variable('x');
      lex_.expect_punct(']');
    }
    if (lex_.at_punct('(')) {
      lex_.next();
      if (!lex_.at_punct(')')) {
        t.args.push_back(term());
        while (lex_.at_punct(',')) {
          lex_.next();
          t.args.push_back(term());
        }
      }
      lex_.expect_punct(')');
    }
    return t;
  }

  void tac_block(RawDoc& doc) {
    lex_.expect_punct('{');
    while (!lex_.at_punct('}')) {
      if (lex_.at_ident("states")) {
        lex_.next();
        lex_.expect_punct('{');
        auto names = name_list();
        doc.tac_states.insert(doc.tac_states.end(), names.begin(), names.end());
        lex_.expect_punct('}');
      } else if (lex_.at_ident("trans")) {
        Token kw = lex_.next();
        RawTrans tr;
        tr.pos = pos_of(kw);
        tr.symbol = lex_.expect_ident("symbol").text;
        if (lex_.at_punct('(')) {
          lex_.next();
          tr.children = name_list();
          tr.constraints = constraint_list();
          lex_.expect_punct(')');
        }
        lex_.expect_arrow();
        Token target = lex_.expect_ident("target state");
        tr.target = target.text;
        tr.target_pos = pos_of(target);
        doc.transitions.push_back(std::move(tr));
      } else {
        lex_.fail("expected 'states' or 'trans'");
      }
    }
    lex_.next();
  }

  Lexer lex_;
};

// ---------------------------------------------------------------------------
// resolution

template <class Fn>
void with_pos(Pos p, Fn&& fn) {
  try {
    fn();
  } catch (const SyntaxError&) {
    throw;
  } catch (const Error& e) {
    std::string msg = e.what();
    auto colon = msg.find(": ");
    fail(e.kind(), p, colon == std::string::npos ? msg : msg.substr(colon + 2));
  }
}

void build_alphabet(const std::vector<RawDecl>& decls, RankedAlphabet& out,
                    bool forbid_let_keywords) {
  for (const auto& d : decls)
    with_pos(d.pos, [&] {
      if (forbid_let_keywords && (d.name == "let" || d.name == "in"))
        fail(ErrorKind::reserved_name, d.pos, "'" + d.name + "' is a keyword in mrtt files");
      out.add(d.name, d.rank);
    });
}

std::size_t find_init(const std::vector<RawState>& states) {
  std::optional<std::size_t> init;
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i].init) {
      if (init) fail(ErrorKind::syntax_error, states[i].pos, "more than one initial state");
      init = i;
    }
  if (!init) fail(ErrorKind::syntax_error, {1, 1}, "no state is marked 'init'");
  return *init;
}

Rhs resolve_rhs(const RawTerm& t, const Mtt& m) {
  std::vector<Rhs> kids;
  kids.reserve(t.args.size());
  for (const auto& a : t.args) kids.push_back(resolve_rhs(a, m));
  if (t.input) {
    auto q = m.find_state(t.name);
    if (!q) fail(ErrorKind::unknown_state, t.pos, "unknown state '" + t.name + "'");
    return Rhs::call(*q, *t.input, std::move(kids));
  }
  if (auto y = var_index(t.name, 'y')) {
    if (!t.args.empty()) fail(ErrorKind::syntax_error, t.pos, "parameter takes no arguments");
    return Rhs::param(*y);
  }
  if (var_index(t.name, 'x'))
    fail(ErrorKind::syntax_error, t.pos, "input variables appear only as q[" + t.name + "]");
  if (var_index(t.name, 'z'))
    fail(ErrorKind::syntax_error, t.pos, "let-variables are only allowed in mrtt files");
  if (!m.output.contains(t.name)) {
    if (m.find_state(t.name))
      fail(ErrorKind::syntax_error, t.pos, "state call '" + t.name + "' needs an input variable [xj]");
    fail(ErrorKind::unknown_symbol, t.pos, "unknown output symbol '" + t.name + "'");
  }
  return Rhs::output(t.name, std::move(kids));
}

/// Shared header checks. Returns (state id, input rank).
template <class M>
std::pair<std::size_t, std::size_t> resolve_header(const RawRule& r, const M& m) {
  auto q = m.find_state(r.state);
  if (!q) fail(ErrorKind::unknown_state, r.pos, "unknown state '" + r.state + "'");
  auto k = m.input.rank_of(r.symbol);
  if (!k) fail(ErrorKind::unknown_symbol, r.symbol_pos, "unknown input symbol '" + r.symbol + "'");
  if (r.written_inputs != *k)
    fail(ErrorKind::arity_mismatch, r.symbol_pos,
         "input symbol '" + r.symbol + "' has rank " + std::to_string(*k) + " but the rule binds " +
             std::to_string(r.written_inputs) + " variables");
  std::size_t rank = m.states[*q].rank;
  if (r.written_params.value_or(0) != rank)
    fail(ErrorKind::arity_mismatch, r.pos,
         "state '" + r.state + "' has rank " + std::to_string(rank) + " but the rule binds " +
             std::to_string(r.written_params.value_or(0)) + " parameters");
  return {*q, *k};
}

struct TacDoc {
  TacMtt model;
  bool has_lookahead = false;
};

TacDoc build_tac_doc(const RawDoc& doc) {
  if (doc.multi_return) fail(ErrorKind::syntax_error, {1, 1}, "expected 'mtt', found 'mrtt'");
  TacDoc out;
  Mtt& m = out.model.base;
  m.name = doc.name;
  build_alphabet(doc.input, m.input, false);
  build_alphabet(doc.output, m.output, false);
  for (const auto& s : doc.states)
    with_pos(s.pos, [&] {
      if (s.dimension)
        fail(ErrorKind::syntax_error, s.pos, "dimensions are only allowed in mrtt files");
      m.add_state(s.name, s.rank);
    });
  m.initial = find_init(doc.states);

  Tac& tac = out.model.lookahead;
  out.has_lookahead = doc.has_tac;
  for (const auto& [name, p] : doc.tac_states) with_pos(p, [&] { tac.add_state(name); });
  auto tac_state = [&](const std::string& name, Pos p) {
    auto s = tac.find_state(name);
    if (!s) fail(ErrorKind::unknown_state, p, "unknown look-ahead state '" + name + "'");
    return *s;
  };
  for (const auto& tr : doc.transitions) {
    TacTransition t;
    t.symbol = tr.symbol;
    for (const auto& [name, p] : tr.children) t.children.push_back(tac_state(name, p));
    t.eq = tr.constraints.eq;
    t.neq = tr.constraints.neq;
    t.target = tac_state(tr.target, tr.target_pos);
    tac.transitions.push_back(std::move(t));
  }
  with_pos({1, 1}, [&] { tac.validate(m.input); });

  for (const auto& r : doc.rules) {
    auto [q, k] = resolve_header(r, m);
    Rhs rhs = resolve_rhs(r.result.front(), m);
    with_pos(r.pos, [&] {
      validate_rhs(m, q, k, rhs, "rule " + r.state + "(" + r.symbol + ")");
    });
    if (!r.guard) {
      m.add_rule(q, r.symbol, std::move(rhs));
      continue;
    }
    out.has_lookahead = true;
    TacRule tr;
    tr.state = q;
    tr.symbol = r.symbol;
    if (r.guard->states.size() != k)
      fail(ErrorKind::arity_mismatch, r.guard->pos,
           "look-ahead lists " + std::to_string(r.guard->states.size()) +
               " states for a symbol of rank " + std::to_string(k));
    for (const auto& [name, p] : r.guard->states) {
      if (name == "_")
        tr.guard.states.push_back(std::nullopt);
      else
        tr.guard.states.push_back(tac_state(name, p));
    }
    tr.guard.eq = r.guard->constraints.eq;
    tr.guard.neq = r.guard->constraints.neq;
    for (const auto& [i, j] : tr.guard.eq)
      if (i >= k || j >= k) fail(ErrorKind::arity_mismatch, r.guard->pos, "eq index out of range");
    for (const auto& [i, j] : tr.guard.neq)
      if (i >= k || j >= k) fail(ErrorKind::arity_mismatch, r.guard->pos, "neq index out of range");
    tr.rhs = std::move(rhs);
    out.model.rules.push_back(std::move(tr));
  }
  return out;
}

MrTerm resolve_mr_term(const RawTerm& t, const MrMtt& m) {
  if (t.input) fail(ErrorKind::malformed_let, t.pos, "state calls are only allowed in let bindings");
  std::vector<MrTerm> kids;
  for (const auto& a : t.args) kids.push_back(resolve_mr_term(a, m));
  if (auto y = var_index(t.name, 'y')) {
    if (!t.args.empty()) fail(ErrorKind::syntax_error, t.pos, "parameter takes no arguments");
    return MrTerm::param(*y);
  }
  if (auto z = var_index(t.name, 'z')) {
    if (!t.args.empty()) fail(ErrorKind::syntax_error, t.pos, "let-variable takes no arguments");
    return MrTerm::var(*z);
  }
  if (var_index(t.name, 'x'))
    fail(ErrorKind::syntax_error, t.pos, "input variables appear only as q[" + t.name + "]");
  if (!m.output.contains(t.name))
    fail(ErrorKind::unknown_symbol, t.pos, "unknown output symbol '" + t.name + "'");
  return MrTerm::output(t.name, std::move(kids));
}

MrMtt build_mrtt(const RawDoc& doc) {
  if (!doc.multi_return) fail(ErrorKind::syntax_error, {1, 1}, "expected 'mrtt', found 'mtt'");
  MrMtt m;
  m.name = doc.name;
  build_alphabet(doc.input, m.input, true);
  build_alphabet(doc.output, m.output, true);
  for (const auto& s : doc.states)
    with_pos(s.pos, [&] { m.add_state(s.name, s.rank, s.dimension.value_or(1)); });
  m.initial = find_init(doc.states);
  for (const auto& r : doc.rules) {
    auto [q, k] = resolve_header(r, m);
    MrRhs rhs;
    for (const auto& l : r.lets) {
      MrLet let;
      auto callee = m.find_state(l.call.name);
      if (!callee) fail(ErrorKind::unknown_state, l.call.pos, "unknown state '" + l.call.name + "'");
      let.state = *callee;
      let.input = *l.call.input;
      for (const auto& [z, p] : l.targets) let.targets.push_back(z);
      for (const auto& a : l.call.args) let.args.push_back(resolve_mr_term(a, m));
      rhs.lets.push_back(std::move(let));
    }
    for (const auto& u : r.result) rhs.result.push_back(resolve_mr_term(u, m));
    (void)k;
    m.add_rule(q, r.symbol, std::move(rhs));
  }
  with_pos({1, 1}, [&] { validate(m); });
  return m;
}

std::string alphabet_text(const RankedAlphabet& a) {
  std::string out = "{ ";
  bool first = true;
  for (const auto& [name, rank] : a.symbols()) {
    if (!first) out += ", ";
    first = false;
    out += name + ":" + std::to_string(rank);
  }
  return first ? "{}" : out + " }";
}

std::string rule_header(const std::string& state, std::size_t state_rank, const std::string& symbol,
                        std::size_t input_rank) {
  std::string out = state + "(" + symbol;
  if (input_rank > 0) {
    out += '(';
    for (std::size_t i = 0; i < input_rank; ++i) out += (i ? ",x" : "x") + std::to_string(i + 1);
    out += ')';
  }
  out += ')';
  if (state_rank > 0) {
    out += '(';
    for (std::size_t i = 0; i < state_rank; ++i) out += (i ? ",y" : "y") + std::to_string(i + 1);
    out += ')';
  }
  return out;
}

void print_mr_term(const MrTerm& t, std::string& out) {
  switch (t.kind) {
    case MrTerm::Kind::param:
      out += "y" + std::to_string(t.index + 1);
      return;
    case MrTerm::Kind::var:
      out += "z" + std::to_string(t.index + 1);
      return;
    case MrTerm::Kind::output:
      out += t.symbol;
      if (!t.children.empty()) {
        out += '(';
        for (std::size_t i = 0; i < t.children.size(); ++i) {
          if (i) out += ',';
          print_mr_term(t.children[i], out);
        }
        out += ')';
      }
      return;
  }
}

std::string constraint_text(const std::vector<ChildPair>& eq, const std::vector<ChildPair>& neq) {
  std::string out;
  for (const auto& [i, j] : eq) out += "; eq " + std::to_string(i + 1) + " " + std::to_string(j + 1);
  for (const auto& [i, j] : neq) out += "; neq " + std::to_string(i + 1) + " " + std::to_string(j + 1);
  return out;
}

}  // namespace

ModelKind detect_model_kind(std::string_view text) {
  RawDoc doc = Parser(text).document();
  if (doc.multi_return) return ModelKind::mrtt;
  if (doc.has_tac) return ModelKind::tac_mtt;
  for (const auto& r : doc.rules)
    if (r.guard) return ModelKind::tac_mtt;
  return ModelKind::mtt;
}

Mtt parse_mtt(std::string_view text) {
  TacDoc doc = build_tac_doc(Parser(text).document());
  if (doc.has_lookahead)
    throw SyntaxError(1, 1, "look-ahead syntax found; read this file with parse_tac_mtt");
  validate(doc.model.base);
  return std::move(doc.model.base);
}

TacMtt parse_tac_mtt(std::string_view text) {
  TacDoc doc = build_tac_doc(Parser(text).document());
  validate(doc.model);
  return std::move(doc.model);
}

MrMtt parse_mrtt(std::string_view text) { return build_mrtt(Parser(text).document()); }

std::string pretty_print(const TacMtt& m) {
  std::string out = pretty_print(m.base);
  out.resize(out.size() - 2);  // drop "}\n"
  const Tac& tac = m.lookahead;
  out += "  tac {\n    states {";
  for (std::size_t i = 0; i < tac.states.size(); ++i) out += (i ? ", " : " ") + tac.states[i];
  out += tac.states.empty() ? "}\n" : " }\n";
  for (const auto& t : tac.transitions) {
    out += "    trans " + t.symbol;
    if (!t.children.empty() || !t.eq.empty() || !t.neq.empty()) {
      out += '(';
      for (std::size_t i = 0; i < t.children.size(); ++i)
        out += (i ? ", " : "") + tac.states[t.children[i]];
      out += constraint_text(t.eq, t.neq) + ")";
    }
    out += " -> " + tac.states[t.target] + "\n";
  }
  out += "  }\n";
  for (const auto& r : m.rules) {
    std::size_t k = m.base.input.rank_of(r.symbol).value_or(0);
    out += "  rule " + rule_header(m.base.states[r.state].name, m.base.states[r.state].rank,
                                   r.symbol, k);
    out += " when (";
    for (std::size_t i = 0; i < r.guard.states.size(); ++i) {
      if (i) out += ", ";
      out += r.guard.states[i] ? tac.states[*r.guard.states[i]] : std::string("_");
    }
    out += constraint_text(r.guard.eq, r.guard.neq) + ") -> " + rhs_to_string(m.base, r.rhs) + "\n";
  }
  out += "}\n";
  return out;
}

std::string pretty_print(const MrMtt& m) {
  std::ostringstream os;
  os << "mrtt " << (m.name.empty() ? "M" : m.name) << " {\n";
  os << "  input  " << alphabet_text(m.input) << "\n";
  os << "  output " << alphabet_text(m.output) << "\n";
  for (std::size_t q = 0; q < m.states.size(); ++q) {
    os << "  state " << m.states[q].name << ':' << m.states[q].rank << '/'
       << m.states[q].dimension;
    if (q == m.initial) os << " init";
    os << '\n';
  }
  for (const auto& [key, alts] : m.rules()) {
    const auto& [q, sigma] = key;
    std::size_t k = m.input.rank_of(sigma).value_or(0);
    for (const auto& rhs : alts) {
      std::string line = "  rule " + rule_header(m.states[q].name, m.states[q].rank, sigma, k) + " ->";
      for (const auto& l : rhs.lets) {
        line += " let (";
        for (std::size_t i = 0; i < l.targets.size(); ++i)
          line += (i ? ",z" : "z") + std::to_string(l.targets[i] + 1);
        line += ") = " + m.states[l.state].name + "[x" + std::to_string(l.input + 1) + "]";
        if (!l.args.empty()) {
          line += '(';
          for (std::size_t i = 0; i < l.args.size(); ++i) {
            if (i) line += ',';
            print_mr_term(l.args[i], line);
          }
          line += ')';
        }
        line += " in";
      }
      line += " (";
      for (std::size_t i = 0; i < rhs.result.size(); ++i) {
        if (i) line += ", ";
        print_mr_term(rhs.result[i], line);
      }
      os << line << ")\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace mttkit
