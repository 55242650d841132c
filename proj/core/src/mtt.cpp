#include "mttkit/mtt.hpp"

#include <algorithm>
#include <sstream>

#include "mttkit/errors.hpp"

namespace mttkit {

Rhs Rhs::output(std::string symbol, std::vector<Rhs> children) {
  Rhs r;
  r.kind = Kind::output;
  r.symbol = std::move(symbol);
  r.children = std::move(children);
  return r;
}

Rhs Rhs::param(std::size_t i) {
  Rhs r;
  r.kind = Kind::param;
  r.index = i;
  return r;
}

Rhs Rhs::call(std::size_t state, std::size_t input, std::vector<Rhs> args) {
  Rhs r;
  r.kind = Kind::call;
  r.state = state;
  r.index = input;
  r.children = std::move(args);
  return r;
}

std::size_t Rhs::size() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.size();
  return n;
}

bool Rhs::has_params() const {
  if (kind == Kind::param) return true;
  return std::any_of(children.begin(), children.end(), [](const Rhs& c) { return c.has_params(); });
}

bool operator==(const Rhs& a, const Rhs& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Rhs::Kind::output:
      if (a.symbol != b.symbol) return false;
      break;
    case Rhs::Kind::param:
      return a.index == b.index;
    case Rhs::Kind::call:
      if (a.state != b.state || a.index != b.index) return false;
      break;
  }
  return a.children == b.children;
}

std::size_t Mtt::add_state(const std::string& state_name, std::size_t rank) {
  if (find_state(state_name))
    throw Error(ErrorKind::duplicate_name, "state '" + state_name + "' declared twice");
  states.push_back({state_name, rank});
  return states.size() - 1;
}

std::optional<std::size_t> Mtt::find_state(std::string_view state_name) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i].name == state_name) return i;
  return std::nullopt;
}

std::size_t Mtt::state_id(std::string_view state_name) const {
  if (auto q = find_state(state_name)) return *q;
  throw Error(ErrorKind::unknown_state, "no state named '" + std::string(state_name) + "'");
}

bool Mtt::add_rule(std::size_t state, const std::string& symbol, Rhs rhs) {
  auto& alts = rules_[RuleKey{state, symbol}];
  if (std::find(alts.begin(), alts.end(), rhs) != alts.end()) return false;
  alts.push_back(std::move(rhs));
  return true;
}

const std::vector<Rhs>& Mtt::rules_for(std::size_t state, std::string_view symbol) const {
  static const std::vector<Rhs> none;
  auto it = rules_.find(RuleKey{state, std::string(symbol)});
  return it == rules_.end() ? none : it->second;
}

std::size_t Mtt::rule_count() const {
  std::size_t n = 0;
  for (const auto& [key, alts] : rules_) n += alts.size();
  return n;
}

std::size_t Mtt::size() const {
  std::size_t n = 0;
  for (const auto& [key, alts] : rules_)
    for (const auto& r : alts) n += r.size();
  return n;
}

std::size_t Mtt::max_state_rank() const {
  std::size_t m = 0;
  for (const auto& s : states) m = std::max(m, s.rank);
  return m;
}

// ---------------------------------------------------------------------------
// validate

void validate_rhs(const Mtt& m, std::size_t q, std::size_t input_rank, const Rhs& rhs,
                  const std::string& where) {
  switch (rhs.kind) {
    case Rhs::Kind::param:
      if (rhs.index >= m.states[q].rank)
        throw Error(ErrorKind::arity_mismatch,
                    where + ": y" + std::to_string(rhs.index + 1) + " used in state '" +
                        m.states[q].name + "' of rank " + std::to_string(m.states[q].rank));
      return;
    case Rhs::Kind::output: {
      auto rank = m.output.rank_of(rhs.symbol);
      if (!rank)
        throw Error(ErrorKind::unknown_symbol,
                    where + ": output symbol '" + rhs.symbol + "' is not declared");
      if (*rank != rhs.children.size())
        throw Error(ErrorKind::arity_mismatch,
                    where + ": output symbol '" + rhs.symbol + "' has rank " +
                        std::to_string(*rank) + " but " + std::to_string(rhs.children.size()) +
                        " arguments");
      break;
    }
    case Rhs::Kind::call:
      if (rhs.state >= m.states.size())
        throw Error(ErrorKind::unknown_state, where + ": call to undeclared state");
      if (rhs.index >= input_rank)
        throw Error(ErrorKind::arity_mismatch,
                    where + ": input variable x" + std::to_string(rhs.index + 1) +
                        " exceeds the input symbol rank " + std::to_string(input_rank));
      if (rhs.children.size() != m.states[rhs.state].rank)
        throw Error(ErrorKind::arity_mismatch,
                    where + ": state '" + m.states[rhs.state].name + "' takes " +
                        std::to_string(m.states[rhs.state].rank) + " arguments, got " +
                        std::to_string(rhs.children.size()));
      break;
  }
  for (const auto& c : rhs.children) validate_rhs(m, q, input_rank, c, where);
}

namespace {

void count_occurrences(const Rhs& r, std::vector<std::size_t>& xs, std::vector<std::size_t>& ys) {
  if (r.kind == Rhs::Kind::param) {
    if (r.index >= ys.size()) ys.resize(r.index + 1);
    ++ys[r.index];
  } else if (r.kind == Rhs::Kind::call) {
    if (r.index >= xs.size()) xs.resize(r.index + 1);
    ++xs[r.index];
  }
  for (const auto& c : r.children) count_occurrences(c, xs, ys);
}

}  // namespace

MttClass validate(const Mtt& m) {
  if (m.states.empty()) throw Error(ErrorKind::unknown_state, "mtt has no states");
  if (m.initial >= m.states.size()) throw Error(ErrorKind::unknown_state, "bad initial state");
  if (m.states[m.initial].rank != 0)
    throw Error(ErrorKind::bad_initial_rank, "initial state '" + m.states[m.initial].name +
                                                 "' has rank " +
                                                 std::to_string(m.states[m.initial].rank));

  MttClass c;
  c.deterministic = true;
  c.linear_input = true;
  c.linear_params = true;
  c.max_state_rank = m.max_state_rank();

  for (const auto& [key, alts] : m.rules()) {
    const auto& [q, sigma] = key;
    if (q >= m.states.size()) throw Error(ErrorKind::unknown_state, "rule for undeclared state");
    auto k = m.input.rank_of(sigma);
    if (!k)
      throw Error(ErrorKind::unknown_symbol, "rule " + m.states[q].name + "(" + sigma +
                                                 "): input symbol is not declared");
    if (alts.size() > 1) c.deterministic = false;
    for (std::size_t i = 0; i < alts.size(); ++i) {
      std::string where = "rule " + m.states[q].name + "(" + sigma + ") #" + std::to_string(i + 1);
      validate_rhs(m, q, *k, alts[i], where);
      std::vector<std::size_t> xs, ys;
      count_occurrences(alts[i], xs, ys);
      if (std::any_of(xs.begin(), xs.end(), [](std::size_t n) { return n > 1; }))
        c.linear_input = false;
      if (std::any_of(ys.begin(), ys.end(), [](std::size_t n) { return n > 1; }))
        c.linear_params = false;
    }
  }

  c.total = true;
  for (std::size_t q = 0; q < m.states.size() && c.total; ++q)
    for (const auto& [sigma, rank] : m.input.symbols())
      if (m.rules_for(q, sigma).empty()) {
        c.total = false;
        break;
      }
  return c;
}

std::string to_string(const MttClass& c) {
  std::ostringstream os;
  os << std::boolalpha << "deterministic: " << c.deterministic << ", total: " << c.total
     << ", linear_input: " << c.linear_input << ", linear_params: " << c.linear_params
     << ", m: " << c.max_state_rank;
  return os.str();
}

// ---------------------------------------------------------------------------
// printing

namespace {

void print_rhs(const Mtt& m, const Rhs& r, std::string& out) {
  auto args = [&](const std::vector<Rhs>& kids) {
    if (kids.empty()) return;
    out += '(';
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (i) out += ',';
      print_rhs(m, kids[i], out);
    }
    out += ')';
  };
  switch (r.kind) {
    case Rhs::Kind::param:
      out += "y" + std::to_string(r.index + 1);
      break;
    case Rhs::Kind::output:
      out += r.symbol;
      args(r.children);
      break;
    case Rhs::Kind::call:
      out += m.states.at(r.state).name + "[x" + std::to_string(r.index + 1) + "]";
      args(r.children);
      break;
  }
}

void print_alphabet(const RankedAlphabet& a, std::ostringstream& os) {
  os << "{ ";
  bool first = true;
  for (const auto& [name, rank] : a.symbols()) {
    if (!first) os << ", ";
    first = false;
    os << name << ':' << rank;
  }
  os << (first ? "}" : " }");
}

}  // namespace

std::string rhs_to_string(const Mtt& m, const Rhs& rhs) {
  std::string out;
  print_rhs(m, rhs, out);
  return out;
}

std::string pretty_print(const Mtt& m) {
  std::ostringstream os;
  os << "mtt " << (m.name.empty() ? "M" : m.name) << " {\n  input  ";
  print_alphabet(m.input, os);
  os << "\n  output ";
  print_alphabet(m.output, os);
  os << '\n';
  for (std::size_t q = 0; q < m.states.size(); ++q) {
    os << "  state " << m.states[q].name << ':' << m.states[q].rank;
    if (q == m.initial) os << " init";
    os << '\n';
  }
  for (const auto& [key, alts] : m.rules()) {
    const auto& [q, sigma] = key;
    std::size_t k = m.input.rank_of(sigma).value_or(0);
    for (const auto& rhs : alts) {
      os << "  rule " << m.states[q].name << '(' << sigma;
      if (k > 0) {
        os << '(';
        for (std::size_t i = 0; i < k; ++i) os << (i ? "," : "") << 'x' << i + 1;
        os << ')';
      }
      os << ')';
      if (m.states[q].rank > 0) {
        os << '(';
        for (std::size_t i = 0; i < m.states[q].rank; ++i) os << (i ? "," : "") << 'y' << i + 1;
        os << ')';
      }
      os << " -> " << rhs_to_string(m, rhs) << '\n';
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace mttkit
