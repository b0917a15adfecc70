#include "qmeq/machine_format.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "qmeq/errors.hpp"

namespace qmeq {

namespace {

bool parse_real(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty() || s.front() == '+') return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  // from_chars also accepts "inf" and "nan"; those are rejected below.
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && std::isfinite(out);
}

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

struct Line {
  std::size_t number;
  std::vector<Token> tokens;
};

// Splits into non-empty, comment-free lines of whitespace-separated tokens.
std::vector<Line> tokenize(std::istream& in) {
  std::vector<Line> lines;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    Line line{number, {}};
    std::size_t pos = 0;
    while (pos < raw.size()) {
      while (pos < raw.size() && std::isspace(static_cast<unsigned char>(raw[pos]))) ++pos;
      if (pos >= raw.size()) break;
      const std::size_t start = pos;
      while (pos < raw.size() && !std::isspace(static_cast<unsigned char>(raw[pos]))) ++pos;
      line.tokens.push_back({raw.substr(start, pos - start), start + 1});
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

class Cursor {
 public:
  explicit Cursor(std::vector<Line> lines) : lines_(std::move(lines)) {}

  bool done() const { return pos_ >= lines_.size(); }
  const Line& peek() const { return lines_[pos_]; }
  const Line& next() {
    if (done()) throw ParseError("unexpected end of file", last_line(), 1);
    return lines_[pos_++];
  }
  std::size_t last_line() const { return lines_.empty() ? 1 : lines_.back().number; }

 private:
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
};

[[noreturn]] void fail(const Line& line, std::size_t token, const std::string& message) {
  const std::size_t col = token < line.tokens.size() ? line.tokens[token].column : 1;
  throw ParseError(message, line.number, col);
}

std::size_t parse_count(const Line& line, std::size_t token) {
  if (token >= line.tokens.size()) fail(line, token, "missing number");
  const auto& t = line.tokens[token].text;
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size()) fail(line, token, "expected a count, got '" + t + "'");
  return value;
}

Complex parse_entry(const Line& line, std::size_t token) {
  try {
    return parse_complex(line.tokens[token].text);
  } catch (const std::invalid_argument& e) {
    fail(line, token, e.what());
  }
}

ComplexVector parse_row(const Line& line, std::size_t first_token, std::size_t expected) {
  if (line.tokens.size() - first_token != expected) {
    fail(line, first_token,
         "expected " + std::to_string(expected) + " entries, found " +
             std::to_string(line.tokens.size() - first_token));
  }
  ComplexVector row;
  row.reserve(expected);
  for (std::size_t t = first_token; t < line.tokens.size(); ++t) row.push_back(parse_entry(line, t));
  return row;
}

ComplexMatrix parse_matrix(Cursor& cur, std::size_t dim) {
  ComplexVector entries;
  entries.reserve(dim * dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const Line& line = cur.next();
    auto row = parse_row(line, 0, dim);
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return ComplexMatrix(dim, dim, std::move(entries));
}

NamedState parse_state(Cursor& cur, const Line& header, std::size_t dim) {
  if (header.tokens.size() != 2) fail(header, 0, "expected 'state <name>'");
  const std::string name = header.tokens[1].text;
  if (cur.done()) fail(header, 1, "state '" + name + "' has no body");
  NamedState state;
  state.name = name;
  if (cur.peek().tokens[0].text == "ket") {
    const Line& line = cur.next();
    ComplexVector ket = parse_row(line, 1, dim);
    double n2 = 0.0;
    for (auto z : ket) n2 += std::norm(z);
    if (std::abs(n2 - 1.0) > 1e-9) {
      throw ValidationError("state '" + name + "' (line " + std::to_string(line.number) +
                            "): ket norm^2 is " + std::to_string(n2));
    }
    state.density = ComplexMatrix::outer(ket);
    state.ket = std::move(ket);
  } else {
    state.density = parse_matrix(cur, dim);
    if (!is_density(state.density)) {
      throw ValidationError("state '" + name + "' (line " + std::to_string(header.number) +
                            ") is not a density operator");
    }
  }
  return state;
}

void add_state(std::vector<NamedState>& states, NamedState s, const Line& header) {
  for (const auto& existing : states)
    if (existing.name == s.name) fail(header, 1, "duplicate state '" + s.name + "'");
  states.push_back(std::move(s));
}

void write_row(std::ostream& out, std::span<const Complex> row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out << ' ';
    out << format_complex(row[i]);
  }
  out << '\n';
}

void write_matrix(std::ostream& out, const ComplexMatrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) write_row(out, m.entries().subspan(r * m.cols(), m.cols()));
}

void write_states(std::ostream& out, const std::vector<NamedState>& states) {
  for (const auto& s : states) {
    out << "state " << s.name << '\n';
    if (s.ket) {
      out << "ket ";
      write_row(out, *s.ket);
    } else {
      write_matrix(out, s.density);
    }
  }
}

std::size_t parse_qubit(const Line& line, std::size_t token) {
  const auto& t = line.tokens[token].text;
  if (t.size() < 2 || (t[0] != 'q' && t[0] != 'Q')) fail(line, token, "expected qubit 'q<i>', got '" + t + "'");
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(t.data() + 1, t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size() || value == 0) {
    fail(line, token, "bad qubit index '" + t + "'");
  }
  return value;
}

}  // namespace

Complex parse_complex(std::string_view text) {
  const std::string original(text);
  if (text.empty()) throw std::invalid_argument("empty complex literal");
  if (text.back() != 'i') {
    double re = 0.0;
    if (!parse_real(text, re)) throw std::invalid_argument("bad complex literal '" + original + "'");
    return {re, 0.0};
  }
  std::string_view body = text.substr(0, text.size() - 1);
  // Split at the last sign that is not leading and not part of an exponent.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  double re = 0.0;
  double im = 0.0;
  std::string_view imag_part = body;
  if (split != std::string_view::npos) {
    if (!parse_real(body.substr(0, split), re)) {
      throw std::invalid_argument("bad complex literal '" + original + "'");
    }
    imag_part = body.substr(split);
  }
  if (!parse_real(imag_part, im)) throw std::invalid_argument("bad complex literal '" + original + "'");
  return {re, im};
}

std::string format_complex(Complex z) {
  auto fmt = [](double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
  };
  const double re = z.real() == 0.0 ? 0.0 : z.real();
  const double im = z.imag() == 0.0 ? 0.0 : z.imag();
  if (im == 0.0) return fmt(re);
  if (re == 0.0) return fmt(im) + "i";
  return fmt(re) + (im < 0 ? "" : "+") + fmt(im) + "i";
}

MachineWithStates parse_machine(std::istream& in) {
  Cursor cur(tokenize(in));
  if (cur.done()) throw ParseError("empty machine file", 1, 1);

  const Line& dims = cur.next();
  if (dims.tokens[0].text != "dims" || dims.tokens.size() != 3) {
    fail(dims, 0, "expected 'dims <d_in> <d_state>' first");
  }
  const std::size_t din = parse_count(dims, 1);
  const std::size_t ds = parse_count(dims, 2);
  if (din == 0 || ds == 0) fail(dims, 1, "dimensions must be >= 1");
  if (din > kMaxFileDimension || ds > kMaxFileDimension / din) {
    fail(dims, 1, "dimension overflow: d_in * d_state exceeds " + std::to_string(kMaxFileDimension));
  }

  std::vector<std::string> outcomes;
  std::optional<ComplexMatrix> unitary;
  std::vector<std::optional<ComplexMatrix>> measures;
  std::vector<NamedState> states;

  while (!cur.done()) {
    const Line& line = cur.next();
    const std::string& kw = line.tokens[0].text;
    if (kw == "outcomes") {
      if (!outcomes.empty()) fail(line, 0, "outcomes declared twice");
      if (line.tokens.size() < 2) fail(line, 0, "outcomes needs at least one label");
      std::set<std::string> seen;
      for (std::size_t t = 1; t < line.tokens.size(); ++t) {
        if (!seen.insert(line.tokens[t].text).second) fail(line, t, "duplicate outcome label");
        outcomes.push_back(line.tokens[t].text);
      }
      measures.assign(outcomes.size(), std::nullopt);
    } else if (kw == "unitary") {
      if (line.tokens.size() != 1) fail(line, 1, "unexpected tokens after 'unitary'");
      if (unitary) fail(line, 0, "unitary declared twice");
      unitary = parse_matrix(cur, din * ds);
    } else if (kw == "measure") {
      if (line.tokens.size() != 2) fail(line, 0, "expected 'measure <label>'");
      if (outcomes.empty()) fail(line, 0, "'measure' before 'outcomes'");
      std::size_t a = 0;
      while (a < outcomes.size() && outcomes[a] != line.tokens[1].text) ++a;
      if (a == outcomes.size()) fail(line, 1, "unknown outcome '" + line.tokens[1].text + "'");
      if (measures[a]) fail(line, 1, "outcome measured twice");
      measures[a] = parse_matrix(cur, din);
    } else if (kw == "state") {
      add_state(states, parse_state(cur, line, ds), line);
    } else {
      fail(line, 0, "unknown keyword '" + kw + "'");
    }
  }

  if (outcomes.empty()) throw ParseError("missing 'outcomes'", cur.last_line(), 1);
  if (!unitary) throw ParseError("missing 'unitary'", cur.last_line(), 1);
  std::vector<ComplexMatrix> ops;
  for (std::size_t a = 0; a < outcomes.size(); ++a) {
    if (!measures[a]) throw ParseError("missing 'measure " + outcomes[a] + "'", cur.last_line(), 1);
    ops.push_back(std::move(*measures[a]));
  }

  QuantumMealyMachine machine(din, ds, std::move(*unitary), std::move(outcomes), std::move(ops));
  require_valid(machine);
  return {std::move(machine), std::move(states)};
}

MachineWithStates parse_machine_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_machine(in);
}

void write_machine(std::ostream& out, const MachineWithStates& model) {
  const auto& m = model.machine;
  out << "dims " << m.input_dim() << ' ' << m.state_dim() << '\n';
  out << "outcomes";
  for (const auto& o : m.outcomes()) out << ' ' << o;
  out << '\n' << "unitary\n";
  write_matrix(out, m.unitary());
  for (std::size_t a = 0; a < m.outcome_count(); ++a) {
    out << "measure " << m.outcomes()[a] << '\n';
    write_matrix(out, m.measurement(a));
  }
  write_states(out, model.states);
}

CircuitWithStates parse_circuit(std::istream& in) {
  Cursor cur(tokenize(in));
  CircuitWithStates model;
  std::optional<std::size_t> inputs;
  std::optional<std::size_t> memory;
  while (!cur.done()) {
    const Line& line = cur.next();
    const std::string& kw = line.tokens[0].text;
    if (kw == "inputs" || kw == "memory") {
      if (line.tokens.size() != 2) fail(line, 0, "expected '" + kw + " <count>'");
      auto& slot = kw == "inputs" ? inputs : memory;
      if (slot) fail(line, 0, kw + " declared twice");
      slot = parse_count(line, 1);
      if (kw == "inputs" && *slot == 0) fail(line, 1, "need at least one input qubit");
      if (*slot > 12) fail(line, 1, "dimension overflow: at most 12 qubits per register");
      continue;
    }
    if (!inputs || !memory) fail(line, 0, "'inputs' and 'memory' must precede the body");
    const std::size_t width = *inputs + *memory;
    if (kw == "state") {
      add_state(model.states, parse_state(cur, line, std::size_t{1} << *memory), line);
    } else if (kw == "gate") {
      if (line.tokens.size() < 3) fail(line, 0, "expected 'gate <name> q<i> ...'");
      std::vector<std::size_t> qubits;
      for (std::size_t t = 2; t < line.tokens.size(); ++t) qubits.push_back(parse_qubit(line, t));
      if (qubits.size() > width) fail(line, 2, "gate has more qubits than the circuit");
      ComplexMatrix u = parse_matrix(cur, std::size_t{1} << qubits.size());
      try {
        model.circuit.body.push_back(make_inline_gate(std::move(u), std::move(qubits), line.tokens[1].text));
      } catch (const ValidationError& e) {
        fail(line, 1, e.what());
      }
    } else if (is_builtin_gate(kw)) {
      std::vector<std::size_t> qubits;
      for (std::size_t t = 1; t < line.tokens.size(); ++t) qubits.push_back(parse_qubit(line, t));
      for (std::size_t t = 0; t < qubits.size(); ++t)
        if (qubits[t] > width) fail(line, t + 1, "qubit outside 1.." + std::to_string(width));
      try {
        model.circuit.body.push_back(make_gate(kw, std::move(qubits)));
      } catch (const std::invalid_argument& e) {
        fail(line, 0, e.what());
      }
    } else {
      fail(line, 0, "unknown gate or keyword '" + kw + "'");
    }
  }
  if (!inputs || !memory) throw ParseError("missing 'inputs' or 'memory'", cur.last_line(), 1);
  model.circuit.inputs = *inputs;
  model.circuit.memory = *memory;
  return model;
}

CircuitWithStates parse_circuit_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_circuit(in);
}

void write_circuit(std::ostream& out, const CircuitWithStates& model) {
  out << "inputs " << model.circuit.inputs << '\n';
  out << "memory " << model.circuit.memory << '\n';
  for (const auto& g : model.circuit.body) {
    const bool builtin = is_builtin_gate(g.name) &&
                         builtin_gate_matrix(g.name, g.qubits.size()) == g.unitary;
    out << (builtin ? g.name : "gate " + g.name);
    for (auto q : g.qubits) out << " q" << q;
    out << '\n';
    if (!builtin) write_matrix(out, g.unitary);
  }
  write_states(out, model.states);
}

MachineWithStates load_model(const std::filesystem::path& path) {
  if (path.extension() == ".qc") {
    auto circuit = parse_circuit_file(path);
    auto machine = sequential_to_mealy(circuit.circuit);
    require_valid(machine);
    return {std::move(machine), std::move(circuit.states)};
  }
  return parse_machine_file(path);
}

}  // namespace qmeq
