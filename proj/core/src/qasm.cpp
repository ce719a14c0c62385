#include "qbench/qasm.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <vector>

#include "qbench/error.hpp"

namespace qbench {

namespace {

enum class Tok { Ident, Number, String, Symbol, Arrow, End };

struct Token {
  Tok type = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        t.type = Tok::End;
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.type = Tok::Ident;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          t.text += take();
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && pos_ + 1 < src_.size() &&
                  std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        t.type = Tok::Number;
        while (pos_ < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
          t.text += take();
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
          t.text += take();
          if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) t.text += take();
          while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
            t.text += take();
        }
      } else if (c == '"') {
        t.type = Tok::String;
        take();
        while (pos_ < src_.size() && src_[pos_] != '"') t.text += take();
        if (pos_ >= src_.size()) throw ParseError("unterminated string", t.line, t.column);
        take();
      } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
        t.type = Tok::Arrow;
        t.text = "->";
        take();
        take();
      } else if (std::string_view("[](),;+-*/").find(c) != std::string_view::npos) {
        t.type = Tok::Symbol;
        t.text = std::string(1, take());
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.column);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char take() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        take();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') take();
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

struct Operand {
  std::string reg;
  std::optional<int> index;  // nullopt: whole register
  Token where;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Circuit run() {
    if (peek().type == Tok::Ident && peek().text == "OPENQASM") {
      next();
      const Token& v = expect(Tok::Number, "version number");
      if (v.text != "2.0" && v.text != "2") fail("only OpenQASM 2.0 is supported", v);
      expect_symbol(";");
    }
    while (peek().type != Tok::End) statement();
    if (!circuit_) circuit_ = qreg_.empty() ? Circuit(0) : Circuit(qsize_, creg_.empty() ? qsize_ : csize_);
    return std::move(*circuit_);
  }

 private:
  [[noreturn]] void fail(const std::string& msg, const Token& at) {
    throw ParseError(msg, at.line, at.column);
  }

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  const Token& expect(Tok type, const std::string& what) {
    const Token& t = peek();
    if (t.type != type) fail("expected " + what, t);
    return next();
  }

  void expect_symbol(const std::string& s) {
    const Token& t = peek();
    if (t.type != Tok::Symbol || t.text != s) fail("expected '" + s + "'", t);
    next();
  }

  bool accept_symbol(const std::string& s) {
    if (peek().type == Tok::Symbol && peek().text == s) {
      next();
      return true;
    }
    return false;
  }

  int parse_int(const Token& t) {
    int v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || p != t.text.data() + t.text.size()) fail("expected an integer", t);
    return v;
  }

  void statement() {
    const Token head = peek();
    if (head.type != Tok::Ident) fail("expected a statement", head);
    next();
    const std::string& kw = head.text;
    if (kw == "include") {
      expect(Tok::String, "include file name");
      expect_symbol(";");
    } else if (kw == "qreg" || kw == "creg") {
      declare(kw == "qreg", head);
    } else if (kw == "measure") {
      Operand q = operand();
      if (peek().type != Tok::Arrow) fail("expected '->'", peek());
      next();
      Operand c = operand();
      expect_symbol(";");
      measure(q, c);
    } else if (kw == "barrier") {
      std::vector<Operand> ops = operand_list();
      expect_symbol(";");
      std::vector<int> qs;
      for (const auto& op : ops)
        for (int q : expand(op)) qs.push_back(q);
      add(gates::barrier(qs), head);
    } else {
      gate_statement(head);
    }
  }

  void declare(bool quantum, const Token& head) {
    const Token name = expect(Tok::Ident, "register name");
    expect_symbol("[");
    int size = parse_int(expect(Tok::Number, "register size"));
    expect_symbol("]");
    expect_symbol(";");
    if (size < 0) fail("register size must be nonnegative", name);
    if (quantum) {
      if (!qreg_.empty()) fail("only one qreg is supported", head);
      qreg_ = name.text;
      qsize_ = size;
    } else {
      if (!creg_.empty()) fail("only one creg is supported", head);
      creg_ = name.text;
      csize_ = size;
    }
    if (!qreg_.empty() && !creg_.empty() && qsize_ != csize_)
      fail("register size mismatch: qreg " + qreg_ + "[" + std::to_string(qsize_) + "] vs creg " +
               creg_ + "[" + std::to_string(csize_) + "]",
           head);
  }

  Operand operand() {
    Operand op;
    op.where = peek();
    op.reg = expect(Tok::Ident, "register operand").text;
    if (accept_symbol("[")) {
      const Token& idx = expect(Tok::Number, "index");
      op.index = parse_int(idx);
      expect_symbol("]");
    }
    return op;
  }

  std::vector<Operand> operand_list() {
    std::vector<Operand> ops{operand()};
    while (accept_symbol(",")) ops.push_back(operand());
    return ops;
  }

  std::vector<int> expand(const Operand& op) {
    if (qreg_.empty()) fail("no qreg declared", op.where);
    if (op.reg != qreg_) fail("unknown quantum register '" + op.reg + "'", op.where);
    if (!op.index) {
      std::vector<int> all(static_cast<std::size_t>(qsize_));
      for (int i = 0; i < qsize_; ++i) all[i] = i;
      return all;
    }
    if (*op.index < 0 || *op.index >= qsize_)
      fail("register bounds: " + op.reg + "[" + std::to_string(*op.index) + "] outside size " +
               std::to_string(qsize_),
           op.where);
    return {*op.index};
  }

  void measure(const Operand& q, const Operand& c) {
    if (creg_.empty()) fail("measure requires a creg", c.where);
    if (c.reg != creg_) fail("unknown classical register '" + c.reg + "'", c.where);
    std::vector<int> qs = expand(q);
    if (!c.index) {
      if (q.index) fail("register size mismatch in measure", c.where);
      for (int i : qs) add(gates::measure(i, i), q.where);
      return;
    }
    if (*c.index < 0 || *c.index >= csize_)
      fail("register bounds: " + c.reg + "[" + std::to_string(*c.index) + "] outside size " +
               std::to_string(csize_),
           c.where);
    if (qs.size() != 1) fail("register size mismatch in measure", c.where);
    add(gates::measure(qs[0], *c.index), q.where);
  }

  // Arithmetic over numbers and pi with the usual precedence.
  double expr() {
    double v = term();
    for (;;) {
      if (accept_symbol("+")) {
        v += term();
      } else if (accept_symbol("-")) {
        v -= term();
      } else {
        return v;
      }
    }
  }

  double term() {
    double v = factor();
    for (;;) {
      if (accept_symbol("*")) {
        v *= factor();
      } else if (peek().type == Tok::Symbol && peek().text == "/") {
        const Token at = next();
        double d = factor();
        if (d == 0.0) fail("division by zero", at);
        v /= d;
      } else {
        return v;
      }
    }
  }

  double factor() {
    const Token t = peek();
    if (accept_symbol("-")) return -factor();
    if (accept_symbol("+")) return factor();
    if (accept_symbol("(")) {
      double v = expr();
      expect_symbol(")");
      return v;
    }
    if (t.type == Tok::Number) {
      next();
      double v = 0;
      auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec != std::errc() || p != t.text.data() + t.text.size()) fail("malformed number", t);
      return v;
    }
    if (t.type == Tok::Ident && t.text == "pi") {
      next();
      return kPi;
    }
    fail("expected an angle expression", t);
  }

  void gate_statement(const Token& head) {
    static const std::vector<std::pair<std::string, GateKind>> table = {
        {"h", GateKind::H},     {"x", GateKind::X},     {"y", GateKind::Y},
        {"z", GateKind::Z},     {"s", GateKind::S},     {"sdg", GateKind::Sdg},
        {"t", GateKind::T},     {"tdg", GateKind::Tdg}, {"rx", GateKind::Rx},
        {"ry", GateKind::Ry},   {"rz", GateKind::Rz},   {"cx", GateKind::CX},
        {"CX", GateKind::CX},   {"cz", GateKind::CZ},   {"swap", GateKind::SWAP},
    };
    std::optional<GateKind> kind;
    for (const auto& [name, k] : table)
      if (name == head.text) kind = k;
    if (!kind) fail("unsupported gate '" + head.text + "'", head);

    double angle = 0.0;
    if (is_parameterized(*kind)) {
      expect_symbol("(");
      angle = expr();
      expect_symbol(")");
      if (!std::isfinite(angle)) fail("angle is not finite", head);
    } else if (peek().type == Tok::Symbol && peek().text == "(") {
      fail("gate '" + head.text + "' takes no parameters", peek());
    }

    std::vector<Operand> ops = operand_list();
    expect_symbol(";");
    const int arity = *gate_arity(*kind);
    if (static_cast<int>(ops.size()) != arity)
      fail("gate '" + head.text + "' expects " + std::to_string(arity) + " operand(s)", head);

    // Register broadcast: whole-register operands apply elementwise.
    std::vector<std::vector<int>> expanded;
    std::size_t width = 1;
    for (const auto& op : ops) {
      expanded.push_back(expand(op));
      if (!op.index) width = expanded.back().size();
    }
    for (const auto& e : expanded)
      if (e.size() != 1 && e.size() != width) fail("register size mismatch in broadcast", head);
    for (std::size_t i = 0; i < width; ++i) {
      Gate g;
      g.kind = *kind;
      g.angle = angle;
      for (const auto& e : expanded) g.targets.push_back(e.size() == 1 ? e[0] : e[i]);
      if (arity == 2 && g.targets[0] == g.targets[1])
        fail("gate '" + head.text + "' repeats a qubit", head);
      add(g, head);
    }
  }

  void add(const Gate& g, const Token& where) {
    if (!circuit_) {
      if (qreg_.empty()) fail("no qreg declared", where);
      circuit_ = Circuit(qsize_, creg_.empty() ? qsize_ : csize_);
    }
    try {
      circuit_->append(g);
    } catch (const PreconditionError& e) {
      fail(e.what(), where);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::string qreg_, creg_;
  int qsize_ = 0, csize_ = 0;
  std::optional<Circuit> circuit_;
};

std::string format_angle(double a) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", a);
  return buf;
}

std::string lower_name(GateKind k) {
  switch (k) {
    case GateKind::H: return "h";
    case GateKind::X: return "x";
    case GateKind::Y: return "y";
    case GateKind::Z: return "z";
    case GateKind::S: return "s";
    case GateKind::Sdg: return "sdg";
    case GateKind::T: return "t";
    case GateKind::Tdg: return "tdg";
    case GateKind::Rx: return "rx";
    case GateKind::Ry: return "ry";
    case GateKind::Rz: return "rz";
    case GateKind::CX: return "cx";
    case GateKind::CZ: return "cz";
    case GateKind::SWAP: return "swap";
    default: throw UnsupportedError(std::string(gate_name(k)) + " has no OpenQASM 2.0 form");
  }
}

}  // namespace

Circuit parse_qasm(std::string_view text) {
  Parser p(Lexer(text).run());
  return p.run();
}

std::string emit_qasm(const Circuit& c) {
  std::ostringstream os;
  os << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
  if (c.n_qubits() > 0) {
    if (c.n_clbits() != c.n_qubits())
      throw UnsupportedError("qreg and creg sizes must match in the OpenQASM subset");
    os << "qreg q[" << c.n_qubits() << "];\n";
    os << "creg c[" << c.n_clbits() << "];\n";
  }
  auto q = [](int i) { return "q[" + std::to_string(i) + "]"; };
  for (const auto& layer : c.layers()) {
    for (const auto& g : layer) {
      switch (g.kind) {
        case GateKind::U2Q:
          throw UnsupportedError("U2Q cannot be expressed in the OpenQASM subset");
        case GateKind::Measure:
          os << "measure " << q(g.targets[0]) << " -> c[" << g.cbit << "];\n";
          break;
        case GateKind::Barrier: {
          os << "barrier ";
          for (std::size_t i = 0; i < g.targets.size(); ++i) os << (i ? "," : "") << q(g.targets[i]);
          os << ";\n";
          break;
        }
        case GateKind::PauliLayer:
          for (std::size_t i = 0; i < g.targets.size(); ++i) {
            char l = g.paulis[i];
            if (l == 'I') continue;
            os << static_cast<char>(std::tolower(l)) << ' ' << q(g.targets[i]) << ";\n";
          }
          break;
        default: {
          os << lower_name(g.kind);
          if (is_parameterized(g.kind)) os << '(' << format_angle(g.angle) << ')';
          os << ' ';
          for (std::size_t i = 0; i < g.targets.size(); ++i) os << (i ? "," : "") << q(g.targets[i]);
          os << ";\n";
        }
      }
    }
  }
  return os.str();
}

}  // namespace qbench
