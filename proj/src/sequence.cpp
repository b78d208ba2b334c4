#include "gqcsim/sequence.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>

namespace gqc {

namespace {
constexpr double kPi = std::numbers::pi;
}

ParseError::ParseError(const std::string& message, std::size_t position)
    : Error(message + " (at position " + std::to_string(position) + ")"),
      position_(position) {}

PiRational PiRational::reduced(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error("PiRational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
  return PiRational{num, den};
}

double PiRational::value() const { return static_cast<double>(num) / static_cast<double>(den) * kPi; }

double axis_phase(Axis axis) {
  switch (axis) {
    case Axis::x: return 0.0;
    case Axis::y: return kPi / 2;
    case Axis::minus_x: return kPi;
    case Axis::minus_y: return -kPi / 2;
  }
  throw Error("axis_phase: bad axis");
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size()) {
      const char c = text[pos];
      if (c == '#') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() const { return pos < text.size() ? text[pos] : '\0'; }

  void expect(char c, const char* what) {
    skip_ws();
    if (peek() != c)
      throw ParseError(std::string("expected '") + c + "' " + what, pos);
    ++pos;
  }

  std::string ident() {
    skip_ws();
    const std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    if (pos == start) throw ParseError("expected an identifier", pos);
    return std::string(text.substr(start, pos - start));
  }
};

struct NumberToken {
  double value = 0;
  bool is_integer = false;
  std::int64_t integer = 0;
};

// Scans digits [. digits] [ (e|E) [+-] digits ]; stops before any other
// letter so "2pi" lexes as the number 2 followed by the ident "pi".
NumberToken parse_number(Cursor& c, bool allow_sign) {
  c.skip_ws();
  const std::size_t start = c.pos;
  std::size_t p = c.pos;
  const auto& s = c.text;
  if (allow_sign && p < s.size() && (s[p] == '-' || s[p] == '+')) ++p;
  std::size_t digits_begin = p;
  while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) ++p;
  bool is_int = p > digits_begin;
  if (p < s.size() && s[p] == '.') {
    ++p;
    is_int = false;
    while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) ++p;
  }
  if (p == digits_begin || (!is_int && p == digits_begin + 1))
    throw ParseError("expected a number", start);
  if (p < s.size() && (s[p] == 'e' || s[p] == 'E')) {
    std::size_t q = p + 1;
    if (q < s.size() && (s[q] == '+' || s[q] == '-')) ++q;
    if (q < s.size() && std::isdigit(static_cast<unsigned char>(s[q]))) {
      is_int = false;
      p = q;
      while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) ++p;
    }
  }
  NumberToken tok;
  const char* first = s.data() + start;
  const char* last = s.data() + p;
  if (is_int) {
    const auto res = std::from_chars(first, last, tok.integer);
    if (res.ec != std::errc{} || res.ptr != last)
      throw ParseError("integer literal out of range", start);
    tok.is_integer = true;
    tok.value = static_cast<double>(tok.integer);
  } else {
    const auto res = std::from_chars(first, last, tok.value);
    if (res.ec != std::errc{} || res.ptr != last)
      throw ParseError("malformed number", start);
  }
  c.pos = p;
  return tok;
}

std::int64_t parse_uint(Cursor& c, const char* what) {
  c.skip_ws();
  const std::size_t at = c.pos;
  const NumberToken tok = parse_number(c, false);
  if (!tok.is_integer || tok.integer <= 0)
    throw ParseError(std::string("expected a positive integer ") + what, at);
  return tok.integer;
}

AngleExpr parse_angle(Cursor& c) {
  c.skip_ws();
  const std::size_t at = c.pos;
  bool negated = false;
  if (c.peek() == '-') {
    negated = true;
    ++c.pos;
    c.skip_ws();
  }
  if (std::isalpha(static_cast<unsigned char>(c.peek())) || c.peek() == '_') {
    const std::size_t name_at = c.pos;
    const std::string name = c.ident();
    if (name == "pi") {
      std::int64_t den = 1;
      c.skip_ws();
      if (c.peek() == '/') {
        ++c.pos;
        den = parse_uint(c, "after 'pi/'");
      }
      return PiRational::reduced(negated ? -1 : 1, den);
    }
    if (name == "J")
      throw ParseError("'J' is only valid inside a delay fraction", name_at);
    return SymbolRef{name, negated};
  }
  if (!std::isdigit(static_cast<unsigned char>(c.peek())) && c.peek() != '.')
    throw ParseError("malformed angle expression", at);
  const NumberToken tok = parse_number(c, false);
  c.skip_ws();
  // <int>pi or <int>pi/<int>
  if (std::isalpha(static_cast<unsigned char>(c.peek()))) {
    const std::size_t suffix_at = c.pos;
    const std::string suffix = c.ident();
    if (suffix != "pi")
      throw ParseError("unexpected suffix '" + suffix + "' in angle", suffix_at);
    if (!tok.is_integer)
      throw ParseError("pi coefficient must be an integer", at);
    std::int64_t den = 1;
    c.skip_ws();
    if (c.peek() == '/') {
      ++c.pos;
      den = parse_uint(c, "after 'pi/'");
    }
    return PiRational::reduced(negated ? -tok.integer : tok.integer, den);
  }
  // plain rational radians: <int>/<int>
  if (tok.is_integer && c.peek() == '/') {
    ++c.pos;
    const std::int64_t den = parse_uint(c, "in rational angle");
    const double v = static_cast<double>(tok.integer) / static_cast<double>(den);
    return negated ? -v : v;
  }
  // the bare "0" spelling belongs to the rational-pi form
  if (tok.is_integer && tok.integer == 0) return PiRational{0, 1};
  return negated ? -tok.value : tok.value;
}

Spin parse_spin(Cursor& c) {
  c.skip_ws();
  const std::size_t at = c.pos;
  const std::string name = c.ident();
  if (name == "a") return Spin::a;
  if (name == "b") return Spin::b;
  throw ParseError("unknown spin label '" + name + "'", at);
}

PulseItem parse_pulse(Cursor& c) {
  // cursor sits just past 'R'
  const std::size_t axis_at = c.pos;
  std::string axis_name;
  while (std::isalpha(static_cast<unsigned char>(c.peek())) && c.peek() != '(')
    axis_name += c.text[c.pos++];
  Axis axis;
  if (axis_name == "x") axis = Axis::x;
  else if (axis_name == "y") axis = Axis::y;
  else if (axis_name == "mx") axis = Axis::minus_x;
  else if (axis_name == "my") axis = Axis::minus_y;
  else throw ParseError("unknown pulse axis '" + axis_name + "'", axis_at);
  c.expect('(', "after pulse axis");
  const Spin spin = parse_spin(c);
  c.expect(',', "between spin and angle");
  AngleExpr angle = parse_angle(c);
  c.expect(')', "to close the pulse");
  return PulseItem{spin, axis, std::move(angle)};
}

DelayItem parse_delay(Cursor& c) {
  // cursor sits just past 'd'
  c.expect('(', "after 'd'");
  c.skip_ws();
  const std::size_t at = c.pos;
  if (std::isalpha(static_cast<unsigned char>(c.peek()))) {
    const std::string kw = c.ident();
    if (kw != "zrot")
      throw ParseError("unknown delay form '" + kw + "'", at);
    c.expect(':', "after 'zrot'");
    AngleExpr angle = parse_angle(c);
    c.expect(')', "to close the delay");
    return DelayItem{ZRotDelay{std::move(angle)}};
  }
  bool negated = false;
  if (c.peek() == '-') {
    negated = true;
    ++c.pos;
  }
  const NumberToken tok = parse_number(c, false);
  c.skip_ws();
  if (c.peek() == '/') {
    ++c.pos;
    c.expect('(', "in delay J-fraction");
    const std::int64_t den = parse_uint(c, "in delay J-fraction");
    c.skip_ws();
    const std::size_t j_at = c.pos;
    if (c.ident() != "J")
      throw ParseError("expected 'J' in delay fraction", j_at);
    c.expect(')', "in delay J-fraction");
    c.expect(')', "to close the delay");
    if (!tok.is_integer)
      throw ParseError("delay J-fraction numerator must be an integer", at);
    return DelayItem{JFraction{negated ? -tok.integer : tok.integer, den}};
  }
  if (c.peek() == 's') {
    ++c.pos;
    c.expect(')', "to close the delay");
    return DelayItem{SecondsDelay{negated ? -tok.value : tok.value}};
  }
  throw ParseError("delay must be a J-fraction, 'zrot:<angle>', or '<seconds>s'", at);
}

SequenceItem parse_item(Cursor& c) {
  c.skip_ws();
  const std::size_t at = c.pos;
  const char first = c.peek();
  if (first == 'G') {
    const std::string name = c.ident();
    if (name != "Gz") throw ParseError("unknown item '" + name + "'", at);
    return CrusherItem{};
  }
  if (first == 'd' &&
      (c.pos + 1 >= c.text.size() || !std::isalnum(static_cast<unsigned char>(c.text[c.pos + 1])))) {
    ++c.pos;
    return parse_delay(c);
  }
  if (first == 'R') {
    ++c.pos;
    return parse_pulse(c);
  }
  throw ParseError("expected a pulse, delay, or crusher", at);
}

}  // namespace

SequenceAST parse_sequence(std::string_view text) {
  Cursor c{text};
  SequenceAST ast;
  if (c.at_end()) return ast;
  ast.items.push_back(parse_item(c));
  while (!c.at_end()) {
    const char sep = c.peek();
    if (sep != '-' && sep != ';')
      throw ParseError("expected '-' or ';' between items", c.pos);
    ++c.pos;
    ast.items.push_back(parse_item(c));
  }
  return ast;
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string out(buf, res.ptr);
  // keep literals textually distinct from integer/rational-pi spellings
  if (out.find_first_of(".eE") == std::string::npos) out += ".0";
  return out;
}

std::string format_angle(const AngleExpr& angle) {
  if (const auto* r = std::get_if<PiRational>(&angle)) {
    if (r->num == 0) return "0";
    std::string coef;
    if (r->num == 1) coef = "pi";
    else if (r->num == -1) coef = "-pi";
    else coef = std::to_string(r->num) + "pi";
    if (r->den == 1) return coef;
    return coef + "/" + std::to_string(r->den);
  }
  if (const auto* v = std::get_if<double>(&angle)) return format_double(*v);
  const auto& sym = std::get<SymbolRef>(angle);
  return (sym.negated ? "-" : "") + sym.name;
}

std::string format_item(const SequenceItem& item) {
  if (const auto* p = std::get_if<PulseItem>(&item)) {
    const char* axis = nullptr;
    switch (p->axis) {
      case Axis::x: axis = "x"; break;
      case Axis::y: axis = "y"; break;
      case Axis::minus_x: axis = "mx"; break;
      case Axis::minus_y: axis = "my"; break;
    }
    return std::string("R") + axis + "(" + spin_name(p->spin) + "," + format_angle(p->angle) + ")";
  }
  if (const auto* d = std::get_if<DelayItem>(&item)) {
    if (const auto* f = std::get_if<JFraction>(&d->spec))
      return "d(" + std::to_string(f->num) + "/(" + std::to_string(f->den) + "J))";
    if (const auto* z = std::get_if<ZRotDelay>(&d->spec))
      return "d(zrot:" + format_angle(z->angle) + ")";
    return "d(" + format_double(std::get<SecondsDelay>(d->spec).seconds) + "s)";
  }
  return "Gz";
}

}  // namespace

std::string pretty_print(const SequenceAST& ast) {
  std::string out;
  for (std::size_t i = 0; i < ast.items.size(); ++i) {
    if (i > 0) out += " - ";
    out += format_item(ast.items[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Compiler
// ---------------------------------------------------------------------------

double resolve_angle(const AngleExpr& angle, const Bindings& bindings) {
  if (const auto* r = std::get_if<PiRational>(&angle)) return r->value();
  if (const auto* v = std::get_if<double>(&angle)) return *v;
  const auto& sym = std::get<SymbolRef>(angle);
  const auto it = bindings.find(sym.name);
  if (it == bindings.end()) throw Error("compile: unbound symbol '" + sym.name + "'");
  return sym.negated ? -it->second : it->second;
}

CompiledProgram compile_sequence(const SequenceAST& ast, const SpinSystem& sys,
                                 const FrameSpec& frame, const Bindings& bindings) {
  CompiledProgram prog;
  prog.frame = frame;
  prog.events.reserve(ast.items.size());
  for (std::size_t i = 0; i < ast.items.size(); ++i) {
    const auto& item = ast.items[i];
    if (const auto* p = std::get_if<PulseItem>(&item)) {
      const HardPulse pulse{p->spin, axis_phase(p->axis), resolve_angle(p->angle, bindings)};
      try {
        validate(PulseEvent{pulse});
      } catch (const Error& e) {
        throw Error("compile: item " + std::to_string(i + 1) + ": " + e.what());
      }
      prog.events.emplace_back(pulse);
    } else if (const auto* d = std::get_if<DelayItem>(&item)) {
      double duration = 0;
      if (const auto* f = std::get_if<JFraction>(&d->spec))
        duration = static_cast<double>(f->num) / (static_cast<double>(f->den) * sys.j_coupling);
      else if (const auto* z = std::get_if<ZRotDelay>(&d->spec))
        duration = resolve_angle(z->angle, bindings) / (2 * kPi * sys.j_coupling);
      else
        duration = std::get<SecondsDelay>(d->spec).seconds;
      if (duration < 0)
        throw Error("compile: item " + std::to_string(i + 1) + ": negative resolved duration");
      prog.events.emplace_back(Delay{duration});
      prog.total_duration += duration;
    } else {
      prog.events.emplace_back(GradientCrusher{});
    }
  }
  return prog;
}

Operator net_unitary(const CompiledProgram& prog, const SpinSystem& sys) {
  const Mat h = frame_hamiltonian(sys, prog.frame).matrix();
  Mat u = Mat::Identity(4, 4);
  const NoiseConfig no_noise{};
  for (const auto& event : prog.events) {
    if (const auto* pulse = std::get_if<HardPulse>(&event))
      u = pulse_matrix(*pulse, no_noise, 4) * u;
    else if (const auto* delay = std::get_if<Delay>(&event))
      u = propagator(h, delay->duration) * u;
    else
      throw Error("net_unitary: program contains a crusher; run it on a density operator");
  }
  return Operator::unitary(std::move(u));
}

StateVector execute(const StateVector& psi, const CompiledProgram& prog, const SpinSystem& sys,
                    const NoiseConfig& noise) {
  const Operator h = frame_hamiltonian(sys, prog.frame);
  StateVector state = psi;
  for (const auto& event : prog.events) {
    if (const auto* pulse = std::get_if<HardPulse>(&event))
      state = apply_hard_pulse(state, *pulse, noise);
    else if (const auto* delay = std::get_if<Delay>(&event))
      state = apply_delay(state, delay->duration, h, sys, noise);
    else
      throw Error("execute: crusher requires a density operator");
  }
  return state;
}

DensityOperator execute(const DensityOperator& rho, const CompiledProgram& prog,
                        const SpinSystem& sys, const NoiseConfig& noise) {
  const Operator h = frame_hamiltonian(sys, prog.frame);
  DensityOperator state = rho;
  for (const auto& event : prog.events) {
    if (const auto* pulse = std::get_if<HardPulse>(&event))
      state = apply_hard_pulse(state, *pulse, noise);
    else if (const auto* delay = std::get_if<Delay>(&event))
      state = apply_delay(state, delay->duration, h, sys, noise);
    else
      state = apply_crusher(state);
  }
  return state;
}

}  // namespace gqc
