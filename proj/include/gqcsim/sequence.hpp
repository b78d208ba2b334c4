#pragma once

// Pulse-sequence notation: parser, canonical printer, and compiler to an
// executable event program under a declared rotating frame.
//
// Sequence text is a list of items separated by "-" or ";":
//   Rx(b,pi/3) - Gz - Rx(b,pi/4) - d(1/(2J)) - Rmy(b,pi/4) - Gz
// Items:
//   R<axis>(<spin>,<angle>)  hard pulse, axis one of x, y, mx, my
//   d(<spec>)                delay: J-fraction "1/(8J)", target rotation
//                            "zrot:theta", or literal seconds "2.5e-3s"
//   Gz                       gradient crusher
// Angles are signed rational multiples of pi ("pi/2", "3pi/2", "-pi"),
// plain numbers in radians, or symbols bound at compile time.

#include "gqcsim/spin_system.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gqc {

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Reduced rational multiple of pi: value = num/den * pi, den > 0.
struct PiRational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  static PiRational reduced(std::int64_t num, std::int64_t den);
  double value() const;
  bool operator==(const PiRational&) const = default;
};

struct SymbolRef {
  std::string name;
  bool negated = false;
  bool operator==(const SymbolRef&) const = default;
};

using AngleExpr = std::variant<PiRational, double, SymbolRef>;

enum class Axis { x, y, minus_x, minus_y };

double axis_phase(Axis axis);

struct PulseItem {
  Spin spin;
  Axis axis;
  AngleExpr angle;
  bool operator==(const PulseItem&) const = default;
};

/// Delay lasting num/(den*J) seconds.
struct JFraction {
  std::int64_t num = 1;
  std::int64_t den = 1;
  bool operator==(const JFraction&) const = default;
};

/// Delay sized so the conditional generator 2*pi*J*Iz produces exactly the
/// given z-rotation on the active branch: duration = angle / (2*pi*J).
struct ZRotDelay {
  AngleExpr angle;
  bool operator==(const ZRotDelay&) const = default;
};

struct SecondsDelay {
  double seconds = 0;
  bool operator==(const SecondsDelay&) const = default;
};

using DelaySpec = std::variant<JFraction, ZRotDelay, SecondsDelay>;

struct DelayItem {
  DelaySpec spec;
  bool operator==(const DelayItem&) const = default;
};

struct CrusherItem {
  bool operator==(const CrusherItem&) const = default;
};

using SequenceItem = std::variant<PulseItem, DelayItem, CrusherItem>;

struct SequenceAST {
  std::vector<SequenceItem> items;
  bool operator==(const SequenceAST&) const = default;
};

/// Parses sequence text (whitespace-insensitive, "#" starts a line comment).
/// Throws ParseError with the offending character position.
SequenceAST parse_sequence(std::string_view text);

/// Canonical text form; parse(pretty_print(ast)) is structurally equal to ast.
std::string pretty_print(const SequenceAST& ast);

using Bindings = std::map<std::string, double>;

struct CompiledProgram {
  std::vector<PulseEvent> events;
  FrameSpec frame{};
  double total_duration = 0;  // sum of delay durations, s
};

/// Resolves angles and durations; every free symbol must be bound and every
/// resolved duration must be non-negative.
CompiledProgram compile_sequence(const SequenceAST& ast, const SpinSystem& sys,
                                 const FrameSpec& frame, const Bindings& bindings = {});

double resolve_angle(const AngleExpr& angle, const Bindings& bindings);

/// Ordered product of the event propagators (noise disabled). Refuses
/// programs containing a crusher; those must run on a density operator.
Operator net_unitary(const CompiledProgram& prog, const SpinSystem& sys);

/// Runs a program on a two-spin pure state (no crushers, no dephasing).
StateVector execute(const StateVector& psi, const CompiledProgram& prog, const SpinSystem& sys,
                    const NoiseConfig& noise = {});

/// Runs a program on a two-spin density operator; supports crushers and
/// dephasing.
DensityOperator execute(const DensityOperator& rho, const CompiledProgram& prog,
                        const SpinSystem& sys, const NoiseConfig& noise = {});

}  // namespace gqc
