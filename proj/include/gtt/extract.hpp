#pragma once

#include <cstdint>
#include <string>

#include "gtt/syntax.hpp"

namespace gtt {

// ---------------------------------------------------------------------------
// Extraction into the untyped target language, and its two evaluators.

enum class Strictness : std::uint8_t { NonStrict, Strict };

// The plain table ignores the first grade on pair/projection/prodrec forms;
// the moded table additionally removes those when that grade is 0.
enum class EraseMode : std::uint8_t { Plain, Moded };

// Total on syntax: soundness guarantees hold only for well-typed,
// well-resourced inputs, but erasing rejected programs is still useful to
// display.  Erased positions (0-graded arguments, type annotations, erased
// matches) become the diverging term under the non-strict discipline and the
// undefined value under the strict one.
// `zero` is the grade value of the instance's zero element: the erased
// positions are exactly those annotated with it (index 0 in every built-in
// instance; lattice instances put it elsewhere, see Modality::zero).
TargetTerm erase(const Term& t, Strictness str, EraseMode mode = EraseMode::Plain,
                 Grade zero = 0);

// Values: lam, pair, zero, suc t, star and the undefined value.  Pairs and
// suc are lazy under both disciplines.
bool target_is_value(const TargetTerm& t);

struct TStepResult {
  enum class Tag : std::uint8_t { Stepped, Value, Stuck };
  Tag tag;
  TargetTerm t;      // Stepped: the successor
  std::string diag;  // Stuck
};

// One deterministic step.  Strict evaluation reduces the argument of an
// application once its head is a value; non-strict substitutes immediately.
TStepResult target_step(const TargetTerm& t, Strictness str);

struct TEvalResult {
  enum class Tag : std::uint8_t { Ok, Stuck, Timeout };
  Tag tag;
  TargetTerm t;  // Ok: the value; otherwise the last term reached
  std::string diag;
  std::uint64_t steps = 0;
};

TEvalResult target_eval(TargetTerm t, Strictness str, std::uint64_t fuel);

struct TNumeralResult {
  enum class Tag : std::uint8_t { Ok, Stuck, Timeout };
  Tag tag;
  std::uint64_t value = 0;  // Ok
  std::string diag;
};

// Evaluate to a numeral.  The non-strict readback keeps evaluating under
// suc; the strict one demands a syntactic numeral after evaluation.
TNumeralResult target_read_numeral(TargetTerm t, Strictness str,
                                   std::uint64_t fuel);

}  // namespace gtt
