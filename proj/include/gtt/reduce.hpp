#pragma once

#include <cstdint>
#include <string>

#include "gtt/syntax.hpp"

namespace gtt {

// ---------------------------------------------------------------------------
// Source-language weak-head reduction.  Reduction is untyped: the typed side
// conditions of the equational theory never influence the redex choice, so
// eliminator/introduction grade annotations are required to agree and any
// other shape is reported as an ill-formed redex instead of being reduced.

enum class WhnfKind : std::uint8_t {
  Lam, Pair, Zero, Suc, Star, TypeFormer, Neutral,
};

struct StepResult {
  enum class Tag : std::uint8_t { Stepped, Whnf, IllFormed };
  Tag tag;
  Term t;                  // Stepped: the (unique) successor
  WhnfKind whnf_kind;      // Whnf
  std::uint32_t head = 0;  // Whnf + Neutral: the blocking variable
  std::string diag;        // IllFormed: what went wrong
};

// One deterministic weak-head step: beta, projections on strong pairs,
// prodrec on weak pairs, natrec on zero/suc, unitrec on the weak star,
// ascription unwrapping, and congruence into head/scrutinee position only.
StepResult whnf_step(const Term& t);

// Step budget for all evaluators: 10^6 unless overridden by GTT_FUEL.
std::uint64_t default_fuel();

struct WhnfResult {
  enum class Tag : std::uint8_t { Ok, Timeout, IllFormed };
  Tag tag;
  Term t;  // Ok: the whnf; otherwise the last term reached
  WhnfKind whnf_kind;      // Ok
  std::uint32_t head = 0;  // Ok + Neutral
  std::string diag;
  std::uint64_t steps = 0;  // steps consumed
};

WhnfResult whnf(Term t, std::uint64_t fuel = default_fuel());

// Reduce to a numeral, continuing under suc.
struct NumeralResult {
  enum class Tag : std::uint8_t { Ok, Stuck, Timeout, IllFormed };
  Tag tag;
  std::uint64_t value = 0;  // Ok
  std::uint32_t head = 0;   // Stuck: the blocking variable
  std::string diag;
};

NumeralResult read_numeral(const Term& t, std::uint64_t fuel = default_fuel());

}  // namespace gtt
