#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gtt/reduce.hpp"
#include "gtt/syntax.hpp"

namespace gtt {

// ---------------------------------------------------------------------------
// Bidirectional type checking with whnf-directed conversion and type-directed
// eta laws for functions, strong pairs and the strong unit.

struct TypeError : std::runtime_error {
  enum class Kind : std::uint8_t {
    Mismatch,
    NotAFunction,
    NotAPair,
    IllegalProjection,
    Universe,
    Unbound,
    GradeAnnotationMismatch,
    RestrictionViolation,
    FuelExhausted,
  };
  Kind kind;
  std::uint32_t line = 0, col = 0;  // source span of the offending node
  Term expected, actual;            // may be empty

  TypeError(Kind k, const Term& at, const std::string& msg, Term want = {},
            Term got = {});
};

const char* type_error_kind_name(TypeError::Kind k);

// Snoc context of types; back() is the type of variable 0, expressed in the
// scope before its own binder (so variable i has type wk^(i+1) of entry i).
using TypingCtx = std::vector<Term>;

// Type of variable i, weakened into the full scope of the context.
Term ctx_lookup(const TypingCtx& ctx, const Term& at, std::uint32_t i);

struct CheckConfig {
  bool pi_sigma_equal_grades = false;  // restrict Pi/Sigma to p == q
  std::uint64_t fuel = 0;              // 0: use default_fuel()
};

class Checker {
 public:
  explicit Checker(CheckConfig cfg = {});

  // A is a well-formed type over ctx.
  void check_type(TypingCtx& ctx, const Term& A) const;
  // Synthesize the type of an inferable term.
  Term infer_type(TypingCtx& ctx, const Term& t) const;
  // Check t against the type A (callers guarantee A well-formed).
  void check_term(TypingCtx& ctx, const Term& t, const Term& A) const;
  // Algorithmic equality of types / of terms at a common type.
  void conv_type(TypingCtx& ctx, const Term& A, const Term& B) const;
  void conv_term(TypingCtx& ctx, const Term& t, const Term& u,
                 const Term& A) const;

  std::uint64_t fuel() const { return fuel_; }

 private:
  Term whnf_or_throw(const Term& t) const;
  Term conv_ne(TypingCtx& ctx, const Term& t, const Term& u) const;
  void require_pi_sigma_allowed(const Term& at) const;

  CheckConfig cfg_;
  std::uint64_t fuel_;
};

}  // namespace gtt
