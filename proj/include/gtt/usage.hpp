#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gtt/grades.hpp"
#include "gtt/syntax.hpp"

namespace gtt {

// ---------------------------------------------------------------------------
// Grade assignment: the plain usage relation, the moded usage relation, usage
// inference (returning principal contexts) and substitution matrices.

// Modes: the zero mode demands nothing of the context; the one mode is the
// ordinary counting mode.  The one-mode structure is Mode::One everywhere.
enum class Mode : std::uint8_t { Zero, One };

// The grade of a mode: 0 or 1.
Grade mode_grade(const Modality& m, Mode md);
// m·p: stays the one mode only while both factors are non-zero.  `zero` is
// the instance's zero element (index 0 in the built-ins, elsewhere in
// lattice instances).
Mode mode_mul(Mode md, Grade p, Grade zero = 0);
const char* mode_name(Mode md);

// Side-condition toggles for the graded eliminators.  `zero` must be the
// instance's zero element; the usage engine stamps it from its modality.
struct Restrictions {
  bool erased_matches = true;  // false forbids prodrec/unitrec at grade 0
  bool emptyrec_zero = true;   // false forbids emptyrec at grade 0
  Grade zero = 0;

  bool prodrec_allowed(Grade r) const { return erased_matches || r != zero; }
  bool unitrec_allowed(Grade p) const { return erased_matches || p != zero; }
  bool emptyrec_allowed(Grade p) const { return emptyrec_zero || p != zero; }
};

struct UsageError : std::runtime_error {
  enum class Kind : std::uint8_t {
    VarOverUse,             // context demands more of a variable than the term uses
    Subsumption,            // an annotation exceeds what a subterm affords
    Restriction,            // a side-condition predicate rejects an eliminator
    StarStrongNotInferable, // the strong star has no principal context here
  };
  Kind kind;
  std::vector<std::uint32_t> path;  // child indices from the root
  std::uint32_t line = 0, col = 0;
  std::uint32_t index = 0;          // VarOverUse: the offending variable
  Grade have = 0, bound = 0;        // grades involved, when meaningful

  UsageError(Kind k, std::string msg) : std::runtime_error(std::move(msg)), kind(k) {}
};

const char* usage_error_kind_name(UsageError::Kind k);

// Principal usage context of t (plain rules); throws UsageError when a side
// condition fails or no principal context exists.
UsageCtx infer_usage_plain(const Modality& m, const Restrictions& rs,
                           const Term& t);
// gamma |> t: gamma is pointwise below the principal context.  A strong star
// at the root accepts any context even when inference has no principal one.
void check_usage_plain(const Modality& m, const Restrictions& rs,
                       const UsageCtx& gamma, const Term& t);

// The moded relation: variables count only in the one mode, motives are
// processed in the zero mode, eliminator arguments shift mode by their grade.
UsageCtx infer_usage_moded(const Modality& m, const Restrictions& rs, Mode md,
                           const Term& t);
void check_usage_moded(const Modality& m, const Restrictions& rs,
                       const UsageCtx& gamma, Mode md, const Term& t);

// Rows are the plain principal contexts of the substitution's entries.
SubstMatrix infer_subst_matrix(const Modality& m, const Restrictions& rs,
                               const Subst& s);

}  // namespace gtt
