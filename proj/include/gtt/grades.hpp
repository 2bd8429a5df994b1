#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace gtt {

// A grade is an index into the carrier of the active modality structure.
using Grade = std::uint8_t;

// Modality structure (M, +, ., /\, nr, 0, 1): an ordered semiring whose
// order is derived from the meet semilattice (p <= q iff p /\ q == p),
// together with a natrec-usage function nr.  All operations are finite
// tables; nr is tabulated over (p, r, qz, qs, qn).
struct Modality {
  std::string id;          // construction name, e.g. "erasure", "lattice:..."
  std::string nr_variant;  // "default" or an alternate lawful table ("bad")
  std::vector<std::string> names;
  Grade zero = 0;
  Grade one = 0;
  std::vector<Grade> add_t, mul_t, meet_t;  // n*n, row-major [a*n+b]
  std::vector<Grade> nr_t;                  // n^5, [(((p*n+r)*n+z)*n+s)*n+q]

  // Derived at construction, never asserted.
  bool well_behaved_zero = false;
  bool zero_is_greatest = false;
  std::vector<char> div_ok;   // per divisor q: division by q supported
  std::vector<Grade> div_t;   // n*n, [q*n+p] = p/q, valid iff div_ok[q]

  std::size_t size() const { return names.size(); }
  Grade add(Grade a, Grade b) const { return add_t[a * size() + b]; }
  Grade mul(Grade a, Grade b) const { return mul_t[a * size() + b]; }
  Grade meet(Grade a, Grade b) const { return meet_t[a * size() + b]; }
  bool leq(Grade a, Grade b) const { return meet(a, b) == a; }
  Grade nr(Grade p, Grade r, Grade qz, Grade qs, Grade qn) const {
    std::size_t n = size();
    return nr_t[(((p * n + r) * n + qz) * n + qs) * n + qn];
  }
  const std::string& show(Grade g) const { return names[g]; }
  // Carrier name, with "0"/"1" accepted as aliases for zero/one so grade
  // literals in source files stay portable across instances.
  std::optional<Grade> grade_of(const std::string& s) const;
};

// Builders.  Throw std::runtime_error on malformed input.
// Known names: erasure, affine, linear, linear-or-affine, trivial,
// lattice:<spec-file-path>.
Modality make_instance(const std::string& name);
// Bounded distributive lattice from a spec text (lines: elem/bot/top/cover).
Modality make_lattice(const std::string& text, const std::string& id);
// Selects an nr table by name ("default", for linear also "bad").
// Returns false if the variant is unknown for this instance.
bool set_nr_variant(Modality& m, const std::string& variant);

struct LawCheck {
  std::string law;
  bool pass = false;
  std::string witness;  // first counterexample, empty when pass
};
using LawReport = std::vector<LawCheck>;

// Exhaustive checks of the modality axioms (semiring, semilattice,
// distribution over meet, and the five nr laws).
LawReport check_laws(const Modality& m);
// Exhaustive checks of the well-behaved-zero conditions.
LawReport check_well_behaved_zero(const Modality& m);
bool laws_ok(const LawReport& r);

// Division p/q (least r with p <= q*r, Galois-connected with q*_).
// Empty when the instance does not support division by q.
std::optional<Grade> divide(const Modality& m, Grade p, Grade q);

struct NrUniqueResult {
  enum class Status { Ok, CarrierTooLarge, BudgetExhausted } status = Status::Ok;
  bool unique = false;           // exactly one lawful table, equal to m.nr
  unsigned long long count = 0;  // lawful tables found (counting caps at 2
                                 // per (p,r) slice, so this is a lower bound
                                 // unless unique)
};
// Enumerates all lawful nr tables; the laws constrain each (p,r) slice
// independently, so the search factorizes.
NrUniqueResult nr_unique_check(const Modality& m, std::size_t carrier_bound = 4,
                               unsigned long long node_budget = 50'000'000);

// Usage contexts: index i = grade of de Bruijn variable i (snoc order,
// index 0 is the most recently bound variable).
using UsageCtx = std::vector<Grade>;

UsageCtx ctx_zero(const Modality& m, std::size_t n);
UsageCtx ctx_unit(const Modality& m, std::size_t n, std::size_t i);
UsageCtx ctx_add(const Modality& m, const UsageCtx& a, const UsageCtx& b);
UsageCtx ctx_meet(const Modality& m, const UsageCtx& a, const UsageCtx& b);
UsageCtx ctx_scale(const Modality& m, Grade p, const UsageCtx& g);
bool ctx_leq(const Modality& m, const UsageCtx& a, const UsageCtx& b);
// Pointwise nr over the last three arguments.
UsageCtx ctx_nr(const Modality& m, Grade p, Grade r, const UsageCtx& gz,
                const UsageCtx& gs, const UsageCtx& gn);
// "[x2↦w, x1↦0, x0↦1]": index 0 rendered rightmost.
// names[i], when present, labels index i instead of x<i>.
std::string show_ctx(const Modality& m, const UsageCtx& g,
                     const std::vector<std::string>& names = {});

// Usage-context action of a substitution sigma : m -> n, as a matrix whose
// row i is the usage context (length cols = n) of sigma(i).
struct SubstMatrix {
  std::size_t cols = 0;
  std::vector<UsageCtx> rows;
};
// gamma * Psi = sum_i gamma(i) * row_i.
UsageCtx matrix_apply(const Modality& m, const UsageCtx& g, const SubstMatrix& psi);

}  // namespace gtt
