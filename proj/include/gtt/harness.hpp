#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gtt/extract.hpp"
#include "gtt/grades.hpp"
#include "gtt/syntax.hpp"
#include "gtt/usage.hpp"

namespace gtt {

// ---------------------------------------------------------------------------
// Seeded corpora and replication suites tying the core modules together.

// Deterministic across platforms: mt19937_64 has a pinned output sequence
// and reduction is by remainder, so no distribution objects are involved.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : g_() % n; }
  template <typename T>
  T pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(below(v.size()))];
  }

 private:
  std::mt19937_64 g_;
};

// A generated program: `term` has one free variable per `ctx` entry
// (outermost first; every entry is a closed type) and `type` is closed.
struct GenItem {
  std::vector<Term> ctx;
  Term term;
  Term type;
};

// Type-directed generation of well-typed, well-resourced terms.  Binder
// grades are not guessed: they are read off the inferred usage of the
// freshly generated body, so every emitted term is lawful by construction.
class TermGen {
 public:
  TermGen(Modality m, Restrictions rs, std::uint64_t seed, int depth,
          bool erased_vars_only, bool moded_safe);

  // A natural-number program over `free_nat` ℕ-typed and `free_fun`
  // (ℕ →[p] ℕ)-typed hypotheses.  With erased_vars_only the free variables
  // occur only inside 0-graded arguments, so the principal usage is 𝟘.
  GenItem nat_program(int free_nat, int free_fun);

  // A β-redex `(λx. b : Π) ∘ u` at type ℕ over the same hypothesis shape,
  // for substitution-matrix replication.
  GenItem beta_instance(int free_nat, int free_fun);

 private:
  struct TT {
    Term t;
    Term ty;  // closed
  };

  std::uint32_t scope() const { return static_cast<std::uint32_t>(ctx_.size()); }
  UsageCtx usage_of(const Term& t);
  Grade binder_grade(const Term& body);
  Grade pair_grade(Grade p, SigKind sk) const;
  Term close(const Term& ty0) const { return wk_by(scope(), ty0); }
  std::vector<std::uint32_t> vars_of(const Term& ty0, bool direct_use);
  Term rand_type(int d);

  Term gen_nat(int d);
  TT gen_any(int d);
  bool try_app_var(int d, Term& out);
  bool try_proj(int d, Term& out);
  bool try_prodrec(int d, Term& out);
  Term gen_natrec(int d);
  Term gen_unitrec(int d);
  bool try_erased_wrap(int d, Term& out);
  Term app_redex(int d);

  Modality m_;
  Restrictions rs_;
  Rng rng_;
  int depth_;
  bool erased_only_;
  bool moded_safe_;
  std::vector<Term> ctx_;  // closed types; back() = type of variable 0
  std::size_t n_free_ = 0;
};

struct HarnessConfig {
  Modality m;
  Restrictions rs;
  bool moded = false;  // soundness suite: moded usage + moded extraction
  std::uint64_t fuel = 1'000'000;
  std::uint64_t seed = 42;
  int depth = 4;
  int corpus_terms = 1000;        // principality corpus size
  int contexts_per_term = 200;    // random contexts per term
  int reduction_steps = 500;      // single steps re-checked for usage
  int beta_instances = 200;       // substitution-matrix re-checks
  int soundness_programs = 250;   // generated ℕ-programs per leg
  int noninterference_samples = 50;

  HarnessConfig();  // defaults to erasure
  std::string summary() const;
};

struct CaseResult {
  std::string name;
  bool pass = false;
  std::string witness;
};

struct Report {
  std::string suite;
  std::uint64_t seed = 0;
  std::string config;
  std::vector<CaseResult> cases;

  int failed() const;
  bool ok() const { return failed() == 0; }
  void add(const std::string& name, bool pass, const std::string& witness);
  std::string text() const;
  std::string json() const;  // {suite, seed, config, passed, failed, cases[]}
};

// Modality laws, well-behaved zero, nr uniqueness/plurality, division laws
// and usage-matrix linearity over the built-in family plus an L≤M≤H lattice.
Report run_law_suite(const HarnessConfig& cfg);
// Differential evaluation: source whnf numerals vs the extracted program
// under both target disciplines, on named examples and generated corpora
// (closed, and open over all-erased consistent contexts with erased matches
// disabled), plus non-interference under closing substitutions.
Report run_soundness_suite(const HarnessConfig& cfg);
// Usage is stable under reduction and under substitution matrices; types are
// preserved at whnf endpoints.
Report run_preservation_suite(const HarnessConfig& cfg);
// The inferred usage context accepts its own term and dominates (lies
// above) every accepted context.
Report run_principality_suite(const HarnessConfig& cfg);

// Shared fixtures.
const char* named_corpus_text();  // id/plus/safe-head/unit definitions
const char* lmh_lattice_text();   // three-point chain L ≤ M ≤ H
Modality lmh_lattice();
// Erased match on a pair hypothesis: well-typed and well-resourced with
// erased matches enabled, stuck at the source level, extraction evaluates
// to 0.  `ctx` holds the single pair hypothesis.
GenItem erased_match_counterexample(const Modality& m);

}  // namespace gtt
