#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "gtt/grades.hpp"

namespace gtt {

// ---------------------------------------------------------------------------
// Source language: well-scoped de Bruijn terms.  Types and terms share one
// syntax.  Every node records the number of free indices in scope; the
// factory functions validate child scopes, so ill-scoped trees cannot be
// constructed.

enum class Kind : std::uint8_t {
  U, Nat, Empty, Unit, Pi, Sigma, Var, Lam, App, Pair, Fst, Snd, Prodrec,
  Zero, Suc, Natrec, Emptyrec, Star, Unitrec, Ann,
};

// Strong products/units come with projections / eta; weak ones with
// prodrec / unitrec.
enum class SigKind : std::uint8_t { Strong, Weak };

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
  Kind kind;
  SigKind sk = SigKind::Strong;  // Unit, Sigma, Pair, Star
  Grade p = 0, q = 0, r = 0;     // meanings per kind (see factories)
  std::uint32_t var = 0;         // Var
  std::uint32_t scope = 0;       // number of free de Bruijn indices
  std::uint32_t line = 0, col = 0;  // source span, 0 when synthesized
  Term a, b, c, d;
};

// Type formers.
Term mk_u(std::uint32_t scope);
Term mk_nat(std::uint32_t scope);
Term mk_empty(std::uint32_t scope);
Term mk_unit(SigKind k, std::uint32_t scope);
Term mk_pi(Grade p, Grade q, Term A, Term B);        // B binds one
Term mk_sigma(SigKind k, Grade p, Grade q, Term A, Term B);
// Terms.
Term mk_var(std::uint32_t scope, std::uint32_t i);
Term mk_lam(Grade p, Term t);                        // t binds one
Term mk_app(Grade p, Term t, Term u);
Term mk_pair(SigKind k, Grade p, Term t, Term u);
Term mk_fst(Grade p, Term t);
Term mk_snd(Grade p, Term t);
Term mk_prodrec(Grade r, Grade p, Grade q, Term A, Term t, Term u);  // A binds 1, u binds 2
Term mk_zero(std::uint32_t scope);
Term mk_suc(Term t);
Term mk_natrec(Grade p, Grade q, Grade r, Term A, Term z, Term s, Term n);  // A binds 1, s binds 2
Term mk_emptyrec(Grade p, Term A, Term t);
Term mk_star(SigKind k, std::uint32_t scope);
Term mk_unitrec(Grade p, Grade q, Term A, Term t, Term u);  // A binds 1
Term mk_ann(Term t, Term A);  // ascription (t : A)
Term mk_num(std::uint32_t scope, std::uint64_t k);
// Copy of t with a source span attached.
Term at_span(Term t, std::uint32_t line, std::uint32_t col);

bool alpha_eq(const Term& a, const Term& b);  // structural (spans ignored)

// Weakenings n -> m built from id / step / lift.
struct Wk {
  std::uint32_t src = 0, tgt = 0;
  std::vector<std::uint8_t> ops;  // 0 = step, 1 = lift; back() outermost
};
Wk wk_id(std::uint32_t n);
Wk wk_step(Wk w);
Wk wk_lift(Wk w);
std::uint32_t wk_var(const Wk& w, std::uint32_t i);
Term wk_term(const Wk& w, const Term& t);
// Convenience: weaken by k steps (n -> n+k).
Term wk_by(std::uint32_t k, const Term& t);

// Substitutions src -> tgt in weakening-prefix + explicit-head normal form:
// sigma(i) = head[i] for i < |head|, else var(wk_var(prefix, i - |head|)).
struct Subst {
  std::uint32_t src = 0, tgt = 0;
  std::vector<Term> head;  // each of scope tgt
  Wk prefix;               // src - |head| -> tgt
};
Subst subst_id(std::uint32_t n);
Subst subst_cons(Subst s, Term t);
Subst subst_lift(Subst s);
Term subst_var(const Subst& s, std::uint32_t i);
Term subst_term(const Subst& s, const Term& t);
// t[var0 |-> u] for t binding one.
Term subst1(const Term& t, const Term& u);
// t[var0 |-> x0, var1 |-> x1] for t binding two.
Term subst2(const Term& t, const Term& x0, const Term& x1);

// ---------------------------------------------------------------------------
// Target language: untyped lambda calculus with pairs, numbers, unit and an
// undefined value (printed "!").

enum class TKind : std::uint8_t {
  Var, Lam, App, Pair, Fst, Snd, Prodrec, Zero, Suc, Natrec, Unitrec, Star,
  Undef,
};

struct TargetNode;
using TargetTerm = std::shared_ptr<const TargetNode>;

struct TargetNode {
  TKind kind;
  std::uint32_t var = 0;
  std::uint32_t scope = 0;
  TargetTerm a, b, c;
};

TargetTerm tt_var(std::uint32_t scope, std::uint32_t i);
TargetTerm tt_lam(TargetTerm t);                    // t binds one
TargetTerm tt_app(TargetTerm t, TargetTerm u);
TargetTerm tt_pair(TargetTerm t, TargetTerm u);
TargetTerm tt_fst(TargetTerm t);
TargetTerm tt_snd(TargetTerm t);
TargetTerm tt_prodrec(TargetTerm t, TargetTerm u);  // u binds two
TargetTerm tt_zero(std::uint32_t scope);
TargetTerm tt_suc(TargetTerm t);
TargetTerm tt_natrec(TargetTerm z, TargetTerm s, TargetTerm n);  // s binds two
TargetTerm tt_unitrec(TargetTerm t, TargetTerm u);
TargetTerm tt_star(std::uint32_t scope);
TargetTerm tt_undef(std::uint32_t scope);
// (\x. x x) (\x. x x): the canonical diverging term.
TargetTerm tt_loop(std::uint32_t scope);
TargetTerm tt_num(std::uint32_t scope, std::uint64_t k);

bool target_eq(const TargetTerm& a, const TargetTerm& b);

Wk twk_id(std::uint32_t n);  // weakenings are shared; aliases for clarity
TargetTerm twk_term(const Wk& w, const TargetTerm& t);
TargetTerm twk_by(std::uint32_t k, const TargetTerm& t);

struct TSubst {
  std::uint32_t src = 0, tgt = 0;
  std::vector<TargetTerm> head;
  Wk prefix;
};
TSubst tsubst_id(std::uint32_t n);
TSubst tsubst_cons(TSubst s, TargetTerm t);
TSubst tsubst_lift(TSubst s);
TargetTerm tsubst_var(const TSubst& s, std::uint32_t i);
TargetTerm tsubst_term(const TSubst& s, const TargetTerm& t);
TargetTerm tsubst1(const TargetTerm& t, const TargetTerm& u);
TargetTerm tsubst2(const TargetTerm& t, const TargetTerm& x0, const TargetTerm& x1);

// Rendering: lam(t), app(t,u), ..., #i for variables, ! for undef; runs of
// suc ending in zero print as decimal numerals.
std::string show_target(const TargetTerm& t);

}  // namespace gtt
