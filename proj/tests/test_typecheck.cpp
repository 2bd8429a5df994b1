#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gtt/frontend.hpp"
#include "gtt/typecheck.hpp"

using namespace gtt;

namespace {

const Grade W = 1;  // erasure's "many"

Term id_type() {
  return mk_pi(0, 0, mk_u(0), mk_pi(W, 0, mk_var(1, 0), mk_var(2, 1)));
}
Term id_body() { return mk_lam(0, mk_lam(W, mk_var(2, 0))); }

}  // namespace

TEST_CASE("basic inference") {
  Checker ck;
  TypingCtx ctx;
  CHECK(alpha_eq(ck.infer_type(ctx, mk_zero(0)), mk_nat(0)));
  CHECK(alpha_eq(ck.infer_type(ctx, mk_suc(mk_zero(0))), mk_nat(0)));
  CHECK(alpha_eq(ck.infer_type(ctx, mk_nat(0)), mk_u(0)));
  CHECK(alpha_eq(ck.infer_type(ctx, mk_star(SigKind::Weak, 0)),
                 mk_unit(SigKind::Weak, 0)));
  ck.check_type(ctx, mk_nat(0));
  ck.check_type(ctx, id_type());
}

TEST_CASE("the identity function checks and applies") {
  Checker ck;
  TypingCtx ctx;
  ck.check_term(ctx, id_body(), id_type());

  // In a context B : U, b : B the partial application has type Pi over B,
  // and the full application has type B.
  ctx = {mk_u(0), mk_var(1, 0)};
  Term id = wk_by(2, mk_ann(id_body(), id_type()));
  Term partial = mk_app(0, id, mk_var(2, 1));
  Term T = ck.infer_type(ctx, partial);
  ck.conv_type(ctx, T, mk_pi(W, 0, mk_var(2, 1), mk_var(3, 2)));
  Term full = mk_app(W, partial, mk_var(2, 0));
  ck.conv_type(ctx, ck.infer_type(ctx, full), mk_var(2, 1));
}

TEST_CASE("grade annotations must match the type") {
  Checker ck;
  TypingCtx ctx;
  try {
    ck.check_term(ctx, mk_lam(W, mk_var(1, 0)), mk_pi(0, 0, mk_nat(0), mk_nat(1)));
    FAIL("expected an error");
  } catch (const TypeError& e) {
    CHECK(e.kind == TypeError::Kind::GradeAnnotationMismatch);
  }
  // Matching grade is fine.
  ck.check_term(ctx, mk_lam(0, mk_var(1, 0)), mk_pi(0, 0, mk_nat(0), mk_nat(1)));

  Term fn = mk_ann(mk_lam(W, mk_var(1, 0)), mk_pi(W, 0, mk_nat(0), mk_nat(1)));
  try {
    ck.infer_type(ctx, mk_app(0, fn, mk_zero(0)));
    FAIL("expected an error");
  } catch (const TypeError& e) {
    CHECK(e.kind == TypeError::Kind::GradeAnnotationMismatch);
  }
}

TEST_CASE("checking introduction forms") {
  Checker ck;
  TypingCtx ctx;
  Term sig = mk_sigma(SigKind::Strong, W, 0, mk_nat(0), mk_nat(1));
  ck.check_term(ctx, mk_pair(SigKind::Strong, W, mk_zero(0), mk_zero(0)), sig);
  try {
    ck.check_term(ctx, mk_pair(SigKind::Weak, W, mk_zero(0), mk_zero(0)), sig);
    FAIL("expected an error");
  } catch (const TypeError& e) {
    CHECK(e.kind == TypeError::Kind::Mismatch);
  }
  // Dependent second component computed by a recursor.
  Term motive = mk_natrec(0, 0, W, mk_u(2), mk_nat(1), mk_nat(3), mk_var(1, 0));
  Term dsig = mk_sigma(SigKind::Strong, W, 0, mk_nat(0), motive);
  ck.check_term(ctx, mk_pair(SigKind::Strong, W, mk_zero(0), mk_zero(0)), dsig);
}

TEST_CASE("error kinds") {
  Checker ck;
  TypingCtx ctx;
  auto kind_of = [&](const Term& t) {
    try {
      ck.infer_type(ctx, t);
    } catch (const TypeError& e) {
      return e.kind;
    }
    return TypeError::Kind::Mismatch;
  };
  CHECK(kind_of(mk_app(W, mk_zero(0), mk_zero(0))) ==
        TypeError::Kind::NotAFunction);
  CHECK(kind_of(mk_fst(W, mk_zero(0))) == TypeError::Kind::NotAPair);
  CHECK(kind_of(mk_u(0)) == TypeError::Kind::Universe);
  try {
    ck.infer_type(ctx, mk_lam(W, mk_var(1, 0)));
    FAIL("a bare lambda must not be inferable");
  } catch (const TypeError& e) {
    CHECK(e.kind == TypeError::Kind::Mismatch);
  }

  // Projections need strong pairs; prodrec needs weak ones.
  Term wsig = mk_sigma(SigKind::Weak, W, 0, mk_nat(0), mk_nat(1));
  Term ssig = mk_sigma(SigKind::Strong, W, 0, mk_nat(0), mk_nat(1));
  ctx = {wsig, wk_by(1, ssig)};
  CHECK(kind_of(mk_fst(W, mk_var(2, 1))) == TypeError::Kind::IllegalProjection);
  CHECK(kind_of(mk_prodrec(W, W, 0, mk_nat(3), mk_var(2, 0), mk_var(4, 0))) ==
        TypeError::Kind::IllegalProjection);
  ctx.clear();

  try {
    ck.check_type(ctx, mk_suc(mk_zero(0)));
    FAIL("expected an error");
  } catch (const TypeError& e) {
    CHECK(e.kind == TypeError::Kind::Universe);
  }
}

TEST_CASE("conversion includes beta and eta") {
  Checker ck;
  TypingCtx ctx;
  Term redex = mk_app(W, mk_lam(W, mk_var(1, 0)), mk_zero(0));
  ck.conv_term(ctx, redex, mk_zero(0), mk_nat(0));

  // Function eta: f == \x. f x.
  Term fty = mk_pi(W, 0, mk_nat(0), mk_nat(1));
  ctx = {fty};
  Term f = mk_var(1, 0);
  Term expanded = mk_lam(W, mk_app(W, mk_var(2, 1), mk_var(2, 0)));
  ck.conv_term(ctx, f, expanded, wk_by(1, fty));

  // Strong pair eta: p == (fst p, snd p).
  ctx = {mk_sigma(SigKind::Strong, W, 0, mk_nat(0), mk_nat(1))};
  Term p = mk_var(1, 0);
  Term repaired =
      mk_pair(SigKind::Strong, W, mk_fst(W, p), mk_snd(W, p));
  ck.conv_term(ctx, p, repaired, wk_by(1, ctx[0]));

  // Strong unit eta: any two inhabitants are equal.
  ctx = {mk_unit(SigKind::Strong, 0)};
  ck.conv_term(ctx, mk_var(1, 0), mk_star(SigKind::Strong, 1),
               mk_unit(SigKind::Strong, 1));

  // But not for the weak unit.
  ctx = {mk_unit(SigKind::Weak, 0)};
  CHECK_THROWS_AS(ck.conv_term(ctx, mk_var(1, 0), mk_star(SigKind::Weak, 1),
                               mk_unit(SigKind::Weak, 1)),
                  TypeError);

  ctx.clear();
  CHECK_THROWS_AS(ck.conv_type(ctx, mk_nat(0), mk_empty(0)), TypeError);
}

TEST_CASE("recursors type-check") {
  Modality m = make_instance("linear");
  SourceFile f = parse_file(
      "def plus : Pi[1,0] (k:Nat) -> Pi[1,0] (n:Nat) -> Nat :=\n"
      "  \\[1] k. \\[1] n. natrec[0,0,1] (m. Nat) k (x ih. suc ih) n\n"
      "def five : Nat := plus @[1] 2 @[1] 3\n",
      m);
  Checker ck;
  TypingCtx ctx;
  const Def* plus = resolve(f, "plus");
  ck.check_term(ctx, plus->body, plus->type);
  const Def* five = resolve(f, "five");
  ck.conv_type(ctx, ck.infer_type(ctx, five->body), mk_nat(0));

  // prodrec over a weak pair in context (the erased-matches scrutinee).
  TypingCtx open = {mk_sigma(SigKind::Weak, m.one, 0, mk_nat(0), mk_nat(1))};
  Term t = mk_prodrec(0, m.one, 0, mk_nat(2), mk_var(1, 0), mk_zero(3));
  CHECK(alpha_eq(ck.infer_type(open, t), mk_nat(1)));

  // unitrec eliminates only the weak unit.
  Term ur = parse_term("unitrec[1,0] (u. Nat) star@ 4", m);
  CHECK(alpha_eq(ck.infer_type(ctx, ur), mk_nat(0)));
  Term urs = parse_term("unitrec[1,0] (u. Nat) star& 4", m);
  CHECK_THROWS_AS(ck.infer_type(ctx, urs), TypeError);

  Term er = parse_term("\\[1] x. emptyrec[w] Nat x", m);
  ck.check_term(ctx, er, mk_pi(m.one, 0, mk_empty(0), mk_nat(1)));
}

TEST_CASE("configuration knobs") {
  CheckConfig cfg;
  cfg.pi_sigma_equal_grades = true;
  Checker ck(cfg);
  TypingCtx ctx;
  try {
    ck.check_type(ctx, mk_pi(0, W, mk_nat(0), mk_nat(1)));
    FAIL("expected an error");
  } catch (const TypeError& e) {
    CHECK(e.kind == TypeError::Kind::RestrictionViolation);
  }
  ck.check_type(ctx, mk_pi(W, W, mk_nat(0), mk_nat(1)));

  // Fuel exhaustion surfaces as a TypeError, not a hang.
  CheckConfig tiny;
  tiny.fuel = 5;
  Checker weak(tiny);
  Term delta = mk_lam(W, mk_app(W, mk_var(1, 0), mk_var(1, 0)));
  Term omega = mk_app(W, delta, delta);
  try {
    weak.check_term(ctx, mk_zero(0), omega);
    FAIL("expected an error");
  } catch (const TypeError& e) {
    CHECK(e.kind == TypeError::Kind::FuelExhausted);
  }
}

TEST_CASE("subject reduction spot check") {
  Checker ck;
  TypingCtx ctx;
  Term t = mk_app(0, mk_ann(id_body(), id_type()), mk_nat(0));
  Term T = ck.infer_type(ctx, t);
  // Stepping strips the ascription; the intermediate bare redex is outside
  // the bidirectional fragment, but the whnf checks at the original type.
  StepResult s = whnf_step(t);
  REQUIRE(s.tag == StepResult::Tag::Stepped);
  CHECK_THROWS_AS(ck.check_term(ctx, s.t, T), TypeError);
  WhnfResult w = whnf(t);
  REQUIRE(w.tag == WhnfResult::Tag::Ok);
  ck.check_term(ctx, w.t, T);
  CHECK(alpha_eq(w.t, mk_lam(W, mk_var(1, 0))));
  // The inferred type is stable under conversion with itself (reflexivity).
  ck.conv_type(ctx, T, T);
}
