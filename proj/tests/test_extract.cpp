#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gtt/extract.hpp"
#include "gtt/frontend.hpp"
#include "gtt/reduce.hpp"

using namespace gtt;

namespace {

const Grade W = 1;  // erasure's "many" grade
constexpr auto NS = Strictness::NonStrict;
constexpr auto ST = Strictness::Strict;

Term id_applied() {
  // (\[0] A. \[w] x. x : Pi[0,0] (A:U) -> Pi[w,0] (x:A) -> A) @[0] Nat @[w] zero
  Term type = mk_pi(0, 0, mk_u(0), mk_pi(W, 0, mk_var(1, 0), mk_var(2, 1)));
  Term body = mk_lam(0, mk_lam(W, mk_var(2, 0)));
  return mk_app(W, mk_app(0, mk_ann(body, type), mk_nat(0)), mk_zero(0));
}

TargetTerm step_once(const TargetTerm& t, Strictness str) {
  TStepResult r = target_step(t, str);
  REQUIRE(r.tag == TStepResult::Tag::Stepped);
  return r.t;
}

}  // namespace

TEST_CASE("identity application erases to its two canonical programs") {
  Term t = id_applied();

  // Non-strict: the 0-graded lambda and application disappear.
  TargetTerm ns = erase(t, NS);
  CHECK(target_eq(ns, tt_app(tt_lam(tt_var(1, 0)), tt_zero(0))));
  CHECK(show_target(ns) == "app(lam(#0), 0)");

  // Strict: the 0-graded abstraction stays and consumes an undefined value.
  TargetTerm st = erase(t, ST);
  TargetTerm expect =
      tt_app(tt_app(tt_lam(tt_lam(tt_var(2, 0))), tt_undef(0)), tt_zero(0));
  CHECK(target_eq(st, expect));

  // Both evaluate to the same numeral.
  for (auto str : {NS, ST}) {
    TNumeralResult n = target_read_numeral(erase(t, str), str, 1000);
    REQUIRE(n.tag == TNumeralResult::Tag::Ok);
    CHECK(n.value == 0);
  }
}

TEST_CASE("type formers and erased eliminators vanish") {
  for (const Term& ty :
       {mk_u(0), mk_nat(0), mk_empty(0), mk_unit(SigKind::Weak, 0),
        mk_pi(W, 0, mk_nat(0), mk_nat(1)),
        mk_sigma(SigKind::Strong, W, 0, mk_nat(0), mk_nat(1))}) {
    CHECK(target_eq(erase(ty, NS), tt_loop(0)));
    CHECK(target_eq(erase(ty, ST), tt_undef(0)));
  }

  // Eliminating the empty type never happens at run time.
  Term er = mk_emptyrec(W, mk_nat(0), mk_zero(0));
  CHECK(target_eq(erase(er, NS), tt_loop(0)));
  CHECK(target_eq(erase(er, ST), tt_loop(0)));
  CHECK(target_eval(erase(er, NS), NS, 100).tag == TEvalResult::Tag::Timeout);

  // An erased match loses both components.
  Term pr = mk_prodrec(0, W, 0, mk_nat(2), mk_var(1, 0), mk_zero(3));
  CHECK(target_eq(erase(pr, NS), tt_zero(1)));
  CHECK(target_eq(erase(pr, ST), tt_zero(1)));

  // 0-graded applications drop (or blank out) their argument entirely.
  Term ap = mk_app(0, mk_var(2, 0), mk_var(2, 1));
  CHECK(target_eq(erase(ap, NS), tt_var(2, 0)));
  CHECK(target_eq(erase(ap, ST), tt_app(tt_var(2, 0), tt_undef(2))));
}

TEST_CASE("strict extraction forces successors and pair components") {
  Term two = mk_suc(mk_zero(0));
  CHECK(target_eq(erase(two, NS), tt_suc(tt_zero(0))));
  CHECK(target_eq(erase(two, ST),
                  tt_app(tt_lam(tt_suc(tt_var(1, 0))), tt_zero(0))));

  Term pair = mk_pair(SigKind::Weak, W, mk_zero(0), mk_suc(mk_zero(0)));
  CHECK(target_eq(erase(pair, NS), tt_pair(tt_zero(0), tt_suc(tt_zero(0)))));
  TargetTerm forced = erase(pair, ST);
  CHECK(show_target(forced) ==
        "app(app(lam(lam(pair(#1, #0))), 0), app(lam(suc(#0)), 0))");
  TEvalResult v = target_eval(forced, ST, 100);
  REQUIRE(v.tag == TEvalResult::Tag::Ok);
  CHECK(target_eq(v.t, tt_pair(tt_zero(0), tt_suc(tt_zero(0)))));

  // The same wrapper serves both pair flavours.
  Term spair = mk_pair(SigKind::Strong, W, mk_zero(0), mk_zero(0));
  CHECK(target_eq(erase(spair, ST),
                  tt_app(tt_app(tt_lam(tt_lam(tt_pair(tt_var(2, 1),
                                                      tt_var(2, 0)))),
                                tt_zero(0)),
                         tt_zero(0))));
}

TEST_CASE("unit eliminators erase by grade") {
  Modality m = make_instance("erasure");
  Term live = parse_term("unitrec[w,0] (x. Nat) star@ 4", m);
  TargetTerm lt = erase(live, NS);
  CHECK(target_eq(lt, tt_unitrec(tt_star(0), tt_num(0, 4))));
  TNumeralResult n = target_read_numeral(lt, NS, 100);
  REQUIRE(n.tag == TNumeralResult::Tag::Ok);
  CHECK(n.value == 4);

  Term dead = parse_term("unitrec[0,0] (x. Nat) star@ 4", m);
  CHECK(target_eq(erase(dead, NS), tt_num(0, 4)));
  CHECK(target_eq(erase(dead, ST),
                  erase(parse_term("4", m), ST)));

  CHECK(target_eq(erase(parse_term("star&", m), NS), tt_star(0)));
  CHECK(target_eq(erase(parse_term("star@", m), ST), tt_star(0)));
}

TEST_CASE("the moded table removes 0-graded components") {
  Term pair = mk_pair(SigKind::Weak, 0, mk_zero(0), mk_suc(mk_zero(0)));
  // Plain keeps the shape; moded keeps only the live component.
  CHECK(target_eq(erase(pair, NS, EraseMode::Plain),
                  tt_pair(tt_zero(0), tt_suc(tt_zero(0)))));
  CHECK(target_eq(erase(pair, NS, EraseMode::Moded), tt_suc(tt_zero(0))));
  CHECK(target_eq(erase(pair, ST, EraseMode::Moded),
                  tt_app(tt_lam(tt_suc(tt_var(1, 0))), tt_zero(0))));

  Term fst0 = mk_fst(0, mk_var(1, 0));
  CHECK(target_eq(erase(fst0, NS, EraseMode::Plain), tt_fst(tt_var(1, 0))));
  CHECK(target_eq(erase(fst0, NS, EraseMode::Moded), tt_loop(1)));
  CHECK(target_eq(erase(fst0, ST, EraseMode::Moded), tt_loop(1)));

  Term snd0 = mk_snd(0, mk_var(1, 0));
  CHECK(target_eq(erase(snd0, NS, EraseMode::Plain), tt_snd(tt_var(1, 0))));
  CHECK(target_eq(erase(snd0, NS, EraseMode::Moded), tt_var(1, 0)));

  // Live match on a pair whose first component is erased: bind the second.
  Term pr = mk_prodrec(W, 0, 0, mk_nat(2), mk_var(1, 0), mk_var(3, 0));
  CHECK(target_eq(erase(pr, NS, EraseMode::Moded),
                  tt_app(tt_lam(tt_var(2, 0)), tt_var(1, 0))));
  // A branch using the first component gets the diverging term instead.
  Term pr1 = mk_prodrec(W, 0, 0, mk_nat(2), mk_var(1, 0), mk_var(3, 1));
  CHECK(target_eq(erase(pr1, NS, EraseMode::Moded),
                  tt_app(tt_lam(tt_loop(2)), tt_var(1, 0))));

  // Nonzero grades fall back to the plain rows.
  CHECK(target_eq(erase(mk_fst(W, mk_var(1, 0)), NS, EraseMode::Moded),
                  tt_fst(tt_var(1, 0))));
  CHECK(target_eq(erase(pr, NS, EraseMode::Plain),
                  tt_prodrec(tt_var(1, 0), tt_var(3, 0))));
}

TEST_CASE("evaluation order differs between the two disciplines") {
  // Non-strict substitutes immediately; strict reduces the argument first.
  TargetTerm arg = tt_app(tt_lam(tt_var(1, 0)), tt_zero(0));
  TargetTerm t = tt_app(tt_lam(tt_zero(1)), arg);
  CHECK(target_eq(step_once(t, NS), tt_zero(0)));
  CHECK(target_eq(step_once(t, ST), tt_app(tt_lam(tt_zero(1)), tt_zero(0))));

  // Laziness pays off when the argument diverges.
  TargetTerm drop = tt_app(tt_lam(tt_zero(1)), tt_loop(0));
  TEvalResult lazy = target_eval(drop, NS, 100);
  REQUIRE(lazy.tag == TEvalResult::Tag::Ok);
  CHECK(lazy.steps == 1);
  CHECK(target_eval(drop, ST, 100).tag == TEvalResult::Tag::Timeout);

  // Projections never force components, under either discipline.
  TargetTerm lazy_pair = tt_fst(tt_pair(tt_zero(0), tt_loop(0)));
  for (auto str : {NS, ST}) {
    TEvalResult r = target_eval(lazy_pair, str, 100);
    REQUIRE(r.tag == TEvalResult::Tag::Ok);
    CHECK(target_eq(r.t, tt_zero(0)));
  }
  CHECK(target_eq(step_once(tt_snd(tt_pair(tt_loop(0), tt_zero(0))), ST),
                  tt_zero(0)));

  // suc is a value outright: its argument is left untouched.
  TargetTerm lazy_suc = tt_suc(tt_app(tt_lam(tt_var(1, 0)), tt_zero(0)));
  CHECK(target_is_value(lazy_suc));
  CHECK(target_step(lazy_suc, ST).tag == TStepResult::Tag::Value);
}

TEST_CASE("recursors compute and undefined values stay inert") {
  TargetTerm pr = tt_prodrec(tt_pair(tt_zero(0), tt_suc(tt_zero(0))),
                             tt_var(2, 0));
  TEvalResult second = target_eval(pr, NS, 10);
  REQUIRE(second.tag == TEvalResult::Tag::Ok);
  CHECK(target_eq(second.t, tt_suc(tt_zero(0))));
  TargetTerm pr1 = tt_prodrec(tt_pair(tt_zero(0), tt_suc(tt_zero(0))),
                              tt_var(2, 1));
  TEvalResult first = target_eval(pr1, NS, 10);
  REQUIRE(first.tag == TEvalResult::Tag::Ok);
  CHECK(target_eq(first.t, tt_zero(0)));

  // Undefined is a value, but eliminating it is stuck.
  CHECK(target_is_value(tt_undef(0)));
  CHECK(target_step(tt_fst(tt_undef(0)), NS).tag == TStepResult::Tag::Stuck);
  CHECK(target_step(tt_app(tt_undef(0), tt_zero(0)), ST).tag ==
        TStepResult::Tag::Stuck);
  CHECK(target_step(tt_natrec(tt_zero(0), tt_zero(2), tt_undef(0)), NS).tag ==
        TStepResult::Tag::Stuck);
  CHECK(target_step(tt_var(1, 0), NS).tag == TStepResult::Tag::Stuck);
  TEvalResult st = target_eval(tt_unitrec(tt_zero(0), tt_zero(0)), NS, 10);
  CHECK(st.tag == TEvalResult::Tag::Stuck);
}

TEST_CASE("numeral readback matches the source on addition") {
  Modality m = make_instance("erasure");
  Term plus = parse_term(
      "(\\[w] k. \\[w] n. natrec[0,0,w] (m. Nat) k (x ih. suc ih) n)"
      " @[w] 2 @[w] 3",
      m);
  NumeralResult src = read_numeral(plus);
  REQUIRE(src.tag == NumeralResult::Tag::Ok);
  CHECK(src.value == 5);
  for (auto str : {NS, ST}) {
    for (auto mode : {EraseMode::Plain, EraseMode::Moded}) {
      TNumeralResult n = target_read_numeral(erase(plus, str, mode), str,
                                             default_fuel());
      REQUIRE(n.tag == TNumeralResult::Tag::Ok);
      CHECK(n.value == 5);
    }
  }

  // Non-strict readback keeps computing under suc; strict readback expects
  // evaluation to have produced a syntactic numeral already.
  TargetTerm half = tt_suc(tt_app(tt_lam(tt_var(1, 0)), tt_zero(0)));
  TNumeralResult ns = target_read_numeral(half, NS, 100);
  REQUIRE(ns.tag == TNumeralResult::Tag::Ok);
  CHECK(ns.value == 1);
  CHECK(target_read_numeral(half, ST, 100).tag == TNumeralResult::Tag::Stuck);

  CHECK(target_read_numeral(tt_undef(0), ST, 100).tag ==
        TNumeralResult::Tag::Stuck);
  CHECK(target_read_numeral(tt_loop(0), NS, 100).tag ==
        TNumeralResult::Tag::Timeout);
  TNumeralResult three = target_read_numeral(tt_num(0, 3), ST, 100);
  REQUIRE(three.tag == TNumeralResult::Tag::Ok);
  CHECK(three.value == 3);
}

TEST_CASE("erased variables never survive extraction") {
  // A variable used only at grade 0 is gone from the erased program.
  Modality m = make_instance("erasure");
  Term t = parse_term("\\[0] A. \\[w] x. \\[0] y. x @[0] y", m);
  // Peel the binders so the variables stay free and visible.
  Term body = t->a->a->a;  // x @[0] y  in scope {y, x, A}
  TargetTerm ns = erase(body, NS);
  CHECK(target_eq(ns, tt_var(3, 1)));  // only x remains
  TargetTerm st = erase(body, ST);
  CHECK(target_eq(st, tt_app(tt_var(3, 1), tt_undef(3))));
}
