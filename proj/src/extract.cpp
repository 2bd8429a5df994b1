#include "gtt/extract.hpp"

namespace gtt {

namespace {

// Erased type formers and erased matches on the empty type.
TargetTerm hole(Strictness str, uint32_t scope) {
  return str == Strictness::Strict ? tt_undef(scope) : tt_loop(scope);
}

// lam lam (pair #1 #0), used to force both components under strict
// evaluation before rebuilding the (lazy) pair.
TargetTerm strict_pair_maker(uint32_t scope) {
  return tt_lam(tt_lam(tt_pair(tt_var(scope + 2, 1), tt_var(scope + 2, 0))));
}

struct Eraser {
  Strictness str;
  EraseMode mode;
  Grade zero;  // the instance's zero element; index 0 for the built-ins

  bool strict() const { return str == Strictness::Strict; }
  // In the moded table a 0-graded first component never materialises.
  bool erased_component(Grade p) const {
    return mode == EraseMode::Moded && p == zero;
  }

  TargetTerm go(const Term& t) {
    uint32_t n = t->scope;
    switch (t->kind) {
      // Types have no run-time content.
      case Kind::U:
      case Kind::Nat:
      case Kind::Empty:
      case Kind::Unit:
      case Kind::Pi:
      case Kind::Sigma:
        return hole(str, n);

      case Kind::Var:
        return tt_var(n, t->var);

      case Kind::Lam:
        if (t->p == zero && !strict()) {
          // The argument is never supplied; plug the binder directly.
          return tsubst1(go(t->a), tt_loop(n));
        }
        return tt_lam(go(t->a));

      case Kind::App:
        if (t->p == zero) {
          if (!strict()) return go(t->a);
          return tt_app(go(t->a), tt_undef(n));
        }
        return tt_app(go(t->a), go(t->b));

      case Kind::Pair: {
        if (erased_component(t->p)) return go(t->b);
        TargetTerm e1 = go(t->a);
        TargetTerm e2 = go(t->b);
        if (!strict()) return tt_pair(e1, e2);
        return tt_app(tt_app(strict_pair_maker(n), e1), e2);
      }

      case Kind::Fst:
        if (erased_component(t->p)) return tt_loop(n);
        return tt_fst(go(t->a));

      case Kind::Snd:
        if (erased_component(t->p)) return go(t->a);
        return tt_snd(go(t->a));

      case Kind::Prodrec: {
        if (t->r == zero) {
          // Erased match: neither component is available at run time.
          return tsubst2(go(t->c), tt_loop(n), tt_loop(n));
        }
        if (erased_component(t->p)) {
          // Only the second component flows: bind it with a lambda and
          // plug the first with the diverging term.
          TargetTerm branch = tsubst1(tt_lam(go(t->c)), tt_loop(n));
          return tt_app(branch, go(t->b));
        }
        return tt_prodrec(go(t->b), go(t->c));
      }

      case Kind::Zero:
        return tt_zero(n);

      case Kind::Suc:
        if (!strict()) return tt_suc(go(t->a));
        // Force the predecessor: suc is otherwise lazy in the target.
        return tt_app(tt_lam(tt_suc(tt_var(n + 1, 0))), go(t->a));

      case Kind::Natrec:
        return tt_natrec(go(t->b), go(t->c), go(t->d));

      case Kind::Emptyrec:
        return tt_loop(n);

      case Kind::Star:
        return tt_star(n);

      case Kind::Unitrec:
        if (t->p == zero) return go(t->c);
        return tt_unitrec(go(t->b), go(t->c));

      case Kind::Ann:
        return go(t->a);
    }
    return tt_undef(n);  // unreachable
  }
};

}  // namespace

TargetTerm erase(const Term& t, Strictness str, EraseMode mode, Grade zero) {
  Eraser e{str, mode, zero};
  return e.go(t);
}

bool target_is_value(const TargetTerm& t) {
  switch (t->kind) {
    case TKind::Lam:
    case TKind::Pair:
    case TKind::Zero:
    case TKind::Suc:
    case TKind::Star:
    case TKind::Undef:
      return true;
    default:
      return false;
  }
}

namespace {

TStepResult t_stepped(TargetTerm t) {
  return {TStepResult::Tag::Stepped, std::move(t), {}};
}
TStepResult t_value(TargetTerm t) {
  return {TStepResult::Tag::Value, std::move(t), {}};
}
TStepResult t_stuck(TargetTerm t, std::string diag) {
  return {TStepResult::Tag::Stuck, std::move(t), std::move(diag)};
}

// Rebuild `t` with child `a` replaced, keeping the other fields.
TargetTerm with_head(const TargetTerm& t, TargetTerm a) {
  auto n = std::make_shared<TargetNode>(*t);
  n->a = std::move(a);
  return n;
}

}  // namespace

TStepResult target_step(const TargetTerm& t, Strictness str) {
  if (target_is_value(t)) return t_value(t);
  switch (t->kind) {
    case TKind::Var:
      return t_stuck(t, "free variable");

    case TKind::App: {
      TStepResult h = target_step(t->a, str);
      if (h.tag == TStepResult::Tag::Stepped)
        return t_stepped(tt_app(h.t, t->b));
      if (h.tag == TStepResult::Tag::Stuck) return h;
      if (str == Strictness::Strict) {
        TStepResult arg = target_step(t->b, str);
        if (arg.tag == TStepResult::Tag::Stepped)
          return t_stepped(tt_app(t->a, arg.t));
        if (arg.tag == TStepResult::Tag::Stuck) return arg;
      }
      if (t->a->kind == TKind::Lam)
        return t_stepped(tsubst1(t->a->a, t->b));
      return t_stuck(t, "applying a non-function value");
    }

    case TKind::Fst:
    case TKind::Snd: {
      TStepResult h = target_step(t->a, str);
      if (h.tag == TStepResult::Tag::Stepped)
        return t_stepped(with_head(t, h.t));
      if (h.tag == TStepResult::Tag::Stuck) return h;
      if (t->a->kind == TKind::Pair)
        return t_stepped(t->kind == TKind::Fst ? t->a->a : t->a->b);
      return t_stuck(t, "projecting from a non-pair value");
    }

    case TKind::Prodrec: {
      TStepResult h = target_step(t->a, str);
      if (h.tag == TStepResult::Tag::Stepped)
        return t_stepped(tt_prodrec(h.t, t->b));
      if (h.tag == TStepResult::Tag::Stuck) return h;
      if (t->a->kind == TKind::Pair)
        return t_stepped(tsubst2(t->b, t->a->b, t->a->a));
      return t_stuck(t, "matching on a non-pair value");
    }

    case TKind::Natrec: {
      TStepResult h = target_step(t->c, str);
      if (h.tag == TStepResult::Tag::Stepped)
        return t_stepped(tt_natrec(t->a, t->b, h.t));
      if (h.tag == TStepResult::Tag::Stuck) return h;
      if (t->c->kind == TKind::Zero) return t_stepped(t->a);
      if (t->c->kind == TKind::Suc)
        return t_stepped(
            tsubst2(t->b, tt_natrec(t->a, t->b, t->c->a), t->c->a));
      return t_stuck(t, "recursing on a non-numeral value");
    }

    case TKind::Unitrec: {
      TStepResult h = target_step(t->a, str);
      if (h.tag == TStepResult::Tag::Stepped)
        return t_stepped(tt_unitrec(h.t, t->b));
      if (h.tag == TStepResult::Tag::Stuck) return h;
      if (t->a->kind == TKind::Star) return t_stepped(t->b);
      return t_stuck(t, "matching on a non-star value");
    }

    default:
      return t_stuck(t, "stuck term");
  }
}

TEvalResult target_eval(TargetTerm t, Strictness str, std::uint64_t fuel) {
  std::uint64_t steps = 0;
  for (;;) {
    TStepResult r = target_step(t, str);
    switch (r.tag) {
      case TStepResult::Tag::Value:
        return {TEvalResult::Tag::Ok, std::move(t), {}, steps};
      case TStepResult::Tag::Stuck:
        return {TEvalResult::Tag::Stuck, std::move(t), std::move(r.diag),
                steps};
      case TStepResult::Tag::Stepped:
        if (++steps > fuel)
          return {TEvalResult::Tag::Timeout, std::move(r.t),
                  "ran out of fuel", steps};
        t = std::move(r.t);
        break;
    }
  }
}

TNumeralResult target_read_numeral(TargetTerm t, Strictness str,
                                   std::uint64_t fuel) {
  std::uint64_t n = 0;
  for (;;) {
    TEvalResult r = target_eval(std::move(t), str, fuel);
    if (r.tag == TEvalResult::Tag::Timeout)
      return {TNumeralResult::Tag::Timeout, 0, r.diag};
    if (r.tag == TEvalResult::Tag::Stuck)
      return {TNumeralResult::Tag::Stuck, 0, r.diag};
    fuel = r.steps >= fuel ? 0 : fuel - r.steps;
    if (r.t->kind == TKind::Zero)
      return {TNumeralResult::Tag::Ok, n, {}};
    if (r.t->kind != TKind::Suc)
      return {TNumeralResult::Tag::Stuck, 0, "value is not a numeral"};
    ++n;
    if (str == Strictness::Strict) {
      // Strict evaluation has already forced the predecessor, so the
      // value must be a syntactic numeral.
      TargetTerm w = r.t->a;
      for (;;) {
        if (w->kind == TKind::Zero) return {TNumeralResult::Tag::Ok, n, {}};
        if (w->kind != TKind::Suc)
          return {TNumeralResult::Tag::Stuck, 0, "value is not a numeral"};
        ++n;
        w = w->a;
      }
    }
    t = r.t->a;  // non-strict: resume evaluation under suc
  }
}

}  // namespace gtt
