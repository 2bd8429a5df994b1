#include "gtt/reduce.hpp"

#include <cstdlib>

namespace gtt {

namespace {

StepResult stepped(Term t) {
  StepResult r;
  r.tag = StepResult::Tag::Stepped;
  r.t = std::move(t);
  return r;
}

StepResult whnfed(WhnfKind k, std::uint32_t head = 0) {
  StepResult r;
  r.tag = StepResult::Tag::Whnf;
  r.whnf_kind = k;
  r.head = head;
  return r;
}

StepResult ill(std::string diag) {
  StepResult r;
  r.tag = StepResult::Tag::IllFormed;
  r.diag = std::move(diag);
  return r;
}

}  // namespace

std::uint64_t default_fuel() {
  if (const char* s = std::getenv("GTT_FUEL")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end != s && *end == '\0' && v > 0) return v;
  }
  return 1'000'000;
}

StepResult whnf_step(const Term& t) {
  using Tag = StepResult::Tag;
  switch (t->kind) {
    case Kind::U:
    case Kind::Nat:
    case Kind::Empty:
    case Kind::Unit:
    case Kind::Pi:
    case Kind::Sigma:
      return whnfed(WhnfKind::TypeFormer);
    case Kind::Lam:
      return whnfed(WhnfKind::Lam);
    case Kind::Pair:
      return whnfed(WhnfKind::Pair);
    case Kind::Zero:
      return whnfed(WhnfKind::Zero);
    case Kind::Suc:
      return whnfed(WhnfKind::Suc);
    case Kind::Star:
      return whnfed(WhnfKind::Star);
    case Kind::Var:
      return whnfed(WhnfKind::Neutral, t->var);
    case Kind::Ann:
      return stepped(t->a);  // administrative unwrap
    case Kind::App: {
      StepResult h = whnf_step(t->a);
      if (h.tag == Tag::Stepped) return stepped(mk_app(t->p, h.t, t->b));
      if (h.tag == Tag::IllFormed) return h;
      if (h.whnf_kind == WhnfKind::Neutral) return h;
      if (h.whnf_kind != WhnfKind::Lam)
        return ill("application of a non-function");
      if (t->a->p != t->p)
        return ill("application grade differs from the lambda's");
      return stepped(subst1(t->a->a, t->b));
    }
    case Kind::Fst:
    case Kind::Snd: {
      StepResult h = whnf_step(t->a);
      if (h.tag == Tag::Stepped)
        return stepped(t->kind == Kind::Fst ? mk_fst(t->p, h.t)
                                            : mk_snd(t->p, h.t));
      if (h.tag == Tag::IllFormed) return h;
      if (h.whnf_kind == WhnfKind::Neutral) return h;
      if (h.whnf_kind != WhnfKind::Pair) return ill("projection of a non-pair");
      if (t->a->sk != SigKind::Strong) return ill("projection of a weak pair");
      if (t->a->p != t->p)
        return ill("projection grade differs from the pair's");
      return stepped(t->kind == Kind::Fst ? t->a->a : t->a->b);
    }
    case Kind::Prodrec: {
      StepResult h = whnf_step(t->b);
      if (h.tag == Tag::Stepped)
        return stepped(mk_prodrec(t->r, t->p, t->q, t->a, h.t, t->c));
      if (h.tag == Tag::IllFormed) return h;
      if (h.whnf_kind == WhnfKind::Neutral) return h;
      if (h.whnf_kind != WhnfKind::Pair) return ill("prodrec of a non-pair");
      if (t->b->sk != SigKind::Weak) return ill("prodrec of a strong pair");
      if (t->b->p != t->p)
        return ill("prodrec grade differs from the pair's");
      return stepped(subst2(t->c, t->b->b, t->b->a));
    }
    case Kind::Natrec: {
      StepResult h = whnf_step(t->d);
      if (h.tag == Tag::Stepped)
        return stepped(mk_natrec(t->p, t->q, t->r, t->a, t->b, t->c, h.t));
      if (h.tag == Tag::IllFormed) return h;
      if (h.whnf_kind == WhnfKind::Neutral) return h;
      if (h.whnf_kind == WhnfKind::Zero) return stepped(t->b);
      if (h.whnf_kind == WhnfKind::Suc) {
        Term pred = t->d->a;
        Term rec = mk_natrec(t->p, t->q, t->r, t->a, t->b, t->c, pred);
        return stepped(subst2(t->c, rec, pred));
      }
      return ill("natrec of a non-number");
    }
    case Kind::Emptyrec: {
      StepResult h = whnf_step(t->b);
      if (h.tag == Tag::Stepped)
        return stepped(mk_emptyrec(t->p, t->a, h.t));
      if (h.tag == Tag::IllFormed) return h;
      if (h.whnf_kind == WhnfKind::Neutral) return h;
      return ill("emptyrec of a canonical term");
    }
    case Kind::Unitrec: {
      StepResult h = whnf_step(t->b);
      if (h.tag == Tag::Stepped)
        return stepped(mk_unitrec(t->p, t->q, t->a, h.t, t->c));
      if (h.tag == Tag::IllFormed) return h;
      if (h.whnf_kind == WhnfKind::Neutral) return h;
      if (h.whnf_kind != WhnfKind::Star) return ill("unitrec of a non-star");
      if (t->b->sk != SigKind::Weak) return ill("unitrec of the strong star");
      return stepped(t->c);
    }
  }
  return ill("unreachable term kind");
}

WhnfResult whnf(Term t, std::uint64_t fuel) {
  WhnfResult r;
  for (;;) {
    StepResult s = whnf_step(t);
    switch (s.tag) {
      case StepResult::Tag::Whnf:
        r.tag = WhnfResult::Tag::Ok;
        r.t = std::move(t);
        r.whnf_kind = s.whnf_kind;
        r.head = s.head;
        return r;
      case StepResult::Tag::IllFormed:
        r.tag = WhnfResult::Tag::IllFormed;
        r.t = std::move(t);
        r.diag = std::move(s.diag);
        return r;
      case StepResult::Tag::Stepped:
        if (r.steps == fuel) {
          r.tag = WhnfResult::Tag::Timeout;
          r.t = std::move(t);
          r.diag = "fuel exhausted";
          return r;
        }
        t = std::move(s.t);
        ++r.steps;
        break;
    }
  }
}

NumeralResult read_numeral(const Term& t0, std::uint64_t fuel) {
  NumeralResult out;
  Term t = t0;
  std::uint64_t used = 0;
  for (;;) {
    WhnfResult w = whnf(t, fuel - used);
    used += w.steps;
    if (w.tag == WhnfResult::Tag::Timeout) {
      out.tag = NumeralResult::Tag::Timeout;
      out.diag = "fuel exhausted";
      return out;
    }
    if (w.tag == WhnfResult::Tag::IllFormed) {
      out.tag = NumeralResult::Tag::IllFormed;
      out.diag = w.diag;
      return out;
    }
    switch (w.whnf_kind) {
      case WhnfKind::Zero:
        out.tag = NumeralResult::Tag::Ok;
        return out;
      case WhnfKind::Suc:
        ++out.value;
        t = w.t->a;
        break;
      case WhnfKind::Neutral:
        out.tag = NumeralResult::Tag::Stuck;
        out.head = w.head;
        out.diag = "stuck on a free variable";
        return out;
      default:
        out.tag = NumeralResult::Tag::IllFormed;
        out.diag = "weak-head normal form is not a number";
        return out;
    }
  }
}

}  // namespace gtt
