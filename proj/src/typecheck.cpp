#include "gtt/typecheck.hpp"

namespace gtt {

namespace {

std::string with_span(const Term& at, const std::string& msg) {
  if (at && at->line > 0)
    return std::to_string(at->line) + ":" + std::to_string(at->col) + ": " + msg;
  return msg;
}

// Substitution sending the bound variable of a natrec motive to `suc var1`
// inside the successor branch's two-variable scope.
Subst suc_motive_subst(std::uint32_t n) {
  return Subst{n + 1, n + 2, {mk_suc(mk_var(n + 2, 1))}, Wk{n, n + 2, {0, 0}}};
}

// Likewise for a prodrec motive: the scrutinee becomes the re-paired
// components inside the branch's two-variable scope.
Subst pair_motive_subst(std::uint32_t n, Grade p) {
  Term pr = mk_pair(SigKind::Weak, p, mk_var(n + 2, 1), mk_var(n + 2, 0));
  return Subst{n + 1, n + 2, {pr}, Wk{n, n + 2, {0, 0}}};
}

struct CtxGuard {
  TypingCtx& ctx;
  std::size_t n;
  CtxGuard(TypingCtx& c, Term entry) : ctx(c), n(c.size()) {
    ctx.push_back(std::move(entry));
  }
  CtxGuard(TypingCtx& c, Term e1, Term e2) : ctx(c), n(c.size()) {
    ctx.push_back(std::move(e1));
    ctx.push_back(std::move(e2));
  }
  ~CtxGuard() { ctx.resize(n); }
};

}  // namespace

TypeError::TypeError(Kind k, const Term& at, const std::string& msg, Term want,
                     Term got)
    : std::runtime_error(with_span(at, msg)),
      kind(k),
      line(at ? at->line : 0),
      col(at ? at->col : 0),
      expected(std::move(want)),
      actual(std::move(got)) {}

const char* type_error_kind_name(TypeError::Kind k) {
  switch (k) {
    case TypeError::Kind::Mismatch: return "mismatch";
    case TypeError::Kind::NotAFunction: return "not-a-function";
    case TypeError::Kind::NotAPair: return "not-a-pair";
    case TypeError::Kind::IllegalProjection: return "illegal-projection";
    case TypeError::Kind::Universe: return "universe";
    case TypeError::Kind::Unbound: return "unbound";
    case TypeError::Kind::GradeAnnotationMismatch:
      return "grade-annotation-mismatch";
    case TypeError::Kind::RestrictionViolation: return "restriction-violation";
    case TypeError::Kind::FuelExhausted: return "fuel-exhausted";
  }
  return "unknown";
}

Term ctx_lookup(const TypingCtx& ctx, const Term& at, std::uint32_t i) {
  if (i >= ctx.size())
    throw TypeError(TypeError::Kind::Unbound, at,
                    "variable " + std::to_string(i) + " is not in scope");
  return wk_by(i + 1, ctx[ctx.size() - 1 - i]);
}

Checker::Checker(CheckConfig cfg)
    : cfg_(cfg), fuel_(cfg.fuel ? cfg.fuel : default_fuel()) {}

Term Checker::whnf_or_throw(const Term& t) const {
  WhnfResult w = whnf(t, fuel_);
  if (w.tag == WhnfResult::Tag::Ok) return w.t;
  if (w.tag == WhnfResult::Tag::Timeout)
    throw TypeError(TypeError::Kind::FuelExhausted, t,
                    "ran out of fuel reducing to weak-head normal form");
  throw TypeError(TypeError::Kind::Mismatch, t,
                  "term has no weak-head normal form: " + w.diag);
}

void Checker::require_pi_sigma_allowed(const Term& at) const {
  if (cfg_.pi_sigma_equal_grades && at->p != at->q)
    throw TypeError(TypeError::Kind::RestrictionViolation, at,
                    "function/pair types must carry equal grades under the "
                    "current configuration");
}

void Checker::check_type(TypingCtx& ctx, const Term& A) const {
  switch (A->kind) {
    case Kind::U:
    case Kind::Nat:
    case Kind::Empty:
    case Kind::Unit:
      return;
    case Kind::Pi:
    case Kind::Sigma: {
      require_pi_sigma_allowed(A);
      check_type(ctx, A->a);
      CtxGuard g(ctx, A->a);
      check_type(ctx, A->b);
      return;
    }
    default: {
      Term T = infer_type(ctx, A);
      Term W = whnf_or_throw(T);
      if (W->kind != Kind::U)
        throw TypeError(TypeError::Kind::Universe, A,
                        "not a type: its type is not the universe",
                        mk_u(static_cast<std::uint32_t>(ctx.size())), T);
      return;
    }
  }
}

Term Checker::infer_type(TypingCtx& ctx, const Term& t) const {
  std::uint32_t n = static_cast<std::uint32_t>(ctx.size());
  if (t->scope != n)
    throw TypeError(TypeError::Kind::Unbound, t,
                    "term scope does not match the context length");
  switch (t->kind) {
    case Kind::Var:
      return ctx_lookup(ctx, t, t->var);
    case Kind::U:
      throw TypeError(TypeError::Kind::Universe, t,
                      "the universe is not an element of any type");
    case Kind::Nat:
    case Kind::Empty:
    case Kind::Unit:
      return mk_u(n);
    case Kind::Pi:
    case Kind::Sigma: {
      require_pi_sigma_allowed(t);
      check_term(ctx, t->a, mk_u(n));
      CtxGuard g(ctx, t->a);
      check_term(ctx, t->b, mk_u(n + 1));
      return mk_u(n);
    }
    case Kind::Lam:
      throw TypeError(TypeError::Kind::Mismatch, t,
                      "cannot infer the type of a bare lambda; ascribe it");
    case Kind::Pair:
      throw TypeError(TypeError::Kind::Mismatch, t,
                      "cannot infer the type of a bare pair; ascribe it");
    case Kind::App: {
      Term T = infer_type(ctx, t->a);
      Term W = whnf_or_throw(T);
      if (W->kind != Kind::Pi)
        throw TypeError(TypeError::Kind::NotAFunction, t,
                        "application of a non-function", {}, T);
      if (W->p != t->p)
        throw TypeError(TypeError::Kind::GradeAnnotationMismatch, t,
                        "application grade differs from the function type's",
                        W, {});
      check_term(ctx, t->b, W->a);
      return subst1(W->b, t->b);
    }
    case Kind::Fst:
    case Kind::Snd: {
      Term T = infer_type(ctx, t->a);
      Term W = whnf_or_throw(T);
      if (W->kind != Kind::Sigma)
        throw TypeError(TypeError::Kind::NotAPair, t,
                        "projection from a non-pair", {}, T);
      if (W->sk != SigKind::Strong)
        throw TypeError(TypeError::Kind::IllegalProjection, t,
                        "projections need a strong pair type", W, {});
      if (W->p != t->p)
        throw TypeError(TypeError::Kind::GradeAnnotationMismatch, t,
                        "projection grade differs from the pair type's", W, {});
      if (t->kind == Kind::Fst) return W->a;
      return subst1(W->b, mk_fst(t->p, t->a));
    }
    case Kind::Prodrec: {
      Term T = infer_type(ctx, t->b);
      Term W = whnf_or_throw(T);
      if (W->kind != Kind::Sigma)
        throw TypeError(TypeError::Kind::NotAPair, t,
                        "prodrec scrutinee is not a pair", {}, T);
      if (W->sk != SigKind::Weak)
        throw TypeError(TypeError::Kind::IllegalProjection, t,
                        "prodrec needs a weak pair type", W, {});
      if (W->p != t->p)
        throw TypeError(TypeError::Kind::GradeAnnotationMismatch, t,
                        "prodrec grade differs from the pair type's", W, {});
      {
        CtxGuard g(ctx, W);
        check_type(ctx, t->a);
      }
      {
        CtxGuard g(ctx, W->a, W->b);
        check_term(ctx, t->c, subst_term(pair_motive_subst(n, W->p), t->a));
      }
      return subst1(t->a, t->b);
    }
    case Kind::Zero:
      return mk_nat(n);
    case Kind::Suc:
      check_term(ctx, t->a, mk_nat(n));
      return mk_nat(n);
    case Kind::Natrec: {
      {
        CtxGuard g(ctx, mk_nat(n));
        check_type(ctx, t->a);
      }
      check_term(ctx, t->b, subst1(t->a, mk_zero(n)));
      {
        CtxGuard g(ctx, mk_nat(n), t->a);
        check_term(ctx, t->c, subst_term(suc_motive_subst(n), t->a));
      }
      check_term(ctx, t->d, mk_nat(n));
      return subst1(t->a, t->d);
    }
    case Kind::Emptyrec: {
      check_type(ctx, t->a);
      check_term(ctx, t->b, mk_empty(n));
      return t->a;
    }
    case Kind::Star:
      return mk_unit(t->sk, n);
    case Kind::Unitrec: {
      check_term(ctx, t->b, mk_unit(SigKind::Weak, n));
      {
        CtxGuard g(ctx, mk_unit(SigKind::Weak, n));
        check_type(ctx, t->a);
      }
      check_term(ctx, t->c, subst1(t->a, mk_star(SigKind::Weak, n)));
      return subst1(t->a, t->b);
    }
    case Kind::Ann: {
      check_type(ctx, t->b);
      check_term(ctx, t->a, t->b);
      return t->b;
    }
  }
  throw TypeError(TypeError::Kind::Mismatch, t, "unreachable term kind");
}

void Checker::check_term(TypingCtx& ctx, const Term& t, const Term& A) const {
  std::uint32_t n = static_cast<std::uint32_t>(ctx.size());
  if (t->scope != n)
    throw TypeError(TypeError::Kind::Unbound, t,
                    "term scope does not match the context length");
  Term W = whnf_or_throw(A);
  switch (t->kind) {
    case Kind::Lam: {
      if (W->kind != Kind::Pi)
        throw TypeError(TypeError::Kind::Mismatch, t,
                        "a lambda checks only against a function type", W, {});
      if (W->p != t->p)
        throw TypeError(TypeError::Kind::GradeAnnotationMismatch, t,
                        "lambda grade differs from the function type's", W,
                        {});
      CtxGuard g(ctx, W->a);
      check_term(ctx, t->a, W->b);
      return;
    }
    case Kind::Pair: {
      if (W->kind != Kind::Sigma || W->sk != t->sk)
        throw TypeError(TypeError::Kind::Mismatch, t,
                        "a pair checks only against a matching pair type", W,
                        {});
      if (W->p != t->p)
        throw TypeError(TypeError::Kind::GradeAnnotationMismatch, t,
                        "pair grade differs from the pair type's", W, {});
      check_term(ctx, t->a, W->a);
      check_term(ctx, t->b, subst1(W->b, t->a));
      return;
    }
    default: {
      Term T = infer_type(ctx, t);
      conv_type(ctx, T, W);
      return;
    }
  }
}

void Checker::conv_type(TypingCtx& ctx, const Term& A, const Term& B) const {
  Term WA = whnf_or_throw(A);
  Term WB = whnf_or_throw(B);
  auto mismatch = [&](const char* msg) {
    return TypeError(TypeError::Kind::Mismatch, WA, msg, WB, WA);
  };
  switch (WA->kind) {
    case Kind::U:
    case Kind::Nat:
    case Kind::Empty:
      if (WB->kind != WA->kind) throw mismatch("types differ");
      return;
    case Kind::Unit:
      if (WB->kind != Kind::Unit || WB->sk != WA->sk)
        throw mismatch("types differ");
      return;
    case Kind::Pi:
    case Kind::Sigma: {
      if (WB->kind != WA->kind || WB->sk != WA->sk)
        throw mismatch("types differ");
      if (WB->p != WA->p || WB->q != WA->q)
        throw mismatch("type grades differ");
      conv_type(ctx, WA->a, WB->a);
      CtxGuard g(ctx, WA->a);
      conv_type(ctx, WA->b, WB->b);
      return;
    }
    default: {
      StepResult sa = whnf_step(WA), sb = whnf_step(WB);
      if (sa.tag == StepResult::Tag::Whnf &&
          sa.whnf_kind == WhnfKind::Neutral &&
          sb.tag == StepResult::Tag::Whnf &&
          sb.whnf_kind == WhnfKind::Neutral) {
        conv_ne(ctx, WA, WB);
        return;
      }
      throw mismatch("types differ");
    }
  }
}

void Checker::conv_term(TypingCtx& ctx, const Term& t, const Term& u,
                        const Term& A) const {
  std::uint32_t n = static_cast<std::uint32_t>(ctx.size());
  Term W = whnf_or_throw(A);
  auto mismatch = [&](const Term& a, const Term& b) {
    return TypeError(TypeError::Kind::Mismatch, a, "terms differ", b, a);
  };
  switch (W->kind) {
    case Kind::Pi: {
      // Eta: compare applications to a fresh variable.
      CtxGuard g(ctx, W->a);
      Term vt = mk_app(W->p, wk_by(1, t), mk_var(n + 1, 0));
      Term vu = mk_app(W->p, wk_by(1, u), mk_var(n + 1, 0));
      conv_term(ctx, vt, vu, W->b);
      return;
    }
    case Kind::Sigma: {
      if (W->sk == SigKind::Strong) {
        // Eta: compare both projections.
        Term ft = mk_fst(W->p, t), fu = mk_fst(W->p, u);
        conv_term(ctx, ft, fu, W->a);
        conv_term(ctx, mk_snd(W->p, t), mk_snd(W->p, u), subst1(W->b, ft));
        return;
      }
      Term wt = whnf_or_throw(t), wu = whnf_or_throw(u);
      if (wt->kind == Kind::Pair && wu->kind == Kind::Pair) {
        if (wt->p != wu->p) throw mismatch(wt, wu);
        conv_term(ctx, wt->a, wu->a, W->a);
        conv_term(ctx, wt->b, wu->b, subst1(W->b, wt->a));
        return;
      }
      if (wt->kind == Kind::Pair || wu->kind == Kind::Pair)
        throw mismatch(wt, wu);
      conv_ne(ctx, wt, wu);
      return;
    }
    case Kind::Unit: {
      if (W->sk == SigKind::Strong) return;  // eta: all inhabitants equal
      Term wt = whnf_or_throw(t), wu = whnf_or_throw(u);
      if (wt->kind == Kind::Star && wu->kind == Kind::Star) return;
      if (wt->kind == Kind::Star || wu->kind == Kind::Star)
        throw mismatch(wt, wu);
      conv_ne(ctx, wt, wu);
      return;
    }
    case Kind::U:
      conv_type(ctx, t, u);
      return;
    case Kind::Nat: {
      Term wt = whnf_or_throw(t), wu = whnf_or_throw(u);
      if (wt->kind == Kind::Zero && wu->kind == Kind::Zero) return;
      if (wt->kind == Kind::Suc && wu->kind == Kind::Suc) {
        conv_term(ctx, wt->a, wu->a, mk_nat(n));
        return;
      }
      if ((wt->kind == Kind::Zero || wt->kind == Kind::Suc) ||
          (wu->kind == Kind::Zero || wu->kind == Kind::Suc))
        throw mismatch(wt, wu);
      conv_ne(ctx, wt, wu);
      return;
    }
    case Kind::Empty: {
      Term wt = whnf_or_throw(t), wu = whnf_or_throw(u);
      conv_ne(ctx, wt, wu);
      return;
    }
    default: {
      // Neutral type: inhabitants can only be neutral.
      Term wt = whnf_or_throw(t), wu = whnf_or_throw(u);
      conv_ne(ctx, wt, wu);
      return;
    }
  }
}

// Compare two weak-head-neutral terms head-and-spine, returning their common
// type.  Spine arguments are compared at the types dictated by the head.
Term Checker::conv_ne(TypingCtx& ctx, const Term& t, const Term& u) const {
  std::uint32_t n = static_cast<std::uint32_t>(ctx.size());
  auto mismatch = [&](const char* msg) {
    return TypeError(TypeError::Kind::Mismatch, t, msg, u, t);
  };
  if (t->kind != u->kind) throw mismatch("neutral terms differ");
  switch (t->kind) {
    case Kind::Var:
      if (t->var != u->var) throw mismatch("variables differ");
      return ctx_lookup(ctx, t, t->var);
    case Kind::App: {
      if (t->p != u->p) throw mismatch("application grades differ");
      Term T = conv_ne(ctx, t->a, u->a);
      Term W = whnf_or_throw(T);
      if (W->kind != Kind::Pi)
        throw TypeError(TypeError::Kind::NotAFunction, t,
                        "application of a non-function", {}, T);
      conv_term(ctx, t->b, u->b, W->a);
      return subst1(W->b, t->b);
    }
    case Kind::Fst:
    case Kind::Snd: {
      if (t->p != u->p) throw mismatch("projection grades differ");
      Term T = conv_ne(ctx, t->a, u->a);
      Term W = whnf_or_throw(T);
      if (W->kind != Kind::Sigma)
        throw TypeError(TypeError::Kind::NotAPair, t,
                        "projection from a non-pair", {}, T);
      if (t->kind == Kind::Fst) return W->a;
      return subst1(W->b, mk_fst(t->p, t->a));
    }
    case Kind::Prodrec: {
      if (t->r != u->r || t->p != u->p || t->q != u->q)
        throw mismatch("prodrec grades differ");
      Term T = conv_ne(ctx, t->b, u->b);
      Term W = whnf_or_throw(T);
      if (W->kind != Kind::Sigma)
        throw TypeError(TypeError::Kind::NotAPair, t,
                        "prodrec scrutinee is not a pair", {}, T);
      {
        CtxGuard g(ctx, W);
        conv_type(ctx, t->a, u->a);
      }
      {
        CtxGuard g(ctx, W->a, W->b);
        conv_term(ctx, t->c, u->c,
                  subst_term(pair_motive_subst(n, W->p), t->a));
      }
      return subst1(t->a, t->b);
    }
    case Kind::Natrec: {
      if (t->p != u->p || t->q != u->q || t->r != u->r)
        throw mismatch("natrec grades differ");
      {
        CtxGuard g(ctx, mk_nat(n));
        conv_type(ctx, t->a, u->a);
      }
      conv_term(ctx, t->b, u->b, subst1(t->a, mk_zero(n)));
      {
        CtxGuard g(ctx, mk_nat(n), t->a);
        conv_term(ctx, t->c, u->c, subst_term(suc_motive_subst(n), t->a));
      }
      conv_term(ctx, t->d, u->d, mk_nat(n));
      return subst1(t->a, t->d);
    }
    case Kind::Emptyrec: {
      if (t->p != u->p) throw mismatch("emptyrec grades differ");
      conv_type(ctx, t->a, u->a);
      conv_term(ctx, t->b, u->b, mk_empty(n));
      return t->a;
    }
    case Kind::Unitrec: {
      if (t->p != u->p || t->q != u->q) throw mismatch("unitrec grades differ");
      conv_term(ctx, t->b, u->b, mk_unit(SigKind::Weak, n));
      {
        CtxGuard g(ctx, mk_unit(SigKind::Weak, n));
        conv_type(ctx, t->a, u->a);
      }
      conv_term(ctx, t->c, u->c, subst1(t->a, mk_star(SigKind::Weak, n)));
      return subst1(t->a, t->b);
    }
    default:
      throw mismatch("not a neutral term");
  }
}

}  // namespace gtt
