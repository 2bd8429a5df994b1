#include "gtt/syntax.hpp"

#include <stdexcept>

namespace gtt {
namespace {

[[noreturn]] void scope_error(const char* what) {
  throw std::logic_error(std::string("scope mismatch in ") + what);
}

void need(bool ok, const char* what) {
  if (!ok) scope_error(what);
}

Term node(TermNode n) { return std::make_shared<const TermNode>(std::move(n)); }
TargetTerm tnode(TargetNode n) {
  return std::make_shared<const TargetNode>(std::move(n));
}

}  // namespace

Term mk_u(std::uint32_t s) { return node({Kind::U, {}, 0, 0, 0, 0, s}); }
Term mk_nat(std::uint32_t s) { return node({Kind::Nat, {}, 0, 0, 0, 0, s}); }
Term mk_empty(std::uint32_t s) { return node({Kind::Empty, {}, 0, 0, 0, 0, s}); }
Term mk_unit(SigKind k, std::uint32_t s) {
  return node({Kind::Unit, k, 0, 0, 0, 0, s});
}

Term mk_pi(Grade p, Grade q, Term A, Term B) {
  need(B->scope == A->scope + 1, "pi");
  TermNode n{Kind::Pi, {}, p, q, 0, 0, A->scope};
  n.a = std::move(A);
  n.b = std::move(B);
  return node(std::move(n));
}

Term mk_sigma(SigKind k, Grade p, Grade q, Term A, Term B) {
  need(B->scope == A->scope + 1, "sigma");
  TermNode n{Kind::Sigma, k, p, q, 0, 0, A->scope};
  n.a = std::move(A);
  n.b = std::move(B);
  return node(std::move(n));
}

Term mk_var(std::uint32_t scope, std::uint32_t i) {
  need(i < scope, "var");
  return node({Kind::Var, {}, 0, 0, 0, i, scope});
}

Term mk_lam(Grade p, Term t) {
  need(t->scope >= 1, "lam");
  TermNode n{Kind::Lam, {}, p, 0, 0, 0, t->scope - 1};
  n.a = std::move(t);
  return node(std::move(n));
}

Term mk_app(Grade p, Term t, Term u) {
  need(t->scope == u->scope, "app");
  TermNode n{Kind::App, {}, p, 0, 0, 0, t->scope};
  n.a = std::move(t);
  n.b = std::move(u);
  return node(std::move(n));
}

Term mk_pair(SigKind k, Grade p, Term t, Term u) {
  need(t->scope == u->scope, "pair");
  TermNode n{Kind::Pair, k, p, 0, 0, 0, t->scope};
  n.a = std::move(t);
  n.b = std::move(u);
  return node(std::move(n));
}

Term mk_fst(Grade p, Term t) {
  TermNode n{Kind::Fst, {}, p, 0, 0, 0, t->scope};
  n.a = std::move(t);
  return node(std::move(n));
}

Term mk_snd(Grade p, Term t) {
  TermNode n{Kind::Snd, {}, p, 0, 0, 0, t->scope};
  n.a = std::move(t);
  return node(std::move(n));
}

Term mk_prodrec(Grade r, Grade p, Grade q, Term A, Term t, Term u) {
  need(A->scope == t->scope + 1 && u->scope == t->scope + 2, "prodrec");
  TermNode n{Kind::Prodrec, {}, p, q, r, 0, t->scope};
  n.a = std::move(A);
  n.b = std::move(t);
  n.c = std::move(u);
  return node(std::move(n));
}

Term mk_zero(std::uint32_t s) { return node({Kind::Zero, {}, 0, 0, 0, 0, s}); }

Term mk_suc(Term t) {
  TermNode n{Kind::Suc, {}, 0, 0, 0, 0, t->scope};
  n.a = std::move(t);
  return node(std::move(n));
}

Term mk_natrec(Grade p, Grade q, Grade r, Term A, Term z, Term s, Term n0) {
  need(A->scope == n0->scope + 1 && z->scope == n0->scope &&
           s->scope == n0->scope + 2,
       "natrec");
  TermNode n{Kind::Natrec, {}, p, q, r, 0, n0->scope};
  n.a = std::move(A);
  n.b = std::move(z);
  n.c = std::move(s);
  n.d = std::move(n0);
  return node(std::move(n));
}

Term mk_emptyrec(Grade p, Term A, Term t) {
  need(A->scope == t->scope, "emptyrec");
  TermNode n{Kind::Emptyrec, {}, p, 0, 0, 0, t->scope};
  n.a = std::move(A);
  n.b = std::move(t);
  return node(std::move(n));
}

Term mk_star(SigKind k, std::uint32_t s) {
  return node({Kind::Star, k, 0, 0, 0, 0, s});
}

Term mk_unitrec(Grade p, Grade q, Term A, Term t, Term u) {
  need(A->scope == t->scope + 1 && u->scope == t->scope, "unitrec");
  TermNode n{Kind::Unitrec, {}, p, q, 0, 0, t->scope};
  n.a = std::move(A);
  n.b = std::move(t);
  n.c = std::move(u);
  return node(std::move(n));
}

Term mk_ann(Term t, Term A) {
  need(t->scope == A->scope, "ann");
  TermNode n{Kind::Ann, {}, 0, 0, 0, 0, t->scope};
  n.a = std::move(t);
  n.b = std::move(A);
  return node(std::move(n));
}

Term mk_num(std::uint32_t scope, std::uint64_t k) {
  Term t = mk_zero(scope);
  for (std::uint64_t i = 0; i < k; ++i) t = mk_suc(std::move(t));
  return t;
}

Term at_span(Term t, std::uint32_t line, std::uint32_t col) {
  TermNode n = *t;
  n.line = line;
  n.col = col;
  return node(std::move(n));
}

bool alpha_eq(const Term& a, const Term& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->sk != b->sk || a->p != b->p || a->q != b->q ||
      a->r != b->r || a->var != b->var || a->scope != b->scope)
    return false;
  for (auto sel : {&TermNode::a, &TermNode::b, &TermNode::c, &TermNode::d}) {
    const Term &x = (*a).*sel, &y = (*b).*sel;
    if (static_cast<bool>(x) != static_cast<bool>(y)) return false;
    if (x && !alpha_eq(x, y)) return false;
  }
  return true;
}

Wk wk_id(std::uint32_t n) { return Wk{n, n, {}}; }

Wk wk_step(Wk w) {
  ++w.tgt;
  w.ops.push_back(0);
  return w;
}

Wk wk_lift(Wk w) {
  ++w.src;
  ++w.tgt;
  w.ops.push_back(1);
  return w;
}

std::uint32_t wk_var(const Wk& w, std::uint32_t i) {
  std::uint32_t add = 0;
  for (auto it = w.ops.rbegin(); it != w.ops.rend(); ++it) {
    if (*it == 0) {  // step
      ++add;
    } else {  // lift
      if (i == 0) return add;
      --i;
      ++add;
    }
  }
  return i + add;
}

namespace {

// Generic traversal: rebuilds t with `leaf` applied to variables and `under`
// tracking binders.  Used by both weakening and substitution.
template <class Env, class Leaf, class Under>
Term map_term(const Env& env, const Term& t, std::uint32_t tgt, Leaf leaf,
              Under under) {
  switch (t->kind) {
    case Kind::Var:
      return leaf(env, t->var);
    case Kind::U:
      return mk_u(tgt);
    case Kind::Nat:
      return mk_nat(tgt);
    case Kind::Empty:
      return mk_empty(tgt);
    case Kind::Unit:
      return mk_unit(t->sk, tgt);
    case Kind::Zero:
      return mk_zero(tgt);
    case Kind::Star:
      return mk_star(t->sk, tgt);
    default:
      break;
  }
  Env env1 = under(env);
  Env env2 = under(env1);
  auto go = [&](const Env& e, const Term& u, std::uint32_t tg) {
    return map_term(e, u, tg, leaf, under);
  };
  switch (t->kind) {
    case Kind::Pi:
      return mk_pi(t->p, t->q, go(env, t->a, tgt), go(env1, t->b, tgt + 1));
    case Kind::Sigma:
      return mk_sigma(t->sk, t->p, t->q, go(env, t->a, tgt),
                      go(env1, t->b, tgt + 1));
    case Kind::Lam:
      return mk_lam(t->p, go(env1, t->a, tgt + 1));
    case Kind::App:
      return mk_app(t->p, go(env, t->a, tgt), go(env, t->b, tgt));
    case Kind::Pair:
      return mk_pair(t->sk, t->p, go(env, t->a, tgt), go(env, t->b, tgt));
    case Kind::Fst:
      return mk_fst(t->p, go(env, t->a, tgt));
    case Kind::Snd:
      return mk_snd(t->p, go(env, t->a, tgt));
    case Kind::Prodrec:
      return mk_prodrec(t->r, t->p, t->q, go(env1, t->a, tgt + 1),
                        go(env, t->b, tgt), go(env2, t->c, tgt + 2));
    case Kind::Suc:
      return mk_suc(go(env, t->a, tgt));
    case Kind::Natrec:
      return mk_natrec(t->p, t->q, t->r, go(env1, t->a, tgt + 1),
                       go(env, t->b, tgt), go(env2, t->c, tgt + 2),
                       go(env, t->d, tgt));
    case Kind::Emptyrec:
      return mk_emptyrec(t->p, go(env, t->a, tgt), go(env, t->b, tgt));
    case Kind::Unitrec:
      return mk_unitrec(t->p, t->q, go(env1, t->a, tgt + 1),
                        go(env, t->b, tgt), go(env, t->c, tgt));
    case Kind::Ann:
      return mk_ann(go(env, t->a, tgt), go(env, t->b, tgt));
    default:
      scope_error("map_term");
  }
}

}  // namespace

Term wk_term(const Wk& w, const Term& t) {
  need(t->scope == w.src, "wk_term");
  if (w.ops.empty()) return t;
  return map_term(
      w, t, w.tgt,
      [](const Wk& e, std::uint32_t i) { return mk_var(e.tgt, wk_var(e, i)); },
      [](const Wk& e) { return wk_lift(e); });
}

Term wk_by(std::uint32_t k, const Term& t) {
  Wk w = wk_id(t->scope);
  for (std::uint32_t i = 0; i < k; ++i) w = wk_step(std::move(w));
  return wk_term(w, t);
}

Subst subst_id(std::uint32_t n) { return Subst{n, n, {}, wk_id(n)}; }

Subst subst_cons(Subst s, Term t) {
  need(t->scope == s.tgt, "subst_cons");
  ++s.src;
  s.head.insert(s.head.begin(), std::move(t));
  return s;
}

Subst subst_lift(Subst s) {
  Wk up = wk_step(wk_id(s.tgt));
  for (Term& t : s.head) t = wk_term(up, t);
  s.head.insert(s.head.begin(), mk_var(s.tgt + 1, 0));
  s.prefix = wk_step(std::move(s.prefix));
  ++s.src;
  ++s.tgt;
  return s;
}

Term subst_var(const Subst& s, std::uint32_t i) {
  if (i < s.head.size()) return s.head[i];
  return mk_var(s.tgt, wk_var(s.prefix, i - static_cast<std::uint32_t>(s.head.size())));
}

Term subst_term(const Subst& s, const Term& t) {
  need(t->scope == s.src, "subst_term");
  return map_term(
      s, t, s.tgt,
      [](const Subst& e, std::uint32_t i) { return subst_var(e, i); },
      [](const Subst& e) { return subst_lift(e); });
}

Term subst1(const Term& t, const Term& u) {
  return subst_term(subst_cons(subst_id(u->scope), u), t);
}

Term subst2(const Term& t, const Term& x0, const Term& x1) {
  return subst_term(subst_cons(subst_cons(subst_id(x0->scope), x1), x0), t);
}

// ---------------------------------------------------------------------------
// Target terms.

TargetTerm tt_var(std::uint32_t scope, std::uint32_t i) {
  need(i < scope, "tvar");
  return tnode({TKind::Var, i, scope});
}

TargetTerm tt_lam(TargetTerm t) {
  need(t->scope >= 1, "tlam");
  TargetNode n{TKind::Lam, 0, t->scope - 1};
  n.a = std::move(t);
  return tnode(std::move(n));
}

TargetTerm tt_app(TargetTerm t, TargetTerm u) {
  need(t->scope == u->scope, "tapp");
  TargetNode n{TKind::App, 0, t->scope};
  n.a = std::move(t);
  n.b = std::move(u);
  return tnode(std::move(n));
}

TargetTerm tt_pair(TargetTerm t, TargetTerm u) {
  need(t->scope == u->scope, "tpair");
  TargetNode n{TKind::Pair, 0, t->scope};
  n.a = std::move(t);
  n.b = std::move(u);
  return tnode(std::move(n));
}

TargetTerm tt_fst(TargetTerm t) {
  TargetNode n{TKind::Fst, 0, t->scope};
  n.a = std::move(t);
  return tnode(std::move(n));
}

TargetTerm tt_snd(TargetTerm t) {
  TargetNode n{TKind::Snd, 0, t->scope};
  n.a = std::move(t);
  return tnode(std::move(n));
}

TargetTerm tt_prodrec(TargetTerm t, TargetTerm u) {
  need(u->scope == t->scope + 2, "tprodrec");
  TargetNode n{TKind::Prodrec, 0, t->scope};
  n.a = std::move(t);
  n.b = std::move(u);
  return tnode(std::move(n));
}

TargetTerm tt_zero(std::uint32_t s) { return tnode({TKind::Zero, 0, s}); }

TargetTerm tt_suc(TargetTerm t) {
  TargetNode n{TKind::Suc, 0, t->scope};
  n.a = std::move(t);
  return tnode(std::move(n));
}

TargetTerm tt_natrec(TargetTerm z, TargetTerm s, TargetTerm n0) {
  need(z->scope == n0->scope && s->scope == n0->scope + 2, "tnatrec");
  TargetNode n{TKind::Natrec, 0, n0->scope};
  n.a = std::move(z);
  n.b = std::move(s);
  n.c = std::move(n0);
  return tnode(std::move(n));
}

TargetTerm tt_unitrec(TargetTerm t, TargetTerm u) {
  need(t->scope == u->scope, "tunitrec");
  TargetNode n{TKind::Unitrec, 0, t->scope};
  n.a = std::move(t);
  n.b = std::move(u);
  return tnode(std::move(n));
}

TargetTerm tt_star(std::uint32_t s) { return tnode({TKind::Star, 0, s}); }
TargetTerm tt_undef(std::uint32_t s) { return tnode({TKind::Undef, 0, s}); }

TargetTerm tt_loop(std::uint32_t s) {
  TargetTerm self = tt_lam(tt_app(tt_var(s + 1, 0), tt_var(s + 1, 0)));
  return tt_app(self, self);
}

TargetTerm tt_num(std::uint32_t scope, std::uint64_t k) {
  TargetTerm t = tt_zero(scope);
  for (std::uint64_t i = 0; i < k; ++i) t = tt_suc(std::move(t));
  return t;
}

bool target_eq(const TargetTerm& a, const TargetTerm& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->var != b->var || a->scope != b->scope)
    return false;
  for (auto sel : {&TargetNode::a, &TargetNode::b, &TargetNode::c}) {
    const TargetTerm &x = (*a).*sel, &y = (*b).*sel;
    if (static_cast<bool>(x) != static_cast<bool>(y)) return false;
    if (x && !target_eq(x, y)) return false;
  }
  return true;
}

Wk twk_id(std::uint32_t n) { return wk_id(n); }

namespace {

template <class Env, class Leaf, class Under>
TargetTerm map_target(const Env& env, const TargetTerm& t, std::uint32_t tgt,
                      Leaf leaf, Under under) {
  switch (t->kind) {
    case TKind::Var:
      return leaf(env, t->var);
    case TKind::Zero:
      return tt_zero(tgt);
    case TKind::Star:
      return tt_star(tgt);
    case TKind::Undef:
      return tt_undef(tgt);
    default:
      break;
  }
  Env env1 = under(env);
  Env env2 = under(env1);
  auto go = [&](const Env& e, const TargetTerm& u, std::uint32_t tg) {
    return map_target(e, u, tg, leaf, under);
  };
  switch (t->kind) {
    case TKind::Lam:
      return tt_lam(go(env1, t->a, tgt + 1));
    case TKind::App:
      return tt_app(go(env, t->a, tgt), go(env, t->b, tgt));
    case TKind::Pair:
      return tt_pair(go(env, t->a, tgt), go(env, t->b, tgt));
    case TKind::Fst:
      return tt_fst(go(env, t->a, tgt));
    case TKind::Snd:
      return tt_snd(go(env, t->a, tgt));
    case TKind::Prodrec:
      return tt_prodrec(go(env, t->a, tgt), go(env2, t->b, tgt + 2));
    case TKind::Suc:
      return tt_suc(go(env, t->a, tgt));
    case TKind::Natrec:
      return tt_natrec(go(env, t->a, tgt), go(env2, t->b, tgt + 2),
                       go(env, t->c, tgt));
    case TKind::Unitrec:
      return tt_unitrec(go(env, t->a, tgt), go(env, t->b, tgt));
    default:
      scope_error("map_target");
  }
}

}  // namespace

TargetTerm twk_term(const Wk& w, const TargetTerm& t) {
  need(t->scope == w.src, "twk_term");
  if (w.ops.empty()) return t;
  return map_target(
      w, t, w.tgt,
      [](const Wk& e, std::uint32_t i) { return tt_var(e.tgt, wk_var(e, i)); },
      [](const Wk& e) { return wk_lift(e); });
}

TargetTerm twk_by(std::uint32_t k, const TargetTerm& t) {
  Wk w = wk_id(t->scope);
  for (std::uint32_t i = 0; i < k; ++i) w = wk_step(std::move(w));
  return twk_term(w, t);
}

TSubst tsubst_id(std::uint32_t n) { return TSubst{n, n, {}, wk_id(n)}; }

TSubst tsubst_cons(TSubst s, TargetTerm t) {
  need(t->scope == s.tgt, "tsubst_cons");
  ++s.src;
  s.head.insert(s.head.begin(), std::move(t));
  return s;
}

TSubst tsubst_lift(TSubst s) {
  Wk up = wk_step(wk_id(s.tgt));
  for (TargetTerm& t : s.head) t = twk_term(up, t);
  s.head.insert(s.head.begin(), tt_var(s.tgt + 1, 0));
  s.prefix = wk_step(std::move(s.prefix));
  ++s.src;
  ++s.tgt;
  return s;
}

TargetTerm tsubst_var(const TSubst& s, std::uint32_t i) {
  if (i < s.head.size()) return s.head[i];
  return tt_var(s.tgt, wk_var(s.prefix, i - static_cast<std::uint32_t>(s.head.size())));
}

TargetTerm tsubst_term(const TSubst& s, const TargetTerm& t) {
  need(t->scope == s.src, "tsubst_term");
  return map_target(
      s, t, s.tgt,
      [](const TSubst& e, std::uint32_t i) { return tsubst_var(e, i); },
      [](const TSubst& e) { return tsubst_lift(e); });
}

TargetTerm tsubst1(const TargetTerm& t, const TargetTerm& u) {
  return tsubst_term(tsubst_cons(tsubst_id(u->scope), u), t);
}

TargetTerm tsubst2(const TargetTerm& t, const TargetTerm& x0, const TargetTerm& x1) {
  return tsubst_term(tsubst_cons(tsubst_cons(tsubst_id(x0->scope), x1), x0), t);
}

std::string show_target(const TargetTerm& t) {
  // Numeral runs print as decimals.
  std::uint64_t k = 0;
  const TargetNode* cur = t.get();
  while (cur->kind == TKind::Suc) {
    ++k;
    cur = cur->a.get();
  }
  if (cur->kind == TKind::Zero) return std::to_string(k);
  switch (t->kind) {
    case TKind::Var:
      return "#" + std::to_string(t->var);
    case TKind::Lam:
      return "lam(" + show_target(t->a) + ")";
    case TKind::App:
      return "app(" + show_target(t->a) + ", " + show_target(t->b) + ")";
    case TKind::Pair:
      return "pair(" + show_target(t->a) + ", " + show_target(t->b) + ")";
    case TKind::Fst:
      return "fst(" + show_target(t->a) + ")";
    case TKind::Snd:
      return "snd(" + show_target(t->a) + ")";
    case TKind::Prodrec:
      return "prodrec(" + show_target(t->a) + ", " + show_target(t->b) + ")";
    case TKind::Suc:
      return "suc(" + show_target(t->a) + ")";
    case TKind::Natrec:
      return "natrec(" + show_target(t->a) + ", " + show_target(t->b) + ", " +
             show_target(t->c) + ")";
    case TKind::Unitrec:
      return "unitrec(" + show_target(t->a) + ", " + show_target(t->b) + ")";
    case TKind::Star:
      return "star";
    case TKind::Undef:
      return "!";
    default:
      return "?";
  }
}

}  // namespace gtt
