#include "gtt/usage.hpp"

#include <optional>

namespace gtt {

Grade mode_grade(const Modality& m, Mode md) {
  return md == Mode::One ? m.one : m.zero;
}

Mode mode_mul(Mode md, Grade p, Grade zero) {
  return (md == Mode::One && p != zero) ? Mode::One : Mode::Zero;
}

const char* mode_name(Mode md) { return md == Mode::One ? "1" : "0"; }

const char* usage_error_kind_name(UsageError::Kind k) {
  switch (k) {
    case UsageError::Kind::VarOverUse: return "var-over-use";
    case UsageError::Kind::Subsumption: return "subsumption-failure";
    case UsageError::Kind::Restriction: return "restriction";
    case UsageError::Kind::StarStrongNotInferable:
      return "star-strong-not-inferable";
  }
  return "unknown";
}

namespace {

class UsageEngine {
 public:
  UsageEngine(const Modality& m, const Restrictions& rs, bool moded)
      : m_(m), rs_(rs), moded_(moded) {
    rs_.zero = m.zero;
  }

  UsageCtx infer(const Term& t, Mode md) {
    switch (t->kind) {
      case Kind::U:
      case Kind::Nat:
      case Kind::Empty:
      case Kind::Unit:
      case Kind::Zero:
        return ctx_zero(m_, t->scope);
      case Kind::Star: {
        if (t->sk == SigKind::Weak) return ctx_zero(m_, t->scope);
        if (m_.zero_is_greatest) return ctx_zero(m_, t->scope);
        throw err(UsageError::Kind::StarStrongNotInferable, t,
                  "the strong star admits any context; without a greatest "
                  "grade there is no principal one");
      }
      case Kind::Var: {
        UsageCtx g = ctx_zero(m_, t->scope);
        g[t->var] = grade_of_mode(md);
        return g;
      }
      case Kind::Pi:
      case Kind::Sigma: {
        if (t->kind == Kind::Sigma) plain_pair_grade(t);
        UsageCtx ga = child(t, 0, t->a, mode_mul(md, t->p, m_.zero));
        UsageCtx gb = child(t, 1, t->b, md);
        require(t, gb[0], scale_mode(md, t->q),
                "binder grade on the function/pair type");
        gb.erase(gb.begin());
        return ctx_add(m_, ctx_scale(m_, t->p, ga), gb);
      }
      case Kind::Lam: {
        UsageCtx g = child(t, 0, t->a, md);
        require(t, g[0], scale_mode(md, t->p), "lambda binder grade");
        g.erase(g.begin());
        return g;
      }
      case Kind::App: {
        UsageCtx gt = child(t, 0, t->a, md);
        UsageCtx gu = child(t, 1, t->b, mode_mul(md, t->p, m_.zero));
        return ctx_add(m_, gt, ctx_scale(m_, t->p, gu));
      }
      case Kind::Pair: {
        plain_pair_grade(t);
        UsageCtx gt = child(t, 0, t->a, mode_mul(md, t->p, m_.zero));
        UsageCtx gu = child(t, 1, t->b, md);
        UsageCtx scaled = ctx_scale(m_, t->p, gt);
        return t->sk == SigKind::Strong ? ctx_meet(m_, scaled, gu)
                                        : ctx_add(m_, scaled, gu);
      }
      case Kind::Fst: {
        plain_pair_grade(t);
        if (moded_ && !m_.leq(grade_of_mode(mode_mul(md, t->p, m_.zero)),
                              grade_of_mode(md)))
          throw err(UsageError::Kind::Restriction, t,
                    "a first projection at grade 0 is usable only in the "
                    "zero mode");
        return child(t, 0, t->a, md);
      }
      case Kind::Snd:
        plain_pair_grade(t);
        return child(t, 0, t->a, md);
      case Kind::Prodrec: {
        plain_pair_grade(t);
        if (!rs_.prodrec_allowed(t->r))
          throw err(UsageError::Kind::Restriction, t,
                    "prodrec at grade " + m_.show(t->r) + " is disabled");
        motive(t, 0, t->a, md, t->q);
        UsageCtx gt = child(t, 1, t->b, mode_mul(md, t->r, m_.zero));
        UsageCtx gu = child(t, 2, t->c, md);
        require(t, gu[1], scale_mode(md, m_.mul(t->r, t->p)),
                "first pair component grade in the prodrec branch");
        require(t, gu[0], scale_mode(md, t->r),
                "second pair component grade in the prodrec branch");
        gu.erase(gu.begin(), gu.begin() + 2);
        return ctx_add(m_, ctx_scale(m_, t->r, gt), gu);
      }
      case Kind::Suc:
        return child(t, 0, t->a, md);
      case Kind::Natrec: {
        motive(t, 0, t->a, md, t->q);
        UsageCtx gz = child(t, 1, t->b, md);
        UsageCtx gs = child(t, 2, t->c, md);
        UsageCtx gn = child(t, 3, t->d, md);
        require(t, gs[1], scale_mode(md, t->p),
                "predecessor grade in the natrec successor branch");
        require(t, gs[0], scale_mode(md, t->r),
                "recursive-call grade in the natrec successor branch");
        gs.erase(gs.begin(), gs.begin() + 2);
        return ctx_nr(m_, t->p, t->r, gz, gs, gn);
      }
      case Kind::Emptyrec: {
        if (!rs_.emptyrec_allowed(t->p))
          throw err(UsageError::Kind::Restriction, t,
                    "emptyrec at grade " + m_.show(t->p) + " is disabled");
        motive(t, 0, t->a, md, /*binder=*/std::nullopt);
        UsageCtx gt = child(t, 1, t->b, mode_mul(md, t->p, m_.zero));
        return ctx_scale(m_, t->p, gt);
      }
      case Kind::Unitrec: {
        if (!rs_.unitrec_allowed(t->p))
          throw err(UsageError::Kind::Restriction, t,
                    "unitrec at grade " + m_.show(t->p) + " is disabled");
        motive(t, 0, t->a, md, t->q);
        UsageCtx gt = child(t, 1, t->b, mode_mul(md, t->p, m_.zero));
        UsageCtx gu = child(t, 2, t->c, md);
        return ctx_add(m_, ctx_scale(m_, t->p, gt), gu);
      }
      case Kind::Ann:
        return child(t, 0, t->a, md);  // ascriptions are transparent
    }
    throw err(UsageError::Kind::Subsumption, t, "unreachable term kind");
  }

 private:
  Grade grade_of_mode(Mode md) const {
    return !moded_ || md == Mode::One ? m_.one : m_.zero;
  }

  // The plain rules have no grade on pairs, projections, or the prodrec
  // pair-component slot: the unified syntax carries one, so it must be 1.
  // Only the moded rules give other grades meaning there.
  void plain_pair_grade(const Term& t) {
    if (moded_ || t->p == m_.one) return;
    throw err(UsageError::Kind::Restriction, t,
              "pair-component grade " + m_.show(t->p) +
                  ": the plain rules fix this grade at 1 (the moded rules "
                  "admit others)");
  }

  // In the moded system annotation grades act scaled by the current mode.
  Grade scale_mode(Mode md, Grade p) const {
    return moded_ ? m_.mul(grade_of_mode(md), p) : p;
  }

  UsageCtx child(const Term& parent, std::uint32_t slot, const Term& t,
                 Mode md) {
    (void)parent;
    path_.push_back(slot);
    UsageCtx g = infer(t, md);
    path_.pop_back();
    return g;
  }

  // Motives contribute no resources.  The plain rules still bound the motive
  // binder's grade by the annotation; the moded rules process motives in the
  // zero mode, which leaves only restriction side conditions to verify.
  void motive(const Term& parent, std::uint32_t slot, const Term& A, Mode md,
              std::optional<Grade> binder) {
    if (moded_) {
      child(parent, slot, A, Mode::Zero);
      return;
    }
    UsageCtx ga = child(parent, slot, A, md);
    if (binder)
      require(parent, ga[0], *binder, "motive binder grade");
  }

  // Side condition: annotated `bound` must sit below what the subterm
  // affords at the binder slot.
  void require(const Term& at, Grade have, Grade bound, const char* what) {
    if (!m_.leq(bound, have)) {
      UsageError e =
          err(UsageError::Kind::Subsumption, at,
              std::string(what) + ": " + m_.show(bound) +
                  " is not below the inferred " + m_.show(have));
      e.have = have;
      e.bound = bound;
      throw e;
    }
  }

  UsageError err(UsageError::Kind k, const Term& at, std::string msg) {
    if (at->line > 0)
      msg = std::to_string(at->line) + ":" + std::to_string(at->col) + ": " + msg;
    UsageError e(k, std::move(msg));
    e.path = path_;
    e.line = at->line;
    e.col = at->col;
    return e;
  }

  const Modality& m_;
  Restrictions rs_;
  bool moded_;
  std::vector<std::uint32_t> path_;
};

void check_against(const Modality& m, const UsageCtx& gamma,
                   const UsageCtx& principal, const Term& t) {
  if (gamma.size() != principal.size())
    throw std::logic_error("usage context length does not match the term scope");
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    if (!m.leq(gamma[i], principal[i])) {
      UsageError e(UsageError::Kind::VarOverUse,
                   "variable " + std::to_string(i) + ": context grade " +
                       m.show(gamma[i]) + " is not below the inferred " +
                       m.show(principal[i]));
      e.index = static_cast<std::uint32_t>(i);
      e.have = principal[i];
      e.bound = gamma[i];
      e.line = t->line;
      e.col = t->col;
      throw e;
    }
  }
}

}  // namespace

UsageCtx infer_usage_plain(const Modality& m, const Restrictions& rs,
                           const Term& t) {
  UsageEngine eng(m, rs, /*moded=*/false);
  return eng.infer(t, Mode::One);
}

void check_usage_plain(const Modality& m, const Restrictions& rs,
                       const UsageCtx& gamma, const Term& t) {
  if (t->kind == Kind::Star && t->sk == SigKind::Strong) {
    if (gamma.size() != t->scope)
      throw std::logic_error("usage context length does not match the term scope");
    return;  // the strong star admits any context
  }
  check_against(m, gamma, infer_usage_plain(m, rs, t), t);
}

UsageCtx infer_usage_moded(const Modality& m, const Restrictions& rs, Mode md,
                           const Term& t) {
  UsageEngine eng(m, rs, /*moded=*/true);
  return eng.infer(t, md);
}

void check_usage_moded(const Modality& m, const Restrictions& rs,
                       const UsageCtx& gamma, Mode md, const Term& t) {
  if (t->kind == Kind::Star && t->sk == SigKind::Strong) {
    if (gamma.size() != t->scope)
      throw std::logic_error("usage context length does not match the term scope");
    return;
  }
  check_against(m, gamma, infer_usage_moded(m, rs, md, t), t);
}

SubstMatrix infer_subst_matrix(const Modality& m, const Restrictions& rs,
                               const Subst& s) {
  SubstMatrix psi;
  psi.cols = s.tgt;
  psi.rows.reserve(s.src);
  for (std::uint32_t i = 0; i < s.src; ++i)
    psi.rows.push_back(infer_usage_plain(m, rs, subst_var(s, i)));
  return psi;
}

}  // namespace gtt
