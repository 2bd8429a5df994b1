#include "gtt/harness.hpp"

#include <exception>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "gtt/frontend.hpp"
#include "gtt/reduce.hpp"
#include "gtt/typecheck.hpp"

namespace gtt {

namespace {

Term nat0() { return mk_nat(0); }
Term unitw0() { return mk_unit(SigKind::Weak, 0); }
Term fun0(Grade p, Grade q0) {
  return mk_pi(p, q0, nat0(), wk_by(1, nat0()));
}

}  // namespace

// ---------------------------------------------------------------------------
// Generator

TermGen::TermGen(Modality m, Restrictions rs, std::uint64_t seed, int depth,
                 bool erased_vars_only, bool moded_safe)
    : m_(std::move(m)),
      rs_(rs),
      rng_(seed),
      depth_(depth),
      erased_only_(erased_vars_only),
      moded_safe_(moded_safe) {
  rs_.zero = m_.zero;
}

// Internal usage queries must match the relation the corpus targets: the
// plain rules reject pair-component grades other than 1, which the moded
// corpus deliberately exercises.
UsageCtx TermGen::usage_of(const Term& t) {
  return moded_safe_ ? infer_usage_moded(m_, rs_, Mode::One, t)
                     : infer_usage_plain(m_, rs_, t);
}

Grade TermGen::binder_grade(const Term& body) { return usage_of(body).at(0); }

// Pick a lawful pair-component grade: 1 under the plain rules; anything but
// a dead strong first component under the moded ones.
Grade TermGen::pair_grade(Grade p, SigKind sk) const {
  if (!moded_safe_) return m_.one;
  if (sk == SigKind::Strong && p == m_.zero) return m_.one;
  return p;
}

std::vector<std::uint32_t> TermGen::vars_of(const Term& ty0, bool direct_use) {
  std::vector<std::uint32_t> out;
  for (std::size_t j = 0; j < ctx_.size(); ++j) {
    if (direct_use && erased_only_ && j < n_free_) continue;
    if (alpha_eq(ctx_[j], ty0)) out.push_back(scope() - 1 - (std::uint32_t)j);
  }
  return out;
}

Term TermGen::rand_type(int d) {
  std::uint64_t w = rng_.below(d > 0 ? 8 : 4);
  Grade p = (Grade)rng_.below(m_.size());
  switch (w) {
    case 0:
    case 1:
    case 2:
      return nat0();
    case 3:
      return unitw0();
    case 4:
    case 5:
      return fun0(p, m_.zero);
    case 6:
      return mk_sigma(SigKind::Strong, pair_grade(p, SigKind::Strong), m_.zero,
                      nat0(), wk_by(1, nat0()));
    default:
      return mk_sigma(SigKind::Weak, pair_grade(p, SigKind::Weak), m_.zero,
                      nat0(), wk_by(1, nat0()));
  }
}

Term TermGen::app_redex(int d) {
  TT arg = gen_any(d - 1);
  ctx_.push_back(arg.ty);
  Term body = gen_nat(d - 1);
  Grade g0 = binder_grade(body);
  ctx_.pop_back();
  Term pi0 = mk_pi(g0, m_.zero, arg.ty, wk_by(1, nat0()));
  Term fn = mk_ann(mk_lam(g0, body), close(pi0));
  return mk_app(g0, fn, arg.t);
}

bool TermGen::try_app_var(int d, Term& out) {
  std::vector<std::pair<std::uint32_t, Grade>> cands;
  for (std::size_t j = 0; j < ctx_.size(); ++j) {
    if (erased_only_ && j < n_free_) continue;
    const Term& ty = ctx_[j];
    if (ty->kind == Kind::Pi && alpha_eq(ty, fun0(ty->p, m_.zero)))
      cands.emplace_back(scope() - 1 - (std::uint32_t)j, ty->p);
  }
  if (cands.empty()) return false;
  auto c = cands[rng_.below(cands.size())];
  out = mk_app(c.second, mk_var(scope(), c.first), gen_nat(d - 1));
  return true;
}

bool TermGen::try_proj(int d, Term& out) {
  std::uint32_t n = scope();
  bool first = rng_.below(2) == 0;
  std::vector<std::pair<std::uint32_t, Grade>> cands;
  for (std::size_t j = 0; j < ctx_.size(); ++j) {
    if (erased_only_ && j < n_free_) continue;
    const Term& ty = ctx_[j];
    if (ty->kind != Kind::Sigma || ty->sk != SigKind::Strong) continue;
    if (moded_safe_ && ty->p == m_.zero) continue;
    if (!alpha_eq(ty->a, nat0()) || !alpha_eq(ty->b, wk_by(1, nat0())))
      continue;
    cands.emplace_back(n - 1 - (std::uint32_t)j, ty->p);
  }
  if (!cands.empty() && rng_.below(2) == 0) {
    auto c = cands[rng_.below(cands.size())];
    Term v = mk_var(n, c.first);
    out = first ? mk_fst(c.second, v) : mk_snd(c.second, v);
    return true;
  }
  Grade p = pair_grade((Grade)rng_.below(m_.size()), SigKind::Strong);
  Term tn = gen_nat(d - 1);
  TT other = gen_any(d - 1);
  Term a0 = first ? nat0() : other.ty;
  Term b0 = first ? other.ty : nat0();
  Term sig0 = mk_sigma(SigKind::Strong, p, m_.zero, a0, wk_by(1, b0));
  Term pt = first ? mk_pair(SigKind::Strong, p, tn, other.t)
                  : mk_pair(SigKind::Strong, p, other.t, tn);
  Term scrut = mk_ann(pt, close(sig0));
  out = first ? mk_fst(p, scrut) : mk_snd(p, scrut);
  return true;
}

bool TermGen::try_prodrec(int d, Term& out) {
  std::uint32_t n = scope();
  Term scrut, A0, B0;
  Grade p = 0;
  std::vector<std::pair<std::uint32_t, Grade>> cands;
  for (std::size_t j = 0; j < ctx_.size(); ++j) {
    if (erased_only_ && j < n_free_) continue;
    const Term& ty = ctx_[j];
    if (ty->kind == Kind::Sigma && ty->sk == SigKind::Weak &&
        alpha_eq(ty->a, nat0()) && alpha_eq(ty->b, wk_by(1, nat0())))
      cands.emplace_back(n - 1 - (std::uint32_t)j, ty->p);
  }
  if (!cands.empty() && rng_.below(2) == 0) {
    auto c = cands[rng_.below(cands.size())];
    scrut = mk_var(n, c.first);
    p = c.second;
    A0 = nat0();
    B0 = nat0();
  } else {
    p = pair_grade((Grade)rng_.below(m_.size()), SigKind::Weak);
    TT t1 = gen_any(d - 1);
    TT t2 = gen_any(d - 1);
    A0 = t1.ty;
    B0 = t2.ty;
    Term sig0 = mk_sigma(SigKind::Weak, p, m_.zero, A0, wk_by(1, B0));
    scrut = mk_ann(mk_pair(SigKind::Weak, p, t1.t, t2.t), close(sig0));
  }
  ctx_.push_back(A0);
  ctx_.push_back(B0);
  Term u = gen_nat(d - 1);
  UsageCtx gu = usage_of(u);
  ctx_.pop_back();
  ctx_.pop_back();
  std::vector<Grade> rc;
  for (std::size_t r = 0; r < m_.size(); ++r)
    if (rs_.prodrec_allowed((Grade)r) && m_.leq((Grade)r, gu.at(0)) &&
        m_.leq(m_.mul((Grade)r, p), gu.at(1)))
      rc.push_back((Grade)r);
  if (rc.empty()) return false;
  Grade r = rng_.pick(rc);
  out = mk_prodrec(r, p, m_.zero, wk_by(n + 1, nat0()), scrut, u);
  return true;
}

Term TermGen::gen_natrec(int d) {
  std::uint32_t n = scope();
  Term z = gen_nat(d - 1);
  Term narg = gen_nat(d - 1);
  Term s;
  switch (rng_.below(4)) {
    case 0: s = mk_var(n + 2, 0); break;          // recursive result
    case 1: s = mk_suc(mk_var(n + 2, 0)); break;  // addition-style step
    case 2: s = mk_var(n + 2, 1); break;          // predecessor
    default: s = mk_suc(mk_var(n + 2, 1)); break;
  }
  UsageCtx gs = usage_of(s);
  return mk_natrec(gs.at(1), m_.zero, gs.at(0), wk_by(n + 1, nat0()), z, s,
                   narg);
}

Term TermGen::gen_unitrec(int d) {
  std::uint32_t n = scope();
  std::vector<Grade> pc;
  for (std::size_t g = 0; g < m_.size(); ++g)
    if (rs_.unitrec_allowed((Grade)g)) pc.push_back((Grade)g);
  Grade p = pc.empty() ? m_.one : rng_.pick(pc);
  Term scrut;
  auto cands = vars_of(unitw0(), true);
  if (!cands.empty() && rng_.below(2) == 0)
    scrut = mk_var(n, rng_.pick(cands));
  else
    scrut = mk_star(SigKind::Weak, n);
  Term u = gen_nat(d - 1);
  return mk_unitrec(p, m_.zero, wk_by(n + 1, nat0()), scrut, u);
}

bool TermGen::try_erased_wrap(int d, Term& out) {
  if (ctx_.empty()) return false;
  std::uint32_t n = scope();
  std::uint32_t j = n_free_ > 0 && rng_.below(3) != 0
                        ? (std::uint32_t)rng_.below(n_free_)
                        : (std::uint32_t)rng_.below(ctx_.size());
  Term X0 = ctx_[j];
  std::uint32_t i = n - 1 - j;
  Term body = gen_nat(d - 1);
  Term pi0 = mk_pi(m_.zero, m_.zero, X0, wk_by(1, nat0()));
  Term fn = mk_ann(mk_lam(m_.zero, wk_by(1, body)), close(pi0));
  out = mk_app(m_.zero, fn, mk_var(n, i));
  return true;
}

Term TermGen::gen_nat(int d) {
  std::uint32_t n = scope();
  if (d <= 0)
    return rng_.below(2) ? mk_num(n, rng_.below(4)) : mk_zero(n);
  // Open corpora exist to exercise erased hypotheses: visit them often.
  if (erased_only_ && n_free_ > 0 && rng_.below(3) == 0) {
    Term out;
    if (try_erased_wrap(d, out)) return out;
  }
  for (int attempt = 0; attempt < 6; ++attempt) {
    switch (rng_.below(12)) {
      case 0: return mk_zero(n);
      case 1: return mk_num(n, rng_.below(4));
      case 2: return mk_suc(gen_nat(d - 1));
      case 3: {
        auto cands = vars_of(nat0(), true);
        if (cands.empty()) break;
        return mk_var(n, rng_.pick(cands));
      }
      case 4: {
        Term out;
        if (try_app_var(d, out)) return out;
        break;
      }
      case 5:
      case 6: return app_redex(d);
      case 7: {
        Term out;
        if (try_proj(d, out)) return out;
        break;
      }
      case 8: {
        Term out;
        if (try_prodrec(d, out)) return out;
        break;
      }
      case 9: return gen_natrec(d);
      case 10: return gen_unitrec(d);
      default: {
        Term out;
        if (try_erased_wrap(d, out)) return out;
        break;
      }
    }
  }
  return mk_num(n, rng_.below(4));
}

TermGen::TT TermGen::gen_any(int d) {
  std::uint32_t n = scope();
  if (d <= 0) {
    if (rng_.below(4) == 0) return {mk_star(SigKind::Weak, n), unitw0()};
    return {gen_nat(0), nat0()};
  }
  switch (rng_.below(8)) {
    case 4:
    case 5: {
      Term A0 = rand_type(d - 1);
      ctx_.push_back(A0);
      TT body = gen_any(d - 1);
      Grade g0 = binder_grade(body.t);
      ctx_.pop_back();
      return {mk_lam(g0, body.t), mk_pi(g0, 0, A0, wk_by(1, body.ty))};
    }
    case 6: {
      TT t1 = gen_any(d - 1);
      TT t2 = gen_any(d - 1);
      SigKind sk = rng_.below(2) ? SigKind::Strong : SigKind::Weak;
      Grade p = pair_grade((Grade)rng_.below(m_.size()), sk);
      return {mk_pair(sk, p, t1.t, t2.t),
              mk_sigma(sk, p, m_.zero, t1.ty, wk_by(1, t2.ty))};
    }
    case 7:
      return {mk_star(SigKind::Weak, n), unitw0()};
    default:
      return {gen_nat(d), nat0()};
  }
}

GenItem TermGen::nat_program(int free_nat, int free_fun) {
  ctx_.clear();
  for (int i = 0; i < free_nat; ++i) ctx_.push_back(nat0());
  for (int i = 0; i < free_fun; ++i)
    ctx_.push_back(fun0((Grade)rng_.below(m_.size()), m_.zero));
  n_free_ = ctx_.size();
  GenItem it;
  it.ctx = ctx_;
  it.term = gen_nat(depth_);
  it.type = nat0();
  return it;
}

GenItem TermGen::beta_instance(int free_nat, int free_fun) {
  ctx_.clear();
  for (int i = 0; i < free_nat; ++i) ctx_.push_back(nat0());
  for (int i = 0; i < free_fun; ++i)
    ctx_.push_back(fun0((Grade)rng_.below(m_.size()), m_.zero));
  n_free_ = ctx_.size();
  GenItem it;
  it.ctx = ctx_;
  it.term = app_redex(depth_);
  it.type = nat0();
  return it;
}

// ---------------------------------------------------------------------------
// Reports

HarnessConfig::HarnessConfig() : m(make_instance("erasure")) {}

std::string HarnessConfig::summary() const {
  std::ostringstream os;
  os << "modality=" << m.id << " nr=" << m.nr_variant
     << " erased-matches=" << (rs.erased_matches ? "on" : "off")
     << " emptyrec-zero=" << (rs.emptyrec_zero ? "on" : "off")
     << " mode=" << (moded ? "moded" : "plain") << " fuel=" << fuel
     << " depth=" << depth;
  return os.str();
}

int Report::failed() const {
  int n = 0;
  for (const auto& c : cases) n += c.pass ? 0 : 1;
  return n;
}

void Report::add(const std::string& name, bool pass,
                 const std::string& witness) {
  cases.push_back({name, pass, witness});
}

std::string Report::text() const {
  std::ostringstream os;
  os << "suite: " << suite << "\nseed: " << seed << "\nconfig: " << config
     << "\n";
  for (const auto& c : cases)
    os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " — " << c.witness
       << "\n";
  os << "result: " << (cases.size() - (std::size_t)failed()) << " passed, "
     << failed() << " failed\n";
  return os.str();
}

std::string Report::json() const {
  nlohmann::json j;
  j["suite"] = suite;
  j["seed"] = seed;
  j["config"] = config;
  j["passed"] = (int)cases.size() - failed();
  j["failed"] = failed();
  j["cases"] = nlohmann::json::array();
  for (const auto& c : cases)
    j["cases"].push_back({{"suite", suite},
                          {"case", c.name},
                          {"verdict", c.pass ? "pass" : "fail"},
                          {"witness", c.witness}});
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Fixtures

const char* named_corpus_text() {
  return "def id : Pi[0,0] (A:U) -> Pi[1,0] (x:A) -> A := \\[0] A. \\[1] x. x\n"
         "def idNatZero : Nat := id @[0] Nat @[1] zero\n"
         "def plus : Pi[1,0] (k:Nat) -> Pi[1,0] (n:Nat) -> Nat :=\n"
         "  \\[1] k. \\[1] n. natrec[0,0,1] (m. Nat) k (x ih. suc ih) n\n"
         "def five : Nat := plus @[1] 2 @[1] 3\n"
         "def safeHead : Pi[0,0] (A:U) -> Pi[0,0] (n:Nat) -> Pi[1,0] (x:A) -> A"
         " := \\[0] A. \\[0] n. \\[1] x. x\n"
         "def safeHeadApplied : Nat := safeHead @[0] Nat @[0] 2 @[1] zero\n"
         "def unitDemo : Nat := unitrec[1,0] (x. Nat) star@ 4\n";
}

const char* lmh_lattice_text() {
  return "elem L M H\n"
         "bot L\n"
         "top H\n"
         "cover L M\n"
         "cover M H\n";
}

Modality lmh_lattice() { return make_lattice(lmh_lattice_text(), "lattice:lmh"); }

GenItem erased_match_counterexample(const Modality& m) {
  GenItem it;
  it.ctx = {mk_sigma(SigKind::Weak, m.one, m.zero, mk_nat(0), mk_nat(1))};
  it.term =
      mk_prodrec(m.zero, m.one, m.zero, mk_nat(2), mk_var(1, 0), mk_zero(3));
  it.type = nat0();
  return it;
}

// ---------------------------------------------------------------------------
// Suite helpers

namespace {

TypingCtx typing_ctx(const GenItem& it) {
  TypingCtx tc;
  for (std::size_t j = 0; j < it.ctx.size(); ++j)
    tc.push_back(wk_by((std::uint32_t)j, it.ctx[j]));
  return tc;
}

// Typecheck + usage-check a generated item; false with a reason otherwise.
bool validate_item(const HarnessConfig& cfg, const Restrictions& rs,
                   const GenItem& it, bool all_erased, std::string& why) {
  try {
    Checker ch({false, cfg.fuel});
    TypingCtx tc = typing_ctx(it);
    ch.check_term(tc, it.term, wk_by((std::uint32_t)it.ctx.size(), it.type));
  } catch (const TypeError& e) {
    why = std::string("typecheck: ") + e.what();
    return false;
  }
  try {
    if (all_erased) {
      UsageCtx zero = ctx_zero(cfg.m, it.ctx.size());
      if (cfg.moded)
        check_usage_moded(cfg.m, rs, zero, Mode::One, it.term);
      else
        check_usage_plain(cfg.m, rs, zero, it.term);
    } else if (cfg.moded) {
      UsageCtx g = infer_usage_moded(cfg.m, rs, Mode::One, it.term);
      check_usage_moded(cfg.m, rs, g, Mode::One, it.term);
    } else {
      UsageCtx g = infer_usage_plain(cfg.m, rs, it.term);
      check_usage_plain(cfg.m, rs, g, it.term);
    }
  } catch (const UsageError& e) {
    why = std::string("usage: ") + e.what();
    return false;
  }
  return true;
}

std::string numeral_failure(const char* side, int tag) {
  std::ostringstream os;
  os << side << (tag == 1 ? ": stuck" : ": no numeral within fuel");
  return os.str();
}

// Source and both target evaluations must produce the same numeral.
bool differential(const HarnessConfig& cfg, const Term& t, EraseMode em,
                  std::uint64_t& value, std::string& why) {
  NumeralResult src = read_numeral(t, cfg.fuel);
  if (src.tag != NumeralResult::Tag::Ok) {
    why = numeral_failure("source", src.tag == NumeralResult::Tag::Stuck ? 1 : 2);
    return false;
  }
  value = src.value;
  for (auto str : {Strictness::NonStrict, Strictness::Strict}) {
    const char* name =
        str == Strictness::NonStrict ? "target(cbn)" : "target(cbv)";
    TNumeralResult tn =
        target_read_numeral(erase(t, str, em, cfg.m.zero), str, cfg.fuel);
    if (tn.tag != TNumeralResult::Tag::Ok) {
      why = numeral_failure(name, tn.tag == TNumeralResult::Tag::Stuck ? 1 : 2);
      return false;
    }
    if (tn.value != src.value) {
      std::ostringstream os;
      os << name << "=" << tn.value << " disagrees with source=" << src.value;
      why = os.str();
      return false;
    }
  }
  return true;
}

bool zero_product_holds(const Modality& m) {
  for (Grade a = 0; a < (Grade)m.size(); ++a)
    for (Grade b = 0; b < (Grade)m.size(); ++b)
      if (m.mul(a, b) == m.zero && a != m.zero && b != m.zero) return false;
  return true;
}

void division_case(Report& rep, const Modality& m) {
  std::size_t n = m.size();
  int checked = 0;
  std::string bad;
  auto fail = [&](const std::string& w) {
    if (bad.empty()) bad = w;
  };
  // Galois re-audit: p/q is the least r with p <= q*r.
  for (Grade q = 0; q < (Grade)n; ++q) {
    if (!m.div_ok[q]) continue;
    for (Grade p = 0; p < (Grade)n; ++p) {
      auto r = divide(m, p, q);
      if (!r) {
        fail("divide refused a supported divisor");
        continue;
      }
      ++checked;
      if (!m.leq(p, m.mul(q, *r))) fail("p <= q*(p/q) fails");
      for (Grade r2 = 0; r2 < (Grade)n; ++r2)
        if (m.leq(p, m.mul(q, r2)) && !m.leq(*r, r2))
          fail("p/q is not least");
    }
  }
  // The five division laws, each on the divisors the instance supports.
  if (m.div_ok[m.one])
    for (Grade p = 0; p < (Grade)n; ++p)
      if (*divide(m, p, m.one) != p) fail("p/1 = p fails");
  if (m.div_ok[m.zero])
    for (Grade p = 0; p < (Grade)n; ++p)
      if (*divide(m, p, m.zero) != m.one) fail("p/0 = 1 fails");
  bool zp = zero_product_holds(m);
  for (Grade p = 0; p < (Grade)n; ++p) {
    if (!m.div_ok[p]) continue;
    if (*divide(m, p, p) != m.one) fail("p/p = 1 fails");
    if (*divide(m, m.one, p) != m.one) fail("1/p = 1 fails");
    if (zp && p != m.zero && *divide(m, m.zero, p) != m.zero)
      fail("0/p = 0 fails");
  }
  std::ostringstream os;
  if (bad.empty())
    os << checked << " quotients audited against the Galois connection";
  rep.add("division:" + m.id, bad.empty(), bad.empty() ? os.str() : bad);
}

std::vector<Modality> law_instances(const Modality& configured) {
  std::vector<Modality> v;
  for (const char* name :
       {"erasure", "affine", "linear", "linear-or-affine", "trivial"})
    v.push_back(make_instance(name));
  v.push_back(lmh_lattice());
  bool listed = false;
  for (const auto& m : v) listed = listed || m.id == configured.id;
  if (!listed) v.push_back(configured);
  return v;
}

std::string first_failure(const LawReport& lr) {
  for (const auto& c : lr)
    if (!c.pass) return c.law + ": " + c.witness;
  return "";
}

}  // namespace

// ---------------------------------------------------------------------------
// Suites

Report run_law_suite(const HarnessConfig& cfg) {
  Report rep{"laws", cfg.seed, cfg.summary(), {}};
  std::vector<Modality> insts = law_instances(cfg.m);

  for (const auto& m : insts) {
    LawReport lr = check_laws(m);
    std::string w = first_failure(lr);
    std::ostringstream os;
    os << lr.size() << " axiom groups hold exhaustively";
    rep.add("laws:" + m.id, laws_ok(lr), w.empty() ? os.str() : w);
  }

  for (const auto& m : insts) {
    LawReport lr = check_well_behaved_zero(m);
    bool wbz = laws_ok(lr);
    if (m.id == "trivial")
      rep.add("well-behaved-zero:trivial:rejected", !wbz,
              wbz ? "a one-point carrier passed positivity"
                  : "fails as required: " + first_failure(lr));
    else
      rep.add("well-behaved-zero:" + m.id, wbz,
              wbz ? "positivity, zero-product and nr-positivity hold"
                  : first_failure(lr));
  }

  {
    auto uq = nr_unique_check(make_instance("erasure"));
    std::ostringstream os;
    os << "lawful tables found: " << uq.count;
    rep.add("nr-uniqueness:erasure",
            uq.status == NrUniqueResult::Status::Ok && uq.unique, os.str());
  }
  {
    Modality lin = make_instance("linear");
    Modality bad = lin;
    bool has_bad = set_nr_variant(bad, "bad");
    bool both_lawful = has_bad && laws_ok(check_laws(lin)) &&
                       laws_ok(check_laws(bad)) && lin.nr_t != bad.nr_t;
    auto uq = nr_unique_check(lin);
    bool plural = uq.status == NrUniqueResult::Status::Ok && !uq.unique;
    std::ostringstream os;
    os << "two distinct lawful tables (default, bad); search found "
       << uq.count << " or more";
    rep.add("nr-plurality:linear", both_lawful && plural, os.str());
  }

  for (const auto& m : insts) division_case(rep, m);

  {
    // Matrix action is linear in the usage context.
    bool ok = true;
    std::string why;
    Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
    for (const auto& m : insts) {
      for (int k = 0; k < 200 && ok; ++k) {
        std::size_t rows = 1 + rng.below(4), cols = rng.below(4);
        SubstMatrix psi;
        psi.cols = cols;
        for (std::size_t i = 0; i < rows; ++i) {
          UsageCtx row(cols);
          for (auto& g : row) g = (Grade)rng.below(m.size());
          psi.rows.push_back(row);
        }
        UsageCtx ga(rows), de(rows);
        for (auto& g : ga) g = (Grade)rng.below(m.size());
        for (auto& g : de) g = (Grade)rng.below(m.size());
        Grade p = (Grade)rng.below(m.size());
        bool additive = matrix_apply(m, ctx_add(m, ga, de), psi) ==
                        ctx_add(m, matrix_apply(m, ga, psi),
                                matrix_apply(m, de, psi));
        bool homogeneous = matrix_apply(m, ctx_scale(m, p, ga), psi) ==
                           ctx_scale(m, p, matrix_apply(m, ga, psi));
        if (!additive || !homogeneous) {
          ok = false;
          why = "linearity fails on " + m.id;
        }
      }
    }
    rep.add("matrix-linearity", ok,
            ok ? "1200 random (γ, δ, p, Ψ) samples across all instances" : why);
  }
  return rep;
}

Report run_soundness_suite(const HarnessConfig& cfg) {
  Report rep{"soundness", cfg.seed, cfg.summary(), {}};
  EraseMode em = cfg.moded ? EraseMode::Moded : EraseMode::Plain;

  // Named examples.
  struct Named {
    const char* def;
    std::uint64_t expect;
  };
  const Named named[] = {{"idNatZero", 0},
                         {"five", 5},
                         {"safeHeadApplied", 0},
                         {"unitDemo", 4}};
  try {
    SourceFile f = parse_file(named_corpus_text(), cfg.m);
    for (const auto& nm : named) {
      const Def* d = resolve(f, nm.def);
      if (d == nullptr) {
        rep.add(std::string("named:") + nm.def, false, "definition missing");
        continue;
      }
      Term t = mk_ann(d->body, d->type);
      GenItem it{{}, t, nat0()};
      std::string why;
      std::uint64_t v = 0;
      bool ok = validate_item(cfg, cfg.rs, it, false, why) &&
                differential(cfg, t, em, v, why) && v == nm.expect;
      if (ok && v != nm.expect) why = "unexpected numeral";
      std::ostringstream os;
      os << "source=" << v << " target(cbn)=" << v << " target(cbv)=" << v
         << " AGREE";
      rep.add(std::string("named:") + nm.def, ok, ok ? os.str() : why);
    }
  } catch (const std::exception& e) {
    rep.add("named:corpus", false, e.what());
  }

  // The erased-match example: hypotheses of the theorem fail (nonempty
  // context with erased matches enabled), and indeed the source is stuck
  // while the extraction still computes.
  {
    const GenItem ce = erased_match_counterexample(cfg.m);
    std::string why;
    bool ok = true;
    Restrictions on = cfg.rs;
    on.erased_matches = true;
    if (!validate_item(cfg, on, ce, true, why)) ok = false;
    if (ok) {
      NumeralResult src = read_numeral(ce.term, cfg.fuel);
      ok = src.tag == NumeralResult::Tag::Stuck;
      if (!ok) why = "source unexpectedly produced a numeral";
    }
    if (ok) {
      for (auto str : {Strictness::NonStrict, Strictness::Strict}) {
        TNumeralResult tn = target_read_numeral(
            erase(ce.term, str, em, cfg.m.zero), str, cfg.fuel);
        if (tn.tag != TNumeralResult::Tag::Ok || tn.value != 0) {
          ok = false;
          why = "extraction did not evaluate to 0";
        }
      }
    }
    rep.add("erased-match-hypotheses-unmet", ok,
            ok ? "source stuck, extraction evaluates to 0 under both "
                 "disciplines (theorem hypotheses do not apply)"
               : why);
  }

  // Generated closed programs.
  {
    TermGen gen(cfg.m, cfg.rs, cfg.seed ^ 0x1, cfg.depth, false, cfg.moded);
    int ok_count = 0;
    std::string why;
    for (int i = 0; i < cfg.soundness_programs; ++i) {
      GenItem it = gen.nat_program(0, 0);
      std::string w;
      std::uint64_t v = 0;
      if (validate_item(cfg, cfg.rs, it, false, w) &&
          differential(cfg, it.term, em, v, w)) {
        ++ok_count;
      } else if (why.empty()) {
        why = "program " + std::to_string(i) + ": " + w;
      }
    }
    std::ostringstream os;
    os << ok_count << "/" << cfg.soundness_programs
       << " closed ℕ-programs agree under both disciplines";
    rep.add("generated-closed", ok_count == cfg.soundness_programs,
            why.empty() ? os.str() : why);
  }

  // Generated open programs over all-erased contexts, erased matches off
  // (the theorem's hypothesis for nonempty contexts).
  {
    Restrictions rs = cfg.rs;
    rs.erased_matches = false;
    TermGen gen(cfg.m, rs, cfg.seed ^ 0x2, cfg.depth, true, cfg.moded);
    Rng sizes(cfg.seed ^ 0x22);
    int ok_count = 0;
    std::string why;
    for (int i = 0; i < cfg.soundness_programs; ++i) {
      GenItem it = gen.nat_program(1 + (int)sizes.below(2), 0);
      std::string w;
      std::uint64_t v = 0;
      if (validate_item(cfg, rs, it, true, w) &&
          differential(cfg, it.term, em, v, w)) {
        ++ok_count;
      } else if (why.empty()) {
        why = "program " + std::to_string(i) + ": " + w;
      }
    }
    std::ostringstream os;
    os << ok_count << "/" << cfg.soundness_programs
       << " open ℕ-programs with 𝟘 usage agree under both disciplines";
    rep.add("generated-open-erased", ok_count == cfg.soundness_programs,
            why.empty() ? os.str() : why);
  }

  // Non-interference: closing an all-erased program with different numerals
  // never changes the output.
  {
    Restrictions rs = cfg.rs;
    rs.erased_matches = false;
    TermGen gen(cfg.m, rs, cfg.seed ^ 0x3, cfg.depth, true, cfg.moded);
    Rng nums(cfg.seed ^ 0x33);
    int ok_count = 0;
    std::string why;
    for (int i = 0; i < cfg.noninterference_samples; ++i) {
      GenItem it = gen.nat_program(1 + (int)nums.below(2), 0);
      std::uint32_t n = (std::uint32_t)it.ctx.size();
      Subst sa{n, 0, {}, wk_id(0)}, sb{n, 0, {}, wk_id(0)};
      for (std::uint32_t j = 0; j < n; ++j) {
        std::uint64_t a = nums.below(5);
        sa.head.push_back(mk_num(0, a));
        sb.head.push_back(mk_num(0, a + 1 + nums.below(3)));
      }
      std::string w;
      std::uint64_t va = 0, vb = 0;
      bool ok = validate_item(cfg, rs, it, true, w) &&
                differential(cfg, subst_term(sa, it.term), em, va, w) &&
                differential(cfg, subst_term(sb, it.term), em, vb, w) &&
                va == vb;
      if (ok) {
        ++ok_count;
      } else if (why.empty()) {
        if (w.empty()) {
          std::ostringstream os;
          os << "sample " << i << ": outputs " << va << " vs " << vb
             << " depend on erased hypotheses";
          w = os.str();
        }
        why = w;
      }
    }
    std::ostringstream os;
    os << ok_count << "/" << cfg.noninterference_samples
       << " substitution pairs leave the output numeral unchanged";
    rep.add("non-interference", ok_count == cfg.noninterference_samples,
            why.empty() ? os.str() : why);
  }
  return rep;
}

Report run_preservation_suite(const HarnessConfig& cfg) {
  Report rep{"preservation", cfg.seed, cfg.summary(), {}};
  Checker ch({false, cfg.fuel});

  {
    TermGen gen(cfg.m, cfg.rs, cfg.seed ^ 0x4, cfg.depth, false, false);
    Rng sizes(cfg.seed ^ 0x44);
    int steps_done = 0, items = 0, whnf_checked = 0;
    std::string why;
    bool ok = true;
    while (steps_done < cfg.reduction_steps &&
           items < cfg.reduction_steps * 4) {
      GenItem it =
          gen.nat_program((int)sizes.below(3), (int)sizes.below(2));
      ++items;
      UsageCtx g;
      try {
        g = infer_usage_plain(cfg.m, cfg.rs, it.term);
      } catch (const UsageError& e) {
        ok = false;
        if (why.empty()) why = std::string("generator: ") + e.what();
        continue;
      }
      Term t = it.term;
      for (int k = 0; k < 64; ++k) {
        StepResult s = whnf_step(t);
        if (s.tag == StepResult::Tag::IllFormed) {
          ok = false;
          if (why.empty()) why = "well-typed term stepped to ill-formed";
          break;
        }
        if (s.tag != StepResult::Tag::Stepped) break;
        t = s.t;
        ++steps_done;
        try {
          check_usage_plain(cfg.m, cfg.rs, g, t);
        } catch (const UsageError& e) {
          ok = false;
          if (why.empty())
            why = std::string("usage lost after a step: ") + e.what();
          break;
        }
      }
      // Types are preserved at the whnf endpoint.
      WhnfResult w = whnf(it.term, cfg.fuel);
      if (w.tag == WhnfResult::Tag::Ok) {
        try {
          TypingCtx tc = typing_ctx(it);
          ch.check_term(tc, w.t,
                        wk_by((std::uint32_t)it.ctx.size(), it.type));
          ++whnf_checked;
        } catch (const TypeError& e) {
          ok = false;
          if (why.empty()) why = std::string("type lost at whnf: ") + e.what();
        }
      }
    }
    std::ostringstream os;
    os << steps_done << " single steps re-checked against the unreduced "
       << "context; " << whnf_checked << " whnf endpoints re-typed";
    bool quota = steps_done >= cfg.reduction_steps;
    rep.add("usage-subject-reduction", ok && quota,
            ok && quota ? os.str()
                        : (why.empty() ? "step quota not reached" : why));
  }

  {
    // The usage context of a substituted term is bounded by γΨ.
    TermGen gen(cfg.m, cfg.rs, cfg.seed ^ 0x5, cfg.depth, false, false);
    Rng sizes(cfg.seed ^ 0x55);
    int done = 0;
    std::string why;
    bool ok = true;
    for (int i = 0; i < cfg.beta_instances; ++i) {
      GenItem it = gen.beta_instance(1 + (int)sizes.below(2),
                                     (int)sizes.below(2));
      const Term& redex = it.term;
      Term lam = redex->a->a;  // ascribed lambda
      Term body = lam->a;
      Term arg = redex->b;
      std::uint32_t n = (std::uint32_t)it.ctx.size();
      Subst s{n + 1, n, {arg}, wk_id(n)};
      try {
        UsageCtx gb = infer_usage_plain(cfg.m, cfg.rs, body);
        SubstMatrix psi = infer_subst_matrix(cfg.m, cfg.rs, s);
        UsageCtx gp = matrix_apply(cfg.m, gb, psi);
        check_usage_plain(cfg.m, cfg.rs, gp, subst_term(s, body));
        ++done;
      } catch (const UsageError& e) {
        ok = false;
        if (why.empty()) why = e.what();
      }
    }
    std::ostringstream os;
    os << done << " β-instances re-checked under the matrix action";
    rep.add("substitution-matrix", ok && done == cfg.beta_instances,
            ok ? os.str() : why);
  }
  return rep;
}

Report run_principality_suite(const HarnessConfig& cfg) {
  Report rep{"principality", cfg.seed, cfg.summary(), {}};
  TermGen gen(cfg.m, cfg.rs, cfg.seed ^ 0x6, cfg.depth, false, false);
  Rng sizes(cfg.seed ^ 0x66);
  Checker ch({false, cfg.fuel});

  int self_ok = 0, typed_ok = 0;
  long long accepted = 0, dominated = 0;
  std::string why;
  for (int i = 0; i < cfg.corpus_terms; ++i) {
    GenItem it = gen.nat_program(1 + (int)sizes.below(2),
                                 (int)sizes.below(2));
    try {
      TypingCtx tc = typing_ctx(it);
      ch.check_term(tc, it.term,
                    wk_by((std::uint32_t)it.ctx.size(), it.type));
      ++typed_ok;
    } catch (const TypeError& e) {
      if (why.empty()) why = std::string("typecheck: ") + e.what();
      continue;
    }
    UsageCtx principal;
    try {
      principal = infer_usage_plain(cfg.m, cfg.rs, it.term);
      check_usage_plain(cfg.m, cfg.rs, principal, it.term);
      ++self_ok;
    } catch (const UsageError& e) {
      if (why.empty()) why = std::string("self-check: ") + e.what();
      continue;
    }
    for (int j = 0; j < cfg.contexts_per_term; ++j) {
      UsageCtx g(it.ctx.size());
      for (auto& x : g) x = (Grade)sizes.below(cfg.m.size());
      bool accepts = true;
      try {
        check_usage_plain(cfg.m, cfg.rs, g, it.term);
      } catch (const UsageError&) {
        accepts = false;
      }
      if (!accepts) continue;
      ++accepted;
      if (ctx_leq(cfg.m, g, principal)) {
        ++dominated;
      } else if (why.empty()) {
        why = "accepted context not below the inferred one: " +
              show_ctx(cfg.m, g) + " vs " + show_ctx(cfg.m, principal);
      }
    }
  }
  {
    std::ostringstream os;
    os << typed_ok << "/" << cfg.corpus_terms << " generated terms type-check";
    rep.add("generator-well-typed", typed_ok == cfg.corpus_terms,
            typed_ok == cfg.corpus_terms ? os.str() : why);
  }
  {
    std::ostringstream os;
    os << self_ok << "/" << cfg.corpus_terms
       << " inferred contexts accept their own term";
    rep.add("self-acceptance", self_ok == cfg.corpus_terms,
            self_ok == cfg.corpus_terms ? os.str() : why);
  }
  {
    std::ostringstream os;
    os << dominated << "/" << accepted
       << " accepted random contexts lie below the inferred context";
    rep.add("dominance", accepted == dominated && accepted > 0,
            accepted == dominated && accepted > 0 ? os.str() : why);
  }
  return rep;
}

}  // namespace gtt
