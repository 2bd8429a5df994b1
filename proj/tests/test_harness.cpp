#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "gtt/harness.hpp"
#include "gtt/reduce.hpp"

using namespace gtt;

namespace {

HarnessConfig small_config(const char* instance) {
  HarnessConfig cfg;
  cfg.m = make_instance(instance);
  cfg.seed = 42;
  cfg.depth = 4;
  cfg.corpus_terms = 60;
  cfg.contexts_per_term = 30;
  cfg.reduction_steps = 80;
  cfg.beta_instances = 40;
  cfg.soundness_programs = 40;
  cfg.noninterference_samples = 10;
  return cfg;
}

const CaseResult* find_case(const Report& r, const std::string& name) {
  for (const auto& c : r.cases)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("law suite: all instances lawful, trivial rejected for zero") {
  HarnessConfig cfg = small_config("erasure");
  Report rep = run_law_suite(cfg);
  CHECK(rep.ok());
  for (const char* id :
       {"erasure", "affine", "linear", "linear-or-affine", "trivial",
        "lattice:lmh"}) {
    const CaseResult* c = find_case(rep, std::string("laws:") + id);
    REQUIRE(c != nullptr);
    CHECK(c->pass);
  }
  const CaseResult* tv = find_case(rep, "well-behaved-zero:trivial:rejected");
  REQUIRE(tv != nullptr);
  CHECK(tv->pass);  // passes because the one-point instance FAILS the laws
  const CaseResult* uq = find_case(rep, "nr-uniqueness:erasure");
  REQUIRE(uq != nullptr);
  CHECK(uq->pass);
  const CaseResult* pl = find_case(rep, "nr-plurality:linear");
  REQUIRE(pl != nullptr);
  CHECK(pl->pass);
  for (const char* id :
       {"erasure", "affine", "linear", "linear-or-affine", "trivial",
        "lattice:lmh"}) {
    const CaseResult* c = find_case(rep, std::string("division:") + id);
    REQUIRE(c != nullptr);
    CHECK(c->pass);
  }
  CHECK(find_case(rep, "matrix-linearity") != nullptr);
}

TEST_CASE("soundness suite: erasure instance") {
  HarnessConfig cfg = small_config("erasure");
  Report rep = run_soundness_suite(cfg);
  for (const auto& c : rep.cases) {
    INFO(c.name, ": ", c.witness);
    CHECK(c.pass);
  }
  const CaseResult* five = find_case(rep, "named:five");
  REQUIRE(five != nullptr);
  CHECK(five->witness == "source=5 target(cbn)=5 target(cbv)=5 AGREE");
  const CaseResult* ce = find_case(rep, "erased-match-hypotheses-unmet");
  REQUIRE(ce != nullptr);
  CHECK(ce->pass);
}

TEST_CASE("soundness suite: linear instance") {
  HarnessConfig cfg = small_config("linear");
  Report rep = run_soundness_suite(cfg);
  for (const auto& c : rep.cases) {
    INFO(c.name, ": ", c.witness);
    CHECK(c.pass);
  }
}

TEST_CASE("soundness suite: three-point lattice with non-interference") {
  HarnessConfig cfg = small_config("erasure");
  cfg.m = lmh_lattice();
  Report rep = run_soundness_suite(cfg);
  for (const auto& c : rep.cases) {
    INFO(c.name, ": ", c.witness);
    CHECK(c.pass);
  }
  const CaseResult* ni = find_case(rep, "non-interference");
  REQUIRE(ni != nullptr);
  CHECK(ni->pass);
}

TEST_CASE("soundness suite: moded discipline") {
  HarnessConfig cfg = small_config("erasure");
  cfg.moded = true;
  Report rep = run_soundness_suite(cfg);
  for (const auto& c : rep.cases) {
    INFO(c.name, ": ", c.witness);
    CHECK(c.pass);
  }
}

TEST_CASE("preservation suite: usage stable under steps and matrices") {
  for (const char* id : {"erasure", "linear"}) {
    HarnessConfig cfg = small_config(id);
    Report rep = run_preservation_suite(cfg);
    for (const auto& c : rep.cases) {
      INFO(id, "/", c.name, ": ", c.witness);
      CHECK(c.pass);
    }
    CHECK(find_case(rep, "usage-subject-reduction") != nullptr);
    CHECK(find_case(rep, "substitution-matrix") != nullptr);
  }
}

TEST_CASE("principality suite: inference is the greatest accepted context") {
  for (const char* id : {"erasure", "linear", "affine"}) {
    HarnessConfig cfg = small_config(id);
    Report rep = run_principality_suite(cfg);
    for (const auto& c : rep.cases) {
      INFO(id, "/", c.name, ": ", c.witness);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("reports are reproducible bit for bit for a fixed seed") {
  HarnessConfig cfg = small_config("linear");
  cfg.soundness_programs = 15;
  cfg.noninterference_samples = 5;
  Report a = run_soundness_suite(cfg);
  Report b = run_soundness_suite(cfg);
  CHECK(a.text() == b.text());
  CHECK(a.json() == b.json());
  Report pa = run_principality_suite(cfg);
  Report pb = run_principality_suite(cfg);
  CHECK(pa.text() == pb.text());
  CHECK(pa.json() == pb.json());
}

TEST_CASE("report JSON carries the documented schema") {
  HarnessConfig cfg = small_config("erasure");
  cfg.corpus_terms = 10;
  cfg.contexts_per_term = 5;
  Report rep = run_principality_suite(cfg);
  nlohmann::json j = nlohmann::json::parse(rep.json());
  CHECK(j["suite"] == "principality");
  CHECK(j["seed"] == 42);
  CHECK(j["config"].is_string());
  CHECK(j["passed"].is_number_integer());
  CHECK(j["failed"] == rep.failed());
  REQUIRE(j["cases"].is_array());
  REQUIRE(j["cases"].size() == rep.cases.size());
  for (const auto& c : j["cases"]) {
    CHECK(c["suite"] == "principality");
    CHECK(c.contains("case"));
    CHECK((c["verdict"] == "pass" || c["verdict"] == "fail"));
    CHECK(c.contains("witness"));
  }
}

TEST_CASE("report text format lists one line per case") {
  Report rep{"demo", 7, "modality=erasure", {}};
  rep.add("alpha", true, "fine");
  rep.add("beta", false, "broke");
  CHECK(rep.failed() == 1);
  CHECK(!rep.ok());
  CHECK(rep.text() ==
        "suite: demo\nseed: 7\nconfig: modality=erasure\n"
        "[PASS] alpha — fine\n[FAIL] beta — broke\n"
        "result: 1 passed, 1 failed\n");
}

TEST_CASE("generator emits well-typed, well-resourced items") {
  // Direct spot-check apart from the suites, on a modality with meets that
  // genuinely branch (linear-or-affine).
  Modality m = make_instance("linear-or-affine");
  Restrictions rs;
  TermGen gen(m, rs, 99, 4, false, false);
  for (int i = 0; i < 50; ++i) {
    GenItem it = gen.nat_program(2, 1);
    UsageCtx g = infer_usage_plain(m, rs, it.term);
    CHECK_NOTHROW(check_usage_plain(m, rs, g, it.term));
    CHECK(g.size() == it.ctx.size());
  }
}

TEST_CASE("erased-only generator keeps every hypothesis at grade zero") {
  Modality m = make_instance("linear");
  Restrictions rs;
  rs.erased_matches = false;
  TermGen gen(m, rs, 7, 4, true, false);
  for (int i = 0; i < 50; ++i) {
    GenItem it = gen.nat_program(2, 0);
    UsageCtx g = infer_usage_plain(m, rs, it.term);
    for (Grade x : g) CHECK(x == m.zero);
  }
}

TEST_CASE("beta instances expose an ascribed redex at ℕ") {
  Modality m = make_instance("erasure");
  Restrictions rs;
  TermGen gen(m, rs, 3, 3, false, false);
  for (int i = 0; i < 20; ++i) {
    GenItem it = gen.beta_instance(1, 1);
    REQUIRE(it.term->kind == Kind::App);
    REQUIRE(it.term->a->kind == Kind::Ann);
    REQUIRE(it.term->a->a->kind == Kind::Lam);
    StepResult s = whnf_step(it.term);
    CHECK(s.tag == StepResult::Tag::Stepped);
  }
}

TEST_CASE("counterexample fixture is stuck at source, computes at target") {
  Modality m = make_instance("erasure");
  GenItem ce = erased_match_counterexample(m);
  NumeralResult src = read_numeral(ce.term);
  CHECK(src.tag == NumeralResult::Tag::Stuck);
  for (auto str : {Strictness::NonStrict, Strictness::Strict}) {
    TNumeralResult tn =
        target_read_numeral(erase(ce.term, str), str, default_fuel());
    CHECK(tn.tag == TNumeralResult::Tag::Ok);
    CHECK(tn.value == 0);
  }
}
