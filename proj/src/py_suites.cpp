#include <pybind11/pybind11.h>

#include <string>
#include <vector>

#include "gtt/harness.hpp"
#include "py_common.hpp"

namespace py = pybind11;
using namespace gtt;

namespace gttpy {
namespace {

py::dict report_dict(const Report& r) {
  py::dict d;
  d["suite"] = r.suite;
  d["seed"] = r.seed;
  d["config"] = r.config;
  int failed = r.failed();
  d["passed"] = static_cast<int>(r.cases.size()) - failed;
  d["failed"] = failed;
  py::list cases;
  for (const CaseResult& c : r.cases) {
    py::dict e;
    e["suite"] = r.suite;
    e["case"] = c.name;
    e["verdict"] = c.pass ? "pass" : "fail";
    e["witness"] = c.witness;
    cases.append(e);
  }
  d["cases"] = cases;
  return d;
}

HarnessConfig harness_config(const Opts& o, std::uint64_t seed, int depth,
                             int corpus_terms, int contexts_per_term,
                             int reduction_steps, int beta_instances,
                             int soundness_programs,
                             int noninterference_samples) {
  HarnessConfig hc;
  hc.m = o.m;
  hc.rs = o.rs;
  hc.moded = o.moded;
  hc.fuel = o.fuel;
  hc.seed = seed;
  if (depth) hc.depth = depth;
  if (corpus_terms) hc.corpus_terms = corpus_terms;
  if (contexts_per_term) hc.contexts_per_term = contexts_per_term;
  if (reduction_steps) hc.reduction_steps = reduction_steps;
  if (beta_instances) hc.beta_instances = beta_instances;
  if (soundness_programs) hc.soundness_programs = soundness_programs;
  if (noninterference_samples)
    hc.noninterference_samples = noninterference_samples;
  return hc;
}

std::vector<Report> run_suites(const std::string& id,
                               const HarnessConfig& hc) {
  std::vector<Report> reps;
  bool all = id == "all";
  if (all || id == "laws") reps.push_back(run_law_suite(hc));
  if (all || id == "soundness") reps.push_back(run_soundness_suite(hc));
  if (all || id == "preservation") reps.push_back(run_preservation_suite(hc));
  if (all || id == "principality") reps.push_back(run_principality_suite(hc));
  if (reps.empty())
    throw py::value_error("unknown suite '" + id +
                          "' (laws, soundness, preservation, principality, "
                          "all)");
  return reps;
}

}  // namespace

void pyExportSuites(py::module_& m) {
  m.def(
      "laws",
      [](const std::string& modality, const std::string& nr,
         std::uint64_t seed) {
        Opts o = make_opts(modality, nr, "plain", true, true, "any", 0);
        HarnessConfig hc = harness_config(o, seed, 0, 0, 0, 0, 0, 0, 0);
        return report_dict(run_law_suite(hc));
      },
      py::arg("modality") = "erasure", py::kw_only(),
      py::arg("nr") = "default", py::arg("seed") = 42,
      "Audit the grade-algebra laws: axioms for each bundled instance (plus "
      "the configured one), well-behaved zero, nr uniqueness/plurality, "
      "division, and matrix linearity. Returns a report dict.");

  m.def(
      "suite",
      [](const std::string& id, const std::string& modality,
         const std::string& nr, const std::string& mode, bool erased_matches,
         bool emptyrec_zero, std::uint64_t fuel, std::uint64_t seed,
         int depth, int corpus_terms, int contexts_per_term,
         int reduction_steps, int beta_instances, int soundness_programs,
         int noninterference_samples) {
        Opts o = make_opts(modality, nr, mode, erased_matches, emptyrec_zero,
                           "any", fuel);
        HarnessConfig hc = harness_config(
            o, seed, depth, corpus_terms, contexts_per_term, reduction_steps,
            beta_instances, soundness_programs, noninterference_samples);
        py::list out;
        for (const Report& r : run_suites(id, hc)) out.append(report_dict(r));
        return out;
      },
      py::arg("id"), py::kw_only(), py::arg("modality") = "erasure",
      py::arg("nr") = "default", py::arg("mode") = "plain",
      py::arg("erased_matches") = true, py::arg("emptyrec_zero") = true,
      py::arg("fuel") = 0, py::arg("seed") = 42, py::arg("depth") = 0,
      py::arg("corpus_terms") = 0, py::arg("contexts_per_term") = 0,
      py::arg("reduction_steps") = 0, py::arg("beta_instances") = 0,
      py::arg("soundness_programs") = 0,
      py::arg("noninterference_samples") = 0,
      "Run a randomized audit suite ('laws', 'soundness', 'preservation', "
      "'principality' or 'all'); volume arguments left at 0 keep the "
      "defaults. Returns a list of report dicts.");
}

}  // namespace gttpy
