#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

#include "gtt/extract.hpp"
#include "gtt/frontend.hpp"
#include "gtt/reduce.hpp"
#include "py_common.hpp"

namespace py = pybind11;
using namespace gtt;

namespace gttpy {

Opts make_opts(const std::string& modality, const std::string& nr,
               const std::string& mode, bool erased_matches,
               bool emptyrec_zero, const std::string& pisigma,
               std::uint64_t fuel) {
  Opts o;
  try {
    o.m = make_instance(modality);
  } catch (const std::exception& e) {
    throw py::value_error(e.what());
  }
  if (!set_nr_variant(o.m, nr))
    throw py::value_error("unknown nr variant '" + nr + "' for " + o.m.id);
  if (mode != "plain" && mode != "moded")
    throw py::value_error("mode must be 'plain' or 'moded'");
  o.moded = mode == "moded";
  if (o.moded && !laws_ok(check_well_behaved_zero(o.m)))
    throw py::value_error("the moded discipline needs a well-behaved zero, "
                          "which " + o.m.id + " lacks");
  if (pisigma != "any" && pisigma != "equal")
    throw py::value_error("pisigma must be 'any' or 'equal'");
  o.rs.erased_matches = erased_matches;
  o.rs.emptyrec_zero = emptyrec_zero;
  o.rs.zero = o.m.zero;
  o.fuel = fuel ? fuel : default_fuel();
  o.cc = CheckConfig{pisigma == "equal", o.fuel};
  return o;
}

namespace {

const Def& want_def(const SourceFile& f, const std::string& name) {
  const Def* d = resolve(f, name);
  if (!d) throw py::value_error("no definition named '" + name + "'");
  return *d;
}

void check_def(const Opts& o, const Checker& ch, const Def& d) {
  TypingCtx ctx;
  ch.check_type(ctx, d.type);
  ch.check_term(ctx, d.body, d.type);
  UsageCtx empty;
  if (o.moded)
    check_usage_moded(o.m, o.rs, empty, Mode::One, d.body);
  else
    check_usage_plain(o.m, o.rs, empty, d.body);
}

std::vector<std::string> op_check(const std::string& source, const Opts& o) {
  SourceFile f = parse_file(source, o.m);
  Checker ch(o.cc);
  std::vector<std::string> names;
  for (const Def& d : f.defs) {
    check_def(o, ch, d);
    names.push_back(d.name);
  }
  return names;
}

// (variable, grade) pairs of the principal context, outermost binder first.
std::vector<std::pair<std::string, std::string>> op_usage(
    const std::string& source, const std::string& name, const Opts& o) {
  SourceFile f = parse_file(source, o.m);
  const Def& d = want_def(f, name);
  Term body = d.body;
  std::vector<std::string> binders;  // binders[i] labels free index i
  while (body->kind == Kind::Lam && binders.size() < d.params.size()) {
    binders.insert(binders.begin(), d.params[binders.size()]);
    body = body->a;
  }
  UsageCtx g = o.moded ? infer_usage_moded(o.m, o.rs, Mode::One, body)
                       : infer_usage_plain(o.m, o.rs, body);
  std::vector<std::pair<std::string, std::string>> ctx;
  for (std::size_t k = 0; k < g.size(); ++k) {
    std::size_t i = g.size() - 1 - k;
    std::string var = i < binders.size() && !binders[i].empty()
                          ? binders[i]
                          : "x" + std::to_string(i);
    ctx.emplace_back(var, o.m.show(g[i]));
  }
  return ctx;
}

std::string op_extract(const std::string& source, const std::string& name,
                       bool strict, const Opts& o) {
  SourceFile f = parse_file(source, o.m);
  const Def& d = want_def(f, name);
  Strictness str = strict ? Strictness::Strict : Strictness::NonStrict;
  EraseMode em = o.moded ? EraseMode::Moded : EraseMode::Plain;
  return show_target(erase(d.body, str, em, o.m.zero));
}

std::uint64_t op_evaluate(const std::string& source, const std::string& name,
                          const Opts& o) {
  SourceFile f = parse_file(source, o.m);
  const Def& d = want_def(f, name);
  NumeralResult r = read_numeral(d.body, o.fuel);
  if (r.tag != NumeralResult::Tag::Ok) {
    const char* verdict = r.tag == NumeralResult::Tag::Stuck ? "stuck"
                          : r.tag == NumeralResult::Tag::Timeout
                              ? "timeout"
                              : "ill-formed";
    throw std::runtime_error(name + ": " + verdict +
                             (r.diag.empty() ? "" : ": " + r.diag));
  }
  return r.value;
}

py::dict side(const char* verdict, bool ok, std::uint64_t value,
              const std::string& diag) {
  py::dict d;
  d["verdict"] = verdict;
  if (ok) d["value"] = value;
  if (!diag.empty()) d["detail"] = diag;
  return d;
}

py::dict op_run(const std::string& source, const std::string& name,
                const Opts& o) {
  SourceFile f = parse_file(source, o.m);
  const Def& d = want_def(f, name);
  EraseMode em = o.moded ? EraseMode::Moded : EraseMode::Plain;

  NumeralResult src = read_numeral(d.body, o.fuel);
  bool src_ok = src.tag == NumeralResult::Tag::Ok;
  const char* sv = src_ok                                  ? "ok"
                   : src.tag == NumeralResult::Tag::Stuck  ? "stuck"
                   : src.tag == NumeralResult::Tag::Timeout ? "timeout"
                                                             : "ill-formed";

  py::dict out;
  out["source"] = side(sv, src_ok, src.value, src.diag);
  bool agree = src_ok;
  const char* keys[] = {"target_cbn", "target_cbv"};
  const Strictness strs[] = {Strictness::NonStrict, Strictness::Strict};
  for (int i = 0; i < 2; ++i) {
    TNumeralResult t = target_read_numeral(
        erase(d.body, strs[i], em, o.m.zero), strs[i], o.fuel);
    bool ok = t.tag == TNumeralResult::Tag::Ok;
    const char* tv = ok                                       ? "ok"
                     : t.tag == TNumeralResult::Tag::Stuck    ? "stuck"
                                                              : "timeout";
    out[keys[i]] = side(tv, ok, t.value, t.diag);
    agree = agree && ok && t.value == src.value;
  }
  out["agree"] = agree;
  return out;
}

py::dict op_modality(const std::string& id, const std::string& nr) {
  Opts o = make_opts(id, nr, "plain", true, true, "any", 0);
  py::dict d;
  d["id"] = o.m.id;
  py::list elems;
  for (const auto& n : o.m.names) elems.append(n);
  d["elements"] = elems;
  d["zero"] = o.m.show(o.m.zero);
  d["one"] = o.m.show(o.m.one);
  d["laws"] = laws_ok(check_laws(o.m));
  d["well_behaved_zero"] = laws_ok(check_well_behaved_zero(o.m));
  return d;
}

}  // namespace

void pyExportOps(py::module_& m) {
  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<TypeError>(m, "TypeError");
  py::register_exception<UsageError>(m, "UsageError");

  auto opts = [](const std::string& modality, const std::string& nr,
                 const std::string& mode, bool erased_matches,
                 bool emptyrec_zero, const std::string& pisigma,
                 std::uint64_t fuel) {
    return make_opts(modality, nr, mode, erased_matches, emptyrec_zero,
                     pisigma, fuel);
  };

  m.def(
      "modality",
      [](const std::string& id, const std::string& nr) {
        return op_modality(id, nr);
      },
      py::arg("id"), py::arg("nr") = "default",
      "Describe a grade instance: carrier element names, zero/one elements, "
      "and whether the algebra laws and the well-behaved-zero property hold. "
      "Custom instances are named 'lattice:<path to a lattice spec file>'.");

  m.def(
      "check",
      [opts](const std::string& source, const std::string& modality,
             const std::string& nr, const std::string& mode,
             bool erased_matches, bool emptyrec_zero,
             const std::string& pisigma, std::uint64_t fuel) {
        return op_check(source,
                        opts(modality, nr, mode, erased_matches,
                             emptyrec_zero, pisigma, fuel));
      },
      py::arg("source"), py::kw_only(), py::arg("modality") = "erasure",
      py::arg("nr") = "default", py::arg("mode") = "plain",
      py::arg("erased_matches") = true, py::arg("emptyrec_zero") = true,
      py::arg("pisigma") = "any", py::arg("fuel") = 0,
      "Type- and usage-check every definition in the source text; returns "
      "the definition names in order, or raises ParseError / TypeError / "
      "UsageError on the first failure.");

  m.def(
      "usage",
      [opts](const std::string& source, const std::string& name,
             const std::string& modality, const std::string& nr,
             const std::string& mode, bool erased_matches, bool emptyrec_zero,
             const std::string& pisigma, std::uint64_t fuel) {
        return op_usage(source, name,
                        opts(modality, nr, mode, erased_matches,
                             emptyrec_zero, pisigma, fuel));
      },
      py::arg("source"), py::arg("name"), py::kw_only(),
      py::arg("modality") = "erasure", py::arg("nr") = "default",
      py::arg("mode") = "plain", py::arg("erased_matches") = true,
      py::arg("emptyrec_zero") = true, py::arg("pisigma") = "any",
      py::arg("fuel") = 0,
      "Infer the principal usage context of a definition's body under its "
      "leading binders; returns (variable, grade) pairs, outermost first.");

  m.def(
      "extract",
      [opts](const std::string& source, const std::string& name, bool strict,
             const std::string& modality, const std::string& nr,
             const std::string& mode, bool erased_matches, bool emptyrec_zero,
             const std::string& pisigma, std::uint64_t fuel) {
        return op_extract(source, name, strict,
                          opts(modality, nr, mode, erased_matches,
                               emptyrec_zero, pisigma, fuel));
      },
      py::arg("source"), py::arg("name"), py::kw_only(),
      py::arg("strict") = false, py::arg("modality") = "erasure",
      py::arg("nr") = "default", py::arg("mode") = "plain",
      py::arg("erased_matches") = true, py::arg("emptyrec_zero") = true,
      py::arg("pisigma") = "any", py::arg("fuel") = 0,
      "Erase a definition's zero-graded positions and render the untyped "
      "target term.");

  m.def(
      "evaluate",
      [opts](const std::string& source, const std::string& name,
             const std::string& modality, const std::string& nr,
             const std::string& mode, bool erased_matches, bool emptyrec_zero,
             const std::string& pisigma, std::uint64_t fuel) {
        return op_evaluate(source, name,
                           opts(modality, nr, mode, erased_matches,
                                emptyrec_zero, pisigma, fuel));
      },
      py::arg("source"), py::arg("name"), py::kw_only(),
      py::arg("modality") = "erasure", py::arg("nr") = "default",
      py::arg("mode") = "plain", py::arg("erased_matches") = true,
      py::arg("emptyrec_zero") = true, py::arg("pisigma") = "any",
      py::arg("fuel") = 0,
      "Reduce a definition's body to a natural-number literal; raises "
      "RuntimeError if it gets stuck or runs out of fuel.");

  m.def(
      "run",
      [opts](const std::string& source, const std::string& name,
             const std::string& modality, const std::string& nr,
             const std::string& mode, bool erased_matches, bool emptyrec_zero,
             const std::string& pisigma, std::uint64_t fuel) {
        return op_run(source, name,
                      opts(modality, nr, mode, erased_matches, emptyrec_zero,
                           pisigma, fuel));
      },
      py::arg("source"), py::arg("name"), py::kw_only(),
      py::arg("modality") = "erasure", py::arg("nr") = "default",
      py::arg("mode") = "plain", py::arg("erased_matches") = true,
      py::arg("emptyrec_zero") = true, py::arg("pisigma") = "any",
      py::arg("fuel") = 0,
      "Evaluate a definition at the source level and after erasure under "
      "both target disciplines; returns per-side verdicts and whether all "
      "three numerals agree.");
}

}  // namespace gttpy
