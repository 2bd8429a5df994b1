#include "gtt/cli.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "gtt/extract.hpp"
#include "gtt/frontend.hpp"
#include "gtt/harness.hpp"
#include "gtt/reduce.hpp"
#include "gtt/typecheck.hpp"
#include "gtt/usage.hpp"

namespace gtt {

namespace {

using nlohmann::json;

struct CliConfig {
  std::string modality = "erasure";
  std::string lattice_path;
  std::string nr = "default";
  std::string mode = "plain";          // plain | moded
  bool strict = false;                 // extraction/eval discipline
  bool erased_matches = true;
  bool emptyrec_zero = true;
  std::string pisigma = "any";         // any | equal
  std::uint64_t fuel = 0;              // 0: default_fuel() (GTT_FUEL aware)
  std::uint64_t seed = 42;
  int jobs = 1;
  std::string emit = "text";           // text | json

  Modality m = make_instance("erasure");
  bool moded() const { return mode == "moded"; }
  Restrictions restrictions() const {
    Restrictions rs;
    rs.erased_matches = erased_matches;
    rs.emptyrec_zero = emptyrec_zero;
    rs.zero = m.zero;
    return rs;
  }
  CheckConfig check_config() const { return {pisigma == "equal", fuel}; }
};

// Thrown for flag/configuration problems -> exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void finalize_config(CliConfig& cfg) {
  if (cfg.modality == "lattice") {
    if (cfg.lattice_path.empty())
      throw ConfigError("--modality lattice requires --lattice <file>");
    cfg.modality = "lattice:" + cfg.lattice_path;
  } else if (!cfg.lattice_path.empty() &&
             cfg.modality.rfind("lattice:", 0) != 0) {
    throw ConfigError("--lattice is only meaningful with --modality lattice");
  }
  try {
    cfg.m = make_instance(cfg.modality);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (cfg.nr != "default" && !set_nr_variant(cfg.m, cfg.nr))
    throw ConfigError("instance '" + cfg.m.id + "' has no nr variant '" +
                      cfg.nr + "'");
  if (cfg.moded() && !laws_ok(check_well_behaved_zero(cfg.m)))
    throw ConfigError(
        "--mode moded requires an instance with a well-behaved zero; '" +
        cfg.m.id + "' lacks one");
  if (cfg.fuel == 0) cfg.fuel = default_fuel();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Error rendering: one primary line with a span, indented detail after.

// what() strings carry a "line:col: " prefix; drop it when re-rendering
// behind a file-qualified span.
std::string strip_span(std::uint32_t line, std::uint32_t col,
                       const std::string& what) {
  std::string prefix =
      std::to_string(line) + ":" + std::to_string(col) + ": ";
  return what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what;
}

std::string render(const CliConfig& cfg, const std::string& file,
                   const TypeError& e) {
  std::ostringstream os;
  os << file << ":" << e.line << ":" << e.col << ": type error ("
     << type_error_kind_name(e.kind)
     << "): " << strip_span(e.line, e.col, e.what());
  if (e.expected) os << "\n  expected: " << show_term(cfg.m, e.expected);
  if (e.actual) os << "\n  actual:   " << show_term(cfg.m, e.actual);
  return os.str();
}

std::string render(const CliConfig&, const std::string& file,
                   const UsageError& e) {
  std::ostringstream os;
  os << file << ":" << e.line << ":" << e.col << ": usage error ("
     << usage_error_kind_name(e.kind)
     << "): " << strip_span(e.line, e.col, e.what());
  return os.str();
}

json error_json(const std::string& phase, std::uint32_t line,
                std::uint32_t col, const std::string& kind,
                const std::string& message) {
  json j;
  j["phase"] = phase;
  j["line"] = line;
  j["col"] = col;
  if (!kind.empty()) j["kind"] = kind;
  j["message"] = message;
  return j;
}

// ---------------------------------------------------------------------------
// Definition-level checking shared by cmd_check.

struct DefVerdict {
  std::string name;
  bool ok = true;
  std::string text;  // rendered error when !ok
  json err;          // structured error when !ok
};

DefVerdict check_def(const CliConfig& cfg, const std::string& file,
                     const Def& d) {
  DefVerdict v{d.name, true, "", {}};
  Checker ch(cfg.check_config());
  try {
    TypingCtx ctx;
    ch.check_type(ctx, d.type);
    ch.check_term(ctx, d.body, d.type);
  } catch (const TypeError& e) {
    v.ok = false;
    v.text = render(cfg, file, e);
    v.err = error_json("type", e.line, e.col, type_error_kind_name(e.kind),
                       strip_span(e.line, e.col, e.what()));
    return v;
  }
  try {
    Restrictions rs = cfg.restrictions();
    UsageCtx empty;
    if (cfg.moded())
      check_usage_moded(cfg.m, rs, empty, Mode::One, d.body);
    else
      check_usage_plain(cfg.m, rs, empty, d.body);
  } catch (const UsageError& e) {
    v.ok = false;
    v.text = render(cfg, file, e);
    v.err = error_json("usage", e.line, e.col, usage_error_kind_name(e.kind),
                       strip_span(e.line, e.col, e.what()));
  }
  return v;
}

int cmd_check(const CliConfig& cfg, const std::string& file, std::ostream& out,
              std::ostream& err) {
  json j;
  j["command"] = "check";
  j["file"] = file;
  j["modality"] = cfg.m.id;
  SourceFile f;
  try {
    f = parse_file(read_file(file), cfg.m);
  } catch (const ParseError& e) {
    if (cfg.emit == "json") {
      j["ok"] = false;
      j["error"] = error_json("parse", e.line, e.col, "", e.what());
      out << j.dump(2) << "\n";
    } else {
      err << file << ":" << e.what() << "\n";
    }
    return 1;
  }
  std::vector<DefVerdict> verdicts(f.defs.size());
  int jobs = std::max(1, cfg.jobs);
  if (jobs == 1 || f.defs.size() < 2) {
    for (std::size_t i = 0; i < f.defs.size(); ++i)
      verdicts[i] = check_def(cfg, file, f.defs[i]);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < f.defs.size(); i = next++)
        verdicts[i] = check_def(cfg, file, f.defs[i]);
    };
    std::vector<std::thread> pool;
    for (int k = 0; k < jobs; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  bool all_ok = true;
  j["defs"] = json::array();
  for (const auto& v : verdicts) {
    all_ok = all_ok && v.ok;
    json dj;
    dj["name"] = v.name;
    dj["ok"] = v.ok;
    if (!v.ok) dj["error"] = v.err;
    j["defs"].push_back(dj);
  }
  j["ok"] = all_ok;
  if (cfg.emit == "json") {
    out << j.dump(2) << "\n";
  } else {
    for (const auto& v : verdicts) {
      if (v.ok)
        out << "ok " << v.name << "\n";
      else
        err << v.text << "\n";
    }
    out << (all_ok ? "ok" : "FAIL") << ": " << file << "\n";
  }
  return all_ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Single-definition commands.

const Def& want_def(const SourceFile& f, const std::string& name) {
  const Def* d = resolve(f, name);
  if (d == nullptr) throw ConfigError("no definition named '" + name + "'");
  return *d;
}

// Principal usage of the body under its leading lambda binders.
int cmd_usage(const CliConfig& cfg, const std::string& file,
              const std::string& name, std::ostream& out, std::ostream& err) {
  SourceFile f = parse_file(read_file(file), cfg.m);
  const Def& d = want_def(f, name);
  Term body = d.body;
  std::vector<std::string> binders;  // names[i] labels free index i
  while (body->kind == Kind::Lam && binders.size() < d.params.size()) {
    binders.insert(binders.begin(),
                   d.params[binders.size()]);
    body = body->a;
  }
  Restrictions rs = cfg.restrictions();
  UsageCtx g;
  try {
    g = cfg.moded() ? infer_usage_moded(cfg.m, rs, Mode::One, body)
                    : infer_usage_plain(cfg.m, rs, body);
  } catch (const UsageError& e) {
    if (cfg.emit == "json") {
      json j;
      j["command"] = "usage";
      j["def"] = name;
      j["ok"] = false;
      j["error"] = error_json("usage", e.line, e.col,
                              usage_error_kind_name(e.kind),
                              strip_span(e.line, e.col, e.what()));
      out << j.dump(2) << "\n";
    } else {
      err << render(cfg, file, e) << "\n";
    }
    return 1;
  }
  if (cfg.emit == "json") {
    json j;
    j["command"] = "usage";
    j["def"] = name;
    j["modality"] = cfg.m.id;
    j["ok"] = true;
    j["context"] = json::array();
    for (std::size_t k = 0; k < g.size(); ++k) {
      std::size_t i = g.size() - 1 - k;  // outermost binder first
      std::string var = i < binders.size() && !binders[i].empty()
                            ? binders[i]
                            : "x" + std::to_string(i);
      j["context"].push_back({{"var", var}, {"grade", cfg.m.show(g[i])}});
    }
    out << j.dump(2) << "\n";
  } else {
    out << show_ctx(cfg.m, g, binders) << "\n";
  }
  return 0;
}

int cmd_extract(const CliConfig& cfg, const std::string& file,
                const std::string& name, std::ostream& out) {
  SourceFile f = parse_file(read_file(file), cfg.m);
  const Def& d = want_def(f, name);
  Strictness str = cfg.strict ? Strictness::Strict : Strictness::NonStrict;
  EraseMode em = cfg.moded() ? EraseMode::Moded : EraseMode::Plain;
  TargetTerm t = erase(d.body, str, em, cfg.m.zero);
  if (cfg.emit == "json") {
    json j;
    j["command"] = "extract";
    j["def"] = name;
    j["strictness"] = cfg.strict ? "strict" : "non-strict";
    j["mode"] = cfg.mode;
    j["target"] = show_target(t);
    out << j.dump(2) << "\n";
  } else {
    out << show_target(t) << "\n";
  }
  return 0;
}

const char* numeral_verdict(NumeralResult::Tag t) {
  switch (t) {
    case NumeralResult::Tag::Ok: return "ok";
    case NumeralResult::Tag::Stuck: return "stuck";
    case NumeralResult::Tag::Timeout: return "timeout";
    default: return "ill-formed";
  }
}

const char* numeral_verdict(TNumeralResult::Tag t) {
  switch (t) {
    case TNumeralResult::Tag::Ok: return "ok";
    case TNumeralResult::Tag::Stuck: return "stuck";
    default: return "timeout";
  }
}

int cmd_eval(const CliConfig& cfg, const std::string& file,
             const std::string& name, std::ostream& out, std::ostream& err) {
  SourceFile f = parse_file(read_file(file), cfg.m);
  const Def& d = want_def(f, name);
  NumeralResult r = read_numeral(d.body, cfg.fuel);
  bool ok = r.tag == NumeralResult::Tag::Ok;
  if (cfg.emit == "json") {
    json j;
    j["command"] = "eval";
    j["def"] = name;
    j["verdict"] = numeral_verdict(r.tag);
    if (ok) j["value"] = r.value;
    if (!r.diag.empty()) j["diag"] = r.diag;
    out << j.dump(2) << "\n";
  } else if (ok) {
    out << r.value << "\n";
  } else {
    err << name << ": " << numeral_verdict(r.tag)
        << (r.diag.empty() ? "" : ": " + r.diag) << "\n";
  }
  return ok ? 0 : 1;
}

int cmd_run(const CliConfig& cfg, const std::string& file,
            const std::string& name, std::ostream& out) {
  SourceFile f = parse_file(read_file(file), cfg.m);
  const Def& d = want_def(f, name);
  EraseMode em = cfg.moded() ? EraseMode::Moded : EraseMode::Plain;
  NumeralResult src = read_numeral(d.body, cfg.fuel);
  TNumeralResult cbn = target_read_numeral(
      erase(d.body, Strictness::NonStrict, em, cfg.m.zero),
      Strictness::NonStrict, cfg.fuel);
  TNumeralResult cbv =
      target_read_numeral(erase(d.body, Strictness::Strict, em, cfg.m.zero),
                          Strictness::Strict, cfg.fuel);
  bool agree = src.tag == NumeralResult::Tag::Ok &&
               cbn.tag == TNumeralResult::Tag::Ok &&
               cbv.tag == TNumeralResult::Tag::Ok && cbn.value == src.value &&
               cbv.value == src.value;
  auto side = [](bool ok, std::uint64_t v, const char* verdict) {
    return ok ? std::to_string(v) : std::string(verdict);
  };
  std::string s_src = side(src.tag == NumeralResult::Tag::Ok, src.value,
                           numeral_verdict(src.tag));
  std::string s_cbn = side(cbn.tag == TNumeralResult::Tag::Ok, cbn.value,
                           numeral_verdict(cbn.tag));
  std::string s_cbv = side(cbv.tag == TNumeralResult::Tag::Ok, cbv.value,
                           numeral_verdict(cbv.tag));
  if (cfg.emit == "json") {
    json j;
    j["command"] = "run";
    j["def"] = name;
    j["modality"] = cfg.m.id;
    j["source"] = {{"verdict", numeral_verdict(src.tag)}};
    if (src.tag == NumeralResult::Tag::Ok) j["source"]["value"] = src.value;
    j["target_cbn"] = {{"verdict", numeral_verdict(cbn.tag)}};
    if (cbn.tag == TNumeralResult::Tag::Ok) j["target_cbn"]["value"] = cbn.value;
    j["target_cbv"] = {{"verdict", numeral_verdict(cbv.tag)}};
    if (cbv.tag == TNumeralResult::Tag::Ok) j["target_cbv"]["value"] = cbv.value;
    j["verdict"] = agree ? "AGREE" : "DISAGREE";
    out << j.dump(2) << "\n";
  } else {
    out << "source=" << s_src << " target(cbn)=" << s_cbn
        << " target(cbv)=" << s_cbv << " " << (agree ? "AGREE" : "DISAGREE")
        << "\n";
  }
  return agree ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Harness entry points.

HarnessConfig harness_config(const CliConfig& cfg) {
  HarnessConfig h;
  h.m = cfg.m;
  h.rs = cfg.restrictions();
  h.moded = cfg.moded();
  h.fuel = cfg.fuel;
  h.seed = cfg.seed;
  return h;
}

int emit_reports(const CliConfig& cfg, const std::vector<Report>& reps,
                 std::ostream& out) {
  bool ok = true;
  if (cfg.emit == "json") {
    json arr = json::array();
    for (const auto& r : reps) {
      arr.push_back(json::parse(r.json()));
      ok = ok && r.ok();
    }
    out << (reps.size() == 1 ? arr[0] : arr).dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < reps.size(); ++i) {
      if (i) out << "\n";
      out << reps[i].text();
      ok = ok && reps[i].ok();
    }
  }
  return ok ? 0 : 1;
}

int cmd_laws(const CliConfig& cfg, std::ostream& out) {
  return emit_reports(cfg, {run_law_suite(harness_config(cfg))}, out);
}

int cmd_suite(const CliConfig& cfg, const std::string& id, std::ostream& out) {
  HarnessConfig h = harness_config(cfg);
  std::vector<Report> reps;
  if (id == "laws" || id == "all") reps.push_back(run_law_suite(h));
  if (id == "soundness" || id == "all") reps.push_back(run_soundness_suite(h));
  if (id == "preservation" || id == "all")
    reps.push_back(run_preservation_suite(h));
  if (id == "principality" || id == "all")
    reps.push_back(run_principality_suite(h));
  if (reps.empty())
    throw ConfigError("unknown suite '" + id +
                      "' (laws, soundness, preservation, principality, all)");
  return emit_reports(cfg, reps, out);
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"graded modal dependent types: checker, extractor, harness"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* c) {
    c->add_option("--modality", cfg.modality,
                  "erasure|affine|linear|linear-or-affine|trivial|lattice");
    c->add_option("--lattice", cfg.lattice_path, "lattice spec file");
    c->add_option("--nr", cfg.nr, "nr table variant (default|bad)");
    c->add_option("--mode", cfg.mode, "usage discipline (plain|moded)")
        ->check(CLI::IsMember({"plain", "moded"}));
    c->add_flag("--strict", cfg.strict, "strict (call-by-value) extraction");
    c->add_flag("--erased-matches,!--no-erased-matches", cfg.erased_matches,
                "allow/forbid matching on 0-graded data (default: allow)");
    c->add_flag("--emptyrec-zero,!--no-emptyrec-zero", cfg.emptyrec_zero,
                "allow/forbid emptyrec at grade 0 (default: allow)");
    c->add_option("--pisigma", cfg.pisigma,
                  "grade relation on binder types (any|equal)")
        ->check(CLI::IsMember({"any", "equal"}));
    c->add_option("--fuel", cfg.fuel, "evaluation step budget");
    c->add_option("--seed", cfg.seed, "generator seed");
    c->add_option("--jobs", cfg.jobs, "parallel definition checking");
    c->add_option("--emit", cfg.emit, "output format (text|json)")
        ->check(CLI::IsMember({"text", "json"}));
    return c;
  };

  std::string file, name, suite_id;
  CLI::App* check = add_common(app.add_subcommand(
      "check", "typecheck and usage-check every definition"));
  check->add_option("file", file)->required();
  CLI::App* usage = add_common(
      app.add_subcommand("usage", "principal usage context of a definition"));
  usage->add_option("file", file)->required();
  usage->add_option("name", name)->required();
  CLI::App* extract = add_common(
      app.add_subcommand("extract", "erase a definition to the target"));
  extract->add_option("file", file)->required();
  extract->add_option("name", name)->required();
  CLI::App* eval = add_common(
      app.add_subcommand("eval", "source numeral readback of a definition"));
  eval->add_option("file", file)->required();
  eval->add_option("name", name)->required();
  CLI::App* run = add_common(app.add_subcommand(
      "run", "differential source/target evaluation with verdict"));
  run->add_option("file", file)->required();
  run->add_option("name", name)->required();
  CLI::App* laws = add_common(
      app.add_subcommand("laws", "algebraic law report for the instances"));
  (void)laws;
  CLI::App* suite = add_common(app.add_subcommand(
      "suite", "replication suites (laws|soundness|preservation|principality|all)"));
  suite->add_option("id", suite_id)->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    finalize_config(cfg);
    if (check->parsed()) return cmd_check(cfg, file, out, err);
    if (usage->parsed()) return cmd_usage(cfg, file, name, out, err);
    if (extract->parsed()) return cmd_extract(cfg, file, name, out);
    if (eval->parsed()) return cmd_eval(cfg, file, name, out, err);
    if (run->parsed()) return cmd_run(cfg, file, name, out);
    if (laws->parsed()) return cmd_laws(cfg, out);
    if (suite->parsed()) return cmd_suite(cfg, suite_id, out);
    err << "no subcommand\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << file << ":" << e.what() << "\n";
    return 1;
  } catch (const TypeError& e) {
    err << render(cfg, file, e) << "\n";
    return 1;
  } catch (const UsageError& e) {
    err << render(cfg, file, e) << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace gtt
