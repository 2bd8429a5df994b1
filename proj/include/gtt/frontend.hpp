#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gtt/grades.hpp"
#include "gtt/syntax.hpp"

namespace gtt {

struct ParseError : std::runtime_error {
  std::uint32_t line, col;
  ParseError(std::uint32_t l, std::uint32_t c, const std::string& msg)
      : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg),
        line(l),
        col(c) {}
};

// A top-level definition: def <name> : <type> := <body>.  Both sides are
// closed; references to earlier definitions are inlined as ascriptions.
// params records the body's leading lambda binder names (for usage display).
struct Def {
  std::string name;
  Term type, body;
  std::vector<std::string> params;
  std::uint32_t line = 0;
};

struct SourceFile {
  std::vector<std::pair<std::string, std::string>> pragmas;
  std::vector<Def> defs;
};

// Grade literals are validated against the active modality's carrier.
SourceFile parse_file(const std::string& text, const Modality& m);
// A single closed term.
Term parse_term(const std::string& text, const Modality& m);
// Null when absent.
const Def* resolve(const SourceFile& f, const std::string& name);

// Inverse of the grammar; binder names are synthesized as x<depth>.  For
// open terms free_names[i] labels free index i.
std::string show_term(const Modality& m, const Term& t,
                      const std::vector<std::string>& free_names = {});

}  // namespace gtt
