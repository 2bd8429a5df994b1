#include "gtt/frontend.hpp"

#include <cctype>
#include <map>

namespace gtt {
namespace {

struct Token {
  enum Kind { Word, Num, Punct, End } kind = End;
  std::string text;
  std::uint32_t line = 1, col = 1;
};

struct Lexer {
  const std::string& src;
  std::size_t pos = 0;
  std::uint32_t line = 1, col = 1;

  explicit Lexer(const std::string& s) : src(s) {}

  void advance(char c) {
    ++pos;
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }

  void skip_ws() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '-' && pos + 1 < src.size() && src[pos + 1] == '-') {
        while (pos < src.size() && src[pos] != '\n') advance(src[pos]);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance(c);
      } else {
        break;
      }
    }
  }

  static bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' ||
           c == '?';
  }

  // Raw whitespace-delimited chunk; pragma keys/values may contain any
  // punctuation (e.g. modality names with hyphens).
  Token raw_chunk() {
    skip_ws();
    Token t;
    t.line = line;
    t.col = col;
    if (pos >= src.size()) return t;
    t.kind = Token::Word;
    while (pos < src.size() &&
           !std::isspace(static_cast<unsigned char>(src[pos]))) {
      t.text += src[pos];
      advance(src[pos]);
    }
    return t;
  }

  Token next() {
    skip_ws();
    Token t;
    t.line = line;
    t.col = col;
    if (pos >= src.size()) return t;
    char c = src[pos];
    if (word_char(c)) {
      std::string w;
      bool digits = true;
      while (pos < src.size() && word_char(src[pos])) {
        digits = digits && std::isdigit(static_cast<unsigned char>(src[pos]));
        w += src[pos];
        advance(src[pos]);
      }
      // Unit& / Unit@ / Sig& / Sig@ / star& / star@ carry their kind mark.
      if ((w == "Unit" || w == "Sig" || w == "star") && pos < src.size() &&
          (src[pos] == '&' || src[pos] == '@')) {
        w += src[pos];
        advance(src[pos]);
      }
      t.kind = digits ? Token::Num : Token::Word;
      t.text = w;
      return t;
    }
    t.kind = Token::Punct;
    auto two = [&](const char* s) {
      if (pos + 1 < src.size() && src[pos] == s[0] && src[pos + 1] == s[1]) {
        t.text = s;
        advance(src[pos]);
        advance(src[pos]);
        return true;
      }
      return false;
    };
    if (two(":=") || two("->") || two("**") || two(",&") || two(",@")) return t;
    t.text = std::string(1, c);
    advance(c);
    return t;
  }
};

// The parser proper.  Kept as one struct with the token one ahead.
struct P {
  const Modality& m;
  Lexer lx;
  Token tok;
  std::vector<std::string> bound;            // back() = index 0
  std::map<std::string, Def>* defs = nullptr;  // for name references

  P(const std::string& text, const Modality& mm) : m(mm), lx(text) {
    tok = lx.next();
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(tok.line, tok.col, msg);
  }

  void bump() { tok = lx.next(); }

  bool at_punct(const std::string& s) {
    return tok.kind == Token::Punct && tok.text == s;
  }
  bool at_word(const std::string& s) {
    return tok.kind == Token::Word && tok.text == s;
  }

  void expect_punct(const std::string& s) {
    if (!at_punct(s)) fail("expected '" + s + "', found '" + tok.text + "'");
    bump();
  }

  std::string expect_name(const char* what) {
    if (tok.kind != Token::Word) fail(std::string("expected ") + what);
    std::string s = tok.text;
    bump();
    return s;
  }

  std::uint32_t depth() const { return static_cast<std::uint32_t>(bound.size()); }

  // --- grades -------------------------------------------------------------

  Grade grade() {
    if (tok.kind != Token::Word && tok.kind != Token::Num)
      fail("expected a grade literal");
    auto g = m.grade_of(tok.text);
    if (!g)
      fail("grade literal '" + tok.text + "' is not in the carrier of " + m.id);
    bump();
    return *g;
  }

  std::vector<Grade> grade_list(std::size_t k) {
    expect_punct("[");
    std::vector<Grade> gs;
    gs.push_back(grade());
    while (gs.size() < k) {
      expect_punct(",");
      gs.push_back(grade());
    }
    expect_punct("]");
    return gs;
  }

  // --- binders ------------------------------------------------------------

  // (x. A): motive with one binder.
  Term motive() {
    expect_punct("(");
    std::string x = expect_name("a binder name");
    expect_punct(".");
    bound.push_back(x);
    Term A = term();
    bound.pop_back();
    expect_punct(")");
    return A;
  }

  // (x y. u): two binders; x becomes index 1, y index 0.
  Term branch2() {
    expect_punct("(");
    std::string x = expect_name("a binder name");
    std::string y = expect_name("a binder name");
    expect_punct(".");
    bound.push_back(x);
    bound.push_back(y);
    Term u = term();
    bound.pop_back();
    bound.pop_back();
    expect_punct(")");
    return u;
  }

  // --- terms --------------------------------------------------------------

  Term term() {
    std::uint32_t ln = tok.line, cl = tok.col;
    if (at_punct("\\")) {
      bump();
      auto gs = grade_list(1);
      std::string x = expect_name("a binder name");
      expect_punct(".");
      bound.push_back(x);
      Term body = term();
      bound.pop_back();
      Term l = at_span(mk_lam(gs[0], body), ln, cl);
      lam_names[l.get()] = x;
      return l;
    }
    if (at_word("Pi") || at_word("Sig&") || at_word("Sig@")) {
      bool is_pi = tok.text == "Pi";
      SigKind k = tok.text == "Sig&" ? SigKind::Strong : SigKind::Weak;
      bump();
      auto gs = grade_list(2);
      expect_punct("(");
      std::string x = expect_name("a binder name");
      expect_punct(":");
      Term A = term();
      expect_punct(")");
      expect_punct(is_pi ? "->" : "**");
      bound.push_back(x);
      Term B = term();
      bound.pop_back();
      return at_span(is_pi ? mk_pi(gs[0], gs[1], A, B)
                           : mk_sigma(k, gs[0], gs[1], A, B),
                     ln, cl);
    }
    return app_chain();
  }

  Term app_chain() {
    Term t = operand();
    while (at_punct("@")) {
      std::uint32_t ln = tok.line, cl = tok.col;
      bump();
      auto gs = grade_list(1);
      Term u = operand();
      t = at_span(mk_app(gs[0], t, u), ln, cl);
    }
    return t;
  }

  Term operand() {
    std::uint32_t ln = tok.line, cl = tok.col;
    if (at_word("suc")) {
      bump();
      return at_span(mk_suc(operand()), ln, cl);
    }
    if (at_word("fst") || at_word("snd")) {
      bool is_fst = tok.text == "fst";
      bump();
      auto gs = grade_list(1);
      Term t = operand();
      return at_span(is_fst ? mk_fst(gs[0], t) : mk_snd(gs[0], t), ln, cl);
    }
    if (at_word("emptyrec")) {
      bump();
      auto gs = grade_list(1);
      Term A = atom();
      Term t = atom();
      return at_span(mk_emptyrec(gs[0], A, t), ln, cl);
    }
    if (at_word("prodrec")) {
      bump();
      auto gs = grade_list(3);  // r, p, q
      Term A = motive();
      Term t = atom();
      Term u = branch2();
      return at_span(mk_prodrec(gs[0], gs[1], gs[2], A, t, u), ln, cl);
    }
    if (at_word("natrec")) {
      bump();
      auto gs = grade_list(3);  // p, q, r
      Term A = motive();
      Term z = atom();
      Term s = branch2();
      Term n = atom();
      return at_span(mk_natrec(gs[0], gs[1], gs[2], A, z, s, n), ln, cl);
    }
    if (at_word("unitrec")) {
      bump();
      auto gs = grade_list(2);  // p, q
      Term A = motive();
      Term t = atom();
      Term u = atom();
      return at_span(mk_unitrec(gs[0], gs[1], A, t, u), ln, cl);
    }
    return atom();
  }

  Term atom() {
    std::uint32_t ln = tok.line, cl = tok.col;
    auto spanned = [&](Term t) { return at_span(std::move(t), ln, cl); };
    if (tok.kind == Token::Num) {
      std::uint64_t k = std::stoull(tok.text);
      bump();
      return spanned(mk_num(depth(), k));
    }
    if (at_punct("#")) {
      bump();
      if (tok.kind != Token::Num) fail("expected an index after '#'");
      std::uint32_t i = static_cast<std::uint32_t>(std::stoul(tok.text));
      if (i >= depth()) fail("de Bruijn index " + tok.text + " out of scope");
      bump();
      return spanned(mk_var(depth(), i));
    }
    if (at_punct("(")) {
      bump();
      Term t = term();
      if (at_punct(":")) {
        bump();
        Term A = term();
        expect_punct(")");
        return spanned(mk_ann(t, A));
      }
      if (at_punct(",&") || at_punct(",@")) {
        SigKind k = tok.text == ",&" ? SigKind::Strong : SigKind::Weak;
        bump();
        auto gs = grade_list(1);
        Term u = term();
        expect_punct(")");
        return spanned(mk_pair(k, gs[0], t, u));
      }
      expect_punct(")");
      return t;
    }
    if (tok.kind != Token::Word) fail("expected a term, found '" + tok.text + "'");
    std::string w = tok.text;
    if (w == "U") { bump(); return spanned(mk_u(depth())); }
    if (w == "Nat") { bump(); return spanned(mk_nat(depth())); }
    if (w == "Empty") { bump(); return spanned(mk_empty(depth())); }
    if (w == "Unit&") { bump(); return spanned(mk_unit(SigKind::Strong, depth())); }
    if (w == "Unit@") { bump(); return spanned(mk_unit(SigKind::Weak, depth())); }
    if (w == "zero") { bump(); return spanned(mk_zero(depth())); }
    if (w == "star&") { bump(); return spanned(mk_star(SigKind::Strong, depth())); }
    if (w == "star@") { bump(); return spanned(mk_star(SigKind::Weak, depth())); }
    if (w == "Unit" || w == "star" || w == "Sig")
      fail("'" + w + "' needs a kind mark: " + w + "& or " + w + "@");
    // Bound variable (innermost wins), else an earlier definition.
    for (std::size_t k = 0; k < bound.size(); ++k) {
      if (bound[bound.size() - 1 - k] == w) {
        bump();
        return spanned(mk_var(depth(), static_cast<std::uint32_t>(k)));
      }
    }
    if (defs) {
      auto it = defs->find(w);
      if (it != defs->end()) {
        bump();
        return spanned(wk_by(depth(), mk_ann(it->second.body, it->second.type)));
      }
    }
    fail("unbound name '" + w + "'");
  }

  // --- files ----------------------------------------------------------------

  SourceFile file() {
    SourceFile f;
    std::map<std::string, Def> by_name;
    defs = &by_name;
    while (tok.kind != Token::End) {
      if (at_word("pragma")) {
        // The lexer sits just past "pragma"; read key and value as raw
        // chunks so they are not split at punctuation.
        Token key = lx.raw_chunk();
        if (key.kind == Token::End) fail("expected a pragma key");
        Token val = lx.raw_chunk();
        if (val.kind == Token::End || val.line != key.line)
          fail("expected a pragma value");
        f.pragmas.emplace_back(key.text, val.text);
        bump();
        continue;
      }
      if (!at_word("def")) fail("expected 'def' or 'pragma'");
      std::uint32_t ln = tok.line;
      bump();
      Def d;
      d.line = ln;
      d.name = expect_name("a definition name");
      static const char* kw[] = {"U",    "Nat",     "Empty",    "zero",
                                 "suc",  "natrec",  "emptyrec", "unitrec",
                                 "fst",  "snd",     "prodrec",  "def",
                                 "pragma"};
      for (const char* k : kw)
        if (d.name == k) fail("'" + d.name + "' is a reserved word");
      if (by_name.count(d.name)) fail("duplicate definition '" + d.name + "'");
      expect_punct(":");
      d.type = term();
      expect_punct(":=");
      d.body = term();
      d.params = take_lam_names(d.body);
      f.defs.push_back(d);
      std::string key = d.name;
      by_name[key] = std::move(d);
    }
    defs = nullptr;
    return f;
  }

  // Surface binder name of each lambda node, recorded as they are built;
  // used to report usage contexts with the user's names.
  std::map<const TermNode*, std::string> lam_names;
  std::vector<std::string> take_lam_names(const Term& body) {
    std::vector<std::string> names;
    for (const TermNode* n = body.get(); n->kind == Kind::Lam; n = n->a.get()) {
      auto it = lam_names.find(n);
      names.push_back(it == lam_names.end() ? "" : it->second);
    }
    return names;
  }
};

}  // namespace

SourceFile parse_file(const std::string& text, const Modality& m) {
  P p(text, m);
  return p.file();
}

Term parse_term(const std::string& text, const Modality& m) {
  P p(text, m);
  Term t = p.term();
  if (p.tok.kind != Token::End)
    throw ParseError(p.tok.line, p.tok.col,
                     "trailing input after term: '" + p.tok.text + "'");
  return t;
}

const Def* resolve(const SourceFile& f, const std::string& name) {
  for (const Def& d : f.defs)
    if (d.name == name) return &d;
  return nullptr;
}

namespace {

bool is_numeral(const Term& t, std::uint64_t& k) {
  k = 0;
  const TermNode* n = t.get();
  while (n->kind == Kind::Suc) {
    ++k;
    n = n->a.get();
  }
  return n->kind == Kind::Zero;
}

struct Printer {
  const Modality& m;
  std::vector<std::string> env;  // back() = index 0

  std::string fresh() { return "x" + std::to_string(env.size()); }

  std::string var(std::uint32_t i) {
    if (i < env.size()) {
      const std::string& s = env[env.size() - 1 - i];
      if (!s.empty()) return s;
    }
    return "#" + std::to_string(i);
  }

  std::string g(Grade x) { return m.show(x); }

  // Parenthesize anything that is not self-delimiting in operand position.
  std::string operand(const Term& t) {
    std::uint64_t k;
    if (is_numeral(t, k)) return std::to_string(k);
    switch (t->kind) {
      case Kind::U:
      case Kind::Nat:
      case Kind::Empty:
      case Kind::Unit:
      case Kind::Var:
      case Kind::Zero:
      case Kind::Star:
      case Kind::Pair:
      case Kind::Ann:
        return term(t);
      case Kind::Suc:
      case Kind::Fst:
      case Kind::Snd:
      case Kind::Prodrec:
      case Kind::Natrec:
      case Kind::Emptyrec:
      case Kind::Unitrec:
        return term(t);  // prefix forms are valid operands
      default:
        return "(" + term(t) + ")";
    }
  }

  // Arguments of prefix forms must be atoms.
  std::string atom(const Term& t) {
    std::uint64_t k;
    if (is_numeral(t, k)) return std::to_string(k);
    switch (t->kind) {
      case Kind::U:
      case Kind::Nat:
      case Kind::Empty:
      case Kind::Unit:
      case Kind::Var:
      case Kind::Zero:
      case Kind::Star:
      case Kind::Pair:
      case Kind::Ann:
        return term(t);
      default:
        return "(" + term(t) + ")";
    }
  }

  std::string bind1(const Term& body, std::string* name_out) {
    std::string x = fresh();
    *name_out = x;
    env.push_back(x);
    std::string s = term(body);
    env.pop_back();
    return s;
  }

  std::string term(const Term& t) {
    std::uint64_t k;
    if (is_numeral(t, k)) return std::to_string(k);
    switch (t->kind) {
      case Kind::U: return "U";
      case Kind::Nat: return "Nat";
      case Kind::Empty: return "Empty";
      case Kind::Unit:
        return t->sk == SigKind::Strong ? "Unit&" : "Unit@";
      case Kind::Star:
        return t->sk == SigKind::Strong ? "star&" : "star@";
      case Kind::Zero: return "zero";
      case Kind::Var: return var(t->var);
      case Kind::Pi:
      case Kind::Sigma: {
        std::string head =
            t->kind == Kind::Pi ? "Pi"
            : (t->sk == SigKind::Strong ? "Sig&" : "Sig@");
        std::string x;
        std::string A = term(t->a);
        std::string B = bind1(t->b, &x);
        return head + "[" + g(t->p) + "," + g(t->q) + "] (" + x + ":" + A +
               ") " + (t->kind == Kind::Pi ? "->" : "**") + " " + B;
      }
      case Kind::Lam: {
        std::string x;
        std::string body = bind1(t->a, &x);
        return "\\[" + g(t->p) + "] " + x + ". " + body;
      }
      case Kind::App:
        return operand(t->a) + " @[" + g(t->p) + "] " + operand(t->b);
      case Kind::Pair:
        return "(" + term(t->a) + " " +
               (t->sk == SigKind::Strong ? ",&[" : ",@[") + g(t->p) + "] " +
               term(t->b) + ")";
      case Kind::Fst:
        return "fst[" + g(t->p) + "] " + operand(t->a);
      case Kind::Snd:
        return "snd[" + g(t->p) + "] " + operand(t->a);
      case Kind::Suc:
        return "suc " + operand(t->a);
      case Kind::Prodrec: {
        std::string z;
        std::string A = bind1(t->a, &z);
        std::string scrut = atom(t->b);
        std::string x = fresh();
        env.push_back(x);
        std::string y = fresh();
        env.push_back(y);
        std::string u = term(t->c);
        env.pop_back();
        env.pop_back();
        return "prodrec[" + g(t->r) + "," + g(t->p) + "," + g(t->q) + "] (" +
               z + ". " + A + ") " + scrut + " (" + x + " " + y + ". " + u + ")";
      }
      case Kind::Natrec: {
        std::string xm;
        std::string A = bind1(t->a, &xm);
        std::string z = atom(t->b);
        std::string x = fresh();
        env.push_back(x);
        std::string ih = fresh();
        env.push_back(ih);
        std::string s = term(t->c);
        env.pop_back();
        env.pop_back();
        std::string n = atom(t->d);
        return "natrec[" + g(t->p) + "," + g(t->q) + "," + g(t->r) + "] (" +
               xm + ". " + A + ") " + z + " (" + x + " " + ih + ". " + s +
               ") " + n;
      }
      case Kind::Emptyrec:
        return "emptyrec[" + g(t->p) + "] " + atom(t->a) + " " + atom(t->b);
      case Kind::Unitrec: {
        std::string xm;
        std::string A = bind1(t->a, &xm);
        return "unitrec[" + g(t->p) + "," + g(t->q) + "] (" + xm + ". " + A +
               ") " + atom(t->b) + " " + atom(t->c);
      }
      case Kind::Ann:
        return "(" + term(t->a) + " : " + term(t->b) + ")";
      default:
        return "?";
    }
  }
};

}  // namespace

std::string show_term(const Modality& m, const Term& t,
                      const std::vector<std::string>& free_names) {
  Printer pr{m, {}};
  // free_names[i] names free index i; the printer env is back()-is-0.
  pr.env.assign(free_names.rbegin(), free_names.rend());
  while (pr.env.size() < t->scope) pr.env.insert(pr.env.begin(), "");
  return pr.term(t);
}

}  // namespace gtt
