#include "gtt/grades.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <stdexcept>

namespace gtt {
namespace {

std::size_t nr_index(std::size_t n, Grade p, Grade r, Grade z, Grade s, Grade q) {
  return (((p * n + r) * n + z) * n + s) * n + q;
}

// Tabulates nr from a formula.
void fill_nr(Modality& m, const std::function<Grade(Grade, Grade, Grade, Grade, Grade)>& f) {
  std::size_t n = m.size();
  m.nr_t.assign(n * n * n * n * n, 0);
  for (Grade p = 0; p < n; ++p)
    for (Grade r = 0; r < n; ++r)
      for (Grade z = 0; z < n; ++z)
        for (Grade s = 0; s < n; ++s)
          for (Grade q = 0; q < n; ++q)
            m.nr_t[nr_index(n, p, r, z, s, q)] = f(p, r, z, s, q);
}

// Division tables: for each curated divisor q, p/q = least r with
// p <= q*r; construction fails if the least does not exist or the Galois
// connection p/q <= r <=> p <= q*r does not hold exhaustively.
void fill_division(Modality& m, const std::vector<Grade>& divisors) {
  std::size_t n = m.size();
  m.div_ok.assign(n, 0);
  m.div_t.assign(n * n, 0);
  for (Grade q : divisors) {
    for (Grade p = 0; p < n; ++p) {
      std::vector<Grade> sols;
      for (Grade r = 0; r < n; ++r)
        if (m.leq(p, m.mul(q, r))) sols.push_back(r);
      auto least = std::find_if(sols.begin(), sols.end(), [&](Grade r0) {
        return std::all_of(sols.begin(), sols.end(),
                           [&](Grade r) { return m.leq(r0, r); });
      });
      if (least == sols.end())
        throw std::runtime_error("modality " + m.id + ": division by " +
                                 m.show(q) + " has no least solution for " +
                                 m.show(p));
      m.div_t[q * n + p] = *least;
    }
    for (Grade p = 0; p < n; ++p)
      for (Grade r = 0; r < n; ++r)
        if (m.leq(m.div_t[q * n + p], r) != m.leq(p, m.mul(q, r)))
          throw std::runtime_error("modality " + m.id +
                                   ": Galois check failed for division by " +
                                   m.show(q));
    m.div_ok[q] = 1;
  }
}

void derive_flags(Modality& m) {
  std::size_t n = m.size();
  m.zero_is_greatest = true;
  for (Grade p = 0; p < n; ++p)
    if (!m.leq(p, m.zero)) m.zero_is_greatest = false;
  m.well_behaved_zero = laws_ok(check_well_behaved_zero(m));
}

// The zero-one-many instances share + and *; only the meet (and for
// linear-or-affine the extra element) differs.
Modality make_zero_one_many(const std::string& id, const std::vector<Grade>& meet) {
  Modality m;
  m.id = id;
  m.nr_variant = "default";
  m.names = {"0", "1", "w"};
  m.zero = 0;
  m.one = 1;
  m.add_t = {0, 1, 2,  //
             1, 2, 2,  //
             2, 2, 2};
  m.mul_t = {0, 0, 0,  //
             0, 1, 2,  //
             0, 2, 2};
  m.meet_t = meet;
  const Grade w = 2;
  fill_nr(m, [&m, w](Grade p, Grade r, Grade z, Grade s, Grade q) -> Grade {
    switch (r) {
      case 0:  // ((1 /\ p) * q + s) /\ (q + z)
        return m.meet(m.add(m.mul(m.meet(m.one, p), q), s), m.add(q, z));
      case 1:  // (1 + p) * q + w*s + z
        return m.add(m.add(m.mul(m.add(m.one, p), q), m.mul(w, s)), z);
      default:  // w * (q + s + z)
        return m.mul(w, m.add(q, m.add(s, z)));
    }
  });
  fill_division(m, {m.one});
  return m;
}

Modality make_erasure() {
  Modality m;
  m.id = "erasure";
  m.nr_variant = "default";
  m.names = {"0", "w"};
  m.zero = 0;
  m.one = 1;
  m.add_t = {0, 1, 1, 1};
  m.mul_t = {0, 0, 0, 1};
  m.meet_t = m.add_t;
  fill_nr(m, [&m](Grade, Grade, Grade z, Grade s, Grade q) {
    return m.meet(z, m.meet(s, q));
  });
  fill_division(m, {0, 1});
  derive_flags(m);
  return m;
}

Modality make_trivial() {
  Modality m;
  m.id = "trivial";
  m.nr_variant = "default";
  m.names = {"0"};
  m.zero = 0;
  m.one = 0;
  m.add_t = {0};
  m.mul_t = {0};
  m.meet_t = {0};
  m.nr_t = {0};
  fill_division(m, {0});
  derive_flags(m);
  return m;
}

Modality make_linear_or_affine() {
  Modality m;
  m.id = "linear-or-affine";
  m.nr_variant = "default";
  m.names = {"0", "1", "1?", "w"};
  m.zero = 0;
  m.one = 1;
  const Grade la = 2, w = 3;
  m.add_t = {0, 1,  la, w,  //
             1, w,  w,  w,  //
             la, w, w,  w,  //
             w, w,  w,  w};
  m.mul_t = {0, 0,  0,  0,  //
             0, 1,  la, w,  //
             0, la, la, w,  //
             0, w,  w,  w};
  m.meet_t = {0,  la, la, w,  //
              la, 1,  la, w,  //
              la, la, la, w,  //
              w,  w,  w,  w};
  fill_nr(m, [&m, la, w](Grade p, Grade r, Grade z, Grade s, Grade q) -> Grade {
    switch (r) {
      case 0:
        return m.meet(m.add(m.mul(m.meet(m.one, p), q), s), m.add(q, z));
      case 1:
        return m.add(m.add(m.mul(m.add(m.one, p), q), m.mul(w, s)), z);
      case 2:  // (1? + p) * q + w*s + 1?*z
        return m.add(m.add(m.mul(m.add(la, p), q), m.mul(w, s)), m.mul(la, z));
      default:
        return m.mul(w, m.add(q, m.add(s, z)));
    }
  });
  fill_division(m, {m.one});
  derive_flags(m);
  return m;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

}  // namespace

std::optional<Grade> Modality::grade_of(const std::string& s) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == s) return static_cast<Grade>(i);
  if (s == "0") return zero;
  if (s == "1") return one;
  return std::nullopt;
}

Modality make_lattice(const std::string& text, const std::string& id) {
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> covers;
  std::optional<std::string> bot, top;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0] == "elem") {
      names.insert(names.end(), toks.begin() + 1, toks.end());
    } else if (toks[0] == "bot" && toks.size() == 2) {
      bot = toks[1];
    } else if (toks[0] == "top" && toks.size() == 2) {
      top = toks[1];
    } else if (toks[0] == "cover" && toks.size() == 3) {
      covers.emplace_back(toks[1], toks[2]);
    } else {
      throw std::runtime_error("lattice spec: malformed line: " + line);
    }
  }
  if (names.empty()) throw std::runtime_error("lattice spec: no elements");
  if (names.size() > 255) throw std::runtime_error("lattice spec: carrier too large");
  if (!bot || !top) throw std::runtime_error("lattice spec: bot/top required");
  auto index = [&](const std::string& s) -> std::size_t {
    auto it = std::find(names.begin(), names.end(), s);
    if (it == names.end())
      throw std::runtime_error("lattice spec: unknown element: " + s);
    return static_cast<std::size_t>(it - names.begin());
  };
  std::size_t n = names.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (names[i] == names[j])
        throw std::runtime_error("lattice spec: duplicate element: " + names[i]);

  // le[a][b] = a <= b: reflexive-transitive closure of the covers.
  std::vector<char> le(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) le[i * n + i] = 1;
  for (auto& [a, b] : covers) le[index(a) * n + index(b)] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (le[i * n + k] && le[k * n + j]) le[i * n + j] = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && le[i * n + j] && le[j * n + i])
        throw std::runtime_error("lattice spec: cover cycle through " + names[i]);
  std::size_t b = index(*bot), t = index(*top);
  for (std::size_t i = 0; i < n; ++i) {
    if (!le[b * n + i]) throw std::runtime_error("lattice spec: bot not below " + names[i]);
    if (!le[i * n + t]) throw std::runtime_error("lattice spec: top not above " + names[i]);
  }

  auto bound = [&](std::size_t x, std::size_t y, bool lower) -> std::size_t {
    std::vector<std::size_t> cand;
    for (std::size_t c = 0; c < n; ++c) {
      bool in = lower ? (le[c * n + x] && le[c * n + y])
                      : (le[x * n + c] && le[y * n + c]);
      if (in) cand.push_back(c);
    }
    for (std::size_t c : cand) {
      bool best = std::all_of(cand.begin(), cand.end(), [&](std::size_t d) {
        return lower ? le[d * n + c] : le[c * n + d];
      });
      if (best) return c;
    }
    throw std::runtime_error("lattice spec: no " + std::string(lower ? "meet" : "join") +
                             " for " + names[x] + ", " + names[y]);
  };

  std::vector<Grade> meet_t(n * n), join_t(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      meet_t[i * n + j] = static_cast<Grade>(bound(i, j, true));
      join_t[i * n + j] = static_cast<Grade>(bound(i, j, false));
    }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        if (meet_t[x * n + join_t[y * n + z]] !=
            join_t[meet_t[x * n + y] * n + meet_t[x * n + z]])
          throw std::runtime_error("lattice spec: not distributive at " + names[x] +
                                   ", " + names[y] + ", " + names[z]);

  // As a modality: both + and /\ are the lattice meet, * is the join,
  // 1 = bot, 0 = top, nr = pointwise meet of the three usages.
  Modality m;
  m.id = id;
  m.nr_variant = "default";
  m.names = names;
  m.zero = static_cast<Grade>(t);
  m.one = static_cast<Grade>(b);
  m.add_t = meet_t;
  m.mul_t = join_t;
  m.meet_t = meet_t;
  fill_nr(m, [&m](Grade, Grade, Grade z, Grade s, Grade q) {
    return m.meet(z, m.meet(s, q));
  });
  std::vector<Grade> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<Grade>(i);
  fill_division(m, all);
  derive_flags(m);
  return m;
}

Modality make_instance(const std::string& name) {
  if (name == "erasure") return make_erasure();
  if (name == "trivial") return make_trivial();
  if (name == "linear-or-affine") return make_linear_or_affine();
  if (name == "affine" || name == "linear") {
    std::vector<Grade> meet = name == "affine" ? std::vector<Grade>{0, 1, 2,  //
                                                                    1, 1, 2,  //
                                                                    2, 2, 2}
                                               : std::vector<Grade>{0, 2, 2,  //
                                                                    2, 1, 2,  //
                                                                    2, 2, 2};
    Modality m = make_zero_one_many(name, meet);
    derive_flags(m);
    return m;
  }
  if (name.rfind("lattice:", 0) == 0) {
    std::string path = name.substr(8);
    FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("cannot open lattice spec: " + path);
    std::string text;
    char buf[4096];
    std::size_t k;
    while ((k = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, k);
    std::fclose(f);
    return make_lattice(text, name);
  }
  throw std::runtime_error("unknown modality instance: " + name);
}

bool set_nr_variant(Modality& m, const std::string& variant) {
  if (variant == "default") {
    Modality fresh = make_instance(m.id);
    m.nr_t = fresh.nr_t;
    m.nr_variant = "default";
    derive_flags(m);
    return true;
  }
  if (variant == "bad" && m.id == "linear") {
    // Largest lawful table: merges the zero and successor usages so that
    // linearity information is lost.  X (*) Y |> r rebuilds the result from
    // X = qz /\ qn and Y = qs + p*qn depending on how often the loop body
    // runs: r=0 keeps the meet, r=1 adds w copies of Y, r=w smears both.
    const Grade w = 2;
    std::size_t n = m.size();
    for (Grade p = 0; p < n; ++p)
      for (Grade r = 0; r < n; ++r)
        for (Grade z = 0; z < n; ++z)
          for (Grade s = 0; s < n; ++s)
            for (Grade q = 0; q < n; ++q) {
              Grade x = m.meet(z, q);
              Grade y = m.add(s, m.mul(p, q));
              Grade v = r == 0   ? m.meet(x, y)
                        : r == 1 ? m.add(x, m.mul(w, y))
                                 : m.mul(w, m.add(x, y));
              m.nr_t[nr_index(n, p, r, z, s, q)] = v;
            }
    m.nr_variant = "bad";
    derive_flags(m);
    return true;
  }
  return false;
}

namespace {

// Exhaustive law check helper: first counterexample wins.
template <class F>
LawCheck law(const std::string& name, F&& body) {
  LawCheck c{name, true, ""};
  body(c);
  return c;
}

std::string wit(const Modality& m, std::initializer_list<std::pair<const char*, Grade>> vars,
                Grade lhs, Grade rhs) {
  std::string s;
  for (auto& [k, v] : vars) s += std::string(k) + "=" + m.show(v) + " ";
  return s + "lhs=" + m.show(lhs) + " rhs=" + m.show(rhs);
}

}  // namespace

LawReport check_laws(const Modality& m) {
  LawReport rep;
  std::size_t n = m.size();
  auto each = [&](auto f) {
    for (Grade a = 0; a < n; ++a) f(a);
  };

  rep.push_back(law("add-assoc", [&](LawCheck& c) {
    each([&](Grade a) { each([&](Grade b) { each([&](Grade d) {
      Grade l = m.add(a, m.add(b, d)), r = m.add(m.add(a, b), d);
      if (l != r && c.pass) { c.pass = false; c.witness = wit(m, {{"p", a}, {"q", b}, {"r", d}}, l, r); }
    }); }); });
  }));
  rep.push_back(law("add-comm", [&](LawCheck& c) {
    each([&](Grade a) { each([&](Grade b) {
      Grade l = m.add(a, b), r = m.add(b, a);
      if (l != r && c.pass) { c.pass = false; c.witness = wit(m, {{"p", a}, {"q", b}}, l, r); }
    }); });
  }));
  rep.push_back(law("add-unit", [&](LawCheck& c) {
    each([&](Grade a) {
      Grade l = m.add(m.zero, a);
      if (l != a && c.pass) { c.pass = false; c.witness = wit(m, {{"p", a}}, l, a); }
    });
  }));
  rep.push_back(law("mul-assoc", [&](LawCheck& c) {
    each([&](Grade a) { each([&](Grade b) { each([&](Grade d) {
      Grade l = m.mul(a, m.mul(b, d)), r = m.mul(m.mul(a, b), d);
      if (l != r && c.pass) { c.pass = false; c.witness = wit(m, {{"p", a}, {"q", b}, {"r", d}}, l, r); }
    }); }); });
  }));
  rep.push_back(law("mul-unit-left", [&](LawCheck& c) {
    each([&](Grade a) {
      Grade l = m.mul(m.one, a);
      if (l != a && c.pass) { c.pass = false; c.witness = wit(m, {{"p", a}}, l, a); }
    });
  }));
  rep.push_back(law("mul-unit-right", [&](LawCheck& c) {
    each([&](Grade a) {
      Grade l = m.mul(a, m.one);
      if (l != a && c.pass) { c.pass = false; c.witness = wit(m, {{"p", a}}, l, a); }
    });
  }));
  rep.push_back(law("mul-zero-left", [&](LawCheck& c) {
    each([&](Grade a) {
      Grade l = m.mul(m.zero, a);
      if (l != m.zero && c.pass) { c.pass = false; c.witness = wit(m, {{"p", a}}, l, m.zero); }
    });
  }));
  rep.push_back(law("mul-zero-right", [&](LawCheck& c) {
    each([&](Grade a) {
      Grade l = m.mul(a, m.zero);
      if (l != m.zero && c.pass) { c.pass = false; c.witness = wit(m, {{"p", a}}, l, m.zero); }
    });
  }));
  rep.push_back(law("mul-distrib-add-left", [&](LawCheck& c) {
    each([&](Grade a) { each([&](Grade b) { each([&](Grade d) {
      Grade l = m.mul(a, m.add(b, d)), r = m.add(m.mul(a, b), m.mul(a, d));
      if (l != r && c.pass) { c.pass = false; c.witness = wit(m, {{"p", a}, {"q", b}, {"r", d}}, l, r); }
    }); }); });
  }));
  rep.push_back(law("mul-distrib-add-right", [&](LawCheck& c) {
    each([&](Grade a) { each([&](Grade b) { each([&](Grade d) {
      Grade l = m.mul(m.add(b, d), a), r = m.add(m.mul(b, a), m.mul(d, a));
      if (l != r && c.pass) { c.pass = false; c.witness = wit(m, {{"p", a}, {"q", b}, {"r", d}}, l, r); }
    }); }); });
  }));
  rep.push_back(law("meet-assoc", [&](LawCheck& c) {
    each([&](Grade a) { each([&](Grade b) { each([&](Grade d) {
      Grade l = m.meet(a, m.meet(b, d)), r = m.meet(m.meet(a, b), d);
      if (l != r && c.pass) { c.pass = false; c.witness = wit(m, {{"p", a}, {"q", b}, {"r", d}}, l, r); }
    }); }); });
  }));
  rep.push_back(law("meet-comm", [&](LawCheck& c) {
    each([&](Grade a) { each([&](Grade b) {
      Grade l = m.meet(a, b), r = m.meet(b, a);
      if (l != r && c.pass) { c.pass = false; c.witness = wit(m, {{"p", a}, {"q", b}}, l, r); }
    }); });
  }));
  rep.push_back(law("meet-idem", [&](LawCheck& c) {
    each([&](Grade a) {
      Grade l = m.meet(a, a);
      if (l != a && c.pass) { c.pass = false; c.witness = wit(m, {{"p", a}}, l, a); }
    });
  }));
  rep.push_back(law("mul-distrib-meet-left", [&](LawCheck& c) {
    each([&](Grade a) { each([&](Grade b) { each([&](Grade d) {
      Grade l = m.mul(a, m.meet(b, d)), r = m.meet(m.mul(a, b), m.mul(a, d));
      if (l != r && c.pass) { c.pass = false; c.witness = wit(m, {{"p", a}, {"q", b}, {"r", d}}, l, r); }
    }); }); });
  }));
  rep.push_back(law("mul-distrib-meet-right", [&](LawCheck& c) {
    each([&](Grade a) { each([&](Grade b) { each([&](Grade d) {
      Grade l = m.mul(m.meet(b, d), a), r = m.meet(m.mul(b, a), m.mul(d, a));
      if (l != r && c.pass) { c.pass = false; c.witness = wit(m, {{"p", a}, {"q", b}, {"r", d}}, l, r); }
    }); }); });
  }));
  rep.push_back(law("add-distrib-meet-left", [&](LawCheck& c) {
    each([&](Grade a) { each([&](Grade b) { each([&](Grade d) {
      Grade l = m.add(a, m.meet(b, d)), r = m.meet(m.add(a, b), m.add(a, d));
      if (l != r && c.pass) { c.pass = false; c.witness = wit(m, {{"p", a}, {"q", b}, {"r", d}}, l, r); }
    }); }); });
  }));
  rep.push_back(law("add-distrib-meet-right", [&](LawCheck& c) {
    each([&](Grade a) { each([&](Grade b) { each([&](Grade d) {
      Grade l = m.add(m.meet(b, d), a), r = m.meet(m.add(b, a), m.add(d, a));
      if (l != r && c.pass) { c.pass = false; c.witness = wit(m, {{"p", a}, {"q", b}, {"r", d}}, l, r); }
    }); }); });
  }));

  // nr laws.  Every law pins p and r, so witnesses carry them.
  rep.push_back(law("nr-base", [&](LawCheck& c) {
    each([&](Grade p) { each([&](Grade r) { each([&](Grade z) { each([&](Grade s) { each([&](Grade q) {
      if (!m.leq(q, m.zero)) return;
      Grade v = m.nr(p, r, z, s, q);
      if (!m.leq(v, z) && c.pass) {
        c.pass = false;
        c.witness = wit(m, {{"p", p}, {"r", r}, {"qz", z}, {"qs", s}, {"qn", q}}, v, z);
      }
    }); }); }); }); });
  }));
  rep.push_back(law("nr-step", [&](LawCheck& c) {
    each([&](Grade p) { each([&](Grade r) { each([&](Grade z) { each([&](Grade s) { each([&](Grade q) {
      Grade v = m.nr(p, r, z, s, q);
      Grade bound = m.add(s, m.add(m.mul(p, q), m.mul(r, v)));
      if (!m.leq(v, bound) && c.pass) {
        c.pass = false;
        c.witness = wit(m, {{"p", p}, {"r", r}, {"qz", z}, {"qs", s}, {"qn", q}}, v, bound);
      }
    }); }); }); }); });
  }));
  rep.push_back(law("nr-monotone", [&](LawCheck& c) {
    each([&](Grade p) { each([&](Grade r) {
      each([&](Grade z1) { each([&](Grade s1) { each([&](Grade q1) {
        each([&](Grade z2) { each([&](Grade s2) { each([&](Grade q2) {
          if (!(m.leq(z1, z2) && m.leq(s1, s2) && m.leq(q1, q2))) return;
          Grade l = m.nr(p, r, z1, s1, q1), h = m.nr(p, r, z2, s2, q2);
          if (!m.leq(l, h) && c.pass) {
            c.pass = false;
            c.witness = wit(m, {{"p", p}, {"r", r}, {"qz", z1}, {"qs", s1}, {"qn", q1}}, l, h);
          }
        }); }); });
      }); }); });
    }); });
  }));
  rep.push_back(law("nr-subdistrib-mul", [&](LawCheck& c) {
    each([&](Grade p) { each([&](Grade r) { each([&](Grade z) { each([&](Grade s) { each([&](Grade q) {
      each([&](Grade x) {
        Grade l = m.mul(m.nr(p, r, z, s, q), x);
        Grade h = m.nr(p, r, m.mul(z, x), m.mul(s, x), m.mul(q, x));
        if (!m.leq(l, h) && c.pass) {
          c.pass = false;
          c.witness = wit(m, {{"p", p}, {"r", r}, {"qz", z}, {"qs", s}, {"qn", q}, {"x", x}}, l, h);
        }
      });
    }); }); }); }); });
  }));
  rep.push_back(law("nr-subinterchange-add", [&](LawCheck& c) {
    each([&](Grade p) { each([&](Grade r) {
      each([&](Grade z1) { each([&](Grade s1) { each([&](Grade q1) {
        each([&](Grade z2) { each([&](Grade s2) { each([&](Grade q2) {
          Grade l = m.add(m.nr(p, r, z1, s1, q1), m.nr(p, r, z2, s2, q2));
          Grade h = m.nr(p, r, m.add(z1, z2), m.add(s1, s2), m.add(q1, q2));
          if (!m.leq(l, h) && c.pass) {
            c.pass = false;
            c.witness = wit(m, {{"p", p}, {"r", r}, {"qz", z1}, {"qs", s1}, {"qn", q1}}, l, h);
          }
        }); }); });
      }); }); });
    }); });
  }));
  return rep;
}

LawReport check_well_behaved_zero(const Modality& m) {
  LawReport rep;
  std::size_t n = m.size();
  auto each = [&](auto f) {
    for (Grade a = 0; a < n; ++a) f(a);
  };
  rep.push_back(law("zero-ne-one", [&](LawCheck& c) {
    if (m.zero == m.one) { c.pass = false; c.witness = "0 == 1"; }
  }));
  rep.push_back(law("add-positive", [&](LawCheck& c) {
    each([&](Grade a) { each([&](Grade b) {
      if (m.add(a, b) == m.zero && !(a == m.zero && b == m.zero) && c.pass) {
        c.pass = false;
        c.witness = wit(m, {{"p", a}, {"q", b}}, m.add(a, b), m.zero);
      }
    }); });
  }));
  rep.push_back(law("meet-positive", [&](LawCheck& c) {
    each([&](Grade a) { each([&](Grade b) {
      if (m.meet(a, b) == m.zero && !(a == m.zero && b == m.zero) && c.pass) {
        c.pass = false;
        c.witness = wit(m, {{"p", a}, {"q", b}}, m.meet(a, b), m.zero);
      }
    }); });
  }));
  rep.push_back(law("mul-zero-product", [&](LawCheck& c) {
    each([&](Grade a) { each([&](Grade b) {
      if (m.mul(a, b) == m.zero && a != m.zero && b != m.zero && c.pass) {
        c.pass = false;
        c.witness = wit(m, {{"p", a}, {"q", b}}, m.mul(a, b), m.zero);
      }
    }); });
  }));
  rep.push_back(law("nr-positive", [&](LawCheck& c) {
    each([&](Grade p) { each([&](Grade r) { each([&](Grade z) { each([&](Grade s) { each([&](Grade q) {
      if (m.nr(p, r, z, s, q) == m.zero &&
          !(z == m.zero && s == m.zero && q == m.zero) && c.pass) {
        c.pass = false;
        c.witness = wit(m, {{"p", p}, {"r", r}, {"qz", z}, {"qs", s}, {"qn", q}}, m.zero, m.zero);
      }
    }); }); }); }); });
  }));
  return rep;
}

bool laws_ok(const LawReport& r) {
  return std::all_of(r.begin(), r.end(), [](const LawCheck& c) { return c.pass; });
}

std::optional<Grade> divide(const Modality& m, Grade p, Grade q) {
  if (!m.div_ok[q]) return std::nullopt;
  return m.div_t[q * m.size() + p];
}

namespace {

// Per-(p,r) enumeration of lawful nr slices.  Tuples (z,s,q) are indexed
// (z*n+s)*n+q and assigned in that order; constraints fire as soon as all
// tuples they mention are assigned.
struct NrSearch {
  const Modality& m;
  Grade p, r;
  bool positivity;  // candidate tables must keep the zero well-behaved
  std::size_t n;
  std::vector<Grade> val;
  std::vector<char> set;
  // mono_pairs[t]: earlier tuples comparable with t (pointwise), with dir.
  std::vector<std::vector<std::pair<std::size_t, bool>>> mono;  // (other, other<=t)
  // mul_pairs fired at tuple t: (src, x) with src*x == t's tuple... stored as
  // (a, x, b): f(a)*x <= f(b), fired when max(a,b) assigned == t.
  std::vector<std::vector<std::array<std::size_t, 3>>> mul_fire;
  std::vector<std::vector<std::array<std::size_t, 3>>> add_fire;  // (a,b,c)
  unsigned long long nodes = 0, budget;
  unsigned long long found = 0;
  std::vector<Grade> solution;
  bool budget_hit = false;

  NrSearch(const Modality& mm, Grade pp, Grade rr, bool pos, unsigned long long bud)
      : m(mm), p(pp), r(rr), positivity(pos), n(mm.size()), budget(bud) {
    std::size_t tn = n * n * n;
    val.assign(tn, 0);
    set.assign(tn, 0);
    mono.resize(tn);
    mul_fire.resize(tn);
    add_fire.resize(tn);
    auto unpack = [&](std::size_t t) {
      return std::array<Grade, 3>{static_cast<Grade>(t / (n * n)),
                                  static_cast<Grade>((t / n) % n),
                                  static_cast<Grade>(t % n)};
    };
    auto pack = [&](Grade z, Grade s, Grade q) {
      return (static_cast<std::size_t>(z) * n + s) * n + q;
    };
    for (std::size_t t = 0; t < tn; ++t) {
      auto [z, s, q] = unpack(t);
      for (std::size_t u = 0; u < t; ++u) {
        auto [z2, s2, q2] = unpack(u);
        if (m.leq(z2, z) && m.leq(s2, s) && m.leq(q2, q))
          mono[t].push_back({u, true});
        if (m.leq(z, z2) && m.leq(s, s2) && m.leq(q, q2))
          mono[t].push_back({u, false});
      }
      for (Grade x = 0; x < n; ++x) {
        std::size_t u = pack(m.mul(z, x), m.mul(s, x), m.mul(q, x));
        mul_fire[std::max(t, u)].push_back({t, static_cast<std::size_t>(x), u});
      }
    }
    for (std::size_t a = 0; a < tn; ++a) {
      auto [z1, s1, q1] = unpack(a);
      for (std::size_t b2 = 0; b2 <= a; ++b2) {  // unordered pairs (add comm)
        auto [z2, s2, q2] = unpack(b2);
        std::size_t c = pack(m.add(z1, z2), m.add(s1, s2), m.add(q1, q2));
        add_fire[std::max({a, b2, c})].push_back({a, b2, c});
      }
    }
  }

  bool check_at(std::size_t t) {
    auto z = static_cast<Grade>(t / (n * n));
    auto s = static_cast<Grade>((t / n) % n);
    auto q = static_cast<Grade>(t % n);
    Grade v = val[t];
    if (positivity && v == m.zero &&
        !(z == m.zero && s == m.zero && q == m.zero))
      return false;
    if (m.leq(q, m.zero) && !m.leq(v, z)) return false;
    if (!m.leq(v, m.add(s, m.add(m.mul(p, q), m.mul(r, v))))) return false;
    for (auto& [u, below] : mono[t]) {
      if (below ? !m.leq(val[u], v) : !m.leq(v, val[u])) return false;
    }
    for (auto& [a, x, b] : mul_fire[t])
      if (set[a] && set[b] &&
          !m.leq(m.mul(val[a], static_cast<Grade>(x)), val[b]))
        return false;
    for (auto& [a, b2, c] : add_fire[t])
      if (set[a] && set[b2] && set[c] &&
          !m.leq(m.add(val[a], val[b2]), val[c]))
        return false;
    return true;
  }

  void dfs(std::size_t t) {
    if (found >= 2 || budget_hit) return;
    if (t == val.size()) {
      if (found == 0) solution = val;
      ++found;
      return;
    }
    for (Grade v = 0; v < n; ++v) {
      if (++nodes > budget) { budget_hit = true; return; }
      val[t] = v;
      set[t] = 1;
      if (check_at(t)) dfs(t + 1);
      set[t] = 0;
      if (found >= 2 || budget_hit) return;
    }
  }
};

}  // namespace

NrUniqueResult nr_unique_check(const Modality& m, std::size_t carrier_bound,
                               unsigned long long node_budget) {
  NrUniqueResult res;
  if (m.size() > carrier_bound) {
    res.status = NrUniqueResult::Status::CarrierTooLarge;
    return res;
  }
  std::size_t n = m.size();
  // When the instance's zero is otherwise well-behaved, a replacement nr
  // must preserve that (be positive in its last three arguments); without
  // this the base/step laws alone leave slack below 0.
  bool positivity = true;
  {
    for (const auto& c : check_well_behaved_zero(m))
      if (c.law != "nr-positive" && !c.pass) positivity = false;
  }
  res.unique = true;
  res.count = 1;
  for (Grade p = 0; p < n && res.status == NrUniqueResult::Status::Ok; ++p) {
    for (Grade r = 0; r < n; ++r) {
      NrSearch s(m, p, r, positivity, node_budget);
      s.dfs(0);
      if (s.budget_hit) {
        res.status = NrUniqueResult::Status::BudgetExhausted;
        res.unique = false;
        break;
      }
      res.count *= s.found;
      if (s.found != 1) {
        res.unique = false;
        if (s.found == 0) return res;     // m.nr itself is unlawful
        return res;                        // >=2: non-unique, stop early
      }
      // Compare the unique slice against m's table.
      for (Grade z = 0; z < n && res.unique; ++z)
        for (Grade ss = 0; ss < n && res.unique; ++ss)
          for (Grade q = 0; q < n; ++q)
            if (s.solution[(static_cast<std::size_t>(z) * n + ss) * n + q] !=
                m.nr(p, r, z, ss, q)) {
              res.unique = false;
              break;
            }
      if (!res.unique) return res;
    }
  }
  return res;
}

UsageCtx ctx_zero(const Modality& m, std::size_t n) {
  return UsageCtx(n, m.zero);
}

UsageCtx ctx_unit(const Modality& m, std::size_t n, std::size_t i) {
  UsageCtx g(n, m.zero);
  g.at(i) = m.one;
  return g;
}

UsageCtx ctx_add(const Modality& m, const UsageCtx& a, const UsageCtx& b) {
  UsageCtx g(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) g[i] = m.add(a[i], b.at(i));
  return g;
}

UsageCtx ctx_meet(const Modality& m, const UsageCtx& a, const UsageCtx& b) {
  UsageCtx g(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) g[i] = m.meet(a[i], b.at(i));
  return g;
}

UsageCtx ctx_scale(const Modality& m, Grade p, const UsageCtx& g) {
  UsageCtx out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = m.mul(p, g[i]);
  return out;
}

bool ctx_leq(const Modality& m, const UsageCtx& a, const UsageCtx& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!m.leq(a[i], b[i])) return false;
  return true;
}

UsageCtx ctx_nr(const Modality& m, Grade p, Grade r, const UsageCtx& gz,
                const UsageCtx& gs, const UsageCtx& gn) {
  UsageCtx g(gz.size());
  for (std::size_t i = 0; i < gz.size(); ++i)
    g[i] = m.nr(p, r, gz[i], gs.at(i), gn.at(i));
  return g;
}

std::string show_ctx(const Modality& m, const UsageCtx& g,
                     const std::vector<std::string>& names) {
  std::string s = "[";
  for (std::size_t k = 0; k < g.size(); ++k) {
    std::size_t i = g.size() - 1 - k;  // index 0 rightmost
    if (k) s += ", ";
    s += (i < names.size() && !names[i].empty()) ? names[i]
                                                 : "x" + std::to_string(i);
    s += "↦" + m.show(g[i]);
  }
  return s + "]";
}

UsageCtx matrix_apply(const Modality& m, const UsageCtx& g, const SubstMatrix& psi) {
  UsageCtx out = ctx_zero(m, psi.cols);
  for (std::size_t i = 0; i < g.size(); ++i)
    out = ctx_add(m, out, ctx_scale(m, g[i], psi.rows.at(i)));
  return out;
}

}  // namespace gtt
