#include "hetsim/ioformats.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "hetsim/errors.hpp"
#include "hetsim/sexpr.hpp"

namespace hetsim {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '\n') {
      std::string_view line = text.substr(start, i - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      out.push_back(line);
      start = i + 1;
    }
  }
  return out;
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string> split_commas(std::string_view s) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i)
    if (i == s.size() || s[i] == ',') {
      out.emplace_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  return out;
}

std::string join(const FinSet& s, char sep) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += sep;
    out += s[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// native format

struct Header {
  std::string kind;
  std::map<std::string, std::vector<std::string>> keys;
};

FunctorKind kind_from_header(const Header& h, std::size_t line) {
  auto get = [&](const std::string& key) { return FinSet(h.keys.count(key) ? h.keys.at(key) : std::vector<std::string>{}); };
  auto only = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [k, v] : h.keys)
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
        throw ParseError("unknown key '" + k + "' for " + h.kind, line);
  };
  try {
    if (h.kind == "PLTS" || h.kind == "DLTS" || h.kind == "DET" || h.kind == "PMAP" || h.kind == "TMAP" ||
        h.kind == "NEMAP") {
      only({"labels"});
      FinSet labels = get("labels");
      if (h.kind == "PLTS") return FunctorKind::plts(labels);
      if (h.kind == "DLTS") return FunctorKind::dlts(labels);
      if (h.kind == "DET") return FunctorKind::det(labels);
      if (h.kind == "PMAP") return FunctorKind::pmap(labels);
      if (h.kind == "TMAP") return FunctorKind::tmap(labels);
      return FunctorKind::nemap(labels);
    }
    if (h.kind == "SUSP" || h.kind == "SUSPIE") {
      only({"in", "out"});
      return h.kind == "SUSP" ? FunctorKind::susp(get("in"), get("out")) : FunctorKind::suspie(get("in"), get("out"));
    }
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), line);
  }
  throw ParseError("unknown functor '" + h.kind + "'", line);
}

struct Arrowish {
  std::string letter;
  std::string state;
  std::optional<Rational> weight;
};

Arrowish read_arrow(const std::string& tok, bool weighted, std::size_t line) {
  auto arrow = tok.find("->");
  if (arrow == std::string::npos || arrow == 0) throw ParseError("expected 'label->state', got '" + tok + "'", line);
  Arrowish a;
  a.letter = tok.substr(0, arrow);
  std::string rest = tok.substr(arrow + 2);
  if (weighted) {
    auto colon = rest.rfind(':');
    if (colon == std::string::npos) throw ParseError("missing weight in '" + tok + "'", line);
    try {
      a.weight = Rational::parse(rest.substr(colon + 1));
    } catch (const std::exception&) {
      throw ParseError("bad weight '" + rest.substr(colon + 1) + "' (use p/q or an integer)", line);
    }
    rest = rest.substr(0, colon);
  }
  if (rest.empty()) throw ParseError("missing target state in '" + tok + "'", line);
  a.state = rest;
  return a;
}

FunctorTerm build_term(const FunctorKind& kind, const std::vector<Arrowish>& arrows, const FinSet& states,
                       const std::string& name, std::size_t line) {
  auto state_of = [&](const std::string& s) {
    auto i = states.find(s);
    if (!i) throw ParseError("unknown state '" + s + "'", line);
    return *i;
  };
  auto letter_of = [&](const FinSet& alphabet, const std::string& l) {
    auto i = alphabet.find(l);
    if (!i) throw ParseError("unknown label '" + l + "'", line);
    return *i;
  };
  switch (kind.tag()) {
    case KindTag::plts: {
      PltsTerm t;
      for (const auto& a : arrows) t.arrows.push_back({letter_of(kind.labels(), a.letter), state_of(a.state)});
      return t;
    }
    case KindTag::dlts: {
      std::map<Arrow, Rational> acc;
      for (const auto& a : arrows) acc[{letter_of(kind.labels(), a.letter), state_of(a.state)}] += *a.weight;
      DltsTerm t;
      for (const auto& [arrow, w] : acc)
        if (!w.is_zero()) t.weights.emplace_back(arrow, w);
      return t;
    }
    case KindTag::det:
      if (arrows.empty()) throw ValidationError("no successor at " + name);
      if (arrows.size() > 1) throw ParseError("deterministic state '" + name + "' has several successors", line);
      return DetTerm{{letter_of(kind.labels(), arrows[0].letter), state_of(arrows[0].state)}};
    case KindTag::pmap:
    case KindTag::tmap:
    case KindTag::nemap: {
      MapTerm m;
      m.image.assign(kind.labels().size(), std::nullopt);
      for (const auto& a : arrows) {
        auto i = letter_of(kind.labels(), a.letter);
        if (m.image[i]) throw ParseError("letter '" + a.letter + "' defined twice", line);
        m.image[i] = state_of(a.state);
      }
      return m;
    }
    case KindTag::susp:
    case KindTag::suspie: {
      SuspTerm t;
      t.in.image.assign(kind.inputs().size(), std::nullopt);
      t.out.image.assign(kind.outputs().size(), std::nullopt);
      for (const auto& a : arrows) {
        MapTerm* m = nullptr;
        std::size_t i = 0;
        if (auto k = kind.inputs().find(a.letter)) {
          m = &t.in;
          i = *k;
        } else if (auto k2 = kind.outputs().find(a.letter)) {
          m = &t.out;
          i = *k2;
        } else {
          throw ParseError("unknown label '" + a.letter + "'", line);
        }
        if (m->image[i]) throw ParseError("letter '" + a.letter + "' defined twice", line);
        m->image[i] = state_of(a.state);
      }
      return t;
    }
    case KindTag::pair:
      break;
  }
  throw ParseError("product kinds have no native text form", line);
}

std::string render_map(const MapTerm& m, const FinSet& alphabet, const FinSet& states) {
  std::string out;
  for (std::size_t i = 0; i < m.image.size(); ++i)
    if (m.image[i]) out += " " + alphabet[i] + "->" + states[*m.image[i]];
  return out;
}

// ---------------------------------------------------------------------------
// connector DSL

[[noreturn]] void bad(const SExpr& e, const std::string& what) { throw ParseError(what, e.line, e.column); }

void arity(const SExpr& e, std::size_t n) {
  if (e.items.size() != n + 1)
    bad(e, "'" + e.head() + "' takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s") + ", got " +
               std::to_string(e.items.size() - 1));
}

LabelPairs read_rel(const SExpr& e) {
  if (e.is_atom() || e.head() != "rel") bad(e, "expected (rel (a b) ...)");
  LabelPairs out;
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    const auto& p = e.items[i];
    if (p.is_atom() || p.items.size() != 2 || !p.items[0].is_atom() || !p.items[1].is_atom())
      bad(p, "expected a label pair (a b)");
    out.emplace_back(p.items[0].atom, p.items[1].atom);
  }
  return out;
}

NatTrans read_nat(const SExpr& e) {
  const std::string h = e.head();
  if (h == "relabel-conv" || h == "relabel") {
    arity(e, 1);
    auto r = read_rel(e.items[1]);
    return h == "relabel" ? NatTrans::relabel(std::move(r)) : NatTrans::relabel_conv(std::move(r));
  }
  if (h == "incl" || h == "proj1" || h == "proj2") {
    arity(e, 0);
    if (h == "incl") return NatTrans::incl();
    return h == "proj1" ? NatTrans::proj1() : NatTrans::proj2();
  }
  bad(e, "unknown natural transformation '" + (e.is_atom() ? e.atom : h) + "'");
}

ConnectorExpr read_expr(const SExpr& e) {
  if (e.is_atom()) bad(e, "expected a parenthesized connector, got '" + e.atom + "'");
  const std::string h = e.head();
  if (h.empty()) bad(e, "empty connector");
  if (h == "kant") {
    std::vector<LambdaRel::Pair> pairs;
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      const auto& p = e.items[i];
      if (p.is_atom() || p.items.size() != 2) bad(p, "expected a lifting pair (λ μ)");
      pairs.emplace_back(lifting_from_sexpr(p.items[0]), lifting_from_sexpr(p.items[1]));
    }
    return ConnectorExpr::kant(std::move(pairs));
  }
  if (h == "id" || h == "lf" || h == "lt" || h == "ioco" || h == "ioco-in" || h == "ioco-out") {
    arity(e, 0);
    if (h == "id") return ConnectorExpr::id();
    if (h == "lf") return ConnectorExpr::lf();
    if (h == "lt") return ConnectorExpr::lt();
    if (h == "ioco") return ConnectorExpr::ioco();
    return h == "ioco-in" ? ConnectorExpr::ioco_in() : ConnectorExpr::ioco_out();
  }
  if (h == "comp" || h == "meet" || h == "prod") {
    arity(e, 2);
    auto a = read_expr(e.items[1]);
    auto b = read_expr(e.items[2]);
    if (h == "comp") return ConnectorExpr::comp(a, b);
    return h == "meet" ? ConnectorExpr::meet(a, b) : ConnectorExpr::prod(a, b);
  }
  if (h == "conv") {
    arity(e, 1);
    return ConnectorExpr::conv(read_expr(e.items[1]));
  }
  if (h == "kr" || h == "lr") {
    arity(e, 1);
    auto r = read_rel(e.items[1]);
    return h == "kr" ? ConnectorExpr::kr(std::move(r)) : ConnectorExpr::lr(std::move(r));
  }
  if (h == "weak") {
    arity(e, 1);
    if (!e.items[1].is_atom()) bad(e.items[1], "expected a label");
    return ConnectorExpr::weak(e.items[1].atom);
  }
  if (h == "pull-left") {
    arity(e, 2);
    return ConnectorExpr::pull_left(read_expr(e.items[1]), read_nat(e.items[2]));
  }
  if (h == "pull-right") {
    arity(e, 2);
    return ConnectorExpr::pull_right(read_nat(e.items[1]), read_expr(e.items[2]));
  }
  bad(e, "unknown connector '" + h + "'");
}

std::size_t read_uint(std::string_view s, std::size_t& i, std::size_t line) {
  while (i < s.size() && is_space(s[i])) ++i;
  if (i >= s.size() || !is_digit(s[i])) throw ParseError("expected a number", line, i + 1);
  std::size_t v = 0;
  while (i < s.size() && is_digit(s[i])) v = v * 10 + static_cast<std::size_t>(s[i++] - '0');
  return v;
}

void expect_char(std::string_view s, std::size_t& i, char c, std::size_t line) {
  while (i < s.size() && is_space(s[i])) ++i;
  if (i >= s.size() || s[i] != c) throw ParseError(std::string("expected '") + c + "'", line, i + 1);
  ++i;
}

}  // namespace

Coalgebra parse_chc(std::string_view text) {
  const auto lines = split_lines(text);
  std::optional<FunctorKind> kind;
  std::optional<FinSet> states;
  std::vector<std::vector<Arrowish>> arrows;
  std::vector<std::size_t> seen_at;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::size_t line = ln + 1;
    std::string_view body = lines[ln];
    if (auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;
    if (!kind) {
      auto w = words(body);
      if (w.size() < 2 || w[0] != "functor") throw ParseError("expected 'functor <KIND> key=...'", line);
      Header h;
      h.kind = w[1];
      for (std::size_t i = 2; i < w.size(); ++i) {
        auto eq = w[i].find('=');
        if (eq == std::string::npos || eq == 0) throw ParseError("expected key=v1,v2 in '" + w[i] + "'", line);
        std::string key = w[i].substr(0, eq);
        if (h.keys.count(key)) throw ParseError("key '" + key + "' given twice", line);
        h.keys[key] = split_commas(std::string_view(w[i]).substr(eq + 1));
      }
      kind = kind_from_header(h, line);
      continue;
    }
    if (!states) {
      auto w = words(body);
      if (w.empty() || w[0] != "states") throw ParseError("expected 'states s0 s1 ...'", line);
      std::set<std::string> uniq;
      for (std::size_t i = 1; i < w.size(); ++i)
        if (!uniq.insert(w[i]).second) throw ParseError("state '" + w[i] + "' declared twice", line);
      states = FinSet(std::vector<std::string>(w.begin() + 1, w.end()));
      arrows.assign(states->size(), {});
      seen_at.assign(states->size(), 0);
      continue;
    }
    auto colon = body.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected '<state>: ...'", line);
    std::string name(trim(body.substr(0, colon)));
    auto idx = states->find(name);
    if (!idx) throw ParseError("unknown state '" + name + "'", line);
    if (seen_at[*idx]) throw ParseError("state '" + name + "' already described on line " + std::to_string(seen_at[*idx]), line);
    seen_at[*idx] = line;
    for (const auto& tok : words(body.substr(colon + 1)))
      arrows[*idx].push_back(read_arrow(tok, kind->tag() == KindTag::dlts, line));
  }
  if (!kind) throw ParseError("missing 'functor' header");
  if (!states) throw ParseError("missing 'states' line");
  std::vector<FunctorTerm> trans;
  for (std::size_t x = 0; x < states->size(); ++x)
    trans.push_back(build_term(*kind, arrows[x], *states, (*states)[x], seen_at[x]));
  return Coalgebra(*kind, *states, std::move(trans));
}

std::string serialize_chc(const Coalgebra& c) {
  const auto& k = c.kind();
  std::ostringstream out;
  switch (k.tag()) {
    case KindTag::plts:
      out << "functor PLTS labels=" << join(k.labels(), ',') << '\n';
      break;
    case KindTag::dlts:
      out << "functor DLTS labels=" << join(k.labels(), ',') << '\n';
      break;
    case KindTag::det:
      out << "functor DET labels=" << join(k.labels(), ',') << '\n';
      break;
    case KindTag::pmap:
      out << "functor PMAP labels=" << join(k.labels(), ',') << '\n';
      break;
    case KindTag::tmap:
      out << "functor TMAP labels=" << join(k.labels(), ',') << '\n';
      break;
    case KindTag::nemap:
      out << "functor NEMAP labels=" << join(k.labels(), ',') << '\n';
      break;
    case KindTag::susp:
    case KindTag::suspie:
      out << "functor " << (k.tag() == KindTag::susp ? "SUSP" : "SUSPIE") << " in=" << join(k.inputs(), ',')
          << " out=" << join(k.outputs(), ',') << '\n';
      break;
    case KindTag::pair:
      throw Error("product kinds have no native text form");
  }
  out << "states";
  for (const auto& s : c.states().elements()) out << ' ' << s;
  out << '\n';
  const auto& st = c.states();
  for (std::size_t x = 0; x < c.size(); ++x) {
    out << st[x] << ':';
    const auto& t = c(x);
    switch (k.tag()) {
      case KindTag::plts:
        for (const auto& a : t.as<PltsTerm>().arrows) out << ' ' << k.labels()[a.label] << "->" << st[a.state];
        break;
      case KindTag::dlts:
        for (const auto& [a, w] : t.as<DltsTerm>().weights)
          out << ' ' << k.labels()[a.label] << "->" << st[a.state] << ':' << w.str();
        break;
      case KindTag::det: {
        const auto& a = t.as<DetTerm>().arrow;
        out << ' ' << k.labels()[a.label] << "->" << st[a.state];
        break;
      }
      case KindTag::pmap:
      case KindTag::tmap:
      case KindTag::nemap:
        out << render_map(t.as<MapTerm>(), k.labels(), st);
        break;
      case KindTag::susp:
      case KindTag::suspie:
        out << render_map(t.as<SuspTerm>().in, k.inputs(), st) << render_map(t.as<SuspTerm>().out, k.outputs(), st);
        break;
      case KindTag::pair:
        break;
    }
    out << '\n';
  }
  return out.str();
}

AutSystem parse_aut(std::string_view text, const std::optional<FinSet>& labels) {
  const auto lines = split_lines(text);
  bool header = false;
  std::size_t init = 0, ntrans = 0, nstates = 0;
  struct Tr {
    std::size_t src, dst;
    std::string label;
  };
  std::vector<Tr> trs;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::size_t line = ln + 1;
    std::string_view s = trim(lines[ln]);
    if (s.empty()) continue;
    std::size_t i = 0;
    if (!header) {
      if (s.substr(0, 3) != "des") throw ParseError("expected 'des (init, ntrans, nstates)'", line, 1);
      i = 3;
      expect_char(s, i, '(', line);
      init = read_uint(s, i, line);
      expect_char(s, i, ',', line);
      ntrans = read_uint(s, i, line);
      expect_char(s, i, ',', line);
      nstates = read_uint(s, i, line);
      expect_char(s, i, ')', line);
      if (!trim(s.substr(i)).empty()) throw ParseError("trailing text after header", line, i + 1);
      if (nstates == 0) throw ParseError("an .aut system needs at least one state", line);
      if (init >= nstates) throw ParseError("initial state " + std::to_string(init) + " out of range", line);
      header = true;
      continue;
    }
    Tr t;
    expect_char(s, i, '(', line);
    t.src = read_uint(s, i, line);
    expect_char(s, i, ',', line);
    while (i < s.size() && is_space(s[i])) ++i;
    if (i < s.size() && s[i] == '"') {
      ++i;
      std::size_t j = s.find('"', i);
      if (j == std::string_view::npos) throw ParseError("unterminated label", line, i);
      t.label = std::string(s.substr(i, j - i));
      i = j + 1;
    } else {
      std::size_t j = s.find(',', i);
      if (j == std::string_view::npos) throw ParseError("expected ',' after label", line, i + 1);
      t.label = std::string(trim(s.substr(i, j - i)));
      i = j;
    }
    if (t.label.empty()) throw ParseError("empty label", line, i + 1);
    expect_char(s, i, ',', line);
    t.dst = read_uint(s, i, line);
    expect_char(s, i, ')', line);
    if (!trim(s.substr(i)).empty()) throw ParseError("trailing text after transition", line, i + 1);
    if (t.src >= nstates || t.dst >= nstates) throw ParseError("state number out of range", line);
    trs.push_back(std::move(t));
  }
  if (!header) throw ParseError("missing 'des' header");

  AutSystem out{Coalgebra(FunctorKind::plts(FinSet{}), FinSet{}, {}), init, {}};
  if (trs.size() != ntrans)
    out.warnings.push_back("header declares " + std::to_string(ntrans) + " transitions, found " +
                           std::to_string(trs.size()));
  FinSet alphabet;
  if (labels) {
    for (const auto& t : trs)
      if (!labels->contains(t.label)) throw ParseError("label '" + t.label + "' is not declared");
    alphabet = *labels;
  } else {
    std::set<std::string> names;
    for (const auto& t : trs) names.insert(t.label);
    alphabet = FinSet(std::vector<std::string>(names.begin(), names.end()));
  }
  FunctorKind kind = FunctorKind::plts(alphabet);
  std::vector<PltsTerm> terms(nstates);
  for (const auto& t : trs) terms[t.src].arrows.push_back({kind.labels().index_of(t.label), t.dst});
  std::vector<FunctorTerm> trans(terms.begin(), terms.end());
  out.system = Coalgebra(kind, FinSet::numbered("s", nstates), std::move(trans));
  return out;
}

std::string serialize_aut(const Coalgebra& c, std::size_t initial) {
  if (c.kind().tag() != KindTag::plts) throw KindMismatch(".aut output needs a PLTS system");
  std::size_t n = 0;
  std::string body;
  for (std::size_t x = 0; x < c.size(); ++x)
    for (const auto& a : c(x).as<PltsTerm>().arrows) {
      body += "(" + std::to_string(x) + ",\"" + c.kind().labels()[a.label] + "\"," + std::to_string(a.state) + ")\n";
      ++n;
    }
  return "des (" + std::to_string(initial) + "," + std::to_string(n) + "," + std::to_string(c.size()) + ")\n" + body;
}

ConnectorExpr parse_connector(std::string_view text) { return read_expr(parse_sexpr(text)); }

std::string write_relation(const Rel& r) {
  std::vector<std::string> lines;
  for (auto [x, y] : r.pairs()) lines.push_back(r.src()[x] + "\t" + r.dst()[y] + "\n");
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l;
  return out;
}

Rel parse_relation(std::string_view text, const FinSet& src, const FinSet& dst) {
  Rel r(src, dst);
  const auto lines = split_lines(text);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    auto w = words(lines[ln]);
    if (w.empty()) continue;
    if (w.size() != 2) throw ParseError("expected 'x<TAB>y'", ln + 1);
    auto x = src.find(w[0]);
    auto y = dst.find(w[1]);
    if (!x) throw ParseError("unknown state '" + w[0] + "'", ln + 1);
    if (!y) throw ParseError("unknown state '" + w[1] + "'", ln + 1);
    r.insert(*x, *y);
  }
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << contents;
  if (!out) throw Error("failed writing '" + path + "'");
}

Coalgebra load_system(const std::string& path) {
  const std::string text = read_file(path);
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".aut") == 0) return parse_aut(text).system;
  return parse_chc(text);
}

}  // namespace hetsim
