#include "spantrace/instance.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace spantrace {

using json = nlohmann::ordered_json;

namespace {

std::string escape(const std::string& key) {
  std::string out;
  for (char ch : key) {
    if (ch == '~')
      out += "~0";
    else if (ch == '/')
      out += "~1";
    else
      out += ch;
  }
  return out;
}

std::string at(const std::string& loc, const std::string& key) { return loc + "/" + escape(key); }

[[noreturn]] void fail(const std::string& loc, const std::string& what) { throw ParseError(loc.empty() ? "/" : loc, what); }

/// Runs f, turning library errors into parse errors at loc.
template <class F>
auto located(const std::string& loc, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    fail(loc, e.what());
  }
}

const json& member(const json& j, const std::string& loc, const std::string& key) {
  if (!j.is_object()) fail(loc, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(at(loc, key), "missing");
  return *it;
}

const json& object_at(const json& j, const std::string& loc) {
  if (!j.is_object()) fail(loc, "expected an object");
  return j;
}

std::string string_at(const json& j, const std::string& loc) {
  if (!j.is_string()) fail(loc, "expected a string");
  return j.get<std::string>();
}

Scalar int_at(const json& j, const std::string& loc) {
  if (!j.is_number_integer()) fail(loc, "expected an integer");
  return j.get<Scalar>();
}

std::vector<std::string> labels_at(const json& j, const std::string& loc) {
  if (!j.is_array()) fail(loc, "expected an array of labels");
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(string_at(j[i], at(loc, std::to_string(i))));
    if (!seen.insert(out.back()).second) fail(at(loc, std::to_string(i)), "duplicate label '" + out.back() + "'");
  }
  return out;
}

Degree degree_at(const std::string& key, const std::string& loc) {
  Degree n = 0;
  auto [end, ec] = std::from_chars(key.data(), key.data() + key.size(), n);
  if (ec != std::errc() || end != key.data() + key.size()) fail(at(loc, key), "degree is not an integer");
  return n;
}

Matrix matrix_at(const json& j, const std::string& loc, Ring ring, std::size_t rows, std::size_t cols) {
  if (!j.is_array()) fail(loc, "expected an array of rows");
  if (j.size() != rows) fail(loc, "expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
  Matrix::Builder b(ring, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rl = at(loc, std::to_string(r));
    if (!j[r].is_array()) fail(rl, "expected a row");
    if (j[r].size() != cols) fail(rl, "expected " + std::to_string(cols) + " entries, got " + std::to_string(j[r].size()));
    for (std::size_t c = 0; c < cols; ++c) b.add(r, c, int_at(j[r][c], at(rl, std::to_string(c))));
  }
  return b.build();
}

json matrix_json(const Matrix& m) {
  json out = json::array();
  for (auto& row : m.to_rows()) out.push_back(row);
  return out;
}

Complex complex_at(const json& j, const std::string& loc, Ring ring) {
  object_at(j, loc);
  std::map<Degree, std::size_t> ranks;
  const std::string rl = at(loc, "ranks");
  for (auto& [key, r] : object_at(member(j, loc, "ranks"), rl).items()) {
    const Scalar v = int_at(r, at(rl, key));
    if (v < 0) fail(at(rl, key), "negative rank");
    ranks[degree_at(key, rl)] = static_cast<std::size_t>(v);
  }
  auto rank = [&](Degree n) { return ranks.count(n) ? ranks[n] : std::size_t{0}; };
  std::map<Degree, Matrix> diffs;
  if (j.contains("diff")) {
    const std::string dl = at(loc, "diff");
    for (auto& [key, m] : object_at(j["diff"], dl).items()) {
      const Degree n = degree_at(key, dl);
      diffs.emplace(n, matrix_at(m, at(dl, key), ring, rank(n + 1), rank(n)));
    }
  }
  Complex c = located(loc, [&] { return Complex(ring, ranks, std::move(diffs)); });
  if (Verdict v = cx_validate(c); !v) fail(loc, v.detail);
  return c;
}

json complex_json(const Complex& c) {
  json ranks = json::object(), diff = json::object();
  for (auto [n, r] : c.ranks()) ranks[std::to_string(n)] = r;
  for (auto& [n, m] : c.stored_diffs()) diff[std::to_string(n)] = matrix_json(m);
  json out = json::object();
  out["ranks"] = std::move(ranks);
  if (!diff.empty()) out["diff"] = std::move(diff);
  return out;
}

ChainMap chain_map_at(const json& j, const std::string& loc, const ComplexRef& src, const ComplexRef& tgt) {
  std::map<Degree, Matrix> comps;
  for (auto& [key, m] : object_at(j, loc).items()) {
    const Degree n = degree_at(key, loc);
    comps.emplace(n, matrix_at(m, at(loc, key), src->ring(), tgt->rank(n), src->rank(n)));
  }
  ChainMap out = located(loc, [&] { return ChainMap(src, tgt, std::move(comps)); });
  if (Verdict v = chain_map_check(out); !v) fail(loc, v.detail);
  return out;
}

json chain_map_json(const ChainMap& m) {
  json out = json::object();
  for (auto& [n, c] : m.components())
    if (!c.is_zero()) out[std::to_string(n)] = matrix_json(c);
  return out;
}

/// label -> label object over all of `from`, in any key order.
std::vector<std::size_t> graph_at(const json& j, const std::string& loc, const SetRef& from, const SetRef& to) {
  object_at(j, loc);
  std::vector<std::size_t> graph(from->size(), 0);
  std::vector<bool> hit(from->size(), false);
  for (auto& [key, val] : j.items()) {
    auto src = from->find(key);
    if (!src) fail(at(loc, key), "unknown label '" + key + "'");
    const std::string label = string_at(val, at(loc, key));
    auto tgt = to->find(label);
    if (!tgt) fail(at(loc, key), "unknown label '" + label + "'");
    graph[*src] = *tgt;
    hit[*src] = true;
  }
  for (std::size_t i = 0; i < from->size(); ++i)
    if (!hit[i]) fail(at(loc, from->label(i)), "missing image");
  return graph;
}

json graph_json(const OverMap& f) {
  json out = json::object();
  for (std::size_t i = 0; i < f.source()->size(); ++i) out[f.source()->label(i)] = f.target()->label(f(i));
  return out;
}

template <class T>
const T& lookup(const Named<T>& entries, const std::string& name, const char* kind) {
  for (auto& [n, v] : entries)
    if (n == name) return v;
  throw Error(std::string("unknown ") + kind + " '" + name + "'");
}

template <class T>
const T& lookup_at(const Named<T>& entries, const json& j, const std::string& loc, const char* kind) {
  const std::string name = string_at(j, loc);
  for (auto& [n, v] : entries)
    if (n == name) return v;
  fail(loc, std::string("unknown ") + kind + " '" + name + "'");
}

std::string name_at(const json& j, const std::string& loc) { return string_at(j, loc); }

}  // namespace

const SetRef& Instance::set(const std::string& name) const { return lookup(sets, name, "set"); }
const NamedMap& Instance::map(const std::string& name) const { return lookup(maps, name, "map"); }
const NamedSpan& Instance::span(const std::string& name) const { return lookup(spans, name, "span"); }
const NamedSheaf& Instance::sheaf(const std::string& name) const { return lookup(sheaves, name, "sheaf"); }
const NamedMorphism& Instance::morphism(const std::string& name) const {
  return lookup(morphisms, name, "morphism");
}

LVDiagram Instance::lv_diagram() const {
  if (!lv) throw Error("instance has no lv section");
  return LVDiagram{map(lv->f).map,        map(lv->g).map,        map(lv->p).map,
                   map(lv->q).map,        span(lv->c_lower).span, span(lv->d_lower).span,
                   morphism(lv->u).morphism, morphism(lv->v).morphism};
}

Instance parse_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("/", e.what());
  }
  object_at(j, "");
  const Scalar modulus = int_at(member(j, "", "modulus"), "/modulus");
  if (modulus < 0 || modulus == 1) fail("/modulus", "modulus must be 0 or at least 2");
  Instance inst{Ring(modulus), nullptr, {}, {}, {}, {}, {}, std::nullopt, std::nullopt};
  const Ring ring = inst.ring;

  const std::vector<std::string> points = labels_at(member(j, "", "base"), "/base");
  if (points.empty()) fail("/base", "the base has no points");
  inst.base = make_base(points);
  const SetRef base_pts = base_set(inst.base);

  auto section = [&](const char* key) -> const json& {
    static const json empty = json::object();
    if (!j.contains(key)) return empty;
    return object_at(j[key], std::string("/") + key);
  };

  for (auto& [name, s] : section("sets").items()) {
    const std::string loc = at("/sets", name);
    if (s.is_array()) {
      if (points.size() != 1) fail(loc, "a bare label array needs a one-point base");
      auto labels = labels_at(s, loc);
      std::vector<std::size_t> anchor(labels.size(), 0);
      inst.sets.emplace_back(name, make_set(inst.base, std::move(labels), std::move(anchor)));
      continue;
    }
    auto labels = labels_at(member(s, loc, "labels"), at(loc, "labels"));
    const SetRef bare = located(loc, [&] { return make_set(inst.base, labels, std::vector<std::size_t>(labels.size(), 0)); });
    auto anchor = graph_at(member(s, loc, "anchor"), at(loc, "anchor"), bare, base_pts);
    inst.sets.emplace_back(name, make_set(inst.base, std::move(labels), std::move(anchor)));
  }

  for (auto& [name, m] : section("maps").items()) {
    const std::string loc = at("/maps", name);
    const std::string from = name_at(member(m, loc, "from"), at(loc, "from"));
    const std::string to = name_at(member(m, loc, "to"), at(loc, "to"));
    const SetRef& x = lookup_at(inst.sets, m["from"], at(loc, "from"), "set");
    const SetRef& y = lookup_at(inst.sets, m["to"], at(loc, "to"), "set");
    auto graph = graph_at(member(m, loc, "graph"), at(loc, "graph"), x, y);
    OverMap f = located(at(loc, "graph"), [&] { return OverMap(x, y, std::move(graph)); });
    inst.maps.emplace_back(name, NamedMap{std::move(f), from, to});
  }

  for (auto& [name, s] : section("spans").items()) {
    const std::string loc = at("/spans", name);
    const SetRef& c = lookup_at(inst.sets, member(s, loc, "apex"), at(loc, "apex"), "set");
    const SetRef& x = lookup_at(inst.sets, member(s, loc, "from"), at(loc, "from"), "set");
    const SetRef& y = lookup_at(inst.sets, member(s, loc, "to"), at(loc, "to"), "set");
    auto left = graph_at(member(s, loc, "left"), at(loc, "left"), c, x);
    auto right = graph_at(member(s, loc, "right"), at(loc, "right"), c, y);
    OverMap l = located(at(loc, "left"), [&] { return OverMap(c, x, std::move(left)); });
    OverMap r = located(at(loc, "right"), [&] { return OverMap(c, y, std::move(right)); });
    inst.spans.emplace_back(name, NamedSpan{Span(std::move(l), std::move(r)), s["apex"].get<std::string>(),
                                            s["from"].get<std::string>(), s["to"].get<std::string>()});
  }

  for (auto& [name, s] : section("sheaves").items()) {
    const std::string loc = at("/sheaves", name);
    const SetRef& x = lookup_at(inst.sets, member(s, loc, "carrier"), at(loc, "carrier"), "set");
    const std::string sl = at(loc, "stalks");
    const json& stalks = object_at(member(s, loc, "stalks"), sl);
    for (auto& [label, c] : stalks.items())
      if (!x->find(label)) fail(at(sl, label), "unknown label '" + label + "'");
    std::vector<ComplexRef> refs;
    for (std::size_t i = 0; i < x->size(); ++i) {
      const std::string cl = at(sl, x->label(i));
      if (!stalks.contains(x->label(i))) fail(cl, "missing stalk");
      refs.push_back(share(complex_at(stalks[x->label(i)], cl, ring)));
    }
    inst.sheaves.emplace_back(name, NamedSheaf{Sheaf(ring, x, std::move(refs)), s["carrier"].get<std::string>()});
  }

  for (auto& [name, m] : section("morphisms").items()) {
    const std::string loc = at("/morphisms", name);
    const NamedSheaf& l = lookup_at(inst.sheaves, member(m, loc, "source"), at(loc, "source"), "sheaf");
    const NamedSheaf& r = lookup_at(inst.sheaves, member(m, loc, "target"), at(loc, "target"), "sheaf");
    const NamedSpan& c = lookup_at(inst.spans, member(m, loc, "span"), at(loc, "span"), "span");
    if (!same_set(c.span.from(), l.sheaf.carrier())) fail(at(loc, "span"), "span does not start at the source carrier");
    if (!same_set(c.span.to(), r.sheaf.carrier())) fail(at(loc, "span"), "span does not end at the target carrier");
    const std::string ml = at(loc, "maps");
    const json& maps = object_at(member(m, loc, "maps"), ml);
    for (auto& [label, c2] : maps.items())
      if (!c.span.apex()->find(label)) fail(at(ml, label), "unknown label '" + label + "'");
    std::vector<ChainMap> comps;
    for (std::size_t g = 0; g < c.span.apex()->size(); ++g) {
      const std::string gl = at(ml, c.span.apex()->label(g));
      if (!maps.contains(c.span.apex()->label(g))) fail(gl, "missing component");
      comps.push_back(chain_map_at(maps[c.span.apex()->label(g)], gl, l.sheaf.stalk(c.span.left(g)),
                                   r.sheaf.stalk(c.span.right(g))));
    }
    CCMorphism u = CCMorphism::assemble(CCObject{l.sheaf}, CCObject{r.sheaf}, c.span, std::move(comps));
    inst.morphisms.emplace_back(name, NamedMorphism{std::move(u), m["source"].get<std::string>(),
                                                    m["target"].get<std::string>(), m["span"].get<std::string>()});
  }

  if (j.contains("lv")) {
    const json& lv = object_at(j["lv"], "/lv");
    LVNames names;
    auto name_of = [&](const char* key, std::string& out, auto& entries, const char* kind) {
      lookup_at(entries, member(lv, "/lv", key), at("/lv", key), kind);
      out = lv[key].template get<std::string>();
    };
    name_of("f", names.f, inst.maps, "map");
    name_of("g", names.g, inst.maps, "map");
    name_of("p", names.p, inst.maps, "map");
    name_of("q", names.q, inst.maps, "map");
    name_of("c_lower", names.c_lower, inst.spans, "span");
    name_of("d_lower", names.d_lower, inst.spans, "span");
    name_of("u", names.u, inst.morphisms, "morphism");
    name_of("v", names.v, inst.morphisms, "morphism");
    if (lv.contains("u_lower") || lv.contains("v_lower")) {
      name_of("u_lower", names.u_lower, inst.morphisms, "morphism");
      name_of("v_lower", names.v_lower, inst.morphisms, "morphism");
    }
    inst.lv = names;
    const LVDiagram d = inst.lv_diagram();
    if (Verdict v = located("/lv", [&] { return lv_diagram_check(d); }); !v) fail("/lv", v.detail);
  }

  if (j.contains("base_change")) {
    const std::string loc = "/base_change";
    const json& g = object_at(member(object_at(j[loc.substr(1)], loc), loc, "g"), loc + "/g");
    std::vector<std::string> labels;
    std::vector<std::size_t> anchor;
    for (auto& [label, t] : g.items()) {
      const std::string point = string_at(t, at(loc + "/g", label));
      auto hit = base_pts->find(point);
      if (!hit) fail(at(loc + "/g", label), "unknown base point '" + point + "'");
      labels.push_back(label);
      anchor.push_back(*hit);
    }
    const SetRef s = located(loc + "/g", [&] { return make_set(inst.base, labels, anchor); });
    inst.base_change = OverMap(s, base_pts, anchor);
  }
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("/", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string emit_instance(const Instance& inst) {
  json j = json::object();
  j["modulus"] = inst.ring.modulus();
  j["base"] = inst.base->points;
  const bool point = inst.base->points.size() == 1;
  json sets = json::object();
  for (auto& [name, s] : inst.sets) {
    if (point) {
      sets[name] = s->labels();
      continue;
    }
    json anchor = json::object();
    for (std::size_t i = 0; i < s->size(); ++i) anchor[s->label(i)] = inst.base->points[s->anchor(i)];
    sets[name] = json{{"labels", s->labels()}, {"anchor", std::move(anchor)}};
  }
  j["sets"] = std::move(sets);
  json maps = json::object();
  for (auto& [name, m] : inst.maps) maps[name] = json{{"from", m.from}, {"to", m.to}, {"graph", graph_json(m.map)}};
  j["maps"] = std::move(maps);
  json spans = json::object();
  for (auto& [name, s] : inst.spans)
    spans[name] = json{{"apex", s.apex},
                       {"from", s.from},
                       {"to", s.to},
                       {"left", graph_json(s.span.left)},
                       {"right", graph_json(s.span.right)}};
  j["spans"] = std::move(spans);
  json sheaves = json::object();
  for (auto& [name, s] : inst.sheaves) {
    json stalks = json::object();
    for (std::size_t i = 0; i < s.sheaf.carrier()->size(); ++i)
      stalks[s.sheaf.carrier()->label(i)] = complex_json(*s.sheaf.stalk(i));
    sheaves[name] = json{{"carrier", s.carrier}, {"stalks", std::move(stalks)}};
  }
  j["sheaves"] = std::move(sheaves);
  json morphisms = json::object();
  for (auto& [name, m] : inst.morphisms) {
    json comps = json::object();
    const SetRef& apex = m.morphism.corr().apex();
    for (std::size_t g = 0; g < apex->size(); ++g) comps[apex->label(g)] = chain_map_json(m.morphism.map(g));
    morphisms[name] = json{{"source", m.source}, {"target", m.target}, {"span", m.span}, {"maps", std::move(comps)}};
  }
  j["morphisms"] = std::move(morphisms);
  if (inst.lv)
    j["lv"] = json{{"f", inst.lv->f},       {"g", inst.lv->g},  {"p", inst.lv->p},
                   {"q", inst.lv->q},       {"c_lower", inst.lv->c_lower},
                   {"d_lower", inst.lv->d_lower}, {"u", inst.lv->u}, {"v", inst.lv->v}};
  if (inst.lv && !inst.lv->u_lower.empty()) {
    j["lv"]["u_lower"] = inst.lv->u_lower;
    j["lv"]["v_lower"] = inst.lv->v_lower;
  }
  if (inst.base_change) {
    json g = json::object();
    const OverMap& bc = *inst.base_change;
    for (std::size_t i = 0; i < bc.source()->size(); ++i) g[bc.source()->label(i)] = inst.base->points[bc(i)];
    j["base_change"] = json{{"g", std::move(g)}};
  }
  return j.dump(2) + "\n";
}

Instance instance_from_diagram(const LVDiagram& d, const std::optional<OverMap>& base_change) {
  Instance inst{d.u.ring(), d.f.source()->base(), {}, {}, {}, {}, {}, std::nullopt, base_change};
  inst.sets = {{"X", d.f.source()},         {"Y", d.g.source()},        {"X'", d.f.target()},
               {"Y'", d.g.target()},        {"C", d.u.corr().apex()},   {"D", d.v.corr().apex()},
               {"C'", d.lower_c.apex()},    {"D'", d.lower_d.apex()}};
  inst.maps = {{"f", NamedMap{d.f, "X", "X'"}},
               {"g", NamedMap{d.g, "Y", "Y'"}},
               {"p", NamedMap{d.p, "C", "C'"}},
               {"q", NamedMap{d.q, "D", "D'"}}};
  inst.spans = {{"c", NamedSpan{d.u.corr(), "C", "X", "Y"}},
                {"d", NamedSpan{d.v.corr(), "D", "Y", "X"}},
                {"c'", NamedSpan{d.lower_c, "C'", "X'", "Y'"}},
                {"d'", NamedSpan{d.lower_d, "D'", "Y'", "X'"}}};
  inst.sheaves = {{"L", NamedSheaf{d.u.source().sheaf, "X"}}, {"M", NamedSheaf{d.u.target().sheaf, "Y"}}};
  inst.morphisms = {{"u", NamedMorphism{d.u, "L", "M", "c"}}, {"v", NamedMorphism{d.v, "M", "L", "d"}}};
  inst.lv = LVNames{"f", "g", "p", "q", "c'", "d'", "u", "v", "", ""};
  return inst;
}

std::uint64_t instance_seed(std::uint64_t seed, std::size_t index) {
  // splitmix64
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Instance generate(std::uint64_t seed, const GenParams& params) {
  Rng rng(seed);
  LVDiagram d = random_lv_diagram(rng, params);
  OverMap bc = random_base_change(rng, d.f.source()->base(), params.max_set);
  return instance_from_diagram(d, bc);
}

}  // namespace spantrace
