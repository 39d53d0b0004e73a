#include "spantrace/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace spantrace {

using json = nlohmann::ordered_json;

namespace {

CheckResult pass(std::size_t index, std::string name) { return CheckResult{index, std::move(name), true, {}, {}, {}}; }

CheckResult from_verdict(std::size_t index, std::string name, const Verdict& v) {
  CheckResult out = pass(index, std::move(name));
  out.pass = v.ok;
  out.detail = v.detail;
  return out;
}

CheckResult compared(std::size_t index, std::string name, const Verdict& v, const OmegaClass& lhs,
                     const OmegaClass& rhs) {
  CheckResult out = from_verdict(index, std::move(name), v);
  if (!out.pass) {
    out.lhs = ClassDump::of(lhs);
    out.rhs = ClassDump::of(rhs);
  }
  return out;
}

/// Runs one check; exceptions turn into a failure under that name.
template <class F>
void guarded(std::vector<CheckResult>& out, std::size_t index, const std::string& name, F&& f) {
  try {
    out.push_back(f());
  } catch (const std::exception& e) {
    out.push_back(from_verdict(index, name, Verdict::fail(std::string("error: ") + e.what())));
  }
}

struct Pair {
  std::string u, v;
};

/// u : A -> B and v : B -> A, by sheaf name. The lv pair first, then the rest in file order.
std::vector<Pair> opposite_pairs(const Instance& inst) {
  std::vector<Pair> out;
  if (inst.lv) out.push_back({inst.lv->u, inst.lv->v});
  for (auto& [a, ma] : inst.morphisms)
    for (auto& [b, mb] : inst.morphisms) {
      if (ma.source != mb.target || ma.target != mb.source) continue;
      if (inst.lv && a == inst.lv->u && b == inst.lv->v) continue;
      out.push_back({a, b});
    }
  return out;
}

std::string pair_name(const std::string& suite, const Pair& p, bool qualify) {
  return qualify ? suite + ":" + p.u + "," + p.v : suite;
}

Verdict same_class(const OmegaClass& a, const OmegaClass& b, const std::string& what) {
  if (a.values.size() != b.values.size()) return Verdict::fail(what + ": carriers have different sizes");
  for (std::size_t k = 0; k < a.values.size(); ++k)
    if (a.values[k] != b.values[k])
      return Verdict::fail(what + " differs at '" + a.carrier->label(k) + "': " + std::to_string(a.values[k]) +
                           " vs " + std::to_string(b.values[k]));
  return Verdict::pass();
}

void lv_checks(std::vector<CheckResult>& out, const Instance& inst, std::size_t index) {
  if (!inst.lv) return;
  guarded(out, index, "lv", [&] {
    const LVResult r = pairing_functorial(inst.lv_diagram());
    return compared(index, "lv", r.verdict, r.lhs, r.rhs);
  });
  if (inst.lv->u_lower.empty()) return;
  // stated lower row: each must be the pushforward, and the pairings must agree
  guarded(out, index, "lv:stated", [&] {
    const LVDiagram d = inst.lv_diagram();
    const CCMorphism& u2 = inst.morphism(inst.lv->u_lower).morphism;
    const CCMorphism& v2 = inst.morphism(inst.lv->v_lower).morphism;
    const LVResult r = pairing_functorial(d);
    const OmegaClass stated = pairing(u2, v2, make_dual(u2.source())).omega;
    Verdict v = same_class(r.lhs, stated, "pushed pairing");
    if (v && !(u2 == shriek_push(d.c_square(), d.u))) v = Verdict::fail("stated u_lower is not the pushforward of u");
    if (v && !(v2 == shriek_push(d.d_square(), d.v))) v = Verdict::fail("stated v_lower is not the pushforward of v");
    return compared(index, "lv:stated", v, r.lhs, stated);
  });
}

void global_checks(std::vector<CheckResult>& out, const Instance& inst, std::size_t index, const Pair& p,
                   bool qualify) {
  const std::string name = pair_name("global", p, qualify);
  guarded(out, index, name, [&] {
    const CCMorphism e = cc_compose(inst.morphism(p.u).morphism, inst.morphism(p.v).morphism).morphism;
    const OmegaClass local = trace(e, make_dual(e.source()));
    const FixedPoints fp = fixed_points(e.corr());
    const OmegaClass summed = omega_push(OverMap::anchor_map(fp.set), local);
    const SetRef s = base_set(e.source().base());
    const PushDiagram down{OverMap::anchor_map(e.source().space()), OverMap::anchor_map(e.corr().apex()),
                           OverMap::anchor_map(e.source().space()), e.corr(), Span::identity(s)};
    const CCMorphism global = shriek_push(down, e);
    std::vector<Scalar> values;
    for (std::size_t k = 0; k < s->size(); ++k) values.push_back(alt_trace(global.map(k)));
    const OmegaClass whole{e.ring(), s, std::move(values)};
    return compared(index, name, same_class(summed, whole, "global trace"), summed, whole);
  });
}

void triangle_checks(std::vector<CheckResult>& out, const Instance& inst, std::size_t index) {
  for (auto& [name, s] : inst.sheaves) {
    const std::string check = "triangle:" + name;
    guarded(out, index, check, [&] {
      const CCObject a{s.sheaf};
      Verdict v = duality_check(make_dual(a));
      if (v && !(verdier(verdier(s.sheaf)) == s.sheaf)) v = Verdict::fail("biduality is not the identity");
      return from_verdict(index, check, v);
    });
  }
}

void symmetry_checks(std::vector<CheckResult>& out, const Instance& inst, std::size_t index, const Pair& p,
                     bool qualify) {
  const std::string name = pair_name("symmetry", p, qualify);
  guarded(out, index, name, [&] {
    const CCMorphism& u = inst.morphism(p.u).morphism;
    const CCMorphism& v = inst.morphism(p.v).morphism;
    const SymmetryCertificate c = pairing_symmetry(u, v, make_dual(u.source()), make_dual(v.source()));
    return compared(index, name, c.verdict, c.uv.omega, c.vu.omega);
  });
}

void oracle_checks(std::vector<CheckResult>& out, const Instance& inst, std::size_t index, const Pair& p,
                   bool qualify) {
  const std::string name = pair_name("oracle", p, qualify);
  guarded(out, index, name, [&] {
    const CCMorphism& u = inst.morphism(p.u).morphism;
    const CCMorphism& v = inst.morphism(p.v).morphism;
    const OmegaClass categorical = pairing(u, v, make_dual(u.source())).omega;
    const OmegaClass local = local_pairing(u, v);
    return compared(index, name, same_class(categorical, local, "pairing"), categorical, local);
  });
}

void basechange_checks(std::vector<CheckResult>& out, const Instance& inst, std::size_t index, const Pair& p,
                       bool qualify) {
  if (!inst.base_change) return;
  const BaseChange bc(*inst.base_change);
  const std::string name = pair_name("basechange", p, qualify);
  guarded(out, index, name, [&] {
    const CCMorphism& u = inst.morphism(p.u).morphism;
    const CCMorphism& v = inst.morphism(p.v).morphism;
    const BaseChangeCertificate c = functor_preserves(bc, make_dual(u.source()), u, v);
    return compared(index, name, c.verdict, c.pulled_pairing, c.pairing_of_pulled);
  });
  if (inst.lv && p.u == inst.lv->u && p.v == inst.lv->v) {
    guarded(out, index, "basechange:square", [&] {
      const LVDiagram d = inst.lv_diagram();
      Verdict v = pull_push_square(bc, d.c_square(), d.u);
      if (v) v = pull_push_square(bc, d.d_square(), d.v);
      return from_verdict(index, "basechange:square", v);
    });
  }
}

json class_json(const ClassDump& c) {
  json values = json::object();
  for (std::size_t k = 0; k < c.carrier.size(); ++k) values[c.carrier[k]] = c.values[k];
  return json{{"carrier", c.carrier}, {"values", std::move(values)}};
}

ClassDump class_from(const json& j) {
  ClassDump c;
  c.carrier = j.at("carrier").get<std::vector<std::string>>();
  for (auto& label : c.carrier) c.values.push_back(j.at("values").at(label).get<Scalar>());
  return c;
}

std::string class_text(const ClassDump& c) {
  std::string out = "{";
  for (std::size_t k = 0; k < c.carrier.size(); ++k)
    out += (k ? ", " : "") + c.carrier[k] + ": " + std::to_string(c.values[k]);
  return out + "}";
}

void sort_checks(std::vector<CheckResult>& checks) {
  std::stable_sort(checks.begin(), checks.end(), [](const CheckResult& a, const CheckResult& b) {
    return a.instance != b.instance ? a.instance < b.instance : a.name < b.name;
  });
}

}  // namespace

ClassDump ClassDump::of(const OmegaClass& c) { return ClassDump{c.carrier->labels(), c.values}; }

std::size_t Report::failed() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](auto& c) { return !c.pass; }));
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"lv", "global", "triangle", "symmetry", "basechange", "oracle", "all"};
  return names;
}

bool known_suite(const std::string& name) {
  const auto& n = suite_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

GenParams instance_params(const SuiteFlags& flags, std::size_t index) {
  GenParams p = flags.params;
  p.modulus = flags.modulus ? *flags.modulus : (index % 2 == 0 ? 0 : 7);
  if (flags.suite == "global") p.base_points = 1;
  return p;
}

std::vector<CheckResult> run_checks(const std::string& suite, const Instance& inst, std::size_t index) {
  std::vector<CheckResult> out;
  const bool all = suite == "all";
  const auto pairs = opposite_pairs(inst);
  const bool qualify = pairs.size() > 1;
  if (all || suite == "lv") lv_checks(out, inst, index);
  if (all || suite == "triangle") triangle_checks(out, inst, index);
  for (auto& p : pairs) {
    if (all || suite == "global") global_checks(out, inst, index, p, qualify);
    if (all || suite == "symmetry") symmetry_checks(out, inst, index, p, qualify);
    if (all || suite == "oracle") oracle_checks(out, inst, index, p, qualify);
    if (all || suite == "basechange") basechange_checks(out, inst, index, p, qualify);
  }
  sort_checks(out);
  return out;
}

Report run_suite(const SuiteFlags& flags) {
  if (!known_suite(flags.suite)) throw Error("unknown suite '" + flags.suite + "'");
  check_params(instance_params(flags, 0));
  Report r;
  r.suite = flags.suite;
  r.seed = flags.seed;
  r.count = flags.count;
  r.params = flags.params;
  r.modulus = flags.modulus;
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::vector<CheckResult>> per(flags.count);
  auto one = [&](std::size_t i) {
    try {
      const Instance inst = generate(instance_seed(flags.seed, i), instance_params(flags, i));
      per[i] = run_checks(flags.suite, inst, i);
    } catch (const std::exception& e) {
      per[i] = {from_verdict(i, "generate", Verdict::fail(std::string("error: ") + e.what()))};
    }
  };
  if (flags.serial) {
    for (std::size_t i = 0; i < flags.count; ++i) one(i);
  } else {
    const long n = static_cast<long>(flags.count);
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) one(static_cast<std::size_t>(i));
  }
  for (auto& c : per) r.checks.insert(r.checks.end(), std::make_move_iterator(c.begin()), std::make_move_iterator(c.end()));
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

Report check_file(const Instance& inst) {
  Report r;
  r.suite = "all";
  r.count = 1;
  r.modulus = inst.ring.modulus();
  const auto t0 = std::chrono::steady_clock::now();
  r.checks = run_checks("all", inst, 0);
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::string emit_report(const Report& r, const std::string& format) {
  if (format == "json") {
    json checks = json::array();
    for (auto& c : r.checks) {
      json e{{"instance", c.instance}, {"check", c.name}, {"status", c.pass ? "pass" : "fail"}};
      if (!c.detail.empty()) e["detail"] = c.detail;
      if (c.lhs) e["lhs"] = class_json(*c.lhs);
      if (c.rhs) e["rhs"] = class_json(*c.rhs);
      checks.push_back(std::move(e));
    }
    json params{{"max_set", r.params.max_set},
                {"max_rank", r.params.max_rank},
                {"deg_min", r.params.deg_min},
                {"deg_max", r.params.deg_max}};
    if (r.modulus)
      params["modulus"] = *r.modulus;
    else
      params["modulus"] = "alternating";
    json j{{"suite", r.suite},
           {"seed", r.seed},
           {"count", r.count},
           {"params", std::move(params)},
           {"status", r.passed() ? "pass" : "fail"},
           {"passed", r.checks.size() - r.failed()},
           {"failed", r.failed()},
           {"checks", std::move(checks)},
           {"elapsed_ms", r.elapsed_ms}};
    return j.dump() + "\n";
  }
  if (format != "text") throw Error("unknown format '" + format + "'");
  std::ostringstream os;
  os << "suite " << r.suite << "  seed " << r.seed << "  count " << r.count << "\n";
  for (auto& c : r.checks) {
    os << "  [" << c.instance << "] " << c.name << ": " << (c.pass ? "pass" : "FAIL");
    if (!c.detail.empty()) os << "  " << c.detail;
    os << "\n";
    if (c.lhs) os << "      lhs " << class_text(*c.lhs) << "\n";
    if (c.rhs) os << "      rhs " << class_text(*c.rhs) << "\n";
  }
  char ms[32];
  std::snprintf(ms, sizeof ms, "%.1f", r.elapsed_ms);
  os << (r.checks.size() - r.failed()) << " passed, " << r.failed() << " failed (" << ms << " ms)\n";
  return os.str();
}

Report parse_report(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("/", e.what());
  }
  try {
    Report r;
    r.suite = j.at("suite").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.count = j.at("count").get<std::size_t>();
    const json& p = j.at("params");
    r.params.max_set = p.at("max_set").get<std::size_t>();
    r.params.max_rank = p.at("max_rank").get<std::size_t>();
    r.params.deg_min = p.at("deg_min").get<Degree>();
    r.params.deg_max = p.at("deg_max").get<Degree>();
    if (p.at("modulus").is_number_integer()) r.modulus = p["modulus"].get<std::int64_t>();
    for (auto& c : j.at("checks")) {
      CheckResult out;
      out.instance = c.at("instance").get<std::size_t>();
      out.name = c.at("check").get<std::string>();
      out.pass = c.at("status").get<std::string>() == "pass";
      if (c.contains("detail")) out.detail = c["detail"].get<std::string>();
      if (c.contains("lhs")) out.lhs = class_from(c["lhs"]);
      if (c.contains("rhs")) out.rhs = class_from(c["rhs"]);
      r.checks.push_back(std::move(out));
    }
    r.elapsed_ms = j.at("elapsed_ms").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw ParseError("/", std::string("not a report: ") + e.what());
  }
}

std::string emit_traces(const Instance& inst) {
  json traces = json::object(), pairings = json::object(), classes = json::object();
  for (auto& [name, s] : inst.sheaves)
    classes[name] = class_json(ClassDump::of(characteristic_class(make_dual(CCObject{s.sheaf}))));
  for (auto& [name, m] : inst.morphisms)
    if (m.source == m.target) traces[name] = class_json(ClassDump::of(trace(m.morphism, make_dual(m.morphism.source()))));
  for (auto& p : opposite_pairs(inst)) {
    const CCMorphism& u = inst.morphism(p.u).morphism;
    const CCMorphism& v = inst.morphism(p.v).morphism;
    pairings[p.u + "," + p.v] = class_json(ClassDump::of(pairing(u, v, make_dual(u.source())).omega));
  }
  json j{{"characteristic_classes", std::move(classes)}, {"traces", std::move(traces)}, {"pairings", std::move(pairings)}};
  return j.dump(2) + "\n";
}

}  // namespace spantrace
