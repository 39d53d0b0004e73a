#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spantrace/basefunc.hpp"
#include "spantrace/dualtrace.hpp"
#include "spantrace/random_diagram.hpp"

namespace spantrace {

template <class T>
using Named = std::vector<std::pair<std::string, T>>;

struct NamedMap {
  OverMap map;
  std::string from, to;
};

struct NamedSpan {
  Span span;
  std::string apex, from, to;
};

struct NamedSheaf {
  Sheaf sheaf;
  std::string carrier;
};

struct NamedMorphism {
  CCMorphism morphism;
  std::string source, target, span;
};

/// Names of the pieces of a diagram
///   X <- C -> Y,  Y <- D -> X  over  X' <- C' -> Y',  Y' <- D' -> X'.
/// u_lower, v_lower (optional) name stated pushforwards over the lower row.
struct LVNames {
  std::string f, g, p, q, c_lower, d_lower, u, v;
  std::string u_lower, v_lower;
};

/// Everything in one file. Entries keep file order so emit(parse(s)) == s
/// for files written by emit.
struct Instance {
  Ring ring;
  BaseRef base;
  Named<SetRef> sets;
  Named<NamedMap> maps;
  Named<NamedSpan> spans;
  Named<NamedSheaf> sheaves;
  Named<NamedMorphism> morphisms;
  std::optional<LVNames> lv;
  std::optional<OverMap> base_change;  // S -> base_set(base)

  const SetRef& set(const std::string& name) const;
  const NamedMap& map(const std::string& name) const;
  const NamedSpan& span(const std::string& name) const;
  const NamedSheaf& sheaf(const std::string& name) const;
  const NamedMorphism& morphism(const std::string& name) const;

  LVDiagram lv_diagram() const;
};

/// Throws ParseError with a JSON-pointer location on malformed or
/// inconsistent input.
Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);
/// Two-space indented JSON, newline terminated.
std::string emit_instance(const Instance& inst);

/// Diagram plus a base change, named X, Y, X', Y', C, D, C', D', f, g, p, q,
/// c, d, c', d', L, M, u, v.
Instance instance_from_diagram(const LVDiagram& d, const std::optional<OverMap>& base_change);

/// Seeded instance: an LV diagram and a base change with at most max_set points.
Instance generate(std::uint64_t seed, const GenParams& params);

/// Per-instance seed of a fuzz run.
std::uint64_t instance_seed(std::uint64_t seed, std::size_t index);

}  // namespace spantrace
