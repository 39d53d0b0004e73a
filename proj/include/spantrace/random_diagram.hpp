#pragma once

#include <cstdint>

#include "spantrace/dualtrace.hpp"
#include "spantrace/generate.hpp"

namespace spantrace {

/// Fuzz envelope. max_set bounds every set and apex; max_rank bounds each
/// degree of every stalk.
struct GenParams {
  std::size_t max_set = 4;
  std::size_t max_rank = 3;
  Degree deg_min = -2;
  Degree deg_max = 2;
  std::int64_t modulus = 0;
  std::size_t base_points = 0;  // 0: one or two, drawn
};

/// Throws Error on an empty degree range, max_set = 0 or a modulus < 0.
void check_params(const GenParams& p);

/// Random commuting diagram built bottom-up: base, lower sets X', Y', lower
/// spans C', D' (D' partly mirroring C'), then X, Y, C, D lifted over them.
/// About two thirds of D is placed opposite some element of C so the fixed loci
/// are rarely empty.
LVDiagram random_lv_diagram(Rng& rng, const GenParams& params);

/// g : S -> T with S modelled as a set over T, |S| in [0, max_points].
OverMap random_base_change(Rng& rng, const BaseRef& target, std::size_t max_points);

}  // namespace spantrace
