#pragma once

#include <vector>

#include "vcglab/auction.hpp"
#include "vcglab/efficiency.hpp"
#include "vcglab/model.hpp"
#include "vcglab/strategy.hpp"

namespace vcg {

/// Constant-maximum sample: n players, n+2 alternatives a1..a(n+2), player i
/// maximal at a_i, A' = {a1..a(n+1)}. Grids hold three valuations per player
/// (a Z probe at the maximum plus two generic tables) with values in
/// {0, 1/2, 1, 2}; every valuation has a zero somewhere on A', so zero-offset
/// near-truth profiles never tie an off-A' alternative into the choice.
GameInstance constant_max_instance(std::size_t n);
/// The A' used above: indices 0..n.
std::vector<std::size_t> constant_max_aprime(std::size_t n);

/// Near-truth profile over constant_max_aprime(n), the per-player constant
/// offsets cycling through 0, +1/2, -1/2.
StrategyProfile constant_max_near_truth_profile(std::size_t n);

/// The +10-on-maxima construction: report v(a_k) + 10 on every maximum and
/// fixed values in [0, 9] elsewhere, on the constant-maximum instance.
GeneratedGame gen_maxima_plus_ten(std::size_t n);

/// The classic two-good Vickrey split: agent 1 reports the grand bundle and
/// good A truthfully (zero on B), agent 2 mirrors on B; monotone
/// no-externality valuation grids over the 9 allocations.
struct Vickrey2Output {
  AuctionSpace space;
  GameInstance instance;
  StrategyProfile profile;
  std::vector<std::vector<BundleTable>> bundle_tables;  // per player
  std::vector<std::vector<Bundle>> reported;            // per player
};

Vickrey2Output gen_vickrey2();

}  // namespace vcg
