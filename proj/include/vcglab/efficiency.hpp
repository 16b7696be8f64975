#pragma once

#include <stdexcept>
#include <vector>

#include "vcglab/equilibrium.hpp"
#include "vcglab/model.hpp"
#include "vcglab/strategy.hpp"

namespace vcg {

/// An instance together with the equilibrium profile the generator pairs
/// with it.
struct GeneratedGame {
  GameInstance instance;
  StrategyProfile profile;
};

struct RatioDetail {
  std::size_t dominant_alternative = 0;
  std::size_t equilibrium_alternative = 0;
  Rat dominant_welfare;
  Rat equilibrium_welfare;
  Rat ratio;
};

/// True-welfare ratio between the dominant-strategy outcome and the
/// equilibrium outcome at one valuation profile. Ties resolve pessimistically
/// (max welfare over dominant choices, min over equilibrium choices). Throws
/// std::domain_error when the equilibrium welfare is zero.
RatioDetail efficiency_ratio_detail(const GameInstance& instance,
                                    const StrategyProfile& truth_profile,
                                    const StrategyProfile& eq_profile,
                                    const ValuationProfile& v);

Rat efficiency_ratio(const GameInstance& instance,
                     const StrategyProfile& truth_profile,
                     const StrategyProfile& eq_profile,
                     const ValuationProfile& v);

struct WorstCaseRatio {
  Rat ratio;
  std::vector<std::size_t> grid_choice;  // per player
  ValuationProfile profile;
  RatioDetail detail;
};

/// Exhaustive maximum of the ratio over the full grid product, dominant side
/// played truthfully. First attaining profile in lexicographic grid order.
WorstCaseRatio worst_case_ratio(const GameInstance& instance,
                                const StrategyProfile& eq_profile);

/// sup over grid profiles v and alternatives m (with positive total welfare)
/// of N * max_i v_i(m) / sum_i v_i(m). The family is homogeneous of every
/// degree strictly above this value; zero-welfare alternatives are skipped.
Rat homogeneity_degree(const GameInstance& instance);

/// max over grid profiles and alternatives of |{i : v_i(m) > 0}|.
int compatibility_degree(const GameInstance& instance);

struct EquilibriumPreconditionError : std::runtime_error {
  explicit EquilibriumPreconditionError(Witness w)
      : std::runtime_error(
            "profile is not an ex-post equilibrium on this instance"),
        witness(std::move(w)) {}
  Witness witness;
};

struct EfficiencyReport {
  std::size_t dominant_alternative = 0;
  std::size_t equilibrium_alternative = 0;
  Rat dominant_welfare;
  Rat equilibrium_welfare;
  Rat ratio;
  enum class Bound { PlayerCount, Homogeneous, Compatible } bound =
      Bound::PlayerCount;
  Rat bound_value;
  bool satisfied = false;
  std::vector<std::size_t> witness_choice;
  Rat homogeneity;
  int compatibility = 0;
};

/// Runs the equilibrium precondition (throwing EquilibriumPreconditionError
/// with the witness if it fails), computes the worst-case ratio, and checks
/// it against the tightest of the player-count, homogeneity, and
/// compatibility bounds. Requires declared maxima (the bounds live on
/// constant-maximum families).
EfficiencyReport bound_check(const GameInstance& instance,
                             const StrategyProfile& eq_profile,
                             const CheckOptions& options = {});

/// Example 5: N agents, N goods; value 1 for any bundle containing your good,
/// 1+eps for the grand bundle; everyone bids zero off the grand-bundle
/// allocations. Exact ratio n/(1+eps).
GeneratedGame gen_example5(std::size_t n, const Rat& eps);

/// Example 6: M alternatives, near-truth over everything but m0; player i is
/// worth 1+i*eps at its own optimum and 1 at m0. Equilibrium picks m_n while
/// m0 carries welfare n.
GeneratedGame gen_example6(std::size_t num_alternatives, std::size_t n,
                           const Rat& eps);

}  // namespace vcg
