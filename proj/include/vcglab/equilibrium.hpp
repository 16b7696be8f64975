#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vcglab/model.hpp"
#include "vcglab/parallelogram.hpp"
#include "vcglab/strategy.hpp"

namespace vcg {

/// A replayable deviation certificate: the subset game, the grid valuations,
/// the announcements they induce, the tie-break choice that exposes the gap,
/// and the strictly better alternative.
struct Witness {
  std::vector<std::size_t> subset;        // player indices, ascending
  std::vector<std::size_t> grid_choice;   // per subset member
  ValuationProfile valuations;            // aligned with subset
  AnnouncementProfile announcements;      // aligned with subset
  std::size_t chosen = 0;                 // welfare maximizer that fails
  std::size_t deviator = 0;               // global player index
  std::size_t better = 0;                 // alternative the deviator forces
  Rat gap;                                // strictly positive utility gain
};

struct EquilibriumVerdict {
  bool pass = true;
  std::optional<Witness> witness;
  unsigned long long cells_total = 0;  // (subset, valuation profile) cells
  // Canonical enumeration index of the failing cell; deterministic and
  // independent of the worker count.
  std::optional<unsigned long long> failure_ordinal;
};

struct CheckOptions {
  unsigned jobs = 1;
};

/// max_a' [v_i(a') + sum_j b_j(a')] - [v_i(a) + sum_j b_j(a)] over the
/// opponents' announcements; zero iff a is optimal for the deviator.
Rat best_response_gap(const Valuation& v_i,
                      const AnnouncementProfile& opponents, std::size_t a);

/// Exact decision over every non-empty player subset, every grid valuation
/// profile, and every welfare-maximizing tie-break of the announced profile.
/// Deviations are not enumerated: a profile survives iff every chosen
/// alternative already maximizes v_i + sum_{j != i} b_j for each participant.
/// FAIL returns the first witness in (subset size, subset, grid index) order.
EquilibriumVerdict is_expost_equilibrium(const GameInstance& instance,
                                         const StrategyProfile& profile,
                                         const CheckOptions& options = {});

/// Recomputes the witness gap from scratch; true iff it reproduces exactly.
bool replay_witness(const GameInstance& instance,
                    const StrategyProfile& profile, const Witness& witness);

/// Randomized agreement check between the gap characterization and literal
/// deviation play: samples explicit announcement deviations and confirms
/// none improves on a PASS (and that the witness deviation improves on a
/// FAIL). The seed never influences the verdict itself.
bool deviation_cross_check(const GameInstance& instance,
                           const StrategyProfile& profile,
                           const EquilibriumVerdict& verdict,
                           std::uint64_t seed, int samples = 100);

/// Per-(player, valuation) multiset of offsets b_i(v)(a_k) - v(a_k) across
/// every player's maximum, with a CONSTANT flag per entry.
struct NearTruthReport {
  struct Entry {
    std::size_t player;
    std::size_t valuation_index;
    std::vector<Rat> offsets;  // one per maximum, in player order
    bool constant;
  };
  std::vector<Entry> entries;
  bool all_constant = true;
};

NearTruthReport verify_near_truth_on_maxima(const GameInstance& instance,
                                            const StrategyProfile& profile);

/// Samples s -> b(Z^{(a,s)})(a) - b(Z^{(a,s)})(a') for s over a positive
/// grid. The Z probes must lie inside the strategy's intended family; that
/// is the caller's contract.
SampledFunction extract_g(const Strategy& strategy,
                          std::size_t num_alternatives, std::size_t a,
                          std::size_t a_prime, std::span<const Rat> s_grid);

/// Mean-value-exclusion check over two extracted tables.
MveResult check_mve_pair(const SampledFunction& g1, const SampledFunction& g2);

/// Grid-level verdicts for the structural bid properties every equilibrium
/// carries: strict-max-bid applies always; equal-values-equal-bids and
/// z-spread-full-family presume the full non-negative family; the maxima
/// checks (foreign-maxima-equal, maxima-bids-dominate, z-spread-own-maximum)
/// presume constant-maximum families. Entries are reported even when a
/// PASSing restricted-family profile legitimately violates a full-family
/// property.
struct LemmaReport {
  enum class Status { Pass, Fail, NotApplicable, MissingProbe };
  struct Item {
    std::string lemma;
    Status status;
    std::string detail;
  };
  std::vector<Item> items;

  const Item* find(std::string_view lemma) const;
  bool passes(std::string_view lemma) const;
};

LemmaReport check_structural_lemmas(const GameInstance& instance,
                                    const StrategyProfile& profile);

}  // namespace vcg
