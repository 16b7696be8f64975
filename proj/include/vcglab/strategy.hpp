#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "vcglab/model.hpp"

namespace vcg {

/// The paper's per-valuation shift f_i(v_i). Constant rules serialize;
/// Custom exists for in-memory property tests.
struct OffsetRule {
  enum class Kind { Zero, Constant, Custom };
  Kind kind = Kind::Zero;
  Rat constant;
  std::function<Rat(const Valuation&)> fn;

  static OffsetRule zero() { return {}; }
  static OffsetRule of(Rat c) {
    return {c.is_zero() ? Kind::Zero : Kind::Constant, c, nullptr};
  }
  static OffsetRule custom(std::function<Rat(const Valuation&)> f) {
    return {Kind::Custom, {}, std::move(f)};
  }
  Rat eval(const Valuation& v) const {
    switch (kind) {
      case Kind::Zero: return Rat(0);
      case Kind::Constant: return constant;
      case Kind::Custom: return fn(v);
    }
    throw std::logic_error("unreachable");
  }
};

/// Off-A' constant: either the largest admissible one (min over A' of the
/// announcement) or an explicit constant, validated against that min.
struct FloorRule {
  bool use_min = true;
  Rat constant;

  static FloorRule min_over_subset() { return {}; }
  static FloorRule of(Rat c) { return {false, c}; }
};

/// A rule mapping a true valuation to an announcement.
///
/// Kinds: Truth, ShiftedTruth (v + f(v) everywhere), NearlyTruth (v + f(v)
/// on A', floor constant elsewhere), Scaling (factor * v), Table (explicit
/// data, used for counterexample witnesses), Bundling (announcement read
/// through a per-alternative remap, built by the auctions module), and
/// MaximaShift (v + shift on the listed maxima, fixed per-alternative values
/// elsewhere — the "+10 / [0,9]" construction).
struct Strategy {
  enum class Kind {
    Truth,
    ShiftedTruth,
    NearlyTruth,
    Scaling,
    Table,
    Bundling,
    MaximaShift,
  };

  Kind kind = Kind::Truth;
  OffsetRule offset;                 // ShiftedTruth, NearlyTruth
  std::vector<std::size_t> subset;   // NearlyTruth A'; Bundling induced A'
  FloorRule floor;                   // NearlyTruth
  Rat factor;                        // Scaling
  std::vector<std::pair<std::vector<Rat>, std::vector<Rat>>> table;
  std::vector<std::size_t> remap;    // Bundling: announce v(remap[a]) at a
  std::size_t reported_count = 0;    // Bundling: numbers transmitted
  std::vector<std::size_t> maxima;   // MaximaShift
  Rat shift;                         // MaximaShift
  std::vector<Rat> off_values;       // MaximaShift, indexed by alternative

  static Strategy truth();
  static Strategy shifted_truth(OffsetRule f);
  static Strategy nearly_truth(std::vector<std::size_t> subset, OffsetRule f,
                               FloorRule floor = FloorRule::min_over_subset());
  static Strategy scaling(Rat factor);
  static Strategy table_of(
      std::vector<std::pair<std::vector<Rat>, std::vector<Rat>>> rows);
  static Strategy bundle_remap(std::vector<std::size_t> remap,
                               std::vector<std::size_t> induced_subset,
                               std::size_t reported_count);
  static Strategy maxima_shift(std::vector<std::size_t> maxima, Rat shift,
                               std::vector<Rat> off_values);
};

using StrategyProfile = std::vector<Strategy>;

/// Evaluates the strategy at a valuation. Throws std::invalid_argument when
/// an explicit floor exceeds the min over A' of the announcement, and
/// std::out_of_range when a Table strategy has no row for the valuation.
Announcement apply(const Strategy& s, const Valuation& v);

/// Announce v(a_k) + 10 on every listed maximum; elsewhere the fixed
/// off_values entry, each required to lie in [0, 9].
Strategy make_maxima_plus_ten(std::vector<std::size_t> maxima,
                              std::vector<Rat> off_values);

/// Numbers an agent transmits: |A'|+1 for NearlyTruth, one per reported
/// bundle for Bundling, |A| otherwise.
std::size_t communication_cost(const Strategy& s,
                               std::size_t num_alternatives);

/// Convenience: apply a whole profile to a valuation profile.
AnnouncementProfile apply_profile(const StrategyProfile& profile,
                                  const ValuationProfile& valuations);

}  // namespace vcg
