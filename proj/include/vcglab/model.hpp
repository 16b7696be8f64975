#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vcglab/rational.hpp"

namespace vcg {

/// Ordered finite set of social alternative labels. Non-empty, no duplicates.
class AlternativeSet {
 public:
  explicit AlternativeSet(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<std::size_t> find(std::string_view label) const;
  /// Throws std::out_of_range on unknown labels.
  std::size_t index_of(std::string_view label) const;

  friend bool operator==(const AlternativeSet&, const AlternativeSet&) = default;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Total map alternatives -> exact value. The non_negative flag marks members
/// of R+^A families and is enforced at construction.
struct Valuation {
  std::vector<Rat> values;
  bool non_negative = false;

  Valuation() = default;
  explicit Valuation(std::vector<Rat> v, bool require_non_negative = false);

  const Rat& at(std::size_t a) const { return values.at(a); }
  std::size_t size() const { return values.size(); }

  friend bool operator==(const Valuation& a, const Valuation& b) {
    return a.values == b.values;
  }
};

/// An announced valuation. Negative entries are allowed regardless of the
/// true valuation's sign constraints.
struct Announcement {
  std::vector<Rat> values;

  const Rat& at(std::size_t a) const { return values.at(a); }
  std::size_t size() const { return values.size(); }

  friend bool operator==(const Announcement&, const Announcement&) = default;
};

using ValuationProfile = std::vector<Valuation>;
using AnnouncementProfile = std::vector<Announcement>;

/// The valuation worth `height` at `peak` and zero elsewhere.
struct ZValuation {
  std::size_t peak = 0;
  Rat height;
};

Valuation make_z_valuation(std::size_t num_alternatives, std::size_t peak,
                           const Rat& height);
/// Recognizes Z-shaped valuations (one positive entry, zeros elsewhere).
std::optional<ZValuation> as_z_valuation(const Valuation& v);

/// Either one concrete priority order (a permutation of the alternatives) or
/// a marker requesting quantification over every tie-break.
class TieBreakPolicy {
 public:
  static TieBreakPolicy priority(std::vector<std::size_t> order);
  static TieBreakPolicy all_orders() { return TieBreakPolicy{}; }

  bool is_all_orders() const { return order_.empty(); }
  const std::vector<std::size_t>& order() const;

 private:
  TieBreakPolicy() = default;
  std::vector<std::size_t> order_;  // empty == all orders
};

/// Per-player charge h_i(b_{-i}). Must not depend on the player's own
/// announcement; utility differences between own strategies are invariant
/// to it.
class HSpec {
 public:
  using Fn = std::function<Rat(const AnnouncementProfile&, std::size_t self)>;

  static HSpec zero() { return HSpec(Kind::Zero, {}, nullptr); }
  static HSpec constant(Rat c) { return HSpec(Kind::Constant, c, nullptr); }
  /// Clarke pivot: max_a of the opponents' announced welfare.
  static HSpec clarke() { return HSpec(Kind::Clarke, {}, nullptr); }
  static HSpec custom(Fn fn) { return HSpec(Kind::Custom, {}, std::move(fn)); }

  Rat charge(const AnnouncementProfile& announced, std::size_t self) const;

  enum class Kind { Zero, Constant, Clarke, Custom };
  Kind kind() const { return kind_; }
  const Rat& constant_value() const { return constant_; }

 private:
  HSpec(Kind k, Rat c, Fn fn) : kind_(k), constant_(c), fn_(std::move(fn)) {}
  Kind kind_;
  Rat constant_;
  Fn fn_;
};

/// A finite VCG game sample: alternatives, players, one finite valuation grid
/// per player, optional per-player maximum alternative (constant-maximum
/// families), and the h charges.
struct GameInstance {
  AlternativeSet alternatives;
  std::vector<std::string> player_names;
  std::vector<std::vector<Valuation>> family_grids;
  std::vector<HSpec> h;                               // defaults to zero
  std::vector<std::optional<std::size_t>> maxima;     // a_i per player, if any

  std::size_t num_players() const { return player_names.size(); }

  /// Enforces the type invariants: grids sized to the alternative set, and
  /// when maxima[i] is set, every grid valuation is non-negative with
  /// v(a_i) >= v(a') for all a'. Throws std::invalid_argument.
  void validate() const;
};

GameInstance make_instance(AlternativeSet alternatives,
                           std::vector<std::string> player_names,
                           std::vector<std::vector<Valuation>> family_grids,
                           std::vector<std::optional<std::size_t>> maxima = {});

// --- welfare and VCG utility ---------------------------------------------

Rat social_welfare(const AnnouncementProfile& profile, std::size_t a);
Rat social_welfare(const ValuationProfile& profile, std::size_t a);
Rat social_welfare(const AnnouncementProfile& profile,
                   const AlternativeSet& alternatives, std::string_view label);

/// All alternatives attaining the exact maximum announced welfare.
std::vector<std::size_t> welfare_maximizers(const AnnouncementProfile& profile);

/// The priority-first element of welfare_maximizers. Requires a concrete
/// priority order.
std::size_t choose(const TieBreakPolicy& policy,
                   const AnnouncementProfile& profile);

/// U_i = v_i(chosen) + sum_{j != i} b_j(chosen) - h_i(b_{-i}).
Rat utility(std::size_t i, const Valuation& true_valuation,
            const AnnouncementProfile& announced, const HSpec& h_i,
            const TieBreakPolicy& policy);

}  // namespace vcg
