#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vcglab/model.hpp"
#include "vcglab/strategy.hpp"

namespace vcg {

struct GoodsSet {
  std::vector<std::string> labels;

  explicit GoodsSet(std::vector<std::string> l);
  std::size_t size() const { return labels.size(); }
};

/// Subset of goods as a bitmask over the goods order.
using Bundle = std::uint32_t;

inline constexpr std::size_t kDefaultAllocationCap = 100000;

/// The full allocation space: every assignment of each good to a player or
/// the seller, as an ordered alternative set. Alternative k encodes the
/// assignment in mixed radix base (players + 1), good 0 least significant,
/// digit value == num_players meaning the seller.
class AuctionSpace {
 public:
  const GoodsSet& goods() const { return goods_; }
  std::size_t num_players() const { return num_players_; }
  std::size_t num_goods() const { return goods_.size(); }
  const AlternativeSet& alternatives() const { return alternatives_; }

  Bundle bundle_of(std::size_t player, std::size_t alt_index) const;
  /// The allocation granting exactly `b` to `player`, the rest to the seller.
  std::size_t exclusive_allocation(std::size_t player, Bundle b) const;
  std::size_t seller_only_allocation() const {
    return exclusive_allocation(0, 0);
  }
  Bundle grand_bundle() const { return (Bundle{1} << num_goods()) - 1; }

  std::string bundle_label(Bundle b) const;
  /// Inverse of bundle_label; throws std::invalid_argument on unknown goods.
  Bundle parse_bundle(std::string_view text) const;
  /// "(ab,-,c)" style: one bundle per player, unlisted goods to the seller.
  std::string allocation_label(std::size_t alt_index) const;

 private:
  friend AuctionSpace enumerate_allocations(GoodsSet goods,
                                            std::size_t players,
                                            std::size_t cap);
  AuctionSpace(GoodsSet goods, std::size_t players, AlternativeSet alts)
      : goods_(std::move(goods)),
        num_players_(players),
        alternatives_(std::move(alts)) {}

  GoodsSet goods_;
  std::size_t num_players_;
  AlternativeSet alternatives_;
};

/// All (players + 1)^goods allocations, deterministically ordered. Throws
/// std::length_error when the count exceeds the cap; never truncates.
AuctionSpace enumerate_allocations(GoodsSet goods, std::size_t players,
                                   std::size_t cap = kDefaultAllocationCap);

/// Total map bundle -> value, indexed by bitmask; size must be 2^goods.
using BundleTable = std::vector<Rat>;

/// No-externality valuation over allocations: each allocation is worth the
/// table value of the agent's received bundle.
Valuation valuation_from_bundles(const AuctionSpace& space, std::size_t player,
                                 const BundleTable& table);

bool is_monotone(const BundleTable& table, std::size_t num_goods);

struct BundleFamily {
  std::vector<Bundle> members;  // sorted, unique

  explicit BundleFamily(std::vector<Bundle> m);
  bool contains(Bundle b) const;
  std::size_t size() const { return members.size(); }
};

struct QuasiFieldResult {
  enum class Violation { None, Empty, Complement, DisjointUnion };
  bool ok = true;
  Violation violation = Violation::None;
  Bundle first = 0, second = 0;  // the violating member(s)
};

/// Non-empty, closed under complements, closed under disjoint unions.
QuasiFieldResult is_quasi_field(const BundleFamily& family,
                                std::size_t num_goods);

/// All unions of parts of a partition of the goods; always a quasi-field.
BundleFamily family_from_partition(const std::vector<Bundle>& parts,
                                   std::size_t num_goods);

/// Bid the true value on every field bundle; on any other bundle, the value
/// of the largest field member contained in it (our floor extension: maximal
/// cardinality, deterministic tie-break). Throws when the family is not a
/// quasi-field. The induced A' over allocations is exposed on the strategy.
Strategy bundling_strategy(const AuctionSpace& space, std::size_t player,
                           const BundleFamily& field);

/// Like bundling_strategy but for an arbitrary reported set: true value on
/// reported bundles, the empty-bundle value elsewhere. No closure demanded
/// (the asymmetric Vickrey split strategies live here).
Strategy bundle_report_strategy(const AuctionSpace& space, std::size_t player,
                                const std::vector<Bundle>& reported);

/// The split-subset reconciliation example: 3 goods, 3 players, a six-element
/// alternative subset S' holding all three maximizers, and a near-truth
/// profile over it on grids that allow externalities.
struct SprimeOutput {
  AuctionSpace space;
  GameInstance instance;
  StrategyProfile profile;
  std::vector<std::size_t> sprime;  // alternative indices, sorted
};

SprimeOutput gen_sprime();

/// Under monotone no-externality valuations a bid inside S' pins the bid on
/// every allocation giving the player the same bundle; this lists those
/// forced allocations outside S'.
struct ExtensionReport {
  struct Entry {
    std::size_t player;
    Bundle bundle;
    std::vector<std::size_t> inside;   // S' members with this bundle
    std::vector<std::size_t> outside;  // forced allocations off S'
  };
  std::vector<Entry> entries;
  std::size_t forced_total = 0;
};

ExtensionReport sprime_extension_report(const SprimeOutput& s);

}  // namespace vcg
