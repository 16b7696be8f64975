#include "vcglab/auction.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>

namespace vcg {

GoodsSet::GoodsSet(std::vector<std::string> l) : labels(std::move(l)) {
  if (labels.empty()) throw std::invalid_argument("goods set must be non-empty");
  std::set<std::string> seen;
  for (const std::string& g : labels)
    if (!seen.insert(g).second)
      throw std::invalid_argument("duplicate good label '" + g + "'");
  if (labels.size() > 20)
    throw std::invalid_argument("bundle bitmasks support at most 20 goods");
}

namespace {

std::size_t power_capped(std::size_t base, std::size_t exp, std::size_t cap) {
  std::size_t value = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    value *= base;
    if (value > cap) return cap + 1;
  }
  return value;
}

std::size_t digit_of(std::size_t alt_index, std::size_t good,
                     std::size_t num_players) {
  const std::size_t base = num_players + 1;
  for (std::size_t g = 0; g < good; ++g) alt_index /= base;
  return alt_index % base;
}

}  // namespace

Bundle AuctionSpace::bundle_of(std::size_t player,
                               std::size_t alt_index) const {
  Bundle b = 0;
  for (std::size_t g = 0; g < num_goods(); ++g)
    if (digit_of(alt_index, g, num_players_) == player) b |= Bundle{1} << g;
  return b;
}

std::size_t AuctionSpace::exclusive_allocation(std::size_t player,
                                               Bundle b) const {
  const std::size_t base = num_players_ + 1;
  std::size_t index = 0;
  std::size_t weight = 1;
  for (std::size_t g = 0; g < num_goods(); ++g) {
    const std::size_t digit = (b >> g) & 1 ? player : num_players_;
    index += digit * weight;
    weight *= base;
  }
  return index;
}

std::string AuctionSpace::bundle_label(Bundle b) const {
  if (b == 0) return "-";
  std::string label;
  bool multi = false;
  for (const std::string& g : goods_.labels)
    if (g.size() > 1) multi = true;
  for (std::size_t g = 0; g < num_goods(); ++g) {
    if (!((b >> g) & 1)) continue;
    if (multi && !label.empty()) label += '+';
    label += goods_.labels[g];
  }
  return label;
}

Bundle AuctionSpace::parse_bundle(std::string_view text) const {
  if (text == "-") return 0;
  Bundle b = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    bool matched = false;
    for (std::size_t g = 0; g < num_goods(); ++g) {
      const std::string& label = goods_.labels[g];
      if (text.substr(pos, label.size()) == label) {
        if ((b >> g) & 1)
          throw std::invalid_argument("good repeated in bundle '" +
                                      std::string(text) + "'");
        b |= Bundle{1} << g;
        pos += label.size();
        if (pos < text.size() && text[pos] == '+') ++pos;
        matched = true;
        break;
      }
    }
    if (!matched)
      throw std::invalid_argument("unknown good in bundle '" +
                                  std::string(text) + "'");
  }
  return b;
}

std::string AuctionSpace::allocation_label(std::size_t alt_index) const {
  std::string label = "(";
  for (std::size_t p = 0; p < num_players_; ++p) {
    if (p > 0) label += ',';
    label += bundle_label(bundle_of(p, alt_index));
  }
  label += ')';
  return label;
}

AuctionSpace enumerate_allocations(GoodsSet goods, std::size_t players,
                                   std::size_t cap) {
  if (players == 0) throw std::invalid_argument("at least one player required");
  const std::size_t count = power_capped(players + 1, goods.size(), cap);
  if (count > cap)
    throw std::length_error(
        "allocation space (" + std::to_string(players + 1) + "^" +
        std::to_string(goods.size()) + ") exceeds the cap of " +
        std::to_string(cap) + " alternatives");

  // Labels come from the same mixed-radix encoding the space uses, so build
  // them through a placeholder space and swap the real alternative set in.
  AuctionSpace probe(goods, players,
                     AlternativeSet(std::vector<std::string>{"x"}));
  std::vector<std::string> labels;
  labels.reserve(count);
  for (std::size_t k = 0; k < count; ++k)
    labels.push_back(probe.allocation_label(k));
  return AuctionSpace(std::move(probe.goods_), players,
                      AlternativeSet(std::move(labels)));
}

Valuation valuation_from_bundles(const AuctionSpace& space, std::size_t player,
                                 const BundleTable& table) {
  const std::size_t expected = std::size_t{1} << space.num_goods();
  if (table.size() != expected)
    throw std::invalid_argument("bundle table must cover all " +
                                std::to_string(expected) + " bundles");
  std::vector<Rat> values;
  values.reserve(space.alternatives().size());
  bool non_negative = true;
  for (const Rat& x : table)
    if (x.is_negative()) non_negative = false;
  for (std::size_t k = 0; k < space.alternatives().size(); ++k)
    values.push_back(table[space.bundle_of(player, k)]);
  return Valuation(std::move(values), non_negative);
}

bool is_monotone(const BundleTable& table, std::size_t num_goods) {
  const std::size_t expected = std::size_t{1} << num_goods;
  if (table.size() != expected)
    throw std::invalid_argument("bundle table must cover all bundles");
  for (Bundle k = 0; k < expected; ++k)
    for (std::size_t g = 0; g < num_goods; ++g) {
      if ((k >> g) & 1) continue;
      if (table[k | (Bundle{1} << g)] < table[k]) return false;
    }
  return true;
}

BundleFamily::BundleFamily(std::vector<Bundle> m) : members(std::move(m)) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
}

bool BundleFamily::contains(Bundle b) const {
  return std::binary_search(members.begin(), members.end(), b);
}

QuasiFieldResult is_quasi_field(const BundleFamily& family,
                                std::size_t num_goods) {
  QuasiFieldResult result;
  if (family.members.empty()) {
    result.ok = false;
    result.violation = QuasiFieldResult::Violation::Empty;
    return result;
  }
  const Bundle full = (Bundle{1} << num_goods) - 1;
  for (Bundle k : family.members) {
    if (k & ~full)
      throw std::invalid_argument("bundle outside the goods set");
    if (!family.contains(full ^ k)) {
      result.ok = false;
      result.violation = QuasiFieldResult::Violation::Complement;
      result.first = k;
      result.second = full ^ k;
      return result;
    }
  }
  for (Bundle k1 : family.members)
    for (Bundle k2 : family.members) {
      if (k1 & k2) continue;
      if (!family.contains(k1 | k2)) {
        result.ok = false;
        result.violation = QuasiFieldResult::Violation::DisjointUnion;
        result.first = k1;
        result.second = k2;
        return result;
      }
    }
  return result;
}

BundleFamily family_from_partition(const std::vector<Bundle>& parts,
                                   std::size_t num_goods) {
  const Bundle full = (Bundle{1} << num_goods) - 1;
  Bundle covered = 0;
  for (Bundle p : parts) {
    if (p == 0) throw std::invalid_argument("empty partition part");
    if (covered & p) throw std::invalid_argument("partition parts overlap");
    covered |= p;
  }
  if (covered != full)
    throw std::invalid_argument("partition does not cover the goods");
  std::vector<Bundle> members;
  const std::size_t subsets = std::size_t{1} << parts.size();
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    Bundle u = 0;
    for (std::size_t p = 0; p < parts.size(); ++p)
      if ((mask >> p) & 1) u |= parts[p];
    members.push_back(u);
  }
  return BundleFamily(std::move(members));
}

namespace {

Strategy remap_strategy(const AuctionSpace& space, std::size_t player,
                        const std::vector<Bundle>& truthful,
                        const BundleFamily* floor_field,
                        std::size_t reported_count) {
  const std::size_t n_alts = space.alternatives().size();
  std::vector<std::size_t> remap(n_alts);
  std::vector<std::size_t> induced;
  BundleFamily reported(truthful);
  for (std::size_t k = 0; k < n_alts; ++k) {
    const Bundle b = space.bundle_of(player, k);
    if (reported.contains(b)) {
      remap[k] = space.exclusive_allocation(player, b);
      induced.push_back(k);
      continue;
    }
    Bundle best = 0;
    if (floor_field) {
      // Largest field member contained in the received bundle; maximal
      // cardinality, first in sorted order on ties.
      int best_size = -1;
      for (Bundle member : floor_field->members) {
        if ((member & ~b) != 0) continue;
        const int size = std::popcount(member);
        if (size > best_size) {
          best_size = size;
          best = member;
        }
      }
    }
    remap[k] = space.exclusive_allocation(player, best);
  }
  std::sort(induced.begin(), induced.end());
  return Strategy::bundle_remap(std::move(remap), std::move(induced),
                                reported_count);
}

}  // namespace

Strategy bundling_strategy(const AuctionSpace& space, std::size_t player,
                           const BundleFamily& field) {
  const QuasiFieldResult qf = is_quasi_field(field, space.num_goods());
  if (!qf.ok) {
    std::string what = "bundle family is not a quasi-field: ";
    switch (qf.violation) {
      case QuasiFieldResult::Violation::Empty:
        what += "empty family";
        break;
      case QuasiFieldResult::Violation::Complement:
        what += "complement of " + space.bundle_label(qf.first) +
                " (= " + space.bundle_label(qf.second) + ") is missing";
        break;
      case QuasiFieldResult::Violation::DisjointUnion:
        what += "disjoint union of " + space.bundle_label(qf.first) +
                " and " + space.bundle_label(qf.second) + " is missing";
        break;
      default:
        break;
    }
    throw std::invalid_argument(what);
  }
  return remap_strategy(space, player, field.members, &field, field.size());
}

Strategy bundle_report_strategy(const AuctionSpace& space, std::size_t player,
                                const std::vector<Bundle>& reported) {
  return remap_strategy(space, player, reported, nullptr, reported.size());
}

SprimeOutput gen_sprime() {
  AuctionSpace space = enumerate_allocations(
      GoodsSet({"a", "b", "c"}), 3);
  const Bundle A = space.parse_bundle("a");
  const Bundle B = space.parse_bundle("b");
  const Bundle C = space.parse_bundle("c");
  const Bundle grand = space.grand_bundle();

  auto allocation = [&](Bundle p1, Bundle p2, Bundle p3) {
    const std::size_t base = space.num_players() + 1;
    std::size_t index = 0;
    std::size_t weight = 1;
    for (std::size_t g = 0; g < space.num_goods(); ++g) {
      std::size_t digit = space.num_players();
      if ((p1 >> g) & 1) digit = 0;
      if ((p2 >> g) & 1) digit = 1;
      if ((p3 >> g) & 1) digit = 2;
      index += digit * weight;
      weight *= base;
    }
    return index;
  };

  std::vector<std::size_t> sprime{
      allocation(0, 0, 0),           // (-,-,-)
      allocation(0, B | C, 0),       // (-,bc,-)
      allocation(0, grand, 0),       // (-,abc,-)
      allocation(A | B, 0, 0),       // (ab,-,-)
      allocation(grand, 0, 0),       // (abc,-,-)
      allocation(0, 0, grand),       // (-,-,abc)
  };
  std::sort(sprime.begin(), sprime.end());

  const std::size_t n_alts = space.alternatives().size();
  std::vector<std::size_t> grands{allocation(grand, 0, 0),
                                  allocation(0, grand, 0),
                                  allocation(0, 0, grand)};

  // Grids allow externalities and non-monotone values; only the constant
  // maximum at the player's grand allocation is imposed.
  auto sparse = [&](std::size_t player,
                    std::vector<std::pair<std::size_t, Rat>> entries) {
    std::vector<Rat> values(n_alts, Rat(0));
    for (auto& [alt, value] : entries) values[alt] = value;
    values[grands[player]] = Rat(2);
    return Valuation(std::move(values), true);
  };
  std::vector<std::vector<Valuation>> grids(3);
  for (std::size_t i = 0; i < 3; ++i) {
    grids[i].push_back(make_z_valuation(n_alts, grands[i], Rat(2)));
    grids[i].push_back(sparse(i, {{allocation(A | B, 0, 0), Rat(1)},
                                  {allocation(0, grand, 0), Rat(1, 2)},
                                  {allocation(A, B, C), Rat(3, 2)}}));
    grids[i].push_back(sparse(i, {{allocation(0, 0, 0), Rat(1, 2)},
                                  {allocation(0, B | C, 0), Rat(1)},
                                  {allocation(C, 0, A | B), Rat(1, 4)}}));
  }

  std::vector<std::optional<std::size_t>> maxima{grands[0], grands[1],
                                                 grands[2]};
  GameInstance instance =
      make_instance(space.alternatives(), {"p1", "p2", "p3"},
                    std::move(grids), std::move(maxima));
  StrategyProfile profile(
      3, Strategy::nearly_truth(sprime, OffsetRule::zero()));
  return SprimeOutput{std::move(space), std::move(instance),
                      std::move(profile), std::move(sprime)};
}

ExtensionReport sprime_extension_report(const SprimeOutput& s) {
  ExtensionReport report;
  const std::size_t n_alts = s.space.alternatives().size();
  auto in_sprime = [&](std::size_t k) {
    return std::binary_search(s.sprime.begin(), s.sprime.end(), k);
  };
  for (std::size_t p = 0; p < s.space.num_players(); ++p) {
    std::set<Bundle> seen;
    for (std::size_t m : s.sprime) {
      const Bundle b = s.space.bundle_of(p, m);
      if (!seen.insert(b).second) continue;
      ExtensionReport::Entry entry{p, b, {}, {}};
      for (std::size_t k = 0; k < n_alts; ++k) {
        if (s.space.bundle_of(p, k) != b) continue;
        if (in_sprime(k))
          entry.inside.push_back(k);
        else
          entry.outside.push_back(k);
      }
      report.forced_total += entry.outside.size();
      report.entries.push_back(std::move(entry));
    }
  }
  return report;
}

}  // namespace vcg
