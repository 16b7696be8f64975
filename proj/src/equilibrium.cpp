#include "vcglab/equilibrium.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

namespace vcg {

Rat best_response_gap(const Valuation& v_i,
                      const AnnouncementProfile& opponents, std::size_t a) {
  const std::size_t n_alts = v_i.size();
  auto line = [&](std::size_t alt) {
    Rat total = v_i.at(alt);
    for (const Announcement& b : opponents) total += b.at(alt);
    return total;
  };
  Rat best = line(0);
  for (std::size_t alt = 1; alt < n_alts; ++alt) best = max(best, line(alt));
  return best - line(a);
}

namespace {

// Non-empty subsets of {0..n-1} ordered by size, then lexicographically.
std::vector<std::vector<std::size_t>> enumerate_subsets(std::size_t n) {
  std::vector<std::vector<std::size_t>> subsets;
  for (std::size_t size = 1; size <= n; ++size) {
    std::vector<std::size_t> pick(size);
    // Standard combination walk.
    for (std::size_t i = 0; i < size; ++i) pick[i] = i;
    while (true) {
      subsets.push_back(pick);
      std::size_t i = size;
      while (i > 0 && pick[i - 1] == n - size + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return subsets;
}

struct CellLayout {
  std::vector<std::vector<std::size_t>> subsets;
  std::vector<unsigned long long> cell_counts;  // per subset
  std::vector<unsigned long long> prefix;       // exclusive prefix sums
  unsigned long long total = 0;

  // Decodes a global ordinal into (subset index, per-player grid digits).
  std::pair<std::size_t, std::vector<std::size_t>> decode(
      const GameInstance& instance, unsigned long long ordinal) const {
    std::size_t si = 0;
    while (si + 1 < subsets.size() && prefix[si + 1] <= ordinal) ++si;
    unsigned long long local = ordinal - prefix[si];
    const auto& subset = subsets[si];
    std::vector<std::size_t> digits(subset.size(), 0);
    // First subset member is the most significant digit.
    for (std::size_t k = subset.size(); k-- > 0;) {
      const std::size_t base = instance.family_grids[subset[k]].size();
      digits[k] = static_cast<std::size_t>(local % base);
      local /= base;
    }
    return {si, std::move(digits)};
  }
};

CellLayout make_layout(const GameInstance& instance) {
  CellLayout layout;
  layout.subsets = enumerate_subsets(instance.num_players());
  layout.prefix.reserve(layout.subsets.size());
  for (const auto& subset : layout.subsets) {
    unsigned long long cells = 1;
    for (std::size_t i : subset) cells *= instance.family_grids[i].size();
    layout.prefix.push_back(layout.total);
    layout.cell_counts.push_back(cells);
    layout.total += cells;
  }
  return layout;
}

// Announcements of every grid valuation, computed once up front.
std::vector<std::vector<Announcement>> announce_grids(
    const GameInstance& instance, const StrategyProfile& profile) {
  std::vector<std::vector<Announcement>> out(instance.num_players());
  for (std::size_t i = 0; i < instance.num_players(); ++i) {
    out[i].reserve(instance.family_grids[i].size());
    for (const Valuation& v : instance.family_grids[i])
      out[i].push_back(apply(profile[i], v));
  }
  return out;
}

std::optional<Witness> evaluate_cell(
    const GameInstance& instance, const CellLayout& layout,
    const std::vector<std::vector<Announcement>>& announced,
    unsigned long long ordinal) {
  auto [si, digits] = layout.decode(instance, ordinal);
  const auto& subset = layout.subsets[si];
  const std::size_t n_alts = instance.alternatives.size();

  AnnouncementProfile cell_announced;
  cell_announced.reserve(subset.size());
  for (std::size_t k = 0; k < subset.size(); ++k)
    cell_announced.push_back(announced[subset[k]][digits[k]]);

  std::vector<Rat> totals(n_alts);
  for (std::size_t a = 0; a < n_alts; ++a)
    for (const Announcement& b : cell_announced) totals[a] += b.at(a);

  std::vector<std::size_t> maxers;
  for (std::size_t a = 0; a < n_alts; ++a)
    if (maxers.empty() || totals[maxers.front()] < totals[a])
      maxers.assign(1, a);
    else if (totals[a] == totals[maxers.front()])
      maxers.push_back(a);

  // Every maximizer is the outcome of some tie-breaking mechanism; all of
  // them must already be optimal for every participant.
  for (std::size_t a : maxers) {
    for (std::size_t k = 0; k < subset.size(); ++k) {
      const Valuation& v =
          instance.family_grids[subset[k]][digits[k]];
      auto line = [&](std::size_t alt) {
        return v.at(alt) + totals[alt] - cell_announced[k].at(alt);
      };
      const Rat here = line(a);
      Rat best = here;
      std::size_t best_alt = a;
      for (std::size_t alt = 0; alt < n_alts; ++alt) {
        const Rat value = line(alt);
        if (best < value) {
          best = value;
          best_alt = alt;
        }
      }
      if (here < best) {
        Witness w;
        w.subset = subset;
        w.grid_choice = digits;
        for (std::size_t m = 0; m < subset.size(); ++m)
          w.valuations.push_back(instance.family_grids[subset[m]][digits[m]]);
        w.announcements = cell_announced;
        w.chosen = a;
        w.deviator = subset[k];
        w.better = best_alt;
        w.gap = best - here;
        return w;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

EquilibriumVerdict is_expost_equilibrium(const GameInstance& instance,
                                         const StrategyProfile& profile,
                                         const CheckOptions& options) {
  instance.validate();
  if (profile.size() != instance.num_players())
    throw std::invalid_argument("one strategy required per player");
  for (std::size_t i = 0; i < instance.num_players(); ++i)
    if (instance.family_grids[i].empty())
      throw std::invalid_argument("empty valuation grid for player " +
                                  instance.player_names[i]);

  const CellLayout layout = make_layout(instance);
  const auto announced = announce_grids(instance, profile);

  EquilibriumVerdict verdict;
  verdict.cells_total = layout.total;

  const unsigned jobs = std::max(1u, options.jobs);
  if (jobs == 1) {
    for (unsigned long long o = 0; o < layout.total; ++o) {
      if (auto w = evaluate_cell(instance, layout, announced, o)) {
        verdict.pass = false;
        verdict.witness = std::move(w);
        verdict.failure_ordinal = o;
        return verdict;
      }
    }
    return verdict;
  }

  std::atomic<unsigned long long> next{0};
  std::atomic<unsigned long long> best{layout.total};
  std::mutex found_mutex;
  std::vector<std::pair<unsigned long long, Witness>> found;
  auto worker = [&] {
    while (true) {
      const unsigned long long o = next.fetch_add(1);
      if (o >= layout.total) return;
      if (o >= best.load()) continue;  // a smaller witness already exists
      if (auto w = evaluate_cell(instance, layout, announced, o)) {
        unsigned long long seen = best.load();
        while (o < seen && !best.compare_exchange_weak(seen, o)) {
        }
        std::lock_guard<std::mutex> lock(found_mutex);
        found.emplace_back(o, std::move(*w));
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  if (!found.empty()) {
    auto it = std::min_element(
        found.begin(), found.end(),
        [](const auto& a, const auto& b) { return a.first < b.first; });
    verdict.pass = false;
    verdict.failure_ordinal = it->first;
    verdict.witness = std::move(it->second);
  }
  return verdict;
}

bool replay_witness(const GameInstance& instance,
                    const StrategyProfile& profile, const Witness& witness) {
  AnnouncementProfile opponents;
  Valuation deviator_valuation;
  for (std::size_t k = 0; k < witness.subset.size(); ++k) {
    const std::size_t i = witness.subset[k];
    const Valuation& v =
        instance.family_grids[i].at(witness.grid_choice[k]);
    Announcement b = apply(profile[i], v);
    if (b != witness.announcements[k]) return false;
    if (i == witness.deviator)
      deviator_valuation = v;
    else
      opponents.push_back(std::move(b));
  }
  const Rat gap =
      best_response_gap(deviator_valuation, opponents, witness.chosen);
  if (!(Rat(0) < gap) || gap != witness.gap) return false;
  // The named better alternative must realize the gap.
  Rat here = deviator_valuation.at(witness.chosen);
  Rat there = deviator_valuation.at(witness.better);
  for (const Announcement& b : opponents) {
    here += b.at(witness.chosen);
    there += b.at(witness.better);
  }
  return there - here == gap;
}

bool deviation_cross_check(const GameInstance& instance,
                           const StrategyProfile& profile,
                           const EquilibriumVerdict& verdict,
                           std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  const CellLayout layout = make_layout(instance);
  const auto announced = announce_grids(instance, profile);
  const std::size_t n_alts = instance.alternatives.size();

  if (!verdict.pass) {
    // The witness deviation (force the better alternative by bidding far
    // above everything else) must strictly improve under some tie-break.
    if (!verdict.witness) return false;
    return replay_witness(instance, profile, *verdict.witness);
  }

  std::uniform_int_distribution<unsigned long long> pick_cell(
      0, layout.total - 1);
  std::uniform_int_distribution<int> pick_num(-12, 24);
  std::uniform_int_distribution<int> pick_den(1, 3);
  for (int trial = 0; trial < samples; ++trial) {
    const unsigned long long o = pick_cell(rng);
    auto [si, digits] = layout.decode(instance, o);
    const auto& subset = layout.subsets[si];
    std::uniform_int_distribution<std::size_t> pick_k(0, subset.size() - 1);
    const std::size_t k = pick_k(rng);
    const std::size_t deviator = subset[k];
    const Valuation& v = instance.family_grids[deviator][digits[k]];

    AnnouncementProfile original;
    for (std::size_t m = 0; m < subset.size(); ++m)
      original.push_back(announced[subset[m]][digits[m]]);
    AnnouncementProfile deviated = original;
    for (std::size_t a = 0; a < n_alts; ++a)
      deviated[k].values[a] = Rat(pick_num(rng), pick_den(rng));

    // Utilities before the h charge; h_i depends only on the opponents and
    // cancels from the comparison.
    auto utility_at = [&](const AnnouncementProfile& ann, std::size_t a) {
      Rat u = v.at(a);
      for (std::size_t m = 0; m < subset.size(); ++m)
        if (m != k) u += ann[m].at(a);
      return u;
    };
    Rat best_deviated;  // max over tie-breaks of the deviated profile
    {
      const auto maxers = welfare_maximizers(deviated);
      best_deviated = utility_at(deviated, maxers.front());
      for (std::size_t a : maxers)
        best_deviated = max(best_deviated, utility_at(deviated, a));
    }
    const auto maxers = welfare_maximizers(original);
    Rat worst_original = utility_at(original, maxers.front());
    for (std::size_t a : maxers)
      worst_original = min(worst_original, utility_at(original, a));
    if (worst_original < best_deviated) return false;  // disagreement
  }
  return true;
}

NearTruthReport verify_near_truth_on_maxima(const GameInstance& instance,
                                            const StrategyProfile& profile) {
  instance.validate();
  std::vector<std::size_t> maxima;
  for (std::size_t i = 0; i < instance.num_players(); ++i) {
    if (!instance.maxima[i])
      throw std::invalid_argument("player " + instance.player_names[i] +
                                  " has no declared maximum");
    maxima.push_back(*instance.maxima[i]);
  }
  NearTruthReport report;
  for (std::size_t i = 0; i < instance.num_players(); ++i) {
    for (std::size_t g = 0; g < instance.family_grids[i].size(); ++g) {
      const Valuation& v = instance.family_grids[i][g];
      const Announcement b = apply(profile[i], v);
      NearTruthReport::Entry entry{i, g, {}, true};
      for (std::size_t a_k : maxima)
        entry.offsets.push_back(b.at(a_k) - v.at(a_k));
      for (const Rat& offset : entry.offsets)
        if (offset != entry.offsets.front()) entry.constant = false;
      report.all_constant = report.all_constant && entry.constant;
      report.entries.push_back(std::move(entry));
    }
  }
  return report;
}

SampledFunction extract_g(const Strategy& strategy,
                          std::size_t num_alternatives, std::size_t a,
                          std::size_t a_prime, std::span<const Rat> s_grid) {
  std::vector<Rat> grid(s_grid.begin(), s_grid.end());
  std::vector<Rat> values;
  values.reserve(grid.size());
  for (const Rat& s : grid) {
    const Announcement b =
        apply(strategy, make_z_valuation(num_alternatives, a, s));
    values.push_back(b.at(a) - b.at(a_prime));
  }
  return SampledFunction(std::move(grid), std::move(values));
}

MveResult check_mve_pair(const SampledFunction& g1,
                         const SampledFunction& g2) {
  return check_mve(g1, g2);
}

const LemmaReport::Item* LemmaReport::find(std::string_view lemma) const {
  for (const Item& item : items)
    if (item.lemma == lemma) return &item;
  return nullptr;
}

bool LemmaReport::passes(std::string_view lemma) const {
  const Item* item = find(lemma);
  return item && item->status == Status::Pass;
}

namespace {

using Status = LemmaReport::Status;

LemmaReport::Item check_strict_max_bid(const GameInstance& instance,
                           const std::vector<std::vector<Announcement>>& bs) {
  for (std::size_t i = 0; i < instance.num_players(); ++i) {
    for (std::size_t g = 0; g < instance.family_grids[i].size(); ++g) {
      const Valuation& v = instance.family_grids[i][g];
      std::size_t top = 0;
      bool strict = true;
      for (std::size_t a = 1; a < v.size(); ++a)
        if (v.at(top) < v.at(a)) top = a;
      for (std::size_t a = 0; a < v.size(); ++a)
        if (a != top && !(v.at(a) < v.at(top))) strict = false;
      if (!strict) continue;
      const Announcement& b = bs[i][g];
      for (std::size_t a = 0; a < v.size(); ++a)
        if (a != top && !(b.at(a) < b.at(top)))
          return {"strict-max-bid", Status::Fail,
                  "player " + instance.player_names[i] +
                      " valuation " + std::to_string(g) +
                      ": strict maximum " + instance.alternatives.label(top) +
                      " is not the strict bid maximum (vs " +
                      instance.alternatives.label(a) + ")"};
    }
  }
  return {"strict-max-bid", Status::Pass, ""};
}

LemmaReport::Item check_equal_values_equal_bids(const GameInstance& instance,
                             const std::vector<std::vector<Announcement>>& bs) {
  if (instance.num_players() < 2)
    return {"equal-values-equal-bids", Status::NotApplicable, "requires n >= 2"};
  for (std::size_t i = 0; i < instance.num_players(); ++i) {
    for (std::size_t g = 0; g < instance.family_grids[i].size(); ++g) {
      const Valuation& v = instance.family_grids[i][g];
      const Announcement& b = bs[i][g];
      for (std::size_t a = 0; a < v.size(); ++a)
        for (std::size_t a2 = a + 1; a2 < v.size(); ++a2)
          if (v.at(a) == v.at(a2) && b.at(a) != b.at(a2))
            return {"equal-values-equal-bids", Status::Fail,
                    "player " + instance.player_names[i] + " valuation " +
                        std::to_string(g) + ": equal values at " +
                        instance.alternatives.label(a) + "," +
                        instance.alternatives.label(a2) +
                        " but unequal bids (full-family lemma)"};
    }
  }
  return {"equal-values-equal-bids", Status::Pass, "assumes the full non-negative family"};
}

LemmaReport::Item check_z_spread_full_family(const GameInstance& instance,
                             const std::vector<std::vector<Announcement>>& bs) {
  if (instance.num_players() < 3 || instance.alternatives.size() < 3)
    return {"z-spread-full-family", Status::NotApplicable, "requires n >= 3 and |A| >= 3"};
  bool probe_seen = false;
  for (std::size_t i = 0; i < instance.num_players(); ++i) {
    for (std::size_t g = 0; g < instance.family_grids[i].size(); ++g) {
      const auto z = as_z_valuation(instance.family_grids[i][g]);
      if (!z) continue;
      probe_seen = true;
      const Announcement& b = bs[i][g];
      for (std::size_t a2 = 0; a2 < b.size(); ++a2)
        if (a2 != z->peak && b.at(z->peak) - b.at(a2) != z->height)
          return {"z-spread-full-family", Status::Fail,
                  "player " + instance.player_names[i] + ": spread at Z(" +
                      instance.alternatives.label(z->peak) + "," +
                      z->height.str() + ") vs " +
                      instance.alternatives.label(a2) + " is " +
                      (b.at(z->peak) - b.at(a2)).str() +
                      " (full-family lemma)"};
    }
  }
  if (!probe_seen)
    return {"z-spread-full-family", Status::MissingProbe, "no Z-valuations in any grid"};
  return {"z-spread-full-family", Status::Pass, "assumes the full non-negative family"};
}

struct MaximaContext {
  bool available = false;
  std::vector<std::size_t> maxima;
};

MaximaContext maxima_of(const GameInstance& instance) {
  MaximaContext ctx;
  for (const auto& m : instance.maxima)
    if (!m) return ctx;
  ctx.available = true;
  for (const auto& m : instance.maxima) ctx.maxima.push_back(*m);
  return ctx;
}

// Shared scan for l6/l7/l8: Z probes sitting at each player's own maximum.
template <typename Fn>
LemmaReport::Item scan_own_peak_probes(const char* name,
                                       const GameInstance& instance,
                                       const MaximaContext& ctx,
                                       const std::vector<std::vector<Announcement>>& bs,
                                       Fn&& check) {
  std::vector<bool> probed(instance.num_players(), false);
  for (std::size_t i = 0; i < instance.num_players(); ++i) {
    for (std::size_t g = 0; g < instance.family_grids[i].size(); ++g) {
      const auto z = as_z_valuation(instance.family_grids[i][g]);
      if (!z || z->peak != ctx.maxima[i]) continue;
      probed[i] = true;
      if (auto fail = check(i, *z, bs[i][g]))
        return {name, Status::Fail, *fail};
    }
  }
  for (std::size_t i = 0; i < instance.num_players(); ++i)
    if (!probed[i])
      return {name, Status::MissingProbe,
              "grid of player " + instance.player_names[i] +
                  " holds no Z-valuation peaked at its maximum"};
  return {name, Status::Pass, ""};
}

}  // namespace

LemmaReport check_structural_lemmas(const GameInstance& instance,
                                    const StrategyProfile& profile) {
  instance.validate();
  const auto bs = announce_grids(instance, profile);
  LemmaReport report;
  report.items.push_back(check_strict_max_bid(instance, bs));
  report.items.push_back(check_equal_values_equal_bids(instance, bs));
  report.items.push_back(check_z_spread_full_family(instance, bs));

  const MaximaContext ctx = maxima_of(instance);
  auto not_applicable = [&](const char* name, const char* why) {
    report.items.push_back({name, Status::NotApplicable, why});
  };
  const std::size_t n = instance.num_players();

  if (!ctx.available) {
    not_applicable("foreign-maxima-equal", "requires declared maxima");
    not_applicable("maxima-bids-dominate", "requires declared maxima");
    not_applicable("z-spread-own-maximum", "requires declared maxima");
    return report;
  }

  if (n < 3) {
    not_applicable("foreign-maxima-equal", "requires n >= 3");
  } else {
    report.items.push_back(scan_own_peak_probes(
        "foreign-maxima-equal", instance, ctx, bs,
        [&](std::size_t i, const ZValuation& z,
            const Announcement& b) -> std::optional<std::string> {
          for (std::size_t k : ctx.maxima)
            for (std::size_t m : ctx.maxima)
              if (k != ctx.maxima[i] && m != ctx.maxima[i] &&
                  b.at(k) != b.at(m))
                return "player " + instance.player_names[i] + " bids " +
                       b.at(k).str() + " vs " + b.at(m).str() +
                       " on foreign maxima under Z(" +
                       instance.alternatives.label(z.peak) + "," +
                       z.height.str() + ")";
          return std::nullopt;
        }));
  }

  if (n < 2) {
    not_applicable("maxima-bids-dominate", "requires n >= 2");
  } else {
    report.items.push_back(scan_own_peak_probes(
        "maxima-bids-dominate", instance, ctx, bs,
        [&](std::size_t i, const ZValuation& z,
            const Announcement& b) -> std::optional<std::string> {
          for (std::size_t k : ctx.maxima) {
            if (k == ctx.maxima[i]) continue;
            for (std::size_t a = 0; a < b.size(); ++a)
              if (a != ctx.maxima[i] && b.at(k) < b.at(a))
                return "player " + instance.player_names[i] +
                       ": bid on maximum " + instance.alternatives.label(k) +
                       " is below the bid on " +
                       instance.alternatives.label(a) + " under Z(" +
                       instance.alternatives.label(z.peak) + "," +
                       z.height.str() + ")";
          }
          return std::nullopt;
        }));
  }

  if (n < 3 || instance.alternatives.size() < 3) {
    not_applicable("z-spread-own-maximum", "requires n >= 3 and |A| >= 3");
  } else {
    report.items.push_back(scan_own_peak_probes(
        "z-spread-own-maximum", instance, ctx, bs,
        [&](std::size_t i, const ZValuation& z,
            const Announcement& b) -> std::optional<std::string> {
          for (std::size_t k : ctx.maxima)
            if (k != ctx.maxima[i] &&
                b.at(ctx.maxima[i]) - b.at(k) != z.height)
              return "player " + instance.player_names[i] + ": spread to " +
                     instance.alternatives.label(k) + " under Z(" +
                     instance.alternatives.label(z.peak) + "," +
                     z.height.str() + ") is " +
                     (b.at(ctx.maxima[i]) - b.at(k)).str() + ", expected " +
                     z.height.str();
          return std::nullopt;
        }));
  }
  return report;
}

}  // namespace vcg
