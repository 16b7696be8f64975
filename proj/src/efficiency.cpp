#include "vcglab/efficiency.hpp"

#include <algorithm>

#include "vcglab/auction.hpp"

namespace vcg {

RatioDetail efficiency_ratio_detail(const GameInstance& instance,
                                    const StrategyProfile& truth_profile,
                                    const StrategyProfile& eq_profile,
                                    const ValuationProfile& v) {
  const AnnouncementProfile dominant = apply_profile(truth_profile, v);
  const AnnouncementProfile equilibrium = apply_profile(eq_profile, v);

  RatioDetail detail;
  bool first = true;
  for (std::size_t a : welfare_maximizers(dominant)) {
    const Rat w = social_welfare(v, a);
    if (first || detail.dominant_welfare < w) {
      detail.dominant_welfare = w;
      detail.dominant_alternative = a;
      first = false;
    }
  }
  first = true;
  for (std::size_t a : welfare_maximizers(equilibrium)) {
    const Rat w = social_welfare(v, a);
    if (first || w < detail.equilibrium_welfare) {
      detail.equilibrium_welfare = w;
      detail.equilibrium_alternative = a;
      first = false;
    }
  }
  if (detail.equilibrium_welfare.is_zero())
    throw std::domain_error(
        "undefined efficiency ratio: equilibrium welfare is zero at " +
        instance.alternatives.label(detail.equilibrium_alternative));
  detail.ratio = detail.dominant_welfare / detail.equilibrium_welfare;
  return detail;
}

Rat efficiency_ratio(const GameInstance& instance,
                     const StrategyProfile& truth_profile,
                     const StrategyProfile& eq_profile,
                     const ValuationProfile& v) {
  return efficiency_ratio_detail(instance, truth_profile, eq_profile, v).ratio;
}

namespace {

// Lexicographic walk over the grid product; player 0 most significant.
bool advance(std::vector<std::size_t>& digits,
             const std::vector<std::vector<Valuation>>& grids) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < grids[i].size()) return true;
    digits[i] = 0;
  }
  return false;
}

ValuationProfile materialize(const GameInstance& instance,
                             const std::vector<std::size_t>& digits) {
  ValuationProfile v;
  v.reserve(digits.size());
  for (std::size_t i = 0; i < digits.size(); ++i)
    v.push_back(instance.family_grids[i][digits[i]]);
  return v;
}

}  // namespace

WorstCaseRatio worst_case_ratio(const GameInstance& instance,
                                const StrategyProfile& eq_profile) {
  instance.validate();
  const StrategyProfile truth(instance.num_players(), Strategy::truth());
  std::vector<std::size_t> digits(instance.num_players(), 0);
  WorstCaseRatio worst;
  bool first = true;
  do {
    const ValuationProfile v = materialize(instance, digits);
    const RatioDetail detail =
        efficiency_ratio_detail(instance, truth, eq_profile, v);
    if (first || worst.ratio < detail.ratio) {
      worst = WorstCaseRatio{detail.ratio, digits, v, detail};
      first = false;
    }
  } while (advance(digits, instance.family_grids));
  return worst;
}

Rat homogeneity_degree(const GameInstance& instance) {
  instance.validate();
  const std::size_t n = instance.num_players();
  const Rat players(static_cast<std::int64_t>(n));
  Rat sup(0);
  for (std::size_t a = 0; a < instance.alternatives.size(); ++a) {
    // Per-player value sets at this alternative; the grid product realizes
    // every combination, so the scan stays per-alternative.
    std::vector<std::vector<Rat>> options(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (const Valuation& v : instance.family_grids[i])
        options[i].push_back(v.at(a));
      std::sort(options[i].begin(), options[i].end(),
                [](const Rat& x, const Rat& y) { return x < y; });
      options[i].erase(std::unique(options[i].begin(), options[i].end()),
                       options[i].end());
      if (options[i].empty()) options[i].push_back(Rat(0));
    }
    std::vector<std::size_t> pick(n, 0);
    while (true) {
      Rat total(0);
      Rat top(0);
      bool top_set = false;
      for (std::size_t i = 0; i < n; ++i) {
        const Rat& x = options[i][pick[i]];
        total += x;
        if (!top_set || top < x) {
          top = x;
          top_set = true;
        }
      }
      if (!total.is_zero()) sup = max(sup, players * top / total);
      std::size_t i = n;
      while (i > 0) {
        if (++pick[i - 1] < options[i - 1].size()) break;
        pick[i - 1] = 0;
        --i;
      }
      if (i == 0) break;
    }
  }
  return sup;
}

int compatibility_degree(const GameInstance& instance) {
  instance.validate();
  int degree = 0;
  for (std::size_t a = 0; a < instance.alternatives.size(); ++a) {
    int positive = 0;
    for (const auto& grid : instance.family_grids)
      for (const Valuation& v : grid)
        if (Rat(0) < v.at(a)) {
          ++positive;
          break;
        }
    degree = std::max(degree, positive);
  }
  return degree;
}

EfficiencyReport bound_check(const GameInstance& instance,
                             const StrategyProfile& eq_profile,
                             const CheckOptions& options) {
  for (const auto& m : instance.maxima)
    if (!m)
      throw std::invalid_argument(
          "bound_check requires constant-maximum families");
  const EquilibriumVerdict verdict =
      is_expost_equilibrium(instance, eq_profile, options);
  if (!verdict.pass) throw EquilibriumPreconditionError(*verdict.witness);

  const WorstCaseRatio worst = worst_case_ratio(instance, eq_profile);
  EfficiencyReport report;
  report.dominant_alternative = worst.detail.dominant_alternative;
  report.equilibrium_alternative = worst.detail.equilibrium_alternative;
  report.dominant_welfare = worst.detail.dominant_welfare;
  report.equilibrium_welfare = worst.detail.equilibrium_welfare;
  report.ratio = worst.ratio;
  report.witness_choice = worst.grid_choice;
  report.homogeneity = homogeneity_degree(instance);
  report.compatibility = compatibility_degree(instance);

  const Rat n_bound(static_cast<std::int64_t>(instance.num_players()));
  const Rat compat_bound(report.compatibility);
  report.bound = EfficiencyReport::Bound::PlayerCount;
  report.bound_value = n_bound;
  if (report.homogeneity < report.bound_value) {
    report.bound = EfficiencyReport::Bound::Homogeneous;
    report.bound_value = report.homogeneity;
  }
  if (compat_bound < report.bound_value) {
    report.bound = EfficiencyReport::Bound::Compatible;
    report.bound_value = compat_bound;
  }
  report.satisfied = !(report.bound_value < report.ratio);
  return report;
}

GeneratedGame gen_example5(std::size_t n, const Rat& eps) {
  if (n < 2) throw std::invalid_argument("example 5 needs at least 2 agents");
  if (!(Rat(0) < eps)) throw std::invalid_argument("epsilon must be positive");

  std::vector<std::string> goods;
  for (std::size_t i = 0; i < n; ++i) goods.push_back("g" + std::to_string(i + 1));
  AuctionSpace space = enumerate_allocations(GoodsSet(std::move(goods)), n);
  const Bundle grand = space.grand_bundle();
  const std::size_t table_size = std::size_t{1} << space.num_goods();

  std::vector<std::string> players;
  std::vector<std::vector<Valuation>> grids(n);
  std::vector<std::optional<std::size_t>> maxima(n);
  std::vector<std::size_t> grand_allocations;
  for (std::size_t i = 0; i < n; ++i) {
    players.push_back("p" + std::to_string(i + 1));
    BundleTable table(table_size, Rat(0));
    for (Bundle k = 1; k < table_size; ++k) {
      if (!((k >> i) & 1)) continue;  // own good absent
      table[k] = k == grand ? Rat(1) + eps : Rat(1);
    }
    grids[i].push_back(valuation_from_bundles(space, i, table));
    maxima[i] = space.exclusive_allocation(i, grand);
    grand_allocations.push_back(*maxima[i]);
  }
  std::sort(grand_allocations.begin(), grand_allocations.end());

  GameInstance instance = make_instance(space.alternatives(),
                                        std::move(players), std::move(grids),
                                        std::move(maxima));
  StrategyProfile profile(
      n, Strategy::nearly_truth(grand_allocations, OffsetRule::zero()));
  return GeneratedGame{std::move(instance), std::move(profile)};
}

GeneratedGame gen_example6(std::size_t num_alternatives, std::size_t n,
                           const Rat& eps) {
  if (n < 1) throw std::invalid_argument("example 6 needs players");
  if (num_alternatives < n + 1)
    throw std::invalid_argument("example 6 needs M >= n + 1 alternatives");
  if (!(Rat(0) < eps)) throw std::invalid_argument("epsilon must be positive");

  std::vector<std::string> labels;
  for (std::size_t m = 0; m < num_alternatives; ++m)
    labels.push_back("m" + std::to_string(m));
  AlternativeSet alternatives(std::move(labels));

  std::vector<std::string> players;
  std::vector<std::vector<Valuation>> grids(n);
  std::vector<std::optional<std::size_t>> maxima(n);
  for (std::size_t i = 0; i < n; ++i) {
    players.push_back("p" + std::to_string(i + 1));
    std::vector<Rat> values(num_alternatives, Rat(0));
    values[0] = Rat(1);
    values[i + 1] = Rat(1) + Rat(static_cast<std::int64_t>(i + 1)) * eps;
    grids[i].push_back(Valuation(std::move(values), true));
    maxima[i] = i + 1;
  }

  std::vector<std::size_t> aprime;
  for (std::size_t m = 1; m < num_alternatives; ++m) aprime.push_back(m);
  GameInstance instance =
      make_instance(std::move(alternatives), std::move(players),
                    std::move(grids), std::move(maxima));
  StrategyProfile profile(
      n, Strategy::nearly_truth(std::move(aprime), OffsetRule::zero()));
  return GeneratedGame{std::move(instance), std::move(profile)};
}

}  // namespace vcg
