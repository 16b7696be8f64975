#include <doctest.h>

#include "fixtures.hpp"
#include "vcglab/auction.hpp"
#include "vcglab/efficiency.hpp"
#include "vcglab/generators.hpp"

using namespace vcg;
using vcgtest::compatible_instance;
using vcgtest::homogeneous_instance;
using vcgtest::three_maxima_near_truth;

TEST_CASE("efficiency ratio: equal profiles give 1") {
  GameInstance instance = constant_max_instance(3);
  StrategyProfile truth(3, Strategy::truth());
  ValuationProfile v{instance.family_grids[0][1], instance.family_grids[1][1],
                     instance.family_grids[2][1]};
  CHECK(efficiency_ratio(instance, truth, truth, v) == Rat(1));
}

TEST_CASE("example 5: exact welfare split at epsilon = 1/10, n = 3") {
  GeneratedGame g = gen_example5(3, Rat(1, 10));
  ValuationProfile v{g.instance.family_grids[0][0],
                     g.instance.family_grids[1][0],
                     g.instance.family_grids[2][0]};
  // the grand bundle to player 1 carries announced and true welfare 11/10
  const AnnouncementProfile announced = apply_profile(g.profile, v);
  CHECK(social_welfare(announced, *g.instance.maxima[0]) == Rat(11, 10));
  CHECK(social_welfare(v, *g.instance.maxima[0]) == Rat(11, 10));

  // bidding zero off the grand bundle makes exactly the n grand-bundle
  // allocations the announced welfare maximizers
  std::vector<std::size_t> grands;
  for (const auto& m : g.instance.maxima) grands.push_back(*m);
  std::sort(grands.begin(), grands.end());
  CHECK(welfare_maximizers(announced) == grands);

  RatioDetail d = efficiency_ratio_detail(
      g.instance, StrategyProfile(3, Strategy::truth()), g.profile, v);
  CHECK(d.dominant_welfare == Rat(3));
  CHECK(d.equilibrium_welfare == Rat(11, 10));
  CHECK(d.ratio == Rat(30, 11));
}

TEST_CASE("example 5: ratio n/(1+eps), increasing toward n") {
  for (std::size_t n : {2, 3, 4}) {
    Rat previous;
    for (const Rat& eps : {Rat(1, 10), Rat(1, 100), Rat(1, 1000)}) {
      GeneratedGame g = gen_example5(n, eps);
      WorstCaseRatio worst = worst_case_ratio(g.instance, g.profile);
      const Rat expected =
          Rat(static_cast<std::int64_t>(n)) / (Rat(1) + eps);
      CHECK(worst.ratio == expected);
      CHECK(Rat(static_cast<std::int64_t>(n)) -
                Rat(static_cast<std::int64_t>(n)) * eps <
            worst.ratio);
      if (!previous.is_zero()) CHECK(previous < worst.ratio);
      previous = worst.ratio;
    }
  }
  // boundary where the bound is slack: n=2, eps=1 ties the split allocations
  GeneratedGame g = gen_example5(2, Rat(1));
  CHECK(worst_case_ratio(g.instance, g.profile).ratio == Rat(1));
}

TEST_CASE("example 6: N=3, M=5, eps=1/10 reproduces the paper's numbers") {
  GeneratedGame g = gen_example6(5, 3, Rat(1, 10));
  CHECK(is_expost_equilibrium(g.instance, g.profile).pass);

  ValuationProfile v{g.instance.family_grids[0][0],
                     g.instance.family_grids[1][0],
                     g.instance.family_grids[2][0]};
  RatioDetail d = efficiency_ratio_detail(
      g.instance, StrategyProfile(3, Strategy::truth()), g.profile, v);
  CHECK(g.instance.alternatives.label(d.equilibrium_alternative) == "m3");
  CHECK(d.equilibrium_welfare == Rat(13, 10));
  CHECK(g.instance.alternatives.label(d.dominant_alternative) == "m0");
  CHECK(d.dominant_welfare == Rat(3));
  CHECK(d.ratio == Rat(30, 13));

  Rat previous;
  for (const Rat& eps : {Rat(1, 10), Rat(1, 100), Rat(1, 1000)}) {
    GeneratedGame h = gen_example6(5, 3, eps);
    const Rat ratio = worst_case_ratio(h.instance, h.profile).ratio;
    CHECK(ratio == Rat(3) / (Rat(1) + Rat(3) * eps));
    if (!previous.is_zero()) CHECK(previous < ratio);
    previous = ratio;
  }
}

TEST_CASE("worst-case ratio: single player always 1") {
  AlternativeSet alts({"a1", "a2"});
  std::vector<std::vector<Valuation>> grids{
      {Valuation({Rat(2), Rat(1)}, true), Valuation({Rat(3), Rat(0)}, true)}};
  GameInstance instance =
      make_instance(alts, {"p1"}, std::move(grids), {std::size_t{0}});
  WorstCaseRatio worst =
      worst_case_ratio(instance, StrategyProfile(1, Strategy::truth()));
  CHECK(worst.ratio == Rat(1));
}

TEST_CASE("near-truth worst-case ratio never exceeds the player count") {
  for (std::size_t n : {2, 3, 4}) {
    GameInstance instance = constant_max_instance(n);
    StrategyProfile profile = constant_max_near_truth_profile(n);
    REQUIRE(is_expost_equilibrium(instance, profile).pass);
    WorstCaseRatio worst = worst_case_ratio(instance, profile);
    CHECK(!(Rat(static_cast<std::int64_t>(n)) < worst.ratio));
    CHECK(!(worst.ratio < Rat(1)));
  }
}

TEST_CASE("homogeneity degree: identical players give 1") {
  AlternativeSet alts({"a1", "a2"});
  std::vector<std::vector<Valuation>> grids(3);
  for (auto& g : grids)
    g.push_back(Valuation({Rat(2), Rat(1)}, true));
  GameInstance instance =
      make_instance(alts, {"p1", "p2", "p3"}, std::move(grids));
  CHECK(homogeneity_degree(instance) == Rat(1));
}

TEST_CASE("homogeneity degree: formula evaluation on a 2-player pair") {
  AlternativeSet alts({"a1"});
  std::vector<std::vector<Valuation>> grids(2);
  grids[0].push_back(Valuation({Rat(1)}, true));
  grids[1].push_back(Valuation({Rat(2)}, true));
  GameInstance instance = make_instance(alts, {"p1", "p2"}, std::move(grids));
  CHECK(homogeneity_degree(instance) == Rat(4, 3));
}

TEST_CASE("homogeneity degree: bounded families stay under b/a") {
  AlternativeSet alts({"a1", "a2"});
  std::vector<std::vector<Valuation>> grids(2);
  for (auto& g : grids) {
    g.push_back(Valuation({Rat(1), Rat(2)}, true));
    g.push_back(Valuation({Rat(2), Rat(1)}, true));
  }
  GameInstance instance = make_instance(alts, {"p1", "p2"}, std::move(grids));
  CHECK(!(Rat(2) < homogeneity_degree(instance)));
}

TEST_CASE("compatibility degree counts positive supports") {
  // all-zero valuations: degree 0
  AlternativeSet alts({"a1", "a2"});
  std::vector<std::vector<Valuation>> zero_grids(2);
  for (auto& g : zero_grids) g.push_back(Valuation({Rat(0), Rat(0)}, true));
  CHECK(compatibility_degree(
            make_instance(alts, {"p1", "p2"}, std::move(zero_grids))) == 0);

  CHECK(compatibility_degree(compatible_instance()) == 2);

  // a combinatorial auction with p goods is compatible of degree <= p
  GeneratedGame ex5 = gen_example5(3, Rat(1, 10));
  CHECK(compatibility_degree(ex5.instance) <= 3);
}

TEST_CASE("homogeneous grid of degree 2: exact measure 3/2, bound holds") {
  GameInstance instance = homogeneous_instance();
  StrategyProfile profile = three_maxima_near_truth();
  CHECK(homogeneity_degree(instance) == Rat(3, 2));

  EfficiencyReport report = bound_check(instance, profile);
  CHECK(report.bound == EfficiencyReport::Bound::Homogeneous);
  CHECK(report.bound_value == Rat(3, 2));
  CHECK(report.satisfied);
  CHECK(!(Rat(2) < report.ratio));
  CHECK(report.ratio == Rat(3, 2));  // attained by the all-v1 profile
}

TEST_CASE("compatible grid of degree 2 is tight") {
  GameInstance instance = compatible_instance();
  StrategyProfile profile = three_maxima_near_truth();
  CHECK(compatibility_degree(instance) == 2);

  EfficiencyReport report = bound_check(instance, profile);
  CHECK(report.bound == EfficiencyReport::Bound::Compatible);
  CHECK(report.bound_value == Rat(2));
  CHECK(report.satisfied);
  CHECK(report.ratio == Rat(2));
}

TEST_CASE("bound_check: example 5 selects the player-count bound") {
  GeneratedGame g = gen_example5(3, Rat(1, 10));
  EfficiencyReport report = bound_check(g.instance, g.profile);
  CHECK(report.bound == EfficiencyReport::Bound::PlayerCount);
  CHECK(report.bound_value == Rat(3));
  CHECK(report.ratio == Rat(30, 11));
  CHECK(report.satisfied);
}

TEST_CASE("bound_check: truth profile satisfies every bound") {
  GameInstance instance = constant_max_instance(3);
  EfficiencyReport report =
      bound_check(instance, StrategyProfile(3, Strategy::truth()));
  CHECK(report.ratio == Rat(1));
  CHECK(report.satisfied);
}

TEST_CASE("bound_check: refused when the profile is not an equilibrium") {
  GameInstance instance = constant_max_instance(3);
  StrategyProfile profile(3, Strategy::scaling(Rat(2)));
  CHECK_THROWS_AS(bound_check(instance, profile),
                  EquilibriumPreconditionError);
}

TEST_CASE("undefined ratio is an error, not a silent zero") {
  AlternativeSet alts({"a1", "a2"});
  std::vector<std::vector<Valuation>> grids(2);
  grids[0].push_back(Valuation({Rat(0), Rat(0)}, true));
  grids[1].push_back(Valuation({Rat(0), Rat(0)}, true));
  GameInstance instance = make_instance(alts, {"p1", "p2"}, std::move(grids));
  StrategyProfile truth(2, Strategy::truth());
  ValuationProfile v{instance.family_grids[0][0], instance.family_grids[1][0]};
  CHECK_THROWS_AS(efficiency_ratio(instance, truth, truth, v),
                  std::domain_error);
  // the exhaustive scan propagates the error instead of skipping the profile
  CHECK_THROWS_AS(worst_case_ratio(instance, truth), std::domain_error);
}

TEST_CASE("efficiency ratio is never below 1 for truthful dominants") {
  GameInstance instance = constant_max_instance(3);
  StrategyProfile profile = constant_max_near_truth_profile(3);
  StrategyProfile truth(3, Strategy::truth());
  std::vector<std::size_t> digits(3, 0);
  while (true) {
    ValuationProfile v{instance.family_grids[0][digits[0]],
                       instance.family_grids[1][digits[1]],
                       instance.family_grids[2][digits[2]]};
    CHECK(!(efficiency_ratio(instance, truth, profile, v) < Rat(1)));
    std::size_t i = 3;
    while (i > 0) {
      if (++digits[i - 1] < instance.family_grids[i - 1].size()) break;
      digits[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
  }
}
