#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "vcglab/efficiency.hpp"
#include "vcglab/equilibrium.hpp"
#include "vcglab/generators.hpp"

using namespace vcg;
using vcgtest::full_grid_instance;
using vcgtest::unequal_maxima_fixture;
using vcgtest::UnequalMaximaFixture;

TEST_CASE("best response gap: player alone") {
  Valuation v({Rat(1), Rat(5), Rat(2)});
  CHECK(best_response_gap(v, {}, 1) == Rat(0));
  CHECK(best_response_gap(v, {}, 0) == Rat(4));
}

TEST_CASE("best response gap: example 5 announcements leave no slack") {
  GeneratedGame g = gen_example5(2, Rat(1, 10));
  const std::size_t grand1 = *g.instance.maxima[0];
  const AnnouncementProfile announced =
      apply_profile(g.profile, {g.instance.family_grids[0][0],
                                g.instance.family_grids[1][0]});
  for (std::size_t i = 0; i < 2; ++i) {
    AnnouncementProfile opponents;
    for (std::size_t j = 0; j < 2; ++j)
      if (j != i) opponents.push_back(announced[j]);
    CHECK(best_response_gap(g.instance.family_grids[i][0], opponents,
                            grand1) == Rat(0));
  }
}

TEST_CASE("best response gap: scaling doubles leave a strict gap") {
  Valuation v1({Rat(2), Rat(1), Rat(0)}, true);
  Valuation v2({Rat(0), Rat(1), Rat(2)}, true);
  AnnouncementProfile opponents{apply(Strategy::scaling(Rat(2)), v2)};
  // announced totals tie everywhere; at the tie alternative a1 the deviator
  // can force a3 instead
  CHECK(best_response_gap(v1, opponents, 0) == Rat(2));
}

TEST_CASE("truth telling passes on any instance") {
  GameInstance instance = full_grid_instance(2, 3);
  StrategyProfile truth(2, Strategy::truth());
  const EquilibriumVerdict verdict = is_expost_equilibrium(instance, truth);
  CHECK(verdict.pass);
  CHECK(verdict.cells_total == 27ull + 27ull + 27ull * 27ull);

  GameInstance empty = instance;
  empty.family_grids[1].clear();
  CHECK_THROWS_AS(is_expost_equilibrium(empty, truth),
                  std::invalid_argument);
}

TEST_CASE("near-truth over a maxima-covering subset passes") {
  GameInstance instance = constant_max_instance(3);
  StrategyProfile profile = constant_max_near_truth_profile(3);
  CHECK(is_expost_equilibrium(instance, profile).pass);
}

TEST_CASE("constant-shift strategies pass on the full grid") {
  // the positive direction of the full-family characterization: adding any
  // per-valuation constant f_i(v_i) to every alternative stays an
  // equilibrium, even when f depends on the valuation or goes negative
  GameInstance instance = full_grid_instance(2, 3);
  StrategyProfile profile{
      Strategy::shifted_truth(
          OffsetRule::custom([](const Valuation& v) { return v.at(0); })),
      Strategy::shifted_truth(OffsetRule::custom(
          [](const Valuation& v) { return -v.at(1) + Rat(1, 2); }))};
  CHECK(is_expost_equilibrium(instance, profile).pass);

  // a nearly-truth profile with an explicit floor strictly below the min is
  // still admissible and still passes on constant-maximum grids
  GameInstance cm = constant_max_instance(3);
  StrategyProfile low_floor(
      3, Strategy::nearly_truth(constant_max_aprime(3), OffsetRule::zero(),
                                FloorRule::of(Rat(-1))));
  CHECK(is_expost_equilibrium(cm, low_floor).pass);
}

TEST_CASE("scaling(2) fails on the full grid with a replayable witness") {
  GameInstance instance = full_grid_instance(2, 3);
  StrategyProfile profile(2, Strategy::scaling(Rat(2)));
  const EquilibriumVerdict verdict = is_expost_equilibrium(instance, profile);
  REQUIRE(!verdict.pass);
  REQUIRE(verdict.witness);
  CHECK(Rat(0) < verdict.witness->gap);
  CHECK(replay_witness(instance, profile, *verdict.witness));
  CHECK(deviation_cross_check(instance, profile, verdict, 1234));

  // h never changes the verdict
  GameInstance charged = instance;
  charged.h = {HSpec::clarke(), HSpec::constant(Rat(5, 2))};
  const EquilibriumVerdict verdict_h = is_expost_equilibrium(charged, profile);
  CHECK(verdict_h.pass == verdict.pass);
  CHECK(verdict_h.failure_ordinal == verdict.failure_ordinal);
}

TEST_CASE("worker count never changes the verdict or the witness") {
  GameInstance instance = full_grid_instance(2, 3);
  StrategyProfile profile(2, Strategy::scaling(Rat(2)));
  const EquilibriumVerdict serial = is_expost_equilibrium(instance, profile);
  const EquilibriumVerdict parallel =
      is_expost_equilibrium(instance, profile, {4});
  CHECK(serial.pass == parallel.pass);
  CHECK(serial.failure_ordinal == parallel.failure_ordinal);
  REQUIRE(parallel.witness);
  CHECK(serial.witness->subset == parallel.witness->subset);
  CHECK(serial.witness->grid_choice == parallel.witness->grid_choice);
  CHECK(serial.witness->chosen == parallel.witness->chosen);
  CHECK(serial.witness->deviator == parallel.witness->deviator);
  CHECK(serial.witness->gap == parallel.witness->gap);

  GameInstance good = constant_max_instance(3);
  StrategyProfile near = constant_max_near_truth_profile(3);
  CHECK(is_expost_equilibrium(good, near, {4}).pass);
}

TEST_CASE("status survives relabeling players and alternatives") {
  GameInstance instance = full_grid_instance(2, 3);
  StrategyProfile profile(2, Strategy::scaling(Rat(2)));
  const bool original = is_expost_equilibrium(instance, profile).pass;

  // permute the alternative order inside every table
  AlternativeSet permuted({"a3", "a1", "a2"});
  auto permute = [](const std::vector<Rat>& v) {
    return std::vector<Rat>{v[2], v[0], v[1]};
  };
  std::vector<std::vector<Valuation>> grids(2);
  for (std::size_t i = 0; i < 2; ++i)
    for (const Valuation& v : instance.family_grids[i])
      grids[i].push_back(Valuation(permute(v.values), true));
  GameInstance shuffled =
      make_instance(permuted, {"q2", "q1"}, std::move(grids));
  CHECK(is_expost_equilibrium(shuffled, profile).pass == original);
}

TEST_CASE("PASS survives grid restriction") {
  GameInstance instance = constant_max_instance(3);
  StrategyProfile profile = constant_max_near_truth_profile(3);
  REQUIRE(is_expost_equilibrium(instance, profile).pass);
  for (std::size_t player = 0; player < 3; ++player) {
    for (std::size_t drop = 0; drop < instance.family_grids[player].size();
         ++drop) {
      GameInstance restricted = instance;
      restricted.family_grids[player].erase(
          restricted.family_grids[player].begin() + drop);
      CHECK(is_expost_equilibrium(restricted, profile).pass);
    }
  }
}

TEST_CASE("shifted truth with per-alternative offsets fails") {
  GameInstance instance = full_grid_instance(2, 3);
  StrategyProfile profile = vcgtest::skewed_shift_profile(instance);
  const EquilibriumVerdict verdict = is_expost_equilibrium(instance, profile);
  REQUIRE(!verdict.pass);
  CHECK(replay_witness(instance, profile, *verdict.witness));
  CHECK(deviation_cross_check(instance, profile, verdict, 77));
}

TEST_CASE("near-truth offsets on maxima: constant cases") {
  GameInstance instance = constant_max_instance(3);

  StrategyProfile zero(3, Strategy::nearly_truth(constant_max_aprime(3),
                                                 OffsetRule::zero()));
  NearTruthReport r = verify_near_truth_on_maxima(instance, zero);
  CHECK(r.all_constant);
  for (const auto& e : r.entries)
    for (const Rat& offset : e.offsets) CHECK(offset == Rat(0));

  GeneratedGame plus_ten = gen_maxima_plus_ten(3);
  NearTruthReport r10 =
      verify_near_truth_on_maxima(plus_ten.instance, plus_ten.profile);
  CHECK(r10.all_constant);
  for (const auto& e : r10.entries)
    for (const Rat& offset : e.offsets) CHECK(offset == Rat(10));
}

TEST_CASE("unequal offsets on two maxima: report flags it, checker fails") {
  UnequalMaximaFixture f = unequal_maxima_fixture();
  NearTruthReport r = verify_near_truth_on_maxima(f.instance, f.profile);
  CHECK(!r.all_constant);

  const EquilibriumVerdict verdict =
      is_expost_equilibrium(f.instance, f.profile);
  REQUIRE(!verdict.pass);
  CHECK(replay_witness(f.instance, f.profile, *verdict.witness));

  LemmaReport lemmas = check_structural_lemmas(f.instance, f.profile);
  CHECK(lemmas.find("foreign-maxima-equal")->status == LemmaReport::Status::Fail);
}

TEST_CASE("extract_g: identity for truth and for near-truth") {
  const std::vector<Rat> grid{Rat(1, 2), Rat(1), Rat(3, 2), Rat(2), Rat(7)};

  SampledFunction g_truth = extract_g(Strategy::truth(), 4, 0, 2, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(g_truth.values[i] == grid[i]);

  // both alternatives inside A': the common offset cancels
  Strategy withf = Strategy::nearly_truth({0, 1, 2}, OffsetRule::of(Rat(5, 3)));
  SampledFunction g_in = extract_g(withf, 4, 0, 2, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(g_in.values[i] == grid[i]);

  // a in A', a' outside, f = 0, floor = min: the floor is 0 on Z valuations
  Strategy zero_f = Strategy::nearly_truth({0, 1}, OffsetRule::zero());
  SampledFunction g_out = extract_g(zero_f, 4, 0, 3, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    CHECK(g_out.values[i] == grid[i]);
}

TEST_CASE("mve pair: equilibrium extractions pass, crafted pair fails") {
  const std::vector<Rat> grid{Rat(1), Rat(2), Rat(3)};
  StrategyProfile near = constant_max_near_truth_profile(2);
  // two-player pair g1^(a,a') and g2^(a',a) for the players' maxima
  SampledFunction g1 = extract_g(near[0], 4, 0, 1, grid);
  SampledFunction g2 = extract_g(near[1], 4, 1, 0, grid);
  CHECK(check_mve_pair(g1, g2).pass);

  SampledFunction bad1({Rat(1), Rat(2), Rat(3)}, {Rat(3), Rat(2), Rat(3)});
  SampledFunction bad2({Rat(1), Rat(2), Rat(3)}, {Rat(1), Rat(2), Rat(3)});
  MveResult r = check_mve_pair(bad1, bad2);
  REQUIRE(!r.pass);
  CHECK(r.counterexample->s == Rat(1));
  CHECK(r.counterexample->t == Rat(2));
  CHECK(r.counterexample->y == Rat(2));
}

TEST_CASE("structural lemmas: truth passes everything applicable") {
  GameInstance instance = constant_max_instance(3);
  LemmaReport report =
      check_structural_lemmas(instance, StrategyProfile(3, Strategy::truth()));
  for (const char* lemma : {"strict-max-bid", "equal-values-equal-bids", "z-spread-full-family", "foreign-maxima-equal", "maxima-bids-dominate", "z-spread-own-maximum"})
    CHECK(report.passes(lemma));
}

TEST_CASE("structural lemmas: near-truth on constant-maximum grids") {
  GameInstance instance = constant_max_instance(3);
  StrategyProfile profile = constant_max_near_truth_profile(3);
  LemmaReport report = check_structural_lemmas(instance, profile);
  for (const char* lemma : {"strict-max-bid", "foreign-maxima-equal", "maxima-bids-dominate", "z-spread-own-maximum"}) CHECK(report.passes(lemma));
  // the equal-values property legitimately fails at grid level: it
  // presumes the full family
  CHECK(report.find("equal-values-equal-bids")->status == LemmaReport::Status::Fail);
}

TEST_CASE("structural lemmas: missing probes are reported") {
  AlternativeSet alts({"a1", "a2", "a3"});
  std::vector<std::vector<Valuation>> grids(3);
  for (std::size_t i = 0; i < 3; ++i)
    grids[i].push_back(Valuation({Rat(1), Rat(1), Rat(1)}, true));
  GameInstance instance = make_instance(
      alts, {"p1", "p2", "p3"}, std::move(grids),
      {std::size_t{0}, std::size_t{1}, std::size_t{2}});
  LemmaReport report =
      check_structural_lemmas(instance, StrategyProfile(3, Strategy::truth()));
  CHECK(report.find("z-spread-own-maximum")->status == LemmaReport::Status::MissingProbe);
  CHECK(report.find("z-spread-full-family")->status == LemmaReport::Status::MissingProbe);
}

TEST_CASE("bid differences match the extracted g samples") {
  // for near-truth strategies, b(v)(a) - b(v)(a') equals g^{(a,a')} at
  // s = v(a) - v(a') whenever a is the valuation's maximum and both sit in A'.
  GameInstance instance = constant_max_instance(3);
  StrategyProfile profile = constant_max_near_truth_profile(3);
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t a = *instance.maxima[i];
    for (const Valuation& v : instance.family_grids[i]) {
      const Announcement b = apply(profile[i], v);
      for (std::size_t ap = 0; ap <= 3; ++ap) {  // A' members
        if (ap == a) continue;
        const Rat s = v.at(a) - v.at(ap);
        if (!(Rat(0) < s)) continue;
        SampledFunction g = extract_g(profile[i], instance.alternatives.size(),
                                      a, ap, std::vector<Rat>{s});
        CHECK(b.at(a) - b.at(ap) == g.values[0]);
      }
    }
  }
}

TEST_CASE("randomized deviations agree with the verdict on PASS instances") {
  GameInstance instance = constant_max_instance(3);
  StrategyProfile profile = constant_max_near_truth_profile(3);
  const EquilibriumVerdict verdict = is_expost_equilibrium(instance, profile);
  REQUIRE(verdict.pass);
  CHECK(deviation_cross_check(instance, profile, verdict, 98765));
}

namespace {

// Independent oracle: play deviations literally through utility()/choose().
// For every non-empty subset, grid profile, and tie-break permutation, try
// every "force alternative a'" deviation (a huge bid on a', a huge negative
// bid elsewhere) and report whether any strictly improves. For fixed
// opponents these deviations attain every achievable utility level, so the
// oracle decides the same predicate as the checker by a different route.
bool oracle_is_equilibrium(const GameInstance& instance,
                           const StrategyProfile& profile) {
  const std::size_t n = instance.num_players();
  const std::size_t n_alts = instance.alternatives.size();
  std::vector<std::vector<std::size_t>> orders;
  {
    std::vector<std::size_t> order(n_alts);
    for (std::size_t a = 0; a < n_alts; ++a) order[a] = a;
    do {
      orders.push_back(order);
    } while (std::next_permutation(order.begin(), order.end()));
  }
  const Rat huge(1000000);

  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> subset;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1) subset.push_back(i);
    std::vector<std::size_t> digits(subset.size(), 0);
    while (true) {
      ValuationProfile vs;
      for (std::size_t k = 0; k < subset.size(); ++k)
        vs.push_back(instance.family_grids[subset[k]][digits[k]]);
      AnnouncementProfile announced;
      for (std::size_t k = 0; k < subset.size(); ++k)
        announced.push_back(apply(profile[subset[k]], vs[k]));

      for (const auto& order : orders) {
        const auto policy = TieBreakPolicy::priority(order);
        for (std::size_t k = 0; k < subset.size(); ++k) {
          const Rat u_orig =
              utility(k, vs[k], announced, HSpec::zero(), policy);
          for (std::size_t target = 0; target < n_alts; ++target) {
            AnnouncementProfile deviated = announced;
            for (std::size_t a = 0; a < n_alts; ++a)
              deviated[k].values[a] = a == target ? huge : -huge;
            const Rat u_dev =
                utility(k, vs[k], deviated, HSpec::zero(), policy);
            if (u_orig < u_dev) return false;
          }
        }
      }

      std::size_t i = subset.size();
      while (i > 0) {
        if (++digits[i - 1] <
            instance.family_grids[subset[i - 1]].size())
          break;
        digits[i - 1] = 0;
        --i;
      }
      if (i == 0) break;
    }
  }
  return true;
}

GameInstance random_small_instance(std::mt19937& rng) {
  std::uniform_int_distribution<std::int64_t> num(0, 4);
  std::uniform_int_distribution<std::int64_t> den(1, 2);
  std::vector<std::vector<Valuation>> grids(2);
  for (auto& grid : grids)
    for (int v = 0; v < 2; ++v)
      grid.push_back(Valuation({Rat(num(rng), den(rng)),
                                Rat(num(rng), den(rng)),
                                Rat(num(rng), den(rng))},
                               true));
  return make_instance(AlternativeSet({"a1", "a2", "a3"}), {"p1", "p2"},
                       std::move(grids));
}

StrategyProfile random_table_profile(const GameInstance& instance,
                                     std::mt19937& rng) {
  std::uniform_int_distribution<std::int64_t> num(-2, 4);
  std::uniform_int_distribution<std::int64_t> den(1, 2);
  StrategyProfile profile;
  for (std::size_t i = 0; i < instance.num_players(); ++i) {
    std::vector<std::pair<std::vector<Rat>, std::vector<Rat>>> rows;
    for (const Valuation& v : instance.family_grids[i])
      rows.emplace_back(v.values,
                        std::vector<Rat>{Rat(num(rng), den(rng)),
                                         Rat(num(rng), den(rng)),
                                         Rat(num(rng), den(rng))});
    profile.push_back(Strategy::table_of(std::move(rows)));
  }
  return profile;
}

}  // namespace

TEST_CASE("checker agrees with the literal deviation-play oracle") {
  // fixed profiles first
  GameInstance near_instance = constant_max_instance(2);
  StrategyProfile near = constant_max_near_truth_profile(2);
  CHECK(is_expost_equilibrium(near_instance, near).pass ==
        oracle_is_equilibrium(near_instance, near));

  std::mt19937 rng(271828);
  int fails_seen = 0;
  int passes_seen = 0;
  for (int trial = 0; trial < 40; ++trial) {
    GameInstance instance = random_small_instance(rng);
    StrategyProfile truth(2, Strategy::truth());
    CHECK(oracle_is_equilibrium(instance, truth));
    CHECK(is_expost_equilibrium(instance, truth).pass);

    StrategyProfile tables = random_table_profile(instance, rng);
    const bool checker = is_expost_equilibrium(instance, tables).pass;
    const bool oracle = oracle_is_equilibrium(instance, tables);
    CHECK(checker == oracle);
    (checker ? passes_seen : fails_seen)++;
  }
  // the random stream should exercise both outcomes
  CHECK(fails_seen > 0);
}
