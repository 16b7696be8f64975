#pragma once

// Instance builders shared between the unit tests and the acceptance suite.

#include "vcglab/equilibrium.hpp"
#include "vcglab/generators.hpp"
#include "vcglab/model.hpp"
#include "vcglab/strategy.hpp"

namespace vcgtest {

using namespace vcg;

/// Full non-negative sample: every valuation with values in {0, 1, 2}.
inline GameInstance full_grid_instance(std::size_t players,
                                       std::size_t n_alts) {
  std::vector<std::string> labels;
  for (std::size_t a = 0; a < n_alts; ++a)
    labels.push_back("a" + std::to_string(a + 1));
  std::vector<Valuation> grid;
  const std::vector<Rat> levels{Rat(0), Rat(1), Rat(2)};
  std::vector<std::size_t> digits(n_alts, 0);
  while (true) {
    std::vector<Rat> values;
    for (std::size_t a = 0; a < n_alts; ++a)
      values.push_back(levels[digits[a]]);
    grid.push_back(Valuation(std::move(values), true));
    std::size_t i = n_alts;
    while (i > 0) {
      if (++digits[i - 1] < levels.size()) break;
      digits[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
  }
  std::vector<std::string> names;
  std::vector<std::vector<Valuation>> grids;
  for (std::size_t p = 0; p < players; ++p) {
    names.push_back("p" + std::to_string(p + 1));
    grids.push_back(grid);
  }
  return make_instance(AlternativeSet(std::move(labels)), std::move(names),
                       std::move(grids));
}

/// b(v) = v + (0, 1, 0, ...): a per-alternative offset, expressible only as
/// table data. Not nearly truth telling, so the checker must reject it.
inline StrategyProfile skewed_shift_profile(const GameInstance& instance) {
  std::vector<std::pair<std::vector<Rat>, std::vector<Rat>>> rows;
  for (const Valuation& v : instance.family_grids[0]) {
    std::vector<Rat> out = v.values;
    out[1] += Rat(1);
    rows.emplace_back(v.values, out);
  }
  return StrategyProfile(instance.num_players(), Strategy::table_of(rows));
}

/// Three-player constant-maximum instance whose table strategy bids unequal
/// offsets (10 vs 11) on two foreign maxima; player 3's grid carries the
/// probing valuation (two nearly-equal high values straddling the bid gap,
/// kept inside its constant-maximum family) that exposes the deviation.
struct UnequalMaximaFixture {
  GameInstance instance;
  StrategyProfile profile;
};

inline UnequalMaximaFixture unequal_maxima_fixture() {
  AlternativeSet alts({"a1", "a2", "a3"});
  std::vector<std::vector<Valuation>> grids(3);
  grids[0].push_back(make_z_valuation(3, 0, Rat(2)));
  grids[1].push_back(make_z_valuation(3, 1, Rat(2)));
  grids[2].push_back(make_z_valuation(3, 2, Rat(2)));
  grids[2].push_back(Valuation({Rat(0), Rat(36), Rat(73, 2)}, true));
  std::vector<std::optional<std::size_t>> maxima{std::size_t{0},
                                                 std::size_t{1},
                                                 std::size_t{2}};
  GameInstance instance = make_instance(alts, {"p1", "p2", "p3"},
                                        std::move(grids), std::move(maxima));
  StrategyProfile profile{
      Strategy::table_of({{{Rat(2), Rat(0), Rat(0)},
                           {Rat(12), Rat(11), Rat(10)}}}),
      Strategy::truth(), Strategy::truth()};
  return {std::move(instance), std::move(profile)};
}

/// Homogeneous sample: n=3 players, 4 alternatives, maxima a1/a2/a3, all
/// values in {1, 3/2, 2}. Hand-computed homogeneity sup: 3*2/(2+1+1) = 3/2,
/// so the family is homogeneous of degree 2.
inline GameInstance homogeneous_instance() {
  AlternativeSet alts({"a1", "a2", "a3", "a4"});
  std::vector<std::vector<Valuation>> grids(3);
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<Rat> v1(4, Rat(1));
    v1[i] = Rat(2);
    v1[3] = Rat(2);
    grids[i].push_back(Valuation(std::move(v1), true));
    std::vector<Rat> v2(4, Rat(3, 2));
    v2[i] = Rat(2);
    v2[3] = Rat(1);
    grids[i].push_back(Valuation(std::move(v2), true));
    std::vector<Rat> v3(4, Rat(1));
    v3[i] = Rat(3, 2);
    v3[3] = Rat(3, 2);
    grids[i].push_back(Valuation(std::move(v3), true));
  }
  return make_instance(alts, {"p1", "p2", "p3"}, std::move(grids),
                       {std::size_t{0}, std::size_t{1}, std::size_t{2}});
}

/// Compatible sample of degree 2: only players 1 and 2 ever value a4, and
/// the equilibrium restricted to {a1,a2,a3} leaves the a4 welfare unclaimed.
inline GameInstance compatible_instance() {
  AlternativeSet alts({"a1", "a2", "a3", "a4"});
  std::vector<std::vector<Valuation>> grids(3);
  grids[0].push_back(Valuation({Rat(1), Rat(0), Rat(0), Rat(1)}, true));
  grids[0].push_back(Valuation({Rat(2), Rat(0), Rat(0), Rat(1)}, true));
  grids[1].push_back(Valuation({Rat(0), Rat(1), Rat(0), Rat(1)}, true));
  grids[1].push_back(Valuation({Rat(0), Rat(2), Rat(0), Rat(1)}, true));
  grids[2].push_back(Valuation({Rat(0), Rat(0), Rat(1, 2), Rat(0)}, true));
  return make_instance(alts, {"p1", "p2", "p3"}, std::move(grids),
                       {std::size_t{0}, std::size_t{1}, std::size_t{2}});
}

inline StrategyProfile three_maxima_near_truth() {
  return StrategyProfile(
      3, Strategy::nearly_truth({0, 1, 2}, OffsetRule::zero()));
}

}  // namespace vcgtest
