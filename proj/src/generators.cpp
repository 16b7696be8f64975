#include "vcglab/generators.hpp"

namespace vcg {

std::vector<std::size_t> constant_max_aprime(std::size_t n) {
  std::vector<std::size_t> aprime;
  for (std::size_t a = 0; a <= n; ++a) aprime.push_back(a);
  return aprime;
}

GameInstance constant_max_instance(std::size_t n) {
  if (n < 1) throw std::invalid_argument("at least one player required");
  const std::size_t n_alts = n + 2;
  std::vector<std::string> labels;
  for (std::size_t a = 0; a < n_alts; ++a)
    labels.push_back("a" + std::to_string(a + 1));
  AlternativeSet alternatives(std::move(labels));

  std::vector<std::string> players;
  std::vector<std::vector<Valuation>> grids(n);
  std::vector<std::optional<std::size_t>> maxima(n);
  const Rat half(1, 2);
  for (std::size_t i = 0; i < n; ++i) {
    players.push_back("p" + std::to_string(i + 1));
    maxima[i] = i;
    grids[i].push_back(make_z_valuation(n_alts, i, Rat(2)));

    std::vector<Rat> b(n_alts, Rat(0));
    b[i] = Rat(2);
    if (n > 1) b[(i + 1) % n] = Rat(1);
    b[n] = half;            // inside A'
    b[n + 1] = Rat(1);      // outside A'
    grids[i].push_back(Valuation(std::move(b), true));

    std::vector<Rat> c(n_alts, Rat(0));
    c[i] = Rat(1);
    if (n > 2) c[(i + 2) % n] = half;
    grids[i].push_back(Valuation(std::move(c), true));
  }
  return make_instance(std::move(alternatives), std::move(players),
                       std::move(grids), std::move(maxima));
}

StrategyProfile constant_max_near_truth_profile(std::size_t n) {
  const std::vector<std::size_t> aprime = constant_max_aprime(n);
  const Rat offsets[3] = {Rat(0), Rat(1, 2), Rat(-1, 2)};
  StrategyProfile profile;
  for (std::size_t i = 0; i < n; ++i)
    profile.push_back(
        Strategy::nearly_truth(aprime, OffsetRule::of(offsets[i % 3])));
  return profile;
}

GeneratedGame gen_maxima_plus_ten(std::size_t n) {
  GameInstance instance = constant_max_instance(n);
  const std::size_t n_alts = instance.alternatives.size();
  std::vector<std::size_t> maxima;
  for (const auto& m : instance.maxima) maxima.push_back(*m);

  StrategyProfile profile;
  const Rat choices[3] = {Rat(5), Rat(9, 2), Rat(0)};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rat> off(n_alts, Rat(0));
    off[n] = choices[i % 3];
    off[n + 1] = Rat(9) - choices[i % 3];
    profile.push_back(make_maxima_plus_ten(maxima, std::move(off)));
  }
  return GeneratedGame{std::move(instance), std::move(profile)};
}

Vickrey2Output gen_vickrey2() {
  AuctionSpace space = enumerate_allocations(GoodsSet({"A", "B"}), 2);
  const Bundle A = space.parse_bundle("A");
  const Bundle B = space.parse_bundle("B");
  const Bundle grand = space.grand_bundle();

  // Monotone, no-externality bundle values (empty bundle worth 0):
  // (v(A), v(B), v(AB)) triples.
  auto table = [&](std::int64_t a, std::int64_t b, std::int64_t ab) {
    BundleTable t(4, Rat(0));
    t[A] = Rat(a);
    t[B] = Rat(b);
    t[grand] = Rat(ab);
    return t;
  };
  std::vector<std::vector<BundleTable>> tables(2);
  tables[0] = {table(0, 0, 0), table(1, 0, 1), table(1, 1, 2),
               table(2, 1, 2)};
  tables[1] = {table(0, 0, 0), table(0, 1, 1), table(1, 1, 2),
               table(1, 2, 3)};

  std::vector<std::vector<Valuation>> grids(2);
  std::vector<std::optional<std::size_t>> maxima(2);
  for (std::size_t i = 0; i < 2; ++i) {
    for (const BundleTable& t : tables[i]) {
      if (!is_monotone(t, space.num_goods()))
        throw std::logic_error("vickrey2 tables must be monotone");
      grids[i].push_back(valuation_from_bundles(space, i, t));
    }
    maxima[i] = space.exclusive_allocation(i, grand);
  }

  GameInstance instance = make_instance(space.alternatives(), {"p1", "p2"},
                                        std::move(grids), std::move(maxima));
  std::vector<std::vector<Bundle>> reported{{A, grand}, {B, grand}};
  StrategyProfile profile{bundle_report_strategy(space, 0, reported[0]),
                          bundle_report_strategy(space, 1, reported[1])};
  return Vickrey2Output{std::move(space), std::move(instance),
                        std::move(profile), std::move(tables),
                        std::move(reported)};
}

}  // namespace vcg
