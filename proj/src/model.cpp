#include "vcglab/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace vcg {

AlternativeSet::AlternativeSet(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  if (labels_.empty())
    throw std::invalid_argument("alternative set must be non-empty");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    auto [it, inserted] = index_.emplace(labels_[i], i);
    if (!inserted)
      throw std::invalid_argument("duplicate alternative label '" +
                                  labels_[i] + "'");
  }
}

std::optional<std::size_t> AlternativeSet::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t AlternativeSet::index_of(std::string_view label) const {
  auto idx = find(label);
  if (!idx)
    throw std::out_of_range("unknown alternative label '" +
                            std::string(label) + "'");
  return *idx;
}

Valuation::Valuation(std::vector<Rat> v, bool require_non_negative)
    : values(std::move(v)), non_negative(require_non_negative) {
  if (non_negative)
    for (const Rat& x : values)
      if (x.is_negative())
        throw std::invalid_argument(
            "negative value in a non-negative valuation");
}

Valuation make_z_valuation(std::size_t num_alternatives, std::size_t peak,
                           const Rat& height) {
  if (!(Rat(0) < height))
    throw std::invalid_argument("Z valuation height must be positive");
  if (peak >= num_alternatives)
    throw std::out_of_range("Z valuation peak out of range");
  std::vector<Rat> values(num_alternatives, Rat(0));
  values[peak] = height;
  return Valuation(std::move(values), /*require_non_negative=*/true);
}

std::optional<ZValuation> as_z_valuation(const Valuation& v) {
  std::optional<ZValuation> z;
  for (std::size_t a = 0; a < v.size(); ++a) {
    const Rat& x = v.at(a);
    if (x.is_zero()) continue;
    if (x.is_negative() || z) return std::nullopt;
    z = ZValuation{a, x};
  }
  return z;
}

TieBreakPolicy TieBreakPolicy::priority(std::vector<std::size_t> order) {
  if (order.empty())
    throw std::invalid_argument("priority order must be non-empty");
  std::vector<bool> seen(order.size(), false);
  for (std::size_t a : order) {
    if (a >= order.size() || seen[a])
      throw std::invalid_argument(
          "priority order must be a permutation of the alternatives");
    seen[a] = true;
  }
  TieBreakPolicy p;
  p.order_ = std::move(order);
  return p;
}

const std::vector<std::size_t>& TieBreakPolicy::order() const {
  if (is_all_orders())
    throw std::logic_error("policy quantifies over all orders");
  return order_;
}

Rat HSpec::charge(const AnnouncementProfile& announced,
                  std::size_t self) const {
  switch (kind_) {
    case Kind::Zero:
      return Rat(0);
    case Kind::Constant:
      return constant_;
    case Kind::Clarke: {
      if (announced.size() < 2) return Rat(0);
      const std::size_t n_alts = announced.front().size();
      Rat best;
      bool first = true;
      for (std::size_t a = 0; a < n_alts; ++a) {
        Rat sum;
        for (std::size_t j = 0; j < announced.size(); ++j)
          if (j != self) sum += announced[j].at(a);
        if (first || best < sum) {
          best = sum;
          first = false;
        }
      }
      return best;
    }
    case Kind::Custom:
      return fn_(announced, self);
  }
  throw std::logic_error("unreachable");
}

void GameInstance::validate() const {
  const std::size_t n = num_players();
  const std::size_t n_alts = alternatives.size();
  if (n == 0) throw std::invalid_argument("instance has no players");
  if (family_grids.size() != n)
    throw std::invalid_argument("one valuation grid required per player");
  if (!h.empty() && h.size() != n)
    throw std::invalid_argument("hSpec must cover every player");
  if (!maxima.empty() && maxima.size() != n)
    throw std::invalid_argument("maxima must cover every player");
  for (std::size_t i = 0; i < n; ++i) {
    for (const Valuation& v : family_grids[i]) {
      if (v.size() != n_alts)
        throw std::invalid_argument("valuation for player " + player_names[i] +
                                    " does not cover the alternative set");
      if (!maxima.empty() && maxima[i]) {
        const Rat& top = v.at(*maxima[i]);
        for (std::size_t a = 0; a < n_alts; ++a) {
          if (v.at(a).is_negative())
            throw std::invalid_argument(
                "constant-maximum families are non-negative; player " +
                player_names[i] + " has a negative value");
          if (top < v.at(a))
            throw std::invalid_argument(
                "player " + player_names[i] + " valuation exceeds its " +
                "declared maximum at " + alternatives.label(a));
        }
      }
    }
  }
}

GameInstance make_instance(AlternativeSet alternatives,
                           std::vector<std::string> player_names,
                           std::vector<std::vector<Valuation>> family_grids,
                           std::vector<std::optional<std::size_t>> maxima) {
  GameInstance g{std::move(alternatives), std::move(player_names),
                 std::move(family_grids), {}, std::move(maxima)};
  g.h.assign(g.num_players(), HSpec::zero());
  if (g.maxima.empty()) g.maxima.assign(g.num_players(), std::nullopt);
  g.validate();
  return g;
}

namespace {

template <typename Profile>
Rat welfare_at(const Profile& profile, std::size_t a) {
  Rat sum;
  for (const auto& p : profile) sum += p.at(a);
  return sum;
}

}  // namespace

Rat social_welfare(const AnnouncementProfile& profile, std::size_t a) {
  return welfare_at(profile, a);
}

Rat social_welfare(const ValuationProfile& profile, std::size_t a) {
  return welfare_at(profile, a);
}

Rat social_welfare(const AnnouncementProfile& profile,
                   const AlternativeSet& alternatives,
                   std::string_view label) {
  return welfare_at(profile, alternatives.index_of(label));
}

std::vector<std::size_t> welfare_maximizers(
    const AnnouncementProfile& profile) {
  if (profile.empty()) throw std::invalid_argument("empty profile");
  const std::size_t n_alts = profile.front().size();
  if (n_alts == 0) throw std::invalid_argument("empty alternative set");
  std::vector<std::size_t> best;
  Rat best_welfare;
  for (std::size_t a = 0; a < n_alts; ++a) {
    Rat w = welfare_at(profile, a);
    if (best.empty() || best_welfare < w) {
      best_welfare = w;
      best.assign(1, a);
    } else if (w == best_welfare) {
      best.push_back(a);
    }
  }
  return best;
}

std::size_t choose(const TieBreakPolicy& policy,
                   const AnnouncementProfile& profile) {
  std::vector<std::size_t> maxers = welfare_maximizers(profile);
  for (std::size_t a : policy.order())
    if (std::find(maxers.begin(), maxers.end(), a) != maxers.end()) return a;
  throw std::logic_error("priority order misses every maximizer");
}

Rat utility(std::size_t i, const Valuation& true_valuation,
            const AnnouncementProfile& announced, const HSpec& h_i,
            const TieBreakPolicy& policy) {
  const std::size_t chosen = choose(policy, announced);
  Rat u = true_valuation.at(chosen);
  for (std::size_t j = 0; j < announced.size(); ++j)
    if (j != i) u += announced[j].at(chosen);
  return u - h_i.charge(announced, i);
}

}  // namespace vcg
