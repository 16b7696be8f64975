#include "vcglab/strategy.hpp"

#include <algorithm>
#include <stdexcept>

namespace vcg {

Strategy Strategy::truth() { return Strategy{}; }

Strategy Strategy::shifted_truth(OffsetRule f) {
  Strategy s;
  s.kind = Kind::ShiftedTruth;
  s.offset = std::move(f);
  return s;
}

Strategy Strategy::nearly_truth(std::vector<std::size_t> subset, OffsetRule f,
                                FloorRule floor) {
  if (subset.empty())
    throw std::invalid_argument("nearly-truth subset A' must be non-empty");
  Strategy s;
  s.kind = Kind::NearlyTruth;
  s.subset = std::move(subset);
  s.offset = std::move(f);
  s.floor = floor;
  return s;
}

Strategy Strategy::scaling(Rat factor) {
  Strategy s;
  s.kind = Kind::Scaling;
  s.factor = factor;
  return s;
}

Strategy Strategy::table_of(
    std::vector<std::pair<std::vector<Rat>, std::vector<Rat>>> rows) {
  Strategy s;
  s.kind = Kind::Table;
  s.table = std::move(rows);
  return s;
}

Strategy Strategy::bundle_remap(std::vector<std::size_t> remap,
                                std::vector<std::size_t> induced_subset,
                                std::size_t reported_count) {
  Strategy s;
  s.kind = Kind::Bundling;
  s.remap = std::move(remap);
  s.subset = std::move(induced_subset);
  s.reported_count = reported_count;
  return s;
}

Strategy Strategy::maxima_shift(std::vector<std::size_t> maxima, Rat shift,
                                std::vector<Rat> off_values) {
  if (maxima.empty())
    throw std::invalid_argument("maxima list must be non-empty");
  Strategy s;
  s.kind = Kind::MaximaShift;
  s.maxima = std::move(maxima);
  s.shift = shift;
  s.off_values = std::move(off_values);
  return s;
}

Strategy make_maxima_plus_ten(std::vector<std::size_t> maxima,
                              std::vector<Rat> off_values) {
  Strategy s =
      Strategy::maxima_shift(std::move(maxima), Rat(10), std::move(off_values));
  for (std::size_t a = 0; a < s.off_values.size(); ++a) {
    if (std::find(s.maxima.begin(), s.maxima.end(), a) != s.maxima.end())
      continue;
    const Rat& x = s.off_values[a];
    if (x < Rat(0) || Rat(9) < x)
      throw std::invalid_argument(
          "off-maxima announcements must lie in [0, 9]");
  }
  return s;
}

namespace {

Announcement apply_nearly_truth(const Strategy& s, const Valuation& v) {
  const Rat f = s.offset.eval(v);
  bool have_min = false;
  Rat min_on_subset;
  Announcement b;
  b.values.assign(v.size(), Rat(0));
  for (std::size_t a : s.subset) {
    b.values.at(a) = v.at(a) + f;
    if (!have_min || b.values[a] < min_on_subset) {
      min_on_subset = b.values[a];
      have_min = true;
    }
  }
  Rat floor = min_on_subset;
  if (!s.floor.use_min) {
    if (min_on_subset < s.floor.constant)
      throw std::invalid_argument(
          "floor constant " + s.floor.constant.str() +
          " exceeds the announcement's min over A' (" + min_on_subset.str() +
          ")");
    floor = s.floor.constant;
  }
  for (std::size_t a = 0; a < v.size(); ++a)
    if (std::find(s.subset.begin(), s.subset.end(), a) == s.subset.end())
      b.values[a] = floor;
  return b;
}

}  // namespace

Announcement apply(const Strategy& s, const Valuation& v) {
  Announcement b;
  switch (s.kind) {
    case Strategy::Kind::Truth:
      b.values = v.values;
      return b;
    case Strategy::Kind::ShiftedTruth: {
      const Rat f = s.offset.eval(v);
      b.values.reserve(v.size());
      for (const Rat& x : v.values) b.values.push_back(x + f);
      return b;
    }
    case Strategy::Kind::NearlyTruth:
      return apply_nearly_truth(s, v);
    case Strategy::Kind::Scaling:
      b.values.reserve(v.size());
      for (const Rat& x : v.values) b.values.push_back(s.factor * x);
      return b;
    case Strategy::Kind::Table:
      for (const auto& [key, announcement] : s.table)
        if (key == v.values) {
          b.values = announcement;
          return b;
        }
      throw std::out_of_range("valuation not covered by the table strategy");
    case Strategy::Kind::Bundling:
      b.values.reserve(s.remap.size());
      for (std::size_t source : s.remap) b.values.push_back(v.at(source));
      return b;
    case Strategy::Kind::MaximaShift: {
      if (s.off_values.size() != v.size())
        throw std::invalid_argument(
            "maxima-shift off values do not cover the alternative set");
      b.values = s.off_values;
      for (std::size_t a : s.maxima) b.values.at(a) = v.at(a) + s.shift;
      return b;
    }
  }
  throw std::logic_error("unreachable");
}

std::size_t communication_cost(const Strategy& s,
                               std::size_t num_alternatives) {
  switch (s.kind) {
    case Strategy::Kind::NearlyTruth:
      return s.subset.size() + 1;
    case Strategy::Kind::Bundling:
      return s.reported_count;
    default:
      return num_alternatives;
  }
}

AnnouncementProfile apply_profile(const StrategyProfile& profile,
                                  const ValuationProfile& valuations) {
  if (profile.size() != valuations.size())
    throw std::invalid_argument("profile / valuation size mismatch");
  AnnouncementProfile out;
  out.reserve(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i)
    out.push_back(apply(profile[i], valuations[i]));
  return out;
}

}  // namespace vcg
