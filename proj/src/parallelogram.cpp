#include "vcglab/parallelogram.hpp"

#include <algorithm>
#include <set>

namespace vcg {

void SignedDecomposition::validate() const {
  if (signs.size() != segments.size())
    throw std::invalid_argument("one sign required per segment");
  std::set<Rat> shared;
  for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
    const Segment& cur = segments[i];
    const Segment& next = segments[i + 1];
    if (!(cur.lower < next.lower))
      throw std::invalid_argument("segments must be sorted by lower endpoint");
    if (next.lower < cur.upper)
      throw std::invalid_argument("segments overlap");
    if (cur.upper == next.lower) {
      if (signs[i] == signs[i + 1])
        throw std::invalid_argument(
            "segments sharing an endpoint must carry opposite signs");
      shared.insert(cur.upper);
    }
  }
  for (const auto& [t, value] : endpoint_choices) {
    if (!shared.count(t))
      throw std::invalid_argument("endpoint choice at " + t.str() +
                                  " does not match a shared endpoint");
  }
  for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
    if (segments[i].upper != segments[i + 1].lower) continue;
    const Rat& t = segments[i].upper;
    auto it = endpoint_choices.find(t);
    if (it == endpoint_choices.end())
      throw std::invalid_argument("missing endpoint choice at " + t.str());
    if (it->second != segments[i].lower && it->second != segments[i + 1].upper)
      throw std::invalid_argument(
          "endpoint choice at " + t.str() +
          " must be the left segment's lower or the right segment's upper");
  }
}

std::optional<std::size_t> SignedDecomposition::segment_containing(
    const Rat& x) const {
  for (std::size_t i = 0; i < segments.size(); ++i)
    if (segments[i].contains(x)) return i;
  return std::nullopt;
}

std::optional<std::size_t> SignedDecomposition::closure_containing(
    const Rat& x) const {
  for (std::size_t i = 0; i < segments.size(); ++i)
    if (!(x < segments[i].lower) && !(segments[i].upper < x)) return i;
  return std::nullopt;
}

bool SignedDecomposition::is_shared_endpoint(const Rat& x) const {
  for (std::size_t i = 0; i + 1 < segments.size(); ++i)
    if (segments[i].upper == x && segments[i + 1].lower == x) return true;
  return false;
}

Rat IntervalMapFunction::operator()(const Rat& x) const {
  if (x.is_negative())
    throw std::domain_error("interval-map functions live on R+");
  const SignedDecomposition& d = *decomposition_;
  for (std::size_t i = 0; i + 1 < d.segments.size(); ++i) {
    if (d.segments[i].upper != x || d.segments[i + 1].lower != x) continue;
    // Conditions 6-7: one function is pinned to the shared endpoint, the
    // other takes the recorded choice.
    const bool first_pinned = d.signs[i] == Sign::Plus;
    if ((role_ == 1) == first_pinned) return x;
    return d.endpoint_choices.at(x);
  }
  if (auto i = d.closure_containing(x)) {
    // Conditions 2-5: on the closure of a segment the pair snaps to the
    // segment endpoints according to the sign.
    const Segment& seg = d.segments[*i];
    const bool first_high = d.signs[*i] == Sign::Plus;
    if ((role_ == 1) == first_high) return seg.upper;
    return seg.lower;
  }
  return x;  // condition 1
}

std::vector<Rat> IntervalMapFunction::breakpoints() const {
  std::vector<Rat> pts;
  for (const Segment& seg : decomposition_->segments) {
    pts.push_back(seg.lower);
    pts.push_back(seg.upper);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

std::pair<IntervalMapFunction, IntervalMapFunction> build_compatible_pair(
    SignedDecomposition d) {
  d.validate();
  auto shared = std::make_shared<const SignedDecomposition>(std::move(d));
  return {IntervalMapFunction(shared, 1), IntervalMapFunction(shared, 2)};
}

SampledFunction::SampledFunction(std::vector<Rat> g, std::vector<Rat> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (grid.size() != values.size())
    throw std::invalid_argument("sample grid/value size mismatch");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i] < grid[i + 1]))
      throw std::invalid_argument("sample grid must be strictly increasing");
  if (!grid.empty() && grid.front().is_negative())
    throw std::invalid_argument("sample grid must be non-negative");
}

SampledFunction SampledFunction::sample(
    const std::function<Rat(const Rat&)>& f, std::span<const Rat> grid) {
  std::vector<Rat> g(grid.begin(), grid.end());
  std::vector<Rat> v;
  v.reserve(g.size());
  for (const Rat& x : g) v.push_back(f(x));
  return SampledFunction(std::move(g), std::move(v));
}

namespace {

// One direction of the exclusion: y = other(t) must avoid the closed span
// between s and self(s).
std::optional<MveCounterexample> mve_violation(const SampledFunction& self,
                                               const SampledFunction& other,
                                               int clause) {
  for (std::size_t i = 0; i < self.size(); ++i) {
    const Rat& s = self.grid[i];
    const Rat& fs = self.values[i];
    for (std::size_t j = 0; j < other.size(); ++j) {
      const Rat& y = other.values[j];
      if ((s < y && !(fs < y)) || (!(y < fs) && y < s))
        return MveCounterexample{s, other.grid[j], y, clause};
    }
  }
  return std::nullopt;
}

}  // namespace

MveResult check_mve(const SampledFunction& f1, const SampledFunction& f2) {
  if (auto cex = mve_violation(f1, f2, 1)) return {false, cex};
  if (auto cex = mve_violation(f2, f1, 2)) return {false, cex};
  return {};
}

MveResult check_mve(const IntervalMapFunction& h1,
                    const IntervalMapFunction& h2,
                    std::span<const Rat> grid) {
  auto eval1 = [&](const Rat& x) { return h1(x); };
  auto eval2 = [&](const Rat& x) { return h2(x); };
  return check_mve(SampledFunction::sample(eval1, grid),
                   SampledFunction::sample(eval2, grid));
}

namespace {

std::vector<Rat> sorted_unique(std::vector<Rat> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

std::vector<Rat> with_interior_points(const std::vector<Rat>& base) {
  std::vector<Rat> pts = base;
  const Rat third(1, 3);
  for (std::size_t i = 0; i + 1 < base.size(); ++i) {
    const Rat gap = base[i + 1] - base[i];
    pts.push_back(base[i] + gap * third);
    pts.push_back(base[i] + gap * third * Rat(2));
    pts.push_back(base[i] + gap / Rat(2));
  }
  return sorted_unique(std::move(pts));
}

}  // namespace

std::vector<Rat> refine_grid(const SignedDecomposition& d) {
  std::vector<Rat> pts{Rat(0)};
  if (d.segments.empty()) {
    pts.push_back(Rat(1));
    pts.push_back(Rat(2));
    return sorted_unique(std::move(pts));
  }
  pts.push_back(d.segments.front().lower / Rat(2));
  for (std::size_t i = 0; i < d.segments.size(); ++i) {
    const Segment& seg = d.segments[i];
    pts.push_back(seg.lower);
    pts.push_back(seg.midpoint());
    pts.push_back(seg.upper);
    if (i + 1 < d.segments.size() && seg.upper < d.segments[i + 1].lower)
      pts.push_back((seg.upper + d.segments[i + 1].lower) / Rat(2));
  }
  pts.push_back(d.segments.back().upper + Rat(1));
  return sorted_unique(std::move(pts));
}

CompatibilityReport verify_compatibility(
    const std::function<Rat(const Rat&)>& h1,
    const std::function<Rat(const Rat&)>& h2, const SignedDecomposition& d) {
  CompatibilityReport report;
  auto fail = [&](int condition, const Rat& x, const std::string& what) {
    report.condition_pass[condition - 1] = false;
    report.failures.push_back("condition " + std::to_string(condition) +
                              " at x=" + x.str() + ": " + what);
  };

  // Condition 1 on a grid of points off every segment closure.
  std::vector<Rat> outside{Rat(0)};
  if (d.segments.empty()) {
    outside.insert(outside.end(), {Rat(1, 2), Rat(1), Rat(2), Rat(10)});
  } else {
    outside.push_back(d.segments.front().lower / Rat(2));
    for (std::size_t i = 0; i + 1 < d.segments.size(); ++i)
      if (d.segments[i].upper < d.segments[i + 1].lower)
        outside.push_back(
            (d.segments[i].upper + d.segments[i + 1].lower) / Rat(2));
    outside.push_back(d.segments.back().upper + Rat(1));
  }
  for (const Rat& x : outside) {
    if (h1(x) != x) fail(1, x, "h1 is not the identity");
    if (h2(x) != x) fail(1, x, "h2 is not the identity");
  }

  for (std::size_t i = 0; i < d.segments.size(); ++i) {
    const Segment& seg = d.segments[i];
    const bool plus = d.signs[i] == Sign::Plus;
    const Rat& lo = seg.lower;
    const Rat& hi = seg.upper;
    const Rat span = hi - lo;
    const int interior_condition = plus ? 3 : 2;
    const Rat want1 = plus ? hi : lo;
    const Rat want2 = plus ? lo : hi;
    for (const Rat& x : {lo + span / Rat(3), seg.midpoint(),
                         lo + span * Rat(2) / Rat(3)}) {
      if (h1(x) != want1)
        fail(interior_condition, x, "h1 != " + want1.str() + " inside");
      if (h2(x) != want2)
        fail(interior_condition, x, "h2 != " + want2.str() + " inside");
    }

    const bool lower_shared = i > 0 && d.segments[i - 1].upper == lo;
    const bool upper_shared =
        i + 1 < d.segments.size() && d.segments[i + 1].lower == hi;
    if (!lower_shared) {
      // Condition 4: h agrees with the segment interior at the free lower end.
      if (h1(lo) != want1) fail(4, lo, "h1(I-) != " + want1.str());
      if (h2(lo) != want2) fail(4, lo, "h2(I-) != " + want2.str());
    }
    if (!upper_shared) {
      if (h1(hi) != want1) fail(5, hi, "h1(I+) != " + want1.str());
      if (h2(hi) != want2) fail(5, hi, "h2(I+) != " + want2.str());
    }
    if (upper_shared) {
      const Segment& next = d.segments[i + 1];
      const int condition = plus ? 6 : 7;
      const Rat pinned = plus ? h1(hi) : h2(hi);
      const Rat free_value = plus ? h2(hi) : h1(hi);
      if (pinned != hi)
        fail(condition, hi, "pinned function must equal the shared endpoint");
      if (free_value != lo && free_value != next.upper)
        fail(condition, hi, "free function must take I^- or J^+");
    }
  }
  return report;
}

PiecewiseProbe PiecewiseProbe::of(const IntervalMapFunction& h) {
  return {[h](const Rat& x) { return h(x); }, h.breakpoints()};
}

SignedDecomposition decompose(const PiecewiseProbe& g1,
                              const PiecewiseProbe& g2) {
  std::vector<Rat> base{Rat(0)};
  base.insert(base.end(), g1.breakpoints.begin(), g1.breakpoints.end());
  base.insert(base.end(), g2.breakpoints.begin(), g2.breakpoints.end());
  base = sorted_unique(std::move(base));
  if (base.front().is_negative())
    throw DecomposeError("breakpoints must be non-negative");
  base.push_back(base.back() + Rat(1));
  std::vector<Rat> probes = with_interior_points(base);

  MveResult mve = check_mve(SampledFunction::sample(g1.f, probes),
                            SampledFunction::sample(g2.f, probes));
  if (!mve.pass)
    throw DecomposeError("mean value exclusion violated",
                         mve.counterexample);

  // An interior point x of a segment sees both endpoints directly:
  // {g1(x), g2(x)} = {I^-, I^+} with min < x < max.
  struct Found {
    Segment seg;
    Sign sign;
  };
  std::vector<Found> found;
  for (const Rat& x : probes) {
    const Rat u1 = g1.f(x);
    const Rat u2 = g2.f(x);
    const Rat& lo = min(u1, u2);
    const Rat& hi = max(u1, u2);
    if (!(lo < x) || !(x < hi)) continue;
    if (!(Rat(0) < lo))
      throw DecomposeError("recovered a segment with lower endpoint " +
                           lo.str() + "; segments must stay above zero");
    const Sign sign = u1 == hi ? Sign::Plus : Sign::Minus;
    bool known = false;
    for (const Found& f : found)
      if (f.seg.lower == lo && f.seg.upper == hi) {
        if (f.sign != sign)
          throw DecomposeError("inconsistent signs recovered for segment (" +
                               lo.str() + ", " + hi.str() + ")");
        known = true;
      }
    if (!known) found.push_back({Segment(lo, hi), sign});
  }
  std::sort(found.begin(), found.end(), [](const Found& a, const Found& b) {
    return a.seg.lower < b.seg.lower;
  });

  SignedDecomposition d;
  for (const Found& f : found) {
    d.segments.push_back(f.seg);
    d.signs.push_back(f.sign);
  }
  for (std::size_t i = 0; i + 1 < d.segments.size(); ++i) {
    if (d.segments[i].upper != d.segments[i + 1].lower) continue;
    const Rat& t = d.segments[i].upper;
    const bool first_pinned = d.signs[i] == Sign::Plus;
    const Rat pinned = first_pinned ? g1.f(t) : g2.f(t);
    const Rat free_value = first_pinned ? g2.f(t) : g1.f(t);
    if (pinned != t)
      throw DecomposeError("pinned function is not the identity at the "
                           "shared endpoint " + t.str());
    d.endpoint_choices[t] = free_value;
  }
  try {
    d.validate();
  } catch (const std::invalid_argument& e) {
    throw DecomposeError(std::string("recovered family is invalid: ") +
                         e.what());
  }

  // The recovered family must reproduce the inputs everywhere. Both sides are
  // piecewise constant-or-identity with breakpoints among the anchors, so
  // agreement at anchors and interior third-points decides equality.
  auto [h1, h2] = build_compatible_pair(d);
  std::vector<Rat> anchors = probes;
  for (const Segment& seg : d.segments) {
    anchors.push_back(seg.lower);
    anchors.push_back(seg.upper);
  }
  anchors = with_interior_points(sorted_unique(std::move(anchors)));
  for (const Rat& x : anchors) {
    if (h1(x) != g1.f(x) || h2(x) != g2.f(x))
      throw DecomposeError(
          "input pair is not compatible with any segment family (mismatch "
          "at x=" + x.str() + ")");
  }
  return d;
}

SignedDecomposition decompose(const IntervalMapFunction& h1,
                              const IntervalMapFunction& h2) {
  return decompose(PiecewiseProbe::of(h1), PiecewiseProbe::of(h2));
}

namespace {

Rat interior_value(const SignedDecomposition& d, std::size_t i, int role) {
  const bool high = (d.signs[i] == Sign::Plus) == (role == 1);
  return high ? d.segments[i].upper : d.segments[i].lower;
}

// Does f attain `value` at some x with x < bound (or x <= bound)?
bool attains_below(const IntervalMapFunction& f, const Rat& value,
                   const Rat& bound, bool inclusive) {
  auto in_range = [&](const Rat& x) {
    return inclusive ? !(bound < x) : x < bound;
  };
  if (!value.is_negative() && in_range(value) && f(value) == value)
    return true;
  const SignedDecomposition& d = f.decomposition();
  for (std::size_t i = 0; i < d.segments.size(); ++i) {
    if (interior_value(d, i, f.role()) == value &&
        d.segments[i].lower < bound)
      return true;
    for (const Rat& t : {d.segments[i].lower, d.segments[i].upper})
      if (in_range(t) && f(t) == value) return true;
  }
  return false;
}

bool attains_above(const IntervalMapFunction& f, const Rat& value,
                   const Rat& bound, bool inclusive) {
  auto in_range = [&](const Rat& x) {
    return inclusive ? !(x < bound) : bound < x;
  };
  if (!value.is_negative() && in_range(value) && f(value) == value)
    return true;
  const SignedDecomposition& d = f.decomposition();
  for (std::size_t i = 0; i < d.segments.size(); ++i) {
    if (interior_value(d, i, f.role()) == value &&
        bound < d.segments[i].upper)
      return true;
    for (const Rat& t : {d.segments[i].lower, d.segments[i].upper})
      if (in_range(t) && f(t) == value) return true;
  }
  return false;
}

}  // namespace

std::vector<SegmentClasses> classify_segments(const IntervalMapFunction& h1) {
  const SignedDecomposition& d = h1.decomposition();
  std::vector<SegmentClasses> out(d.segments.size());
  for (std::size_t i = 0; i < d.segments.size(); ++i) {
    const Segment& seg = d.segments[i];
    SegmentClasses& c = out[i];
    c.d1 = h1(seg.lower) == seg.upper;
    c.d2 = h1(seg.upper) == seg.lower;
    c.d3 = c.d1 && !attains_below(h1, seg.upper, seg.lower, false);
    c.d4 = c.d2 && !attains_above(h1, seg.lower, seg.upper, false);

    // Limit values are decidable on the representation: a one-sided limit is
    // the adjacent segment's constant value when one abuts, the identity
    // otherwise.
    Rat left_limit = seg.lower;
    Rat right_limit = seg.upper;
    for (std::size_t j = 0; j < d.segments.size(); ++j) {
      if (d.segments[j].upper == seg.lower)
        left_limit = interior_value(d, j, h1.role());
      if (d.segments[j].lower == seg.upper)
        right_limit = interior_value(d, j, h1.role());
    }
    c.d5 = left_limit == seg.upper &&
           !attains_below(h1, seg.upper, seg.lower, true);
    c.d6 = right_limit == seg.lower &&
           !attains_above(h1, seg.lower, seg.upper, true);
  }
  return out;
}

}  // namespace vcg
