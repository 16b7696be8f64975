#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vcglab/rational.hpp"

namespace vcg {

/// Open interval (lower, upper) with 0 < lower < upper. Segment families
/// never reach zero: a lower endpoint of 0 is rejected at construction.
struct Segment {
  Rat lower, upper;

  Segment(Rat lo, Rat hi) : lower(lo), upper(hi) {
    if (!(Rat(0) < lower) || !(lower < upper))
      throw std::invalid_argument("segment requires 0 < lower < upper");
  }
  bool contains(const Rat& x) const { return lower < x && x < upper; }
  Rat midpoint() const { return (lower + upper) / Rat(2); }

  friend bool operator==(const Segment&, const Segment&) = default;
};

enum class Sign : int { Minus = -1, Plus = +1 };

inline Sign opposite(Sign s) {
  return s == Sign::Plus ? Sign::Minus : Sign::Plus;
}

/// Disjoint open segments with alternating signs at shared endpoints, plus
/// the per-shared-endpoint value choice that conditions 6-7 leave free.
struct SignedDecomposition {
  std::vector<Segment> segments;     // sorted by lower endpoint
  std::vector<Sign> signs;           // one per segment
  std::map<Rat, Rat> endpoint_choices;  // shared endpoint t -> value in {I^-, J^+}

  /// Throws std::invalid_argument on overlap, non-alternating signs at a
  /// shared endpoint, or missing/extra/ill-valued endpoint choices.
  void validate() const;

  std::optional<std::size_t> segment_containing(const Rat& x) const;
  /// Index of the segment whose closure contains x, if any.
  std::optional<std::size_t> closure_containing(const Rat& x) const;
  bool is_shared_endpoint(const Rat& x) const;

  friend bool operator==(const SignedDecomposition&,
                         const SignedDecomposition&) = default;
};

/// One of the two functions of an (Omega,G)-compatible pair: the identity off
/// all segment closures, snapped to a segment endpoint inside each segment,
/// with the endpoint values dictated by conditions 1-7.
class IntervalMapFunction {
 public:
  Rat operator()(const Rat& x) const;

  int role() const { return role_; }  // 1 = h1, 2 = h2
  const SignedDecomposition& decomposition() const { return *decomposition_; }
  /// All segment endpoints, sorted ascending.
  std::vector<Rat> breakpoints() const;

 private:
  friend std::pair<IntervalMapFunction, IntervalMapFunction>
  build_compatible_pair(SignedDecomposition d);

  IntervalMapFunction(std::shared_ptr<const SignedDecomposition> d, int role)
      : decomposition_(std::move(d)), role_(role) {}

  std::shared_ptr<const SignedDecomposition> decomposition_;
  int role_;
};

/// Realizes conditions 1-7 for the given decomposition and endpoint choices.
std::pair<IntervalMapFunction, IntervalMapFunction> build_compatible_pair(
    SignedDecomposition d);

/// Exact sample table of a function on a strictly increasing positive grid.
struct SampledFunction {
  std::vector<Rat> grid;
  std::vector<Rat> values;

  SampledFunction() = default;
  SampledFunction(std::vector<Rat> g, std::vector<Rat> v);

  std::size_t size() const { return grid.size(); }

  static SampledFunction sample(const std::function<Rat(const Rat&)>& f,
                                std::span<const Rat> grid);
};

struct MveCounterexample {
  Rat s, t, y;
  int clause = 1;  // 1: y = f2(t) against f1's span; 2: the symmetric clause
};

struct MveResult {
  bool pass = true;
  std::optional<MveCounterexample> counterexample;
};

/// Mean value exclusion over the sample grids: no triple (s, t, y) with
/// y = f2(t) and s < y <= f1(s) or f1(s) <= y < s, nor the symmetric
/// violation. First counterexample in (clause, s, t) order.
MveResult check_mve(const SampledFunction& f1, const SampledFunction& f2);
MveResult check_mve(const IntervalMapFunction& h1, const IntervalMapFunction& h2,
                    std::span<const Rat> grid);

/// Per-condition compatibility report. Interiors are sampled at midpoints and
/// third-points; interval-map functions are constant there by construction.
struct CompatibilityReport {
  std::array<bool, 7> condition_pass{true, true, true, true, true, true, true};
  std::vector<std::string> failures;

  bool all_pass() const {
    for (bool ok : condition_pass)
      if (!ok) return false;
    return true;
  }
};

CompatibilityReport verify_compatibility(
    const std::function<Rat(const Rat&)>& h1,
    const std::function<Rat(const Rat&)>& h2, const SignedDecomposition& d);

/// A function handed to decompose(): evaluation access plus the list of
/// points where it may stop being the identity. decompose never looks at a
/// backing decomposition object, only at these evaluations.
struct PiecewiseProbe {
  std::function<Rat(const Rat&)> f;
  std::vector<Rat> breakpoints;

  static PiecewiseProbe of(const IntervalMapFunction& h);
};

struct DecomposeError : std::runtime_error {
  explicit DecomposeError(const std::string& what,
                          std::optional<MveCounterexample> cex = std::nullopt)
      : std::runtime_error(what), counterexample(cex) {}
  std::optional<MveCounterexample> counterexample;
};

/// Recovers the segment family, signs, and endpoint choices from a compatible
/// pair. Throws DecomposeError when the pair violates mean value exclusion on
/// the probe grid (carrying the counterexample) or is otherwise not an
/// (Omega,G)-compatible interval map pair.
SignedDecomposition decompose(const PiecewiseProbe& g1,
                              const PiecewiseProbe& g2);
SignedDecomposition decompose(const IntervalMapFunction& h1,
                              const IntervalMapFunction& h2);

/// Membership in the segment classes D1..D6 and their union D, decided
/// exactly on the interval-map representation. A limit sequence toward an
/// endpoint exists iff an adjacent segment's constant value supplies it.
struct SegmentClasses {
  bool d1 = false, d2 = false, d3 = false, d4 = false, d5 = false, d6 = false;
  bool in_d() const { return d3 || d4 || d5 || d6; }
};

std::vector<SegmentClasses> classify_segments(const IntervalMapFunction& h1);

/// Grid refining every endpoint: endpoints, segment midpoints, gap midpoints,
/// a point below the first segment, zero, and a point past the last segment.
std::vector<Rat> refine_grid(const SignedDecomposition& d);

}  // namespace vcg
