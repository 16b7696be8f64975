#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vcglab/auction.hpp"
#include "vcglab/model.hpp"
#include "vcglab/parallelogram.hpp"
#include "vcglab/strategy.hpp"

namespace vcg {

/// Parse failure with a 1-based line number and section context.
struct ParseError : std::runtime_error {
  ParseError(int line, const std::string& section, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) +
                           (section.empty() ? "" : " [" + section + "]") +
                           ": " + what),
        line(line) {}
  int line;
};

/// A parsed instance file: the game, the strategy profile, and the checks the
/// file requests. Auction-mode files keep their goods/bundle provenance so
/// serialization can stay in bundle form.
struct InstanceDocument {
  GameInstance instance;
  StrategyProfile profile;
  std::vector<std::string> checks;

  std::optional<AuctionSpace> space;
  // Auction-mode provenance, aligned with the instance grids (empty
  // otherwise): bundle tables per player, and reported/field bundle sets for
  // bundling/report strategies.
  std::vector<std::vector<BundleTable>> bundle_tables;
  std::vector<std::vector<Bundle>> strategy_bundles;
  std::vector<bool> strategy_is_field;  // bundling (quasi-field) vs report

  bool requests(std::string_view check) const;
};

/// Line-oriented instance format. Sections: [alternatives] or [goods],
/// [players], [family <p>], [strategy <p>], optional [hspec], optional
/// [checks]. Rationals are written "p/q" or "p"; value maps are
/// "label=p/q ..." with an optional "rest=p/q" default.
InstanceDocument parse_instance(std::string_view text,
                                std::size_t allocation_cap =
                                    kDefaultAllocationCap);

std::string serialize_instance(const InstanceDocument& doc);

/// Function-pair file for the decompose command: either an interval-map
/// decomposition ([decomposition] with segment/choice lines) or two sampled
/// functions ([sampled g1] / [sampled g2]), plus optional [grid] hints.
struct FunctionDocument {
  std::optional<SignedDecomposition> decomposition;
  std::optional<SampledFunction> g1, g2;
  std::vector<Rat> grid_points;
  std::optional<Rat> grid_step;
  std::optional<Rat> grid_max;
};

FunctionDocument parse_function_document(std::string_view text);

std::string serialize_decomposition(const SignedDecomposition& d);

}  // namespace vcg
