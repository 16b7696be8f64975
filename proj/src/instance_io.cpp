#include "vcglab/instance_io.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace vcg {

bool InstanceDocument::requests(std::string_view check) const {
  return std::find(checks.begin(), checks.end(), check) != checks.end();
}

namespace {

std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos])))
      ++pos;
    std::size_t start = pos;
    while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos])))
      ++pos;
    if (pos > start) tokens.emplace_back(line.substr(start, pos - start));
  }
  return tokens;
}

struct Assignment {
  std::string key;
  Rat value;
};

// Raw per-section capture before anything is resolved.
struct RawValuation {
  std::vector<Assignment> entries;
  std::optional<Rat> rest;
  bool bundle_form = false;
  int line = 0;
};

struct RawStrategy {
  std::string kind;
  std::optional<Rat> offset;
  std::vector<std::string> subset;
  std::optional<std::string> floor;  // "min" or a rational
  std::optional<Rat> factor;
  std::vector<std::pair<RawValuation, RawValuation>> rows;
  std::vector<std::string> bundles;  // field / report sets
  std::vector<std::string> maxima;
  std::optional<Rat> shift;
  std::optional<RawValuation> off;
  int line = 0;
};

struct RawFamily {
  std::optional<std::string> maximum;
  std::vector<RawValuation> valuations;
  int line = 0;
};

struct RawHSpec {
  std::string kind;
  Rat constant;
};

struct ParserState {
  std::vector<std::string> alternatives;
  std::vector<std::string> goods;
  std::vector<std::string> players;
  std::map<std::string, RawFamily> families;
  std::map<std::string, RawStrategy> strategies;
  std::map<std::string, RawHSpec> hspecs;
  std::vector<std::string> checks;
};

Rat parse_rat(int line, const std::string& section, const std::string& text) {
  try {
    return Rat::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(line, section, e.what());
  }
}

RawValuation parse_assignments(int line, const std::string& section,
                               const std::vector<std::string>& tokens,
                               std::size_t begin, std::size_t end,
                               bool bundle_form) {
  RawValuation out;
  out.bundle_form = bundle_form;
  out.line = line;
  for (std::size_t i = begin; i < end; ++i) {
    const std::string& tok = tokens[i];
    auto eq = tok.find('=');
    if (eq == std::string::npos)
      throw ParseError(line, section, "expected label=value, got '" + tok + "'");
    std::string key = tok.substr(0, eq);
    Rat value = parse_rat(line, section, tok.substr(eq + 1));
    if (key == "rest") {
      if (out.rest)
        throw ParseError(line, section, "duplicate rest= entry");
      out.rest = value;
    } else {
      out.entries.push_back({std::move(key), value});
    }
  }
  return out;
}

std::vector<Rat> resolve_values(const AlternativeSet& alternatives,
                                const RawValuation& raw,
                                const std::string& section) {
  std::vector<Rat> values(alternatives.size(),
                          raw.rest.value_or(Rat(0)));
  std::vector<bool> seen(alternatives.size(), false);
  for (const Assignment& a : raw.entries) {
    auto idx = alternatives.find(a.key);
    if (!idx)
      throw ParseError(raw.line, section,
                       "unknown alternative '" + a.key + "'");
    if (seen[*idx])
      throw ParseError(raw.line, section,
                       "alternative '" + a.key + "' listed twice");
    seen[*idx] = true;
    values[*idx] = a.value;
  }
  if (!raw.rest)
    for (std::size_t i = 0; i < seen.size(); ++i)
      if (!seen[i])
        throw ParseError(raw.line, section,
                         "missing value for alternative '" +
                             alternatives.label(i) + "' (use rest= for a default)");
  return values;
}

BundleTable resolve_bundle_table(const AuctionSpace& space,
                                 const RawValuation& raw,
                                 const std::string& section) {
  const std::size_t size = std::size_t{1} << space.num_goods();
  BundleTable table(size, raw.rest.value_or(Rat(0)));
  std::vector<bool> seen(size, false);
  for (const Assignment& a : raw.entries) {
    Bundle b;
    try {
      b = space.parse_bundle(a.key);
    } catch (const std::exception& e) {
      throw ParseError(raw.line, section, e.what());
    }
    if (seen[b])
      throw ParseError(raw.line, section, "bundle '" + a.key + "' listed twice");
    seen[b] = true;
    table[b] = a.value;
  }
  // Unlisted bundles default to rest (or 0); the empty bundle is worth 0
  // unless stated. The table stays total either way.
  if (!raw.rest && !seen[0]) table[0] = Rat(0);
  if (!raw.rest) {
    for (std::size_t b = 1; b < size; ++b)
      if (!seen[b])
        throw ParseError(raw.line, section,
                         "missing value for bundle '" +
                             space.bundle_label(static_cast<Bundle>(b)) +
                             "' (use rest= for a default)");
  }
  return table;
}

std::size_t player_index(const std::vector<std::string>& players,
                         const std::string& name, int line,
                         const std::string& section) {
  for (std::size_t i = 0; i < players.size(); ++i)
    if (players[i] == name) return i;
  throw ParseError(line, section, "unknown player '" + name + "'");
}

Strategy build_strategy(const RawStrategy& raw, const AlternativeSet& alts,
                        const std::optional<AuctionSpace>& space,
                        std::size_t player, const std::string& section,
                        std::vector<Bundle>& bundles_out) {
  auto subset_indices = [&](const std::vector<std::string>& labels) {
    std::vector<std::size_t> indices;
    for (const std::string& label : labels) {
      auto idx = alts.find(label);
      if (!idx)
        throw ParseError(raw.line, section,
                         "unknown alternative '" + label + "'");
      indices.push_back(*idx);
    }
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    return indices;
  };
  OffsetRule offset = OffsetRule::of(raw.offset.value_or(Rat(0)));
  FloorRule floor = FloorRule::min_over_subset();
  if (raw.floor && *raw.floor != "min")
    floor = FloorRule::of(parse_rat(raw.line, section, *raw.floor));

  if (raw.kind == "truth") return Strategy::truth();
  if (raw.kind == "shifted-truth") return Strategy::shifted_truth(offset);
  if (raw.kind == "nearly-truth") {
    if (raw.subset.empty())
      throw ParseError(raw.line, section, "nearly-truth needs a subset line");
    return Strategy::nearly_truth(subset_indices(raw.subset), offset, floor);
  }
  if (raw.kind == "scaling") {
    if (!raw.factor)
      throw ParseError(raw.line, section, "scaling needs a factor line");
    return Strategy::scaling(*raw.factor);
  }
  if (raw.kind == "table") {
    if (raw.rows.empty())
      throw ParseError(raw.line, section, "table needs row lines");
    std::vector<std::pair<std::vector<Rat>, std::vector<Rat>>> rows;
    for (const auto& [from, to] : raw.rows)
      rows.emplace_back(resolve_values(alts, from, section),
                        resolve_values(alts, to, section));
    return Strategy::table_of(std::move(rows));
  }
  if (raw.kind == "maxima-shift") {
    if (raw.maxima.empty() || !raw.off)
      throw ParseError(raw.line, section,
                       "maxima-shift needs maxima and off lines");
    std::vector<Rat> off = resolve_values(alts, *raw.off, section);
    const Rat shift = raw.shift.value_or(Rat(10));
    if (shift == Rat(10))
      return make_maxima_plus_ten(subset_indices(raw.maxima), std::move(off));
    return Strategy::maxima_shift(subset_indices(raw.maxima), shift,
                                  std::move(off));
  }
  if (raw.kind == "bundling" || raw.kind == "report") {
    if (!space)
      throw ParseError(raw.line, section,
                       raw.kind + " strategies need a [goods] section");
    std::vector<Bundle> bundles;
    for (const std::string& b : raw.bundles) {
      try {
        bundles.push_back(space->parse_bundle(b));
      } catch (const std::exception& e) {
        throw ParseError(raw.line, section, e.what());
      }
    }
    bundles_out = bundles;
    if (raw.kind == "bundling") {
      try {
        return bundling_strategy(*space, player, BundleFamily(bundles));
      } catch (const std::invalid_argument& e) {
        throw ParseError(raw.line, section, e.what());
      }
    }
    return bundle_report_strategy(*space, player, bundles);
  }
  throw ParseError(raw.line, section, "unknown strategy kind '" + raw.kind + "'");
}

}  // namespace

InstanceDocument parse_instance(std::string_view text,
                                std::size_t allocation_cap) {
  ParserState state;
  std::string section;
  std::string section_arg;
  int line_no = 0;

  std::istringstream stream{std::string(text)};
  std::string raw_line;
  while (std::getline(stream, raw_line)) {
    ++line_no;
    if (auto hash = raw_line.find('#'); hash != std::string::npos)
      raw_line.erase(hash);
    std::vector<std::string> tokens = tokenize(raw_line);
    if (tokens.empty()) continue;

    if (tokens.front().front() == '[') {
      std::string header = tokens.front();
      for (std::size_t i = 1; i < tokens.size(); ++i) header += " " + tokens[i];
      if (header.back() != ']')
        throw ParseError(line_no, "", "malformed section header " + header);
      header = header.substr(1, header.size() - 2);
      auto space_pos = header.find(' ');
      section = header.substr(0, space_pos);
      section_arg =
          space_pos == std::string::npos ? "" : header.substr(space_pos + 1);
      if (section == "family" || section == "strategy") {
        if (section_arg.empty())
          throw ParseError(line_no, section, "section needs a player name");
        if (std::find(state.players.begin(), state.players.end(),
                      section_arg) == state.players.end())
          throw ParseError(line_no, section,
                           "unknown player '" + section_arg + "'");
      }
      continue;
    }

    if (section == "alternatives") {
      state.alternatives.insert(state.alternatives.end(), tokens.begin(),
                                tokens.end());
    } else if (section == "goods") {
      state.goods.insert(state.goods.end(), tokens.begin(), tokens.end());
    } else if (section == "players") {
      state.players.insert(state.players.end(), tokens.begin(), tokens.end());
    } else if (section == "family") {
      RawFamily& family = state.families[section_arg];
      if (family.line == 0) family.line = line_no;
      if (tokens[0] == "maximum") {
        if (tokens.size() != 2)
          throw ParseError(line_no, section, "maximum takes one label");
        family.maximum = tokens[1];
      } else if (tokens[0] == "valuation" || tokens[0] == "bundle-valuation") {
        family.valuations.push_back(
            parse_assignments(line_no, section, tokens, 1, tokens.size(),
                              tokens[0] == "bundle-valuation"));
      } else {
        throw ParseError(line_no, section,
                         "unexpected directive '" + tokens[0] + "'");
      }
    } else if (section == "strategy") {
      RawStrategy& strategy = state.strategies[section_arg];
      if (strategy.line == 0) strategy.line = line_no;
      const std::string& directive = tokens[0];
      if (directive == "kind" && tokens.size() == 2) {
        strategy.kind = tokens[1];
      } else if (directive == "offset" && tokens.size() == 2) {
        strategy.offset = parse_rat(line_no, section, tokens[1]);
      } else if (directive == "subset") {
        strategy.subset.assign(tokens.begin() + 1, tokens.end());
      } else if (directive == "floor" && tokens.size() == 2) {
        strategy.floor = tokens[1];
      } else if (directive == "factor" && tokens.size() == 2) {
        strategy.factor = parse_rat(line_no, section, tokens[1]);
      } else if (directive == "row") {
        auto arrow = std::find(tokens.begin(), tokens.end(), "->");
        if (arrow == tokens.end())
          throw ParseError(line_no, section, "table row needs '->'");
        const std::size_t arrow_at = arrow - tokens.begin();
        strategy.rows.emplace_back(
            parse_assignments(line_no, section, tokens, 1, arrow_at, false),
            parse_assignments(line_no, section, tokens, arrow_at + 1,
                              tokens.size(), false));
      } else if (directive == "field" || directive == "bundles") {
        strategy.bundles.assign(tokens.begin() + 1, tokens.end());
        if (strategy.kind.empty())
          strategy.kind = directive == "field" ? "bundling" : "report";
      } else if (directive == "maxima") {
        strategy.maxima.assign(tokens.begin() + 1, tokens.end());
      } else if (directive == "shift" && tokens.size() == 2) {
        strategy.shift = parse_rat(line_no, section, tokens[1]);
      } else if (directive == "off") {
        strategy.off =
            parse_assignments(line_no, section, tokens, 1, tokens.size(), false);
      } else {
        throw ParseError(line_no, section,
                         "unexpected directive '" + directive + "'");
      }
    } else if (section == "hspec") {
      if (tokens.size() < 2)
        throw ParseError(line_no, section, "expected: <player> <kind> [value]");
      player_index(state.players, tokens[0], line_no, section);
      RawHSpec h;
      h.kind = tokens[1];
      if (h.kind == "constant") {
        if (tokens.size() != 3)
          throw ParseError(line_no, section, "constant needs a value");
        h.constant = parse_rat(line_no, section, tokens[2]);
      } else if (h.kind != "zero" && h.kind != "clarke") {
        throw ParseError(line_no, section, "unknown hspec '" + h.kind + "'");
      }
      state.hspecs[tokens[0]] = h;
    } else if (section == "checks") {
      state.checks.insert(state.checks.end(), tokens.begin(), tokens.end());
    } else if (section.empty()) {
      throw ParseError(line_no, "", "content before any section header");
    } else {
      throw ParseError(line_no, section, "unknown section");
    }
  }

  if (state.players.empty())
    throw ParseError(line_no, "players", "no players declared");

  std::optional<AuctionSpace> space;
  if (!state.goods.empty()) {
    try {
      space = enumerate_allocations(GoodsSet(state.goods),
                                    state.players.size(), allocation_cap);
    } catch (const std::exception& e) {
      throw ParseError(line_no, "goods", e.what());
    }
    if (!state.alternatives.empty())
      throw ParseError(line_no, "goods",
                       "[alternatives] and [goods] are mutually exclusive");
  }
  if (!space && state.alternatives.empty())
    throw ParseError(line_no, "alternatives", "no alternatives declared");

  AlternativeSet alternatives = [&] {
    try {
      return space ? space->alternatives()
                   : AlternativeSet(state.alternatives);
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, "alternatives", e.what());
    }
  }();

  std::vector<std::vector<Valuation>> grids(state.players.size());
  std::vector<std::vector<BundleTable>> bundle_tables(state.players.size());
  std::vector<std::optional<std::size_t>> maxima(state.players.size());
  for (std::size_t i = 0; i < state.players.size(); ++i) {
    auto it = state.families.find(state.players[i]);
    if (it == state.families.end())
      throw ParseError(line_no, "family",
                       "no family for player '" + state.players[i] + "'");
    const RawFamily& family = it->second;
    if (family.maximum) {
      auto idx = alternatives.find(*family.maximum);
      if (!idx)
        throw ParseError(family.line, "family",
                         "unknown maximum '" + *family.maximum + "'");
      maxima[i] = idx;
    }
    for (const RawValuation& raw : family.valuations) {
      if (raw.bundle_form) {
        if (!space)
          throw ParseError(raw.line, "family",
                           "bundle-valuation needs a [goods] section");
        BundleTable table = resolve_bundle_table(*space, raw, "family");
        grids[i].push_back(valuation_from_bundles(*space, i, table));
        bundle_tables[i].push_back(std::move(table));
      } else {
        grids[i].push_back(Valuation(
            resolve_values(alternatives, raw, "family"),
            maxima[i].has_value()));
      }
    }
    if (grids[i].empty())
      throw ParseError(family.line, "family",
                       "player '" + state.players[i] + "' has no valuations");
  }

  StrategyProfile profile;
  std::vector<std::vector<Bundle>> strategy_bundles(state.players.size());
  std::vector<bool> strategy_is_field(state.players.size(), false);
  for (std::size_t i = 0; i < state.players.size(); ++i) {
    auto it = state.strategies.find(state.players[i]);
    if (it == state.strategies.end())
      throw ParseError(line_no, "strategy",
                       "no strategy for player '" + state.players[i] + "'");
    if (it->second.kind.empty())
      throw ParseError(it->second.line, "strategy",
                       "strategy for '" + state.players[i] + "' has no kind");
    profile.push_back(build_strategy(it->second, alternatives, space, i,
                                     "strategy", strategy_bundles[i]));
    strategy_is_field[i] = it->second.kind == "bundling";
  }

  GameInstance instance = [&] {
    try {
      return make_instance(std::move(alternatives), state.players,
                           std::move(grids), std::move(maxima));
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, "family", e.what());
    }
  }();
  for (std::size_t i = 0; i < state.players.size(); ++i) {
    auto it = state.hspecs.find(state.players[i]);
    if (it == state.hspecs.end()) continue;
    if (it->second.kind == "zero")
      instance.h[i] = HSpec::zero();
    else if (it->second.kind == "clarke")
      instance.h[i] = HSpec::clarke();
    else
      instance.h[i] = HSpec::constant(it->second.constant);
  }

  return InstanceDocument{std::move(instance), std::move(profile),
                          std::move(state.checks), std::move(space),
                          std::move(bundle_tables),
                          std::move(strategy_bundles),
                          std::move(strategy_is_field)};
}

namespace {

// Emit a value map with a rest= default when it shortens the line.
std::string format_values(const AlternativeSet& alts,
                          const std::vector<Rat>& values) {
  std::map<std::string, int> freq;
  for (const Rat& v : values) ++freq[v.str()];
  std::string rest;
  int best = 0;
  for (const auto& [text, count] : freq)
    if (count > best) {
      best = count;
      rest = text;
    }
  std::string out;
  const bool use_rest = best > 1;
  for (std::size_t a = 0; a < values.size(); ++a) {
    if (use_rest && values[a].str() == rest) continue;
    out += " " + alts.label(a) + "=" + values[a].str();
  }
  if (use_rest) out += " rest=" + rest;
  return out;
}

std::string format_bundle_table(const AuctionSpace& space,
                                const BundleTable& table) {
  std::map<std::string, int> freq;
  for (const Rat& v : table) ++freq[v.str()];
  std::string rest;
  int best = 0;
  for (const auto& [text, count] : freq)
    if (count > best) {
      best = count;
      rest = text;
    }
  std::string out;
  const bool use_rest = best > 1;
  for (std::size_t b = 0; b < table.size(); ++b) {
    if (use_rest && table[b].str() == rest) continue;
    out += " " + space.bundle_label(static_cast<Bundle>(b)) + "=" +
           table[b].str();
  }
  if (use_rest) out += " rest=" + rest;
  return out;
}

void serialize_strategy(std::ostringstream& out, const InstanceDocument& doc,
                        std::size_t i) {
  const Strategy& s = doc.profile[i];
  const AlternativeSet& alts = doc.instance.alternatives;
  out << "[strategy " << doc.instance.player_names[i] << "]\n";
  auto offset_line = [&](const OffsetRule& rule) {
    if (rule.kind == OffsetRule::Kind::Custom)
      throw std::invalid_argument("custom offset rules are not serializable");
    if (rule.kind == OffsetRule::Kind::Constant)
      out << "offset " << rule.constant.str() << "\n";
  };
  switch (s.kind) {
    case Strategy::Kind::Truth:
      out << "kind truth\n";
      break;
    case Strategy::Kind::ShiftedTruth:
      out << "kind shifted-truth\n";
      offset_line(s.offset);
      break;
    case Strategy::Kind::NearlyTruth: {
      out << "kind nearly-truth\nsubset";
      for (std::size_t a : s.subset) out << " " << alts.label(a);
      out << "\n";
      offset_line(s.offset);
      if (!s.floor.use_min) out << "floor " << s.floor.constant.str() << "\n";
      break;
    }
    case Strategy::Kind::Scaling:
      out << "kind scaling\nfactor " << s.factor.str() << "\n";
      break;
    case Strategy::Kind::Table:
      out << "kind table\n";
      for (const auto& [from, to] : s.table)
        out << "row" << format_values(alts, from) << " ->"
            << format_values(alts, to) << "\n";
      break;
    case Strategy::Kind::Bundling: {
      if (!doc.space || i >= doc.strategy_bundles.size())
        throw std::invalid_argument(
            "bundling strategies serialize only in auction form");
      const bool is_field =
          i < doc.strategy_is_field.size() && doc.strategy_is_field[i];
      out << "kind " << (is_field ? "bundling" : "report") << "\n";
      out << (is_field ? "field" : "bundles");
      for (Bundle b : doc.strategy_bundles[i])
        out << " " << doc.space->bundle_label(b);
      out << "\n";
      break;
    }
    case Strategy::Kind::MaximaShift: {
      out << "kind maxima-shift\nmaxima";
      for (std::size_t a : s.maxima) out << " " << alts.label(a);
      out << "\n";
      if (s.shift != Rat(10)) out << "shift " << s.shift.str() << "\n";
      out << "off" << format_values(alts, s.off_values) << "\n";
      break;
    }
  }
}

}  // namespace

std::string serialize_instance(const InstanceDocument& doc) {
  std::ostringstream out;
  const GameInstance& g = doc.instance;
  if (doc.space) {
    out << "[goods]\n";
    for (const std::string& good : doc.space->goods().labels)
      out << good << "\n";
  } else {
    out << "[alternatives]\n";
    for (const std::string& label : g.alternatives.labels())
      out << label << "\n";
  }
  out << "\n[players]\n";
  for (const std::string& p : g.player_names) out << p << "\n";

  for (std::size_t i = 0; i < g.num_players(); ++i) {
    out << "\n[family " << g.player_names[i] << "]\n";
    if (g.maxima[i])
      out << "maximum " << g.alternatives.label(*g.maxima[i]) << "\n";
    const bool bundle_form =
        doc.space && i < doc.bundle_tables.size() &&
        doc.bundle_tables[i].size() == g.family_grids[i].size();
    for (std::size_t v = 0; v < g.family_grids[i].size(); ++v) {
      if (bundle_form)
        out << "bundle-valuation"
            << format_bundle_table(*doc.space, doc.bundle_tables[i][v])
            << "\n";
      else
        out << "valuation"
            << format_values(g.alternatives, g.family_grids[i][v].values)
            << "\n";
    }
  }

  for (std::size_t i = 0; i < g.num_players(); ++i) {
    out << "\n";
    serialize_strategy(out, doc, i);
  }

  bool any_h = false;
  for (const HSpec& h : g.h)
    if (h.kind() != HSpec::Kind::Zero) any_h = true;
  if (any_h) {
    out << "\n[hspec]\n";
    for (std::size_t i = 0; i < g.num_players(); ++i) {
      switch (g.h[i].kind()) {
        case HSpec::Kind::Zero:
          out << g.player_names[i] << " zero\n";
          break;
        case HSpec::Kind::Constant:
          out << g.player_names[i] << " constant "
              << g.h[i].constant_value().str() << "\n";
          break;
        case HSpec::Kind::Clarke:
          out << g.player_names[i] << " clarke\n";
          break;
        case HSpec::Kind::Custom:
          throw std::invalid_argument("custom hspecs are not serializable");
      }
    }
  }

  if (!doc.checks.empty()) {
    out << "\n[checks]\n";
    for (const std::string& c : doc.checks) out << c << "\n";
  }
  return out.str();
}

FunctionDocument parse_function_document(std::string_view text) {
  FunctionDocument doc;
  std::vector<Segment> segments;
  std::vector<Sign> signs;
  std::map<Rat, Rat> choices;
  std::vector<Rat> g1_grid, g1_values, g2_grid, g2_values;
  bool have_decomposition = false;

  std::string section;
  std::string section_arg;
  int line_no = 0;
  std::istringstream stream{std::string(text)};
  std::string raw_line;
  while (std::getline(stream, raw_line)) {
    ++line_no;
    if (auto hash = raw_line.find('#'); hash != std::string::npos)
      raw_line.erase(hash);
    std::vector<std::string> tokens = tokenize(raw_line);
    if (tokens.empty()) continue;
    if (tokens.front().front() == '[') {
      std::string header = tokens.front();
      for (std::size_t i = 1; i < tokens.size(); ++i) header += " " + tokens[i];
      if (header.back() != ']')
        throw ParseError(line_no, "", "malformed section header " + header);
      header = header.substr(1, header.size() - 2);
      auto space_pos = header.find(' ');
      section = header.substr(0, space_pos);
      section_arg =
          space_pos == std::string::npos ? "" : header.substr(space_pos + 1);
      if (section == "decomposition") have_decomposition = true;
      continue;
    }
    if (section == "decomposition") {
      if (tokens[0] == "segment" && tokens.size() == 4) {
        const Rat lo = parse_rat(line_no, section, tokens[1]);
        const Rat hi = parse_rat(line_no, section, tokens[2]);
        Sign sign;
        if (tokens[3] == "+1" || tokens[3] == "+")
          sign = Sign::Plus;
        else if (tokens[3] == "-1" || tokens[3] == "-")
          sign = Sign::Minus;
        else
          throw ParseError(line_no, section, "sign must be +1 or -1");
        try {
          segments.emplace_back(lo, hi);
        } catch (const std::invalid_argument& e) {
          throw ParseError(line_no, section, e.what());
        }
        signs.push_back(sign);
      } else if (tokens[0] == "choice" && tokens.size() == 3) {
        choices[parse_rat(line_no, section, tokens[1])] =
            parse_rat(line_no, section, tokens[2]);
      } else {
        throw ParseError(line_no, section,
                         "expected 'segment lo hi sign' or 'choice t value'");
      }
    } else if (section == "sampled") {
      if (tokens.size() != 2)
        throw ParseError(line_no, section, "expected '<s> <value>'");
      const Rat s = parse_rat(line_no, section, tokens[0]);
      const Rat v = parse_rat(line_no, section, tokens[1]);
      if (section_arg == "g1") {
        g1_grid.push_back(s);
        g1_values.push_back(v);
      } else if (section_arg == "g2") {
        g2_grid.push_back(s);
        g2_values.push_back(v);
      } else {
        throw ParseError(line_no, section, "sampled sections are g1 and g2");
      }
    } else if (section == "grid") {
      if (tokens[0] == "point" && tokens.size() == 2)
        doc.grid_points.push_back(parse_rat(line_no, section, tokens[1]));
      else if (tokens[0] == "step" && tokens.size() == 2)
        doc.grid_step = parse_rat(line_no, section, tokens[1]);
      else if (tokens[0] == "max" && tokens.size() == 2)
        doc.grid_max = parse_rat(line_no, section, tokens[1]);
      else
        throw ParseError(line_no, section, "expected point/step/max");
    } else if (section.empty()) {
      throw ParseError(line_no, "", "content before any section header");
    } else {
      throw ParseError(line_no, section, "unknown section");
    }
  }

  if (have_decomposition) {
    SignedDecomposition d{std::move(segments), std::move(signs),
                          std::move(choices)};
    std::vector<std::size_t> order(d.segments.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return d.segments[a].lower < d.segments[b].lower;
    });
    SignedDecomposition sorted;
    for (std::size_t i : order) {
      sorted.segments.push_back(d.segments[i]);
      sorted.signs.push_back(d.signs[i]);
    }
    sorted.endpoint_choices = std::move(d.endpoint_choices);
    try {
      sorted.validate();
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, "decomposition", e.what());
    }
    doc.decomposition = std::move(sorted);
  }
  try {
    if (!g1_grid.empty())
      doc.g1 = SampledFunction(std::move(g1_grid), std::move(g1_values));
    if (!g2_grid.empty())
      doc.g2 = SampledFunction(std::move(g2_grid), std::move(g2_values));
  } catch (const std::invalid_argument& e) {
    throw ParseError(line_no, "sampled", e.what());
  }
  return doc;
}

std::string serialize_decomposition(const SignedDecomposition& d) {
  std::ostringstream out;
  out << "[decomposition]\n";
  for (std::size_t i = 0; i < d.segments.size(); ++i)
    out << "segment " << d.segments[i].lower.str() << " "
        << d.segments[i].upper.str() << " "
        << (d.signs[i] == Sign::Plus ? "+1" : "-1") << "\n";
  for (const auto& [t, value] : d.endpoint_choices)
    out << "choice " << t.str() << " " << value.str() << "\n";
  return out.str();
}

}  // namespace vcg
