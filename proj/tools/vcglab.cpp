// vcglab: exact verification of VCG game instances.
//
// Subcommands: check (ex-post equilibrium decision with witness extraction),
// efficiency (worst-case welfare ratio against the tightest bound),
// decompose (segment recovery for compatible function pairs), generate
// (worked-example instances).
//
// Exit codes: 0 pass, 1 fail (witness or violated bound in the report),
// 2 input error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "vcglab/auction.hpp"
#include "vcglab/efficiency.hpp"
#include "vcglab/equilibrium.hpp"
#include "vcglab/generators.hpp"
#include "vcglab/instance_io.hpp"
#include "vcglab/parallelogram.hpp"

namespace {

using nlohmann::json;
using namespace vcg;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

json value_map(const AlternativeSet& alts, const std::vector<Rat>& values) {
  json out = json::object();
  for (std::size_t a = 0; a < values.size(); ++a)
    out[alts.label(a)] = values[a].str();
  return out;
}

json witness_json(const GameInstance& g, const Witness& w) {
  json out;
  out["subset"] = json::array();
  for (std::size_t i : w.subset) out["subset"].push_back(g.player_names[i]);
  out["grid_choice"] = w.grid_choice;
  out["valuations"] = json::array();
  for (std::size_t k = 0; k < w.subset.size(); ++k)
    out["valuations"].push_back(
        value_map(g.alternatives, w.valuations[k].values));
  out["announcements"] = json::array();
  for (std::size_t k = 0; k < w.subset.size(); ++k)
    out["announcements"].push_back(
        value_map(g.alternatives, w.announcements[k].values));
  out["chosen"] = g.alternatives.label(w.chosen);
  out["deviator"] = g.player_names[w.deviator];
  out["better"] = g.alternatives.label(w.better);
  out["gap"] = w.gap.str();
  return out;
}

void emit(const json& report, bool machine) {
  if (machine) {
    std::cout << report.dump(2) << "\n";
    return;
  }
  // Human format: flat key lines plus the witness, if any.
  for (const auto& [key, value] : report.items()) {
    if (value.is_structured()) continue;
    std::cout << key << ": "
              << (value.is_string() ? value.get<std::string>() : value.dump())
              << "\n";
  }
  if (report.contains("witness")) {
    const json& w = report["witness"];
    std::cout << "witness: player " << w["deviator"].get<std::string>()
              << " in subset " << w["subset"].dump() << " prefers "
              << w["better"].get<std::string>() << " over chosen "
              << w["chosen"].get<std::string>() << " by "
              << w["gap"].get<std::string>() << "\n";
  }
  if (report.contains("near_truth_on_maxima")) {
    const json& nt = report["near_truth_on_maxima"];
    std::cout << "near-truth on maxima: "
              << (nt["all_constant"].get<bool>() ? "CONSTANT" : "NOT CONSTANT")
              << "\n";
    for (const auto& entry : nt["entries"]) {
      std::cout << "  " << entry["player"].get<std::string>() << " v"
                << entry["valuation"].dump() << " offsets";
      for (const auto& o : entry["offsets"])
        std::cout << " " << o.get<std::string>();
      std::cout << (entry["constant"].get<bool>() ? "" : "  <- varies")
                << "\n";
    }
  }
  if (report.contains("lemmas"))
    for (const auto& item : report["lemmas"])
      std::cout << "lemma " << item["lemma"].get<std::string>() << ": "
                << item["status"].get<std::string>() << "\n";
  if (report.contains("counterexample")) {
    const json& c = report["counterexample"];
    std::cout << "counterexample: s=" << c["s"].get<std::string>()
              << " t=" << c["t"].get<std::string>()
              << " y=" << c["y"].get<std::string>() << " (clause "
              << c["clause"].dump() << ")\n";
  }
}

json lemma_json(const LemmaReport& report) {
  json out = json::array();
  for (const auto& item : report.items) {
    const char* status = "pass";
    switch (item.status) {
      case LemmaReport::Status::Pass: status = "pass"; break;
      case LemmaReport::Status::Fail: status = "fail"; break;
      case LemmaReport::Status::NotApplicable: status = "not-applicable"; break;
      case LemmaReport::Status::MissingProbe: status = "missing-probe"; break;
    }
    out.push_back({{"lemma", item.lemma},
                   {"status", status},
                   {"detail", item.detail}});
  }
  return out;
}

int cmd_check(const std::string& path, unsigned jobs, bool machine,
              std::size_t cap, std::uint64_t seed) {
  const auto started = std::chrono::steady_clock::now();
  InstanceDocument doc = parse_instance(read_file(path), cap);
  const EquilibriumVerdict verdict =
      is_expost_equilibrium(doc.instance, doc.profile, {jobs});

  json report;
  report["command"] = "check";
  report["status"] = verdict.pass ? "PASS" : "FAIL";
  report["cells_total"] = verdict.cells_total;
  if (verdict.failure_ordinal)
    report["failure_ordinal"] = *verdict.failure_ordinal;
  if (verdict.witness)
    report["witness"] = witness_json(doc.instance, *verdict.witness);

  if (doc.requests("near-truth-maxima")) {
    const NearTruthReport nt =
        verify_near_truth_on_maxima(doc.instance, doc.profile);
    json entries = json::array();
    for (const auto& e : nt.entries) {
      json offsets = json::array();
      for (const Rat& o : e.offsets) offsets.push_back(o.str());
      entries.push_back({{"player", doc.instance.player_names[e.player]},
                         {"valuation", e.valuation_index},
                         {"offsets", offsets},
                         {"constant", e.constant}});
    }
    report["near_truth_on_maxima"] = {{"all_constant", nt.all_constant},
                                      {"entries", entries}};
  }
  if (doc.requests("lemmas"))
    report["lemmas"] =
        lemma_json(check_structural_lemmas(doc.instance, doc.profile));
  if (doc.requests("cross-check")) {
    report["cross_check"] =
        deviation_cross_check(doc.instance, doc.profile, verdict, seed)
            ? "agree"
            : "disagree";
    report["seed"] = seed;
  }
  if (doc.requests("efficiency") && verdict.pass) {
    const WorstCaseRatio worst = worst_case_ratio(doc.instance, doc.profile);
    report["worst_case_ratio"] = worst.ratio.str();
  }
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - started);
  report["elapsed_ms"] = elapsed.count();
  emit(report, machine);
  return verdict.pass ? 0 : 1;
}

int cmd_efficiency(const std::string& path, unsigned jobs, bool machine,
                   std::size_t cap) {
  InstanceDocument doc = parse_instance(read_file(path), cap);
  json report;
  report["command"] = "efficiency";
  try {
    const EfficiencyReport e = bound_check(doc.instance, doc.profile, {jobs});
    report["status"] = e.satisfied ? "SATISFIED" : "VIOLATED";
    report["ratio"] = e.ratio.str();
    report["dominant_alternative"] =
        doc.instance.alternatives.label(e.dominant_alternative);
    report["equilibrium_alternative"] =
        doc.instance.alternatives.label(e.equilibrium_alternative);
    report["dominant_welfare"] = e.dominant_welfare.str();
    report["equilibrium_welfare"] = e.equilibrium_welfare.str();
    const char* bound = "player-count";
    if (e.bound == EfficiencyReport::Bound::Homogeneous) bound = "homogeneous";
    if (e.bound == EfficiencyReport::Bound::Compatible) bound = "compatible";
    report["bound"] = bound;
    report["bound_value"] = e.bound_value.str();
    report["homogeneity_degree"] = e.homogeneity.str();
    report["compatibility_degree"] = e.compatibility;
    report["witness_choice"] = e.witness_choice;
    emit(report, machine);
    return e.satisfied ? 0 : 1;
  } catch (const EquilibriumPreconditionError& e) {
    report["status"] = "PRECONDITION-FAILED";
    report["error"] = e.what();
    report["witness"] = witness_json(doc.instance, e.witness);
    emit(report, machine);
    return 1;
  }
}

int cmd_decompose(const std::string& path, const std::string& grid_step,
                  const std::string& grid_max, bool machine) {
  FunctionDocument doc = parse_function_document(read_file(path));
  json report;
  report["command"] = "decompose";

  std::vector<Rat> extra = doc.grid_points;
  std::optional<Rat> step =
      grid_step.empty()
          ? doc.grid_step
          : std::optional<Rat>(Rat::parse(grid_step));
  std::optional<Rat> maxp = grid_max.empty()
                                ? doc.grid_max
                                : std::optional<Rat>(Rat::parse(grid_max));
  if (step && *step <= Rat(0)) throw std::runtime_error("grid step must be positive");
  if (step) {
    const Rat upper = maxp.value_or(Rat(20));
    for (Rat x = *step; !(upper < x); x += *step) extra.push_back(x);
  }

  if (doc.decomposition) {
    auto [h1, h2] = build_compatible_pair(*doc.decomposition);
    std::vector<Rat> grid = refine_grid(*doc.decomposition);
    grid.insert(grid.end(), extra.begin(), extra.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    const MveResult mve = check_mve(h1, h2, grid);
    report["mve"] = mve.pass ? "PASS" : "FAIL";
    const CompatibilityReport compat = verify_compatibility(
        [&](const Rat& x) { return h1(x); },
        [&](const Rat& x) { return h2(x); }, *doc.decomposition);
    report["compatible"] = compat.all_pass();

    SignedDecomposition recovered = decompose(h1, h2);
    report["round_trip_exact"] = recovered == *doc.decomposition;
    json segments = json::array();
    const auto classes = classify_segments(h1);
    for (std::size_t i = 0; i < recovered.segments.size(); ++i) {
      json seg;
      seg["lower"] = recovered.segments[i].lower.str();
      seg["upper"] = recovered.segments[i].upper.str();
      seg["sign"] = recovered.signs[i] == Sign::Plus ? "+1" : "-1";
      json in;
      in["d1"] = classes[i].d1;
      in["d2"] = classes[i].d2;
      in["d3"] = classes[i].d3;
      in["d4"] = classes[i].d4;
      in["d5"] = classes[i].d5;
      in["d6"] = classes[i].d6;
      seg["classes"] = in;
      segments.push_back(seg);
    }
    report["segments"] = segments;
    json choices = json::object();
    for (const auto& [t, v] : recovered.endpoint_choices)
      choices[t.str()] = v.str();
    report["endpoint_choices"] = choices;
    report["status"] = mve.pass && compat.all_pass() ? "PASS" : "FAIL";
    emit(report, machine);
    return report["status"] == "PASS" ? 0 : 1;
  }

  if (!doc.g1 || !doc.g2)
    throw std::runtime_error(
        "function file needs [decomposition] or both [sampled g1] and "
        "[sampled g2]");
  const MveResult mve = check_mve(*doc.g1, *doc.g2);
  report["mve"] = mve.pass ? "PASS" : "FAIL";
  report["status"] = mve.pass ? "PASS" : "FAIL";
  if (mve.counterexample) {
    report["counterexample"] = {{"s", mve.counterexample->s.str()},
                                {"t", mve.counterexample->t.str()},
                                {"y", mve.counterexample->y.str()},
                                {"clause", mve.counterexample->clause}};
  }
  emit(report, machine);
  return mve.pass ? 0 : 1;
}

int cmd_generate(const std::string& name, std::size_t players,
                 std::size_t alternatives, const std::string& epsilon) {
  const Rat eps = Rat::parse(epsilon);
  InstanceDocument doc = [&]() -> InstanceDocument {
    if (name == "vickrey2") {
      Vickrey2Output v = gen_vickrey2();
      return InstanceDocument{std::move(v.instance),
                              std::move(v.profile),
                              {"equilibrium", "lemmas"},
                              std::move(v.space),
                              std::move(v.bundle_tables),
                              std::move(v.reported),
                              {false, false}};
    }
    if (name == "example5") {
      GeneratedGame g = gen_example5(players, eps);
      return InstanceDocument{std::move(g.instance),
                              std::move(g.profile),
                              {"equilibrium", "efficiency"},
                              std::nullopt,
                              {},
                              {},
                              {}};
    }
    if (name == "example6") {
      GeneratedGame g = gen_example6(alternatives, players, eps);
      return InstanceDocument{std::move(g.instance),
                              std::move(g.profile),
                              {"equilibrium", "efficiency"},
                              std::nullopt,
                              {},
                              {},
                              {}};
    }
    if (name == "sprime") {
      SprimeOutput s = gen_sprime();
      return InstanceDocument{std::move(s.instance),
                              std::move(s.profile),
                              {"equilibrium"},
                              std::nullopt,
                              {},
                              {},
                              {}};
    }
    if (name == "maxima-plus-ten") {
      GeneratedGame g = gen_maxima_plus_ten(players);
      return InstanceDocument{std::move(g.instance),
                              std::move(g.profile),
                              {"equilibrium", "near-truth-maxima", "lemmas"},
                              std::nullopt,
                              {},
                              {},
                              {}};
    }
    throw std::runtime_error(
        "unknown generator '" + name +
        "' (expected vickrey2, example5, example6, sprime, maxima-plus-ten)");
  }();
  std::cout << serialize_instance(doc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact VCG game verification"};
  app.require_subcommand(1);

  std::string path;
  std::string format = "human";
  unsigned jobs = 1;
  std::size_t cap = kDefaultAllocationCap;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* cmd, bool needs_file) {
    if (needs_file)
      cmd->add_option("file", path, "input file")->required();
    cmd->add_option("--format", format, "human|machine")
        ->check(CLI::IsMember({"human", "machine"}));
    cmd->add_option("--jobs", jobs, "worker threads (verdict-invariant)");
    cmd->add_option("--max-alternatives", cap,
                    "allocation enumeration cap");
    cmd->add_option("--seed", seed,
                    "seed for the randomized deviation cross-check only");
  };

  CLI::App* check = app.add_subcommand("check", "decide ex-post equilibrium");
  add_common(check, true);

  CLI::App* efficiency =
      app.add_subcommand("efficiency", "worst-case welfare ratio and bounds");
  add_common(efficiency, true);

  CLI::App* decompose =
      app.add_subcommand("decompose", "segment decomposition / MVE check");
  std::string grid_step, grid_max;
  add_common(decompose, true);
  decompose->add_option("--grid", grid_step, "extra grid step (rational)");
  decompose->add_option("--grid-max", grid_max, "extra grid upper bound");

  CLI::App* generate = app.add_subcommand("generate", "emit a worked example");
  std::string name;
  std::size_t players = 3;
  std::size_t alternatives = 5;
  std::string epsilon = "1/10";
  generate->add_option("name", name, "vickrey2|example5|example6|sprime|maxima-plus-ten")
      ->required();
  generate->add_option("--players", players, "player count");
  generate->add_option("--alternatives", alternatives, "alternative count (example6)");
  generate->add_option("--epsilon", epsilon, "epsilon as p/q");

  CLI11_PARSE(app, argc, argv);
  const bool machine = format == "machine";

  try {
    if (check->parsed()) return cmd_check(path, jobs, machine, cap, seed);
    if (efficiency->parsed()) return cmd_efficiency(path, jobs, machine, cap);
    if (decompose->parsed())
      return cmd_decompose(path, grid_step, grid_max, machine);
    if (generate->parsed())
      return cmd_generate(name, players, alternatives, epsilon);
  } catch (const DecomposeError& e) {
    json report{{"command", "decompose"}, {"status", "FAIL"},
                {"error", e.what()}};
    if (e.counterexample)
      report["counterexample"] = {{"s", e.counterexample->s.str()},
                                  {"t", e.counterexample->t.str()},
                                  {"y", e.counterexample->y.str()},
                                  {"clause", e.counterexample->clause}};
    emit(report, machine);
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
