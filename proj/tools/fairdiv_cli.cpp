// Command-line surface for the fair-division library: allocate goods, check
// fairness properties, audit stability under misreports, reproduce the
// worked example tables, and time the solvers.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fairdiv/allocators.hpp"
#include "fairdiv/fairness.hpp"
#include "fairdiv/gen.hpp"
#include "fairdiv/instance.hpp"
#include "fairdiv/rank.hpp"
#include "fairdiv/rational.hpp"
#include "fairdiv/stability.hpp"

namespace {

using namespace fairdiv;
using nlohmann::ordered_json;

constexpr int kExitHolds = 0;
constexpr int kExitFails = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitBudget = 3;

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
  }
  const auto dot = text.find('.');
  if (dot != std::string::npos) {
    const std::string frac = text.substr(dot + 1);
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    return Rational(std::stoll(text.substr(0, dot)) * den + std::stoll(frac), den);
  }
  return Rational(std::stoll(text));
}

ordered_json rational_json(const Rational& r) {
  return ordered_json{{"num", r.num()}, {"den", r.den()}, {"decimal", r.to_decimal()}};
}

ordered_json bundles_json(const Allocation& alloc) {
  return ordered_json::parse(allocation_to_json(alloc));
}

ordered_json labels_json(const Allocation& alloc, const Instance& inst) {
  ordered_json out = ordered_json::array();
  for (const Bundle& b : alloc.bundles) {
    ordered_json labels = ordered_json::array();
    for (int g : b.goods()) {
      labels.push_back(!inst.names.empty() ? inst.names[g] : "g" + std::to_string(g + 1));
    }
    out.push_back(std::move(labels));
  }
  return out;
}

void emit(const ordered_json& doc) { std::cout << doc.dump(2) << "\n"; }

// ---------------------------------------------------------------------------
// allocate

int cmd_allocate(const std::string& algo, const std::string& path, int jobs) {
  const AllocatorId id = AllocatorId::parse(algo);
  const Instance inst = load_instance(path);
  ScanOptions opts{budgets_from_env(), jobs};

  const Allocation alloc = run_allocator(id, inst, opts);
  const std::vector<RankTable> tables = build_full_tables(inst, opts.budgets);

  ordered_json doc;
  doc["algo"] = id.to_string();
  doc["bundles"] = bundles_json(alloc);
  ordered_json utilities = ordered_json::array();
  ordered_json ranks = ordered_json::array();
  for (int i = 0; i < inst.n; ++i) {
    utilities.push_back(bundle_value(inst, i, alloc.bundles[i]));
    ranks.push_back(rank_of(tables[i], inst, alloc.bundles[i]));
  }
  doc["utilities"] = std::move(utilities);
  doc["ranks"] = std::move(ranks);
  emit(doc);
  return kExitHolds;
}

// ---------------------------------------------------------------------------
// check

struct PropRequest {
  FairnessProperty property;
  std::string name;
};

std::vector<PropRequest> parse_props(const std::string& list) {
  std::vector<PropRequest> out;
  std::stringstream stream(list);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token == "ef1") {
      out.push_back({FairnessProperty::ef1, token});
    } else if (token == "efx") {
      out.push_back({FairnessProperty::efx, token});
    } else if (token == "pmms") {
      out.push_back({FairnessProperty::pmms, token});
    } else if (token == "pmms-rank") {
      out.push_back({FairnessProperty::pmms_rank, token});
    } else if (token == "po" || token == "beta-po") {
      out.push_back({FairnessProperty::beta_po, token});
    } else {
      throw std::invalid_argument(
          "unknown property \"" + token +
          "\"; valid: ef1, efx, pmms, pmms-rank, po, beta-po");
    }
  }
  if (out.empty()) throw std::invalid_argument("no properties requested");
  return out;
}

int cmd_check(const std::string& props, const std::string& beta_text,
              const std::string& path, const std::string& allocation_text, int jobs) {
  const std::vector<PropRequest> requests = parse_props(props);
  const Rational beta = parse_rational(beta_text);
  const Instance inst = load_instance(path);
  const Allocation alloc = parse_allocation(allocation_text, inst);
  ScanOptions opts{budgets_from_env(), jobs};

  bool all_hold = true;
  ordered_json verdicts = ordered_json::array();
  for (const PropRequest& request : requests) {
    FairnessVerdict verdict;
    switch (request.property) {
      case FairnessProperty::ef1: verdict = check_ef1(inst, alloc); break;
      case FairnessProperty::efx: verdict = check_efx(inst, alloc); break;
      case FairnessProperty::pmms: verdict = check_pmms_definition(inst, alloc, opts.budgets); break;
      case FairnessProperty::pmms_rank: verdict = check_pmms_rank(inst, alloc, opts.budgets); break;
      case FairnessProperty::beta_po:
        verdict = check_beta_po(inst, alloc, request.name == "po" ? Rational(1) : beta, opts);
        break;
    }
    all_hold = all_hold && verdict.holds;
    verdicts.push_back(ordered_json::parse(to_json(verdict)));
  }
  ordered_json doc;
  doc["allocation"] = bundles_json(alloc);
  doc["verdicts"] = std::move(verdicts);
  emit(doc);
  return all_hold ? kExitHolds : kExitFails;
}

// ---------------------------------------------------------------------------
// audit

void write_csv(const std::string& path, const StabilityReport& report,
               const Instance& inst) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open CSV output file: " + path);
  for (int j = 0; j < inst.m; ++j) out << "v" << j << ",";
  out << "true_utility,ratio_num,ratio_den,ratio\n";
  for (const NeighborOutcome& outcome : report.outcomes) {
    for (Value v : outcome.report) out << v << ",";
    out << outcome.true_utility << ",";
    if (report.truthful_utility > 0) {
      const Rational ratio(outcome.true_utility, report.truthful_utility);
      out << ratio.num() << "," << ratio.den() << "," << ratio.to_decimal(12);
    } else {
      out << ",,";
    }
    out << "\n";
  }
}

int cmd_audit(const std::string& algo, int agent, std::int64_t alpha,
              const std::string& mode, std::uint64_t samples, std::uint64_t seed,
              const std::string& csv_path, const std::string& path, int jobs) {
  const AllocatorId id = AllocatorId::parse(algo);
  const Instance inst = load_instance(path);

  NeighborSpec spec;
  spec.agent = agent;
  spec.alpha = alpha;
  spec.seed = seed;
  if (mode == "exhaustive") {
    spec.mode = NeighborSpec::Mode::exhaustive;
  } else if (mode == "sample") {
    spec.mode = NeighborSpec::Mode::sample;
    spec.sample_count = samples;
  } else {
    throw std::invalid_argument("unknown mode \"" + mode + "\"; valid: exhaustive, sample");
  }

  ScanOptions opts{budgets_from_env(), jobs};
  const StabilityReport report =
      audit_stability(id, inst, spec, opts, /*collect_outcomes=*/!csv_path.empty());
  if (!csv_path.empty()) write_csv(csv_path, report, inst);
  emit(ordered_json::parse(to_json(report)));
  return kExitHolds;
}

// ---------------------------------------------------------------------------
// paper-tables

struct Assertions {
  ordered_json results = ordered_json::array();
  bool all_ok = true;

  void expect(const std::string& what, bool ok, const std::string& detail = "") {
    all_ok = all_ok && ok;
    ordered_json entry;
    entry["assertion"] = what;
    entry["ok"] = ok;
    if (!detail.empty()) entry["detail"] = detail;
    results.push_back(std::move(entry));
    if (!ok) std::cerr << "assertion failed: " << what << " " << detail << "\n";
  }
};

ordered_json instance_json(const Instance& inst) {
  ordered_json doc;
  doc["values"] = inst.values;
  ordered_json labels = ordered_json::array();
  for (int j = 0; j < inst.m; ++j) labels.push_back("g" + std::to_string(j + 1));
  doc["good_labels_1based"] = std::move(labels);
  return doc;
}

ordered_json output_json(const Instance& inst, const Allocation& alloc) {
  ordered_json doc;
  doc["bundles"] = bundles_json(alloc);
  doc["bundles_1based"] = labels_json(alloc, inst);
  ordered_json utilities = ordered_json::array();
  for (int i = 0; i < inst.n; ++i) utilities.push_back(bundle_value(inst, i, alloc.bundles[i]));
  doc["utilities"] = std::move(utilities);
  return doc;
}

int tables_one(ordered_json& doc, Assertions& checks, const ScanOptions& opts) {
  const Instance original = Instance::from_values(
      {{104, 273, 186, 437}, {162, 250, 240, 348}});
  const Instance mistaken = Instance::from_values(
      {{105, 271, 186, 438}, {162, 250, 240, 348}});

  const Allocation out_a = mnw_allocate(original, opts);
  const Allocation out_b = mnw_allocate(mistaken, opts);
  const Allocation want_a{{Bundle(0b1010), Bundle(0b0101)}};  // ({g2,g4},{g1,g3})
  const Allocation want_b{{Bundle(0b1000), Bundle(0b0111)}};  // ({g4},{g1,g2,g3})

  doc["instances"]["original"] = instance_json(original);
  doc["instances"]["mistaken"] = instance_json(mistaken);
  doc["mnw"]["original"] = output_json(original, out_a);
  doc["mnw"]["mistaken"] = output_json(mistaken, out_b);

  checks.expect("mnw(original) = ({g2,g4},{g1,g3})", out_a == want_a,
                allocation_to_json(out_a));
  checks.expect("mnw(mistaken) = ({g4},{g1,g2,g3})", out_b == want_b,
                allocation_to_json(out_b));

  // Agent A's utilities under their TRUE valuation.
  const Value truthful = bundle_value(original, 0, out_a.bundles[0]);
  const Value mistaken_u = bundle_value(original, 0, out_b.bundles[0]);
  const Rational loss(truthful - mistaken_u, truthful);
  doc["agent_a_true_utility"] = {{"truthful", truthful}, {"mistaken", mistaken_u}};
  doc["loss"] = rational_json(loss);
  doc["loss"]["percent"] = (loss * Rational(100)).to_decimal(4);
  checks.expect("agent A true utility 710 -> 437", truthful == 710 && mistaken_u == 437);
  checks.expect("loss = 273/710", loss == Rational(273, 710), loss.to_string());
  return 0;
}

int tables_two(ordered_json& doc, Assertions& checks, const ScanOptions& opts) {
  const Value T = 1000;
  const Instance original = Instance::from_values({{T - 1, 1}, {T - 2, 2}});
  const Instance mistaken = Instance::from_values({{T - 3, 3}, {T - 2, 2}});
  doc["instances"]["original"] = instance_json(original);
  doc["instances"]["mistaken"] = instance_json(mistaken);

  const Allocation first{{Bundle(0b01), Bundle(0b10)}};   // ({g1},{g2})
  const Allocation second{{Bundle(0b10), Bundle(0b01)}};  // ({g2},{g1})
  for (const char* algo : {"leximin", "mnw"}) {
    const AllocatorId id = AllocatorId::parse(algo);
    const Allocation out_a = run_allocator(id, original, opts);
    const Allocation out_b = run_allocator(id, mistaken, opts);
    doc[algo]["original"] = output_json(original, out_a);
    doc[algo]["mistaken"] = output_json(mistaken, out_b);
    checks.expect(std::string(algo) + "(original) = ({g1},{g2})", out_a == first);
    checks.expect(std::string(algo) + "(mistaken) = ({g2},{g1})", out_b == second);
  }

  NeighborSpec spec;
  spec.agent = 0;
  spec.alpha = 4;
  for (const char* algo : {"leximin", "mnw", "rank-leximin", "modified:leximin"}) {
    const StabilityReport report =
        audit_stability(AllocatorId::parse(algo), original, spec, opts);
    doc["audit"][algo] = ordered_json::parse(to_json(report));
  }
  const Rational want_low(1, T - 1);
  for (const char* algo : {"leximin", "mnw"}) {
    const auto& low = doc["audit"][algo]["worst_low_ratio"];
    checks.expect(std::string(algo) + " worst_low_ratio = 1/" + std::to_string(T - 1),
                  low["num"] == want_low.num() && low["den"] == want_low.den(),
                  low.dump());
  }
  for (const char* algo : {"rank-leximin", "modified:leximin"}) {
    checks.expect(std::string(algo) + " epsilon = 1",
                  doc["audit"][algo]["exact_stable"] == true);
  }
  return 0;
}

int tables_three(ordered_json& doc, Assertions& checks, const ScanOptions& opts) {
  const Value T = 9;
  const Instance original = Instance::from_values({{3, 2, 2, 2}, {3, 2, 2, 2}});
  const Instance mistaken = Instance::from_values({{3, 2, 2, 2}, {T - 3, 1, 1, 1}});
  doc["instances"]["original"] = instance_json(original);
  doc["instances"]["mistaken"] = instance_json(mistaken);

  const Allocation stable_outcome{{Bundle(0b1001), Bundle(0b0110)}};  // ({g1,g4},{g2,g3})
  const Allocation dominating{{Bundle(0b1110), Bundle(0b0001)}};      // ({g2,g3,g4},{g1})
  doc["checked_allocation"] = output_json(mistaken, stable_outcome);
  doc["dominating_allocation"] = output_json(mistaken, dominating);

  bool pareto = true;
  bool strict = false;
  for (int i = 0; i < 2; ++i) {
    const Value before = bundle_value(mistaken, i, stable_outcome.bundles[i]);
    const Value after = bundle_value(mistaken, i, dominating.bundles[i]);
    pareto = pareto && after >= before;
    strict = strict || after > before;
  }
  checks.expect("({g2,g3,g4},{g1}) Pareto-dominates ({g1,g4},{g2,g3})", pareto && strict);

  const Value factor_base = bundle_value(mistaken, 1, stable_outcome.bundles[1]);
  const Value factor_top = bundle_value(mistaken, 1, dominating.bundles[1]);
  const Rational factor(factor_top, factor_base);
  doc["domination_factor"] = rational_json(factor);
  checks.expect("domination factor = (T-3)/2 = 3", factor == Rational(T - 3, 2),
                factor.to_string());

  const FairnessVerdict verdict = check_beta_po(mistaken, stable_outcome, Rational(3), opts);
  doc["beta_po_verdict"] = ordered_json::parse(to_json(verdict));
  checks.expect("check_beta_po(beta=3) fails with witness ({g2,g3,g4},{g1})",
                !verdict.holds && verdict.domination &&
                    verdict.domination->allocation == dominating &&
                    verdict.domination->factor == Rational(3));

  Value l1 = 0;
  for (int j = 0; j < 4; ++j) {
    l1 += std::abs(original.values[1][j] - mistaken.values[1][j]);
  }
  doc["misreport_l1"] = l1;
  checks.expect("misreport L1 <= 4T/3", 3 * l1 <= 4 * T, std::to_string(l1));
  return 0;
}

int cmd_paper_tables(int which, int jobs) {
  ScanOptions opts{budgets_from_env(), jobs};
  ordered_json doc;
  doc["table"] = which;
  Assertions checks;
  switch (which) {
    case 1: tables_one(doc, checks, opts); break;
    case 2: tables_two(doc, checks, opts); break;
    case 3: tables_three(doc, checks, opts); break;
    default: throw std::invalid_argument("paper-tables: table must be 1, 2, or 3");
  }
  doc["assertions"] = checks.results;
  doc["all_assertions_hold"] = checks.all_ok;
  emit(doc);
  return checks.all_ok ? kExitHolds : kExitFails;
}

// ---------------------------------------------------------------------------
// bench

int cmd_bench(const std::string& family, const std::string& sizes,
              std::uint64_t seed, Value total, const std::string& algos, int jobs) {
  if (family != "uniform" && family != "identical") {
    throw std::invalid_argument("unknown family \"" + family + "\"; valid: uniform, identical");
  }
  std::vector<std::pair<int, int>> parsed_sizes;
  {
    std::stringstream stream(sizes);
    std::string token;
    while (std::getline(stream, token, ',')) {
      const auto x = token.find('x');
      if (x == std::string::npos) {
        throw std::invalid_argument("sizes must look like 2x4,2x8");
      }
      parsed_sizes.emplace_back(std::stoi(token.substr(0, x)),
                                std::stoi(token.substr(x + 1)));
    }
  }
  std::vector<AllocatorId> ids;
  {
    std::stringstream stream(algos);
    std::string token;
    while (std::getline(stream, token, ',')) ids.push_back(AllocatorId::parse(token));
  }

  ScanOptions opts{budgets_from_env(), jobs};
  ordered_json doc;
  doc["family"] = family;
  doc["seed"] = seed;
  doc["total"] = total;
  ordered_json runs = ordered_json::array();
  std::mt19937_64 rng(seed);
  for (const auto& [n, m] : parsed_sizes) {
    const Instance inst = family == "uniform" ? random_instance(rng, n, m, total)
                                              : random_identical_instance(rng, n, m, total);
    for (const AllocatorId& id : ids) {
      if (id.modified && inst.n != 2) continue;
      const auto start = std::chrono::steady_clock::now();
      const Allocation alloc = run_allocator(id, inst, opts);
      const auto stop = std::chrono::steady_clock::now();
      ordered_json run;
      run["n"] = n;
      run["m"] = m;
      run["algo"] = id.to_string();
      ordered_json utilities = ordered_json::array();
      for (int i = 0; i < inst.n; ++i) utilities.push_back(bundle_value(inst, i, alloc.bundles[i]));
      run["utilities"] = std::move(utilities);
      run["millis"] =
          std::chrono::duration_cast<std::chrono::microseconds>(stop - start).count() / 1000.0;
      runs.push_back(std::move(run));
    }
  }
  doc["runs"] = std::move(runs);
  emit(doc);
  return kExitHolds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact fair division of indivisible goods: allocators, fairness checks, and stability audits"};
  app.require_subcommand(1);

  int jobs = 1;
  app.add_option("--jobs", jobs, "Worker threads for enumeration scans")->capture_default_str();

  std::string algo = "rank-leximin";
  std::string input_path;
  auto* allocate = app.add_subcommand("allocate", "Compute an allocation");
  allocate->add_option("--algo", algo, "draft | leximin | mnw | rank-leximin | modified:<inner>")
      ->capture_default_str();
  allocate->add_option("input", input_path, "Instance JSON file")->required();

  std::string props = "pmms";
  std::string beta = "1";
  std::string allocation_text;
  auto* check = app.add_subcommand("check", "Check fairness properties of an allocation");
  check->add_option("--props", props, "Comma list: ef1, efx, pmms, pmms-rank, po, beta-po")
      ->capture_default_str();
  check->add_option("--beta", beta, "Rational beta for beta-po, e.g. 3 or 3/2")
      ->capture_default_str();
  check->add_option("input", input_path, "Instance JSON file")->required();
  check->add_option("allocation", allocation_text, "Allocation as JSON good-index lists")
      ->required();

  int agent = 0;
  std::int64_t alpha = 1;
  std::string mode = "exhaustive";
  std::uint64_t samples = 1000;
  std::uint64_t seed = 0;
  std::string csv_path;
  auto* audit = app.add_subcommand("audit", "Audit stability under misreports");
  audit->add_option("--algo", algo)->capture_default_str();
  audit->add_option("--agent", agent, "Audited agent index")->capture_default_str();
  audit->add_option("--alpha", alpha, "L1 misreport radius")->capture_default_str();
  audit->add_option("--mode", mode, "exhaustive | sample")->capture_default_str();
  audit->add_option("--samples", samples, "Sample size in sample mode")->capture_default_str();
  audit->add_option("--seed", seed)->capture_default_str();
  audit->add_option("--csv", csv_path, "Write per-neighbor ratios to this CSV file");
  audit->add_option("input", input_path, "Instance JSON file")->required();

  int which = 1;
  auto* tables = app.add_subcommand("paper-tables", "Reproduce the worked example tables");
  tables->add_option("which", which, "1, 2, or 3")->required();

  std::string family = "uniform";
  std::string sizes = "2x4,2x8";
  Value total = 1000;
  std::string algos = "draft,leximin,mnw,rank-leximin";
  auto* bench = app.add_subcommand("bench", "Time the allocators on generated instances");
  bench->add_option("--family", family, "uniform | identical")->capture_default_str();
  bench->add_option("--sizes", sizes, "Comma list of NxM sizes")->capture_default_str();
  bench->add_option("--seed", seed)->capture_default_str();
  bench->add_option("--total", total, "Common valuation total T")->capture_default_str();
  bench->add_option("--algos", algos)->capture_default_str();

  try {
    app.parse(argc, argv);
    if (allocate->parsed()) return cmd_allocate(algo, input_path, jobs);
    if (check->parsed()) return cmd_check(props, beta, input_path, allocation_text, jobs);
    if (audit->parsed())
      return cmd_audit(algo, agent, alpha, mode, samples, seed, csv_path, input_path, jobs);
    if (tables->parsed()) return cmd_paper_tables(which, jobs);
    if (bench->parsed()) return cmd_bench(family, sizes, seed, total, algos, jobs);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitHolds : kExitInvalid;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const ValidationError& e) {
    std::cerr << "invalid instance: ";
    for (const auto& [rule, message] : e.report().violations) {
      std::cerr << "[" << rule << "] " << message << "; ";
    }
    std::cerr << "\n";
    return kExitInvalid;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
