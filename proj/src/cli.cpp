#include "recruit/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <map>
#include <sstream>

#include "recruit/evaluator.hpp"
#include "recruit/experiments.hpp"
#include "recruit/indices.hpp"
#include "recruit/model.hpp"
#include "recruit/report.hpp"
#include "recruit/scenario_io.hpp"
#include "recruit/version.hpp"

namespace recruit::cli {

namespace {

using report::Cell;
using report::Document;
using report::Table;

struct ScenarioArgs {
  std::string source;                 // file path or builtin id
  std::vector<std::string> overrides; // key=value
};

std::string builtin_text(const std::string& id) {
  static const std::map<std::string, std::pair<CaseId, bool>> ids = {
      {"P1.before", {CaseId::P1, true}}, {"P1.after", {CaseId::P1, false}},
      {"P2.before", {CaseId::P2, true}}, {"P2.after", {CaseId::P2, false}},
      {"P3.before", {CaseId::P3, true}}, {"P3.after", {CaseId::P3, false}},
      {"P4.before", {CaseId::P4, true}}, {"P4.after", {CaseId::P4, false}},
  };
  std::string key = id;
  for (auto& ch : key)
    if (ch == ':') ch = '.';
  const auto it = ids.find(key);
  if (it == ids.end()) return "";
  const PropositionCase& c = builtin_case(it->second.first);
  return serialize_scenario(it->second.second ? c.before : c.after);
}

Scenario load_scenario(const ScenarioArgs& args) {
  std::string text = builtin_text(args.source);
  if (text.empty()) {
    std::ifstream in(args.source);
    if (!in)
      throw std::runtime_error("cannot open scenario '" + args.source +
                               "' (not a file, and not one of P1..P4 "
                               ".before/.after)");
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  auto kv = parse_kv(text);
  for (const auto& o : args.overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos)
      throw ParseError("--set expects key=value, got '" + o + "'");
    kv[o.substr(0, eq)] = o.substr(eq + 1);
  }
  return scenario_from_kv(kv);
}

void require_valid(const Scenario& s) {
  const auto violations = validate(s);
  if (hard_valid(violations)) return;
  std::string what = "invalid scenario:";
  for (const auto& v : violations)
    if (v.hard) what += "\n  " + v.name + ": " + v.detail;
  throw std::runtime_error(what);
}

void base_meta(Document& doc, const std::string& verb) {
  doc.meta.emplace_back("tool", Cell::str("recruit"));
  doc.meta.emplace_back("version", Cell::str(kVersion));
  doc.meta.emplace_back("verb", Cell::str(verb));
}

void tolerance_meta(Document& doc, const NumericalConfig& cfg) {
  doc.meta.emplace_back("index_tol", Cell::num(cfg.index_tol));
  doc.meta.emplace_back("horizon_cap", Cell::count(cfg.horizon_cap));
  doc.meta.emplace_back("prob_tol", Cell::num(cfg.prob_tol));
}

std::string pool_to_text(const PoolState& pool) {
  std::string out = "[";
  for (std::size_t i = 0; i < pool.candidates.size(); ++i) {
    const auto& c = pool.candidates[i];
    if (i) out += " ";
    out += category_letter(c.category);
    out += "(" + std::to_string(c.n1) + "," + std::to_string(c.n0) + ")";
    if (c.retired) out += "r";
  }
  out += "]";
  return out;
}

std::string action_to_text(const Action& a, const PoolState& pool) {
  if (a.kind == Action::Kind::Search) return "search";
  const auto& c = pool.candidates[a.pool_position];
  return std::string("evaluate ") + category_letter(c.category) + "#" +
         std::to_string(a.pool_position);
}

// ---- verbs -----------------------------------------------------------------

Document do_validate(const Scenario& s) {
  Document doc;
  const auto violations = validate(s);
  doc.meta.emplace_back("ok", Cell::flag(violations.empty()));
  doc.meta.emplace_back("hard_ok", Cell::flag(hard_valid(violations)));
  Table t;
  t.name = "violations";
  t.columns = {"severity", "name", "detail"};
  for (const auto& v : violations)
    t.rows.push_back({Cell::str(v.hard ? "hard" : "assumption"),
                      Cell::str(v.name), Cell::str(v.detail)});
  doc.tables.push_back(std::move(t));
  return doc;
}

Document do_indices(const Scenario& s, int depth) {
  require_valid(s);
  Document doc;
  tolerance_meta(doc, s.tolerances);

  const MyopicValues m = myopic_values(s);
  Table tm;
  tm.name = "myopic_values";
  tm.columns = {"quantity", "value"};
  tm.rows.push_back({Cell::str("uA_blank"), Cell::num(m.uA_blank)});
  tm.rows.push_back({Cell::str("uB_blank"), Cell::num(m.uB_blank)});
  tm.rows.push_back({Cell::str("uS"), Cell::num(m.uS)});
  doc.tables.push_back(std::move(tm));

  Table tc;
  tc.name = "candidate_indices";
  tc.columns = {"category", "n1", "n0", "posterior", "myopic_value", "index",
                "acceptable"};
  for (Category cat : {Category::A, Category::B}) {
    const CategoryParams& params = s.params(cat);
    for (int d = 0; d <= depth; ++d) {
      for (int n1 = 0; n1 <= d; ++n1) {
        const int n0 = d - n1;
        double post;
        try {
          post = posterior(params, n1, n0);
        } catch (const std::domain_error&) {
          continue;  // history has probability zero under both types
        }
        const bool acc = is_acceptable_posterior(params, post);
        std::vector<Cell> row;
        row.push_back(Cell::str(std::string(1, category_letter(cat))));
        row.push_back(Cell::count(n1));
        row.push_back(Cell::count(n0));
        row.push_back(Cell::num(post));
        row.push_back(acc ? Cell::str("-")
                          : Cell::num(myopic_value(params, n1, n0)));
        row.push_back(Cell::num(
            gittins_index(params, n1, n0, s.delta, s.tolerances).value));
        row.push_back(Cell::flag(acc));
        tc.rows.push_back(std::move(row));
      }
    }
  }
  doc.tables.push_back(std::move(tc));

  const IndexResult vs = search_index(s, s.tolerances);
  Table ts;
  ts.name = "search_index";
  ts.columns = {"quantity", "value"};
  ts.rows.push_back({Cell::str("VS"), Cell::num(vs.value)});
  ts.rows.push_back({Cell::str("achieved_tol"), Cell::num(vs.achieved_tol)});
  doc.tables.push_back(std::move(ts));
  return doc;
}

void trace_rec(const Scenario& s, const PolicyContext& ctx, const PoolState& pool,
               const std::string& path, double prob, int depth, int limit,
               Table& t) {
  if (pool.is_terminated()) {
    t.rows.push_back({Cell::str(path), Cell::num(prob), Cell::str(pool_to_text(pool)),
                      Cell::str(std::string("hired ") +
                                category_letter(pool.terminated->category))});
    return;
  }
  if (depth >= limit) {
    t.rows.push_back({Cell::str(path), Cell::num(prob),
                      Cell::str(pool_to_text(pool)), Cell::str("(depth limit)")});
    return;
  }
  const PoolState marked = mark_retirements(pool, ctx);
  const Action a = select_action(marked, ctx);
  t.rows.push_back({Cell::str(path), Cell::num(prob), Cell::str(pool_to_text(marked)),
                    Cell::str(action_to_text(a, marked))});
  auto child = [&](const std::string& label, double p, const ExogenousDraw& draw) {
    if (p <= 0.0) return;
    const StepOutcome out = apply(marked, s, a, draw);
    trace_rec(s, ctx, out.next, path.empty() ? label : path + " " + label,
              prob * p, depth + 1, limit, t);
  };
  if (a.kind == Action::Kind::Evaluate) {
    const auto& c = marked.candidates[a.pool_position];
    const double ps1 = signal_prob(s.params(c.category), c.n1, c.n0, 1);
    ExogenousDraw d1, d0;
    d1.signal = 1;
    d0.signal = 0;
    child("s=1", ps1, d1);
    child("s=0", 1.0 - ps1, d0);
  } else {
    ExogenousDraw dA, dB, dN;
    dA.arrival = 0;
    dB.arrival = 1;
    dN.arrival = 2;
    child("arr=A", s.muA, dA);
    child("arr=B", s.muB, dB);
    child("arr=none", 1.0 - s.muA - s.muB, dN);
  }
}

Document do_action_trace(const Scenario& s, int depth) {
  require_valid(s);
  Document doc;
  doc.meta.emplace_back("policy", Cell::str(s.policy == PolicyKind::Myopic
                                                ? "myopic"
                                                : "optimal"));
  doc.meta.emplace_back("depth", Cell::count(depth));
  const PolicyContext ctx(s);
  doc.meta.emplace_back("search_score", Cell::num(ctx.search_score()));
  Table t;
  t.name = "action_trace";
  t.columns = {"path", "probability", "pool", "action"};
  trace_rec(s, ctx, initial_pool_state(s), "", 1.0, 0, depth, t);
  doc.tables.push_back(std::move(t));
  return doc;
}

void outcome_rows(Table& t, const std::string& tag, const OutcomeDistribution& d) {
  auto row = [&](const char* q, double lo, double hi) {
    t.rows.push_back({Cell::str(tag), Cell::str(q), Cell::num(lo), Cell::num(hi),
                      Cell::num(0.5 * (lo + hi))});
  };
  row("pA", d.pA_lo, d.pA_hi);
  row("pB", d.pB_lo, d.pB_hi);
  row("pNone", d.pNone_lo, d.pNone_hi);
}

Document do_exact(const Scenario& s) {
  require_valid(s);
  Document doc;
  tolerance_meta(doc, s.tolerances);
  const OutcomeDistribution d = exact_outcome(s);
  doc.meta.emplace_back("truncation_mass", Cell::num(d.truncation_mass));
  Table t;
  t.name = "outcome";
  t.columns = {"scenario", "quantity", "lo", "hi", "mid"};
  outcome_rows(t, "given", d);
  doc.tables.push_back(std::move(t));
  return doc;
}

Document do_simulate(const Scenario& s, long long trials, std::uint64_t seed,
                     int horizon) {
  require_valid(s);
  Document doc;
  doc.meta.emplace_back("trials", Cell::count(trials));
  doc.meta.emplace_back("seed", Cell::count(static_cast<long long>(seed)));
  doc.meta.emplace_back("horizon", Cell::count(horizon));
  const McEstimate est = monte_carlo(s, trials, seed, horizon);
  doc.meta.emplace_back("censored", Cell::count(est.censored));
  Table t;
  t.name = "estimate";
  t.columns = {"quantity", "value", "stderr"};
  t.rows.push_back({Cell::str("pA"), Cell::num(est.pA), Cell::num(est.stderrA)});
  t.rows.push_back({Cell::str("pB"), Cell::num(est.pB), Cell::num(est.stderrB)});
  t.rows.push_back(
      {Cell::str("pNone"), Cell::num(est.pNone), Cell::num(est.stderrNone)});
  doc.tables.push_back(std::move(t));
  return doc;
}

Document do_repro() {
  Document doc;
  Table cases;
  cases.name = "cases";
  cases.columns = {"case",         "mechanism",     "policy",
                   "gammaA_before", "gammaA_after", "change",
                   "verdict",      "min_condition_margin"};
  Table conds;
  conds.name = "conditions";
  conds.columns = {"case", "condition", "lhs", "rhs", "margin", "holds"};

  for (const PropositionCase& c : builtin_cases()) {
    const CompareRecord rec = compare(c.before, c.after, c.before.tolerances);
    const double before = 0.5 * (rec.before.pA_lo + rec.before.pA_hi);
    const double after = 0.5 * (rec.after.pA_lo + rec.after.pA_hi);
    double min_margin = std::numeric_limits<double>::infinity();
    for (const ConditionCheck& cc : check_conditions(c)) {
      min_margin = std::min(min_margin, cc.margin);
      conds.rows.push_back({Cell::str(c.name), Cell::str(cc.name),
                            Cell::num(cc.lhs), Cell::num(cc.rhs),
                            Cell::num(cc.margin), Cell::flag(cc.holds)});
    }
    cases.rows.push_back(
        {Cell::str(c.name), Cell::str(c.mechanism),
         Cell::str(c.before.policy == PolicyKind::Myopic ? "myopic" : "optimal"),
         Cell::num(before), Cell::num(after), Cell::num(after - before),
         Cell::str(to_string(rec.verdict)), Cell::num(min_margin)});
  }
  doc.tables.push_back(std::move(cases));
  doc.tables.push_back(std::move(conds));
  return doc;
}

Document do_sweep(const Scenario& base, const std::vector<std::string>& vary,
                  const std::string& shift, double zeta, int max_points) {
  SweepSpec spec;
  spec.base = base;
  spec.zeta = zeta;
  spec.max_points = max_points;
  if (shift == "expansion") {
    spec.shift = ShiftKind::Expansion;
  } else if (shift == "realloc") {
    spec.shift = ShiftKind::Reallocation;
    if (zeta <= 0.0)
      throw std::runtime_error("--shift realloc requires --zeta > 0");
  } else {
    throw std::runtime_error("--shift must be 'expansion' or 'realloc'");
  }
  for (const auto& v : vary) {
    const auto eq = v.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("--vary expects key=v1,v2,..., got '" + v + "'");
    SweepAxis axis;
    axis.key = v.substr(0, eq);
    std::stringstream ss(v.substr(eq + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) continue;
      axis.values.push_back(std::stod(tok));
    }
    if (axis.values.empty())
      throw std::runtime_error("--vary axis '" + axis.key + "' has no values");
    spec.axes.push_back(std::move(axis));
  }

  const SweepResult result = sweep(spec);
  Document doc;
  doc.meta.emplace_back("shift",
                        Cell::str(spec.shift == ShiftKind::Expansion
                                      ? "expansion"
                                      : "realloc"));
  if (spec.shift == ShiftKind::Reallocation)
    doc.meta.emplace_back("zeta", Cell::num(zeta));
  Table t;
  t.name = "sweep";
  t.columns = result.axis_keys;
  for (const char* col :
       {"gammaA_before", "gammaA_after", "gammaB_before", "gammaB_after",
        "pNone_before", "pNone_after", "verdict", "min_margin", "error"})
    t.columns.push_back(col);
  for (const SweepRow& row : result.rows) {
    std::vector<Cell> r;
    for (double c : row.coords) r.push_back(Cell::num(c));
    if (row.error.empty()) {
      r.push_back(Cell::num(row.gammaA_before));
      r.push_back(Cell::num(row.gammaA_after));
      r.push_back(Cell::num(row.gammaB_before));
      r.push_back(Cell::num(row.gammaB_after));
      r.push_back(Cell::num(row.pNone_before));
      r.push_back(Cell::num(row.pNone_after));
      r.push_back(Cell::str(to_string(row.verdict)));
      r.push_back(Cell::num(row.min_assumption_margin));
      r.push_back(Cell::str(""));
    } else {
      for (int k = 0; k < 6; ++k) r.push_back(Cell::str(""));
      r.push_back(Cell::str("error"));
      r.push_back(Cell::str(""));
      r.push_back(Cell::str(row.error));
    }
    t.rows.push_back(std::move(r));
  }
  doc.tables.push_back(std::move(t));
  return doc;
}

}  // namespace

RunResult run(const std::vector<std::string>& args) {
  CLI::App app{"recruit: sequential candidate search, evaluation and selection"};
  app.require_subcommand(1);

  std::string format = "table";
  ScenarioArgs sargs;
  long long trials = 0;
  std::uint64_t seed = 12345;
  int horizon = 10000;
  int depth = 3;
  std::vector<std::string> vary;
  std::string shift = "expansion";
  double zeta = 0.0;
  int max_points = 10000;

  auto add_common = [&](CLI::App* sub, bool needs_scenario) {
    sub->add_option("-f,--format", format, "output format: table, csv or json")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    if (needs_scenario) {
      sub->add_option("-s,--scenario", sargs.source,
                      "scenario file, or a builtin id (P1..P4 with .before/.after)")
          ->required();
      sub->add_option("--set", sargs.overrides,
                      "override a scenario key, e.g. --set A.qH=0.5");
    }
  };

  CLI::App* validate_cmd = app.add_subcommand("validate", "check a scenario");
  add_common(validate_cmd, true);
  CLI::App* indices_cmd =
      app.add_subcommand("indices", "myopic values, candidate indices, search index");
  add_common(indices_cmd, true);
  indices_cmd->add_option("--depth", depth, "history depth to tabulate")
      ->check(CLI::Range(0, 12));
  CLI::App* trace_cmd =
      app.add_subcommand("action-trace", "policy decision at every tree node");
  add_common(trace_cmd, true);
  trace_cmd->add_option("--depth", depth, "tree depth")->check(CLI::Range(0, 16));
  CLI::App* exact_cmd =
      app.add_subcommand("exact", "exact outcome probabilities with bounds");
  add_common(exact_cmd, true);
  CLI::App* sim_cmd = app.add_subcommand("simulate", "seeded Monte Carlo estimate");
  add_common(sim_cmd, true);
  sim_cmd->add_option("--trials", trials, "number of trajectories")
      ->required()
      ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", seed, "random seed");
  sim_cmd->add_option("--horizon", horizon, "periods before a trial is censored")
      ->check(CLI::PositiveNumber);
  CLI::App* repro_cmd =
      app.add_subcommand("repro", "reproduce the four worked cases");
  add_common(repro_cmd, false);
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "grid sweep over parameters");
  add_common(sweep_cmd, true);
  sweep_cmd->add_option("--vary", vary, "axis, e.g. --vary A.qH=0.9,0.95");
  sweep_cmd->add_option("--shift", shift, "expansion (mu off->on) or realloc (zeta)")
      ->check(CLI::IsMember({"expansion", "realloc"}));
  sweep_cmd->add_option("--zeta", zeta, "reallocation size");
  sweep_cmd->add_option("--max-points", max_points, "grid size cap")
      ->check(CLI::PositiveNumber);

  std::vector<const char*> argv;
  argv.push_back("recruit");
  for (const auto& a : args) argv.push_back(a.c_str());

  RunResult result;
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    result.exit_code = app.exit(e, out, err);
    result.out = out.str();
    result.err = err.str();
    return result;
  }

  try {
    Document doc;
    std::string verb;
    if (validate_cmd->parsed()) {
      verb = "validate";
      doc = do_validate(load_scenario(sargs));
    } else if (indices_cmd->parsed()) {
      verb = "indices";
      doc = do_indices(load_scenario(sargs), depth);
    } else if (trace_cmd->parsed()) {
      verb = "action-trace";
      doc = do_action_trace(load_scenario(sargs), depth);
    } else if (exact_cmd->parsed()) {
      verb = "exact";
      doc = do_exact(load_scenario(sargs));
    } else if (sim_cmd->parsed()) {
      verb = "simulate";
      doc = do_simulate(load_scenario(sargs), trials, seed, horizon);
    } else if (repro_cmd->parsed()) {
      verb = "repro";
      doc = do_repro();
    } else {
      verb = "sweep";
      doc = do_sweep(load_scenario(sargs), vary, shift, zeta, max_points);
    }
    Document full;
    base_meta(full, verb);
    if (!sargs.source.empty() && verb != "repro")
      full.meta.emplace_back("scenario", Cell::str(sargs.source));
    for (auto& m : doc.meta) full.meta.push_back(std::move(m));
    full.tables = std::move(doc.tables);
    result.out = report::render(full, report::parse_format(format));
  } catch (const std::exception& e) {
    result.exit_code = 2;
    result.err = std::string("error: ") + e.what() + "\n";
  }
  return result;
}

}  // namespace recruit::cli
