#include "prefteam/cli.hpp"

#include "prefteam/postulates.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_set>

namespace prefteam {

namespace {

using nlohmann::json;

// ============================================================================
// Rendering helpers
// ============================================================================

json team_json(const TeamDomain& dom, TeamBits bits) {
    json lines = json::array();
    Team team(bits, dom.size());
    for (Valuation v : team.valuations()) lines.push_back(valuation_text(dom, v));
    return json{{"encoding", bits}, {"lines", lines}};
}

std::string team_str(const TeamDomain& dom, TeamBits bits) {
    return std::to_string(bits) + " " + Team(bits, dom.size()).to_string(dom);
}

json state_json(const PreferentialModel& w, StateId s) {
    return json{{"state", s}, {"team", team_json(w.domain(), w.label_bits(s))}};
}

std::string state_str(const PreferentialModel& w, StateId s) {
    return "state " + std::to_string(s) + " = team " + team_str(w.domain(), w.label_bits(s));
}

std::string describe_model(const PreferentialModel& w) {
    return w.name() + " (" + std::to_string(w.num_states()) + " states over '" +
           w.domain().to_string() + "')";
}

// ============================================================================
// Shared input plumbing
// ============================================================================

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

PreferentialModel resolve_model(const std::string& spec, const TeamDomain& dom) {
    constexpr std::string_view kBuiltinPrefix = "builtin:";
    if (spec.rfind(kBuiltinPrefix, 0) == 0)
        return PreferentialModel::builtin(spec.substr(kBuiltinPrefix.size()), dom);
    PreferentialModel model = PreferentialModel::load_file(spec);
    if (model.domain() != dom)
        throw Error("model file domain '" + model.domain().to_string() +
                    "' does not match --domain '" + dom.to_string() + "'");
    return model;
}

Fragment parse_fragment(const std::string& name) {
    if (name == "pl") return Fragment::PL;
    if (name == "pdl") return Fragment::PDL;
    if (name == "pincl") return Fragment::PIncl;
    if (name == "mixed") return Fragment::Mixed;
    throw Error("unknown fragment '" + name + "' (expected pl, pdl, pincl, or mixed)");
}

DisjunctionStrategy parse_strategy(const std::string& name) {
    if (name == "auto") return DisjunctionStrategy::Auto;
    if (name == "cover") return DisjunctionStrategy::CoverSearch;
    if (name == "partition") return DisjunctionStrategy::PartitionSearch;
    if (name == "union") return DisjunctionStrategy::UnionShortcut;
    throw Error("unknown strategy '" + name + "' (expected auto, cover, partition, or union)");
}

std::vector<Formula> build_corpus(const TeamDomain& dom, int depth, Fragment fragment,
                                  std::uint64_t seed, int count,
                                  const std::vector<std::string>& includes) {
    std::vector<Formula> corpus;
    std::unordered_set<Formula> seen;
    for (const auto& text : includes) {
        Formula f = parse(text, dom);
        if (seen.insert(f).second) corpus.push_back(f);
    }
    for (Formula f : generate_corpus(dom, depth, fragment, seed, count))
        if (seen.insert(f).second) corpus.push_back(f);
    return corpus;
}

json corpus_json(std::span<const Formula> corpus) {
    json arr = json::array();
    for (Formula f : corpus) arr.push_back(print(f));
    return arr;
}

// ============================================================================
// Per-command option blocks
// ============================================================================

struct CommonOptions {
    std::string domain_text;
    bool json_out = false;
};

struct CorpusOptionsCli {
    int depth = 2;
    int count = 40;
    std::uint64_t seed = 0;
    std::string fragment = "pdl";
    std::vector<std::string> includes;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--domain", opts.domain_text,
                    "Variable domain, order-significant (e.g. \"p q r\")")
        ->required();
    cmd->add_flag("--json", opts.json_out, "Emit the stable machine-readable report");
}

void add_corpus(CLI::App* cmd, CorpusOptionsCli& opts) {
    cmd->add_option("--depth", opts.depth, "Corpus formula depth bound (default 2)");
    cmd->add_option("--count", opts.count, "Corpus size (default 40)");
    cmd->add_option("--seed", opts.seed, "Corpus generation seed (default 0)");
    cmd->add_option("--fragment", opts.fragment,
                    "Corpus atoms: pl, pdl, pincl, or mixed (default pdl)");
    cmd->add_option("--include", opts.includes,
                    "Formula prepended to the generated corpus (repeatable)");
}

json audit_json(const PreferentialModel& w, const AuditReport& report) {
    json verdicts = json::array();
    for (const auto& v : report.verdicts) {
        json violations = json::array();
        for (const auto& viol : v.violations) {
            json witnesses = json::array();
            for (StateId s : viol.witness_states) witnesses.push_back(state_json(w, s));
            violations.push_back(json{{"alpha", print(viol.alpha)},
                                      {"beta", viol.beta ? json(print(viol.beta)) : json()},
                                      {"gamma", viol.gamma ? json(print(viol.gamma)) : json()},
                                      {"witnesses", witnesses}});
        }
        verdicts.push_back(json{{"rule", rule_name(v.rule)},
                                {"holds", v.holds()},
                                {"premise_instances", v.premise_instances},
                                {"violations", violations}});
    }
    return verdicts;
}

void print_audit(std::ostream& out, const PreferentialModel& w, const AuditReport& report) {
    for (const auto& v : report.verdicts) {
        out << "rule " << rule_name(v.rule) << ": "
            << (v.holds() ? "holds-on-corpus" : "violated") << " (premise instances "
            << v.premise_instances << ")\n";
        for (const auto& viol : v.violations) {
            out << "  violation: alpha = " << print(viol.alpha);
            if (viol.beta) out << " ; beta = " << print(viol.beta);
            if (viol.gamma) out << " ; gamma = " << print(viol.gamma);
            out << "\n";
            for (StateId s : viol.witness_states)
                out << "    refuting " << state_str(w, s) << "\n";
        }
    }
}

json counterexample_json(const PreferentialModel& w, const OrCounterexample& cex) {
    return json{{"alpha", print(cex.alpha)},
                {"beta", print(cex.beta)},
                {"gamma", print(cex.gamma)},
                {"witness_team", team_json(w.domain(), cex.witness_team)},
                {"witness_state", cex.witness_state}};
}

// ============================================================================
// Command implementations
// ============================================================================

int run_sat(const CommonOptions& common, const std::string& team_path,
            const std::string& formula_text, const std::string& strategy_name,
            std::ostream& out) {
    TeamDomain dom = TeamDomain::parse(common.domain_text);
    Team team = Team::from_text(dom, read_file(team_path));
    Formula f = parse(formula_text, dom);
    EvalOptions options{parse_strategy(strategy_name)};
    bool verdict = satisfies(dom, team, f, options);

    if (common.json_out) {
        json j{{"command", "sat"},
               {"domain", dom.to_string()},
               {"formula", print(f)},
               {"strategy", strategy_name},
               {"team", team_json(dom, team.bits())},
               {"verdict", verdict}};
        out << j.dump(2) << "\n";
    } else {
        out << "formula: " << print(f) << "\n"
            << "team: " << team_str(dom, team.bits()) << "\n"
            << "verdict: " << (verdict ? "true" : "false") << "\n";
    }
    return 0;
}

int run_mod(const CommonOptions& common, const std::string& formula_text, int limit,
            std::ostream& out) {
    TeamDomain dom = TeamDomain::parse(common.domain_text);
    Formula f = parse(formula_text, dom);
    const TeamFamily& fam = mod_set(f, dom);

    if (common.json_out) {
        json members = json::array();
        fam.for_each_member([&](TeamBits t) { members.push_back(team_json(dom, t)); });
        json j{{"command", "mod"},
               {"domain", dom.to_string()},
               {"formula", print(f)},
               {"count", fam.count()},
               {"models", members}};
        out << j.dump(2) << "\n";
    } else {
        out << "formula: " << print(f) << "\n"
            << "count: " << fam.count() << "\n";
        int shown = 0;
        fam.for_each_member([&](TeamBits t) {
            if (shown < limit) out << "  " << team_str(dom, t) << "\n";
            ++shown;
        });
        if (shown > limit) out << "  ... (" << (shown - limit) << " more)\n";
    }
    return 0;
}

int run_entail(const CommonOptions& common, const std::string& lhs_text,
               const std::string& rhs_text, bool classical, std::ostream& out) {
    TeamDomain dom = TeamDomain::parse(common.domain_text);
    Formula lhs = parse(lhs_text, dom);
    Formula rhs = parse(rhs_text, dom);

    bool verdict;
    std::optional<Team> witness;
    if (classical) {
        verdict = classical_entails(lhs, rhs, dom);
    } else {
        verdict = entails(lhs, rhs, dom);
        if (!verdict) witness = entails_witness(lhs, rhs, dom);
    }

    if (common.json_out) {
        json j{{"command", "entail"},
               {"domain", dom.to_string()},
               {"lhs", print(lhs)},
               {"rhs", print(rhs)},
               {"classical", classical},
               {"verdict", verdict}};
        j["witness"] = witness ? team_json(dom, witness->bits()) : json();
        out << j.dump(2) << "\n";
    } else {
        out << "entailment: " << print(lhs) << (classical ? "  |=c  " : "  |=  ") << print(rhs)
            << "\n"
            << "verdict: " << (verdict ? "true" : "false") << "\n";
        if (witness) out << "witness: " << team_str(dom, witness->bits()) << "\n";
    }
    return 0;
}

int run_nm_entail(const CommonOptions& common, const std::string& model_spec,
                  const std::string& premise_text, const std::string& conclusion_text,
                  int max_witnesses, std::ostream& out) {
    TeamDomain dom = TeamDomain::parse(common.domain_text);
    PreferentialModel model = resolve_model(model_spec, dom);
    Formula premise = parse(premise_text, dom);
    Formula conclusion = parse(conclusion_text, dom);
    NmResult result = entails_nm(model, premise, conclusion);

    auto capped = [&](const std::vector<StateId>& states) {
        std::vector<StateId> v(states.begin(),
                               states.begin() + std::min<std::size_t>(states.size(),
                                                                      static_cast<std::size_t>(
                                                                          max_witnesses)));
        return v;
    };

    if (common.json_out) {
        json minimal = json::array();
        for (StateId s : capped(result.minimal)) minimal.push_back(state_json(model, s));
        json violating = json::array();
        for (StateId s : capped(result.violating)) violating.push_back(state_json(model, s));
        json j{{"command", "nm-entail"},
               {"domain", dom.to_string()},
               {"model", model.name()},
               {"premise", print(premise)},
               {"conclusion", print(conclusion)},
               {"verdict", result.holds},
               {"minimal_count", result.minimal.size()},
               {"minimal", minimal},
               {"violating_count", result.violating.size()},
               {"violating", violating}};
        out << j.dump(2) << "\n";
    } else {
        out << "model: " << describe_model(model) << "\n"
            << "query: " << print(premise) << "  |~  " << print(conclusion) << "\n"
            << "verdict: " << (result.holds ? "true" : "false") << "\n"
            << "minimal states (" << result.minimal.size() << "):\n";
        for (StateId s : capped(result.minimal)) out << "  " << state_str(model, s) << "\n";
        if (!result.holds) {
            out << "refuting minimal states (" << result.violating.size() << "):\n";
            for (StateId s : capped(result.violating)) out << "  " << state_str(model, s) << "\n";
        }
    }
    return 0;
}

int run_props(const CommonOptions& common, const std::string& formula_text, std::ostream& out) {
    TeamDomain dom = TeamDomain::parse(common.domain_text);
    Formula f = parse(formula_text, dom);
    ClosureReport report = check_closure_properties(f, dom);

    if (common.json_out) {
        json j{{"command", "props"},
               {"domain", dom.to_string()},
               {"formula", print(f)},
               {"fragment", fragment_name(classify(f))},
               {"flat", report.flat},
               {"downward_closed", report.downward_closed},
               {"union_closed", report.union_closed},
               {"empty_team", report.empty_team}};
        out << j.dump(2) << "\n";
    } else {
        out << "formula: " << print(f) << "\n"
            << "fragment: " << fragment_name(classify(f)) << "\n"
            << "flat: " << (report.flat ? "true" : "false") << "\n"
            << "downward-closed: " << (report.downward_closed ? "true" : "false") << "\n"
            << "union-closed: " << (report.union_closed ? "true" : "false") << "\n"
            << "empty-team: " << (report.empty_team ? "true" : "false") << "\n";
    }
    return 0;
}

int run_audit(const CommonOptions& common, const std::string& model_spec,
              const std::string& system_name, const CorpusOptionsCli& corpus_opts,
              int max_violations, std::ostream& out) {
    TeamDomain dom = TeamDomain::parse(common.domain_text);
    PreferentialModel model = resolve_model(model_spec, dom);
    if (system_name != "C" && system_name != "P")
        throw Error("unknown system '" + system_name + "' (expected C or P)");
    RuleSystem system = system_name == "C" ? RuleSystem::C : RuleSystem::P;
    std::vector<Formula> corpus =
        build_corpus(dom, corpus_opts.depth, parse_fragment(corpus_opts.fragment),
                     corpus_opts.seed, corpus_opts.count, corpus_opts.includes);
    AuditOptions options{max_violations};
    AuditReport report = audit(model, corpus, system, options);

    if (common.json_out) {
        json j{{"command", "audit"},
               {"domain", dom.to_string()},
               {"model", model.name()},
               {"system", system_name},
               {"corpus", corpus_json(corpus)},
               {"all_hold", report.all_hold()},
               {"verdicts", audit_json(model, report)}};
        out << j.dump(2) << "\n";
    } else {
        out << "model: " << describe_model(model) << "\n"
            << "system: " << system_name << " ; corpus size: " << corpus.size() << "\n";
        print_audit(out, model, report);
        out << "overall: " << (report.all_hold() ? "all rules hold on corpus" : "violations found")
            << "\n";
    }
    return 0;
}

int run_counterexample_or(const CommonOptions& common, const std::string& model_spec,
                          std::ostream& out) {
    TeamDomain dom = TeamDomain::parse(common.domain_text);
    PreferentialModel model = resolve_model(model_spec, dom);
    std::optional<OrCounterexample> cex = or_counterexample(model);

    if (common.json_out) {
        json j{{"command", "counterexample-or"},
               {"domain", dom.to_string()},
               {"model", model.name()},
               {"found", cex.has_value()}};
        j["counterexample"] = cex ? counterexample_json(model, *cex) : json();
        out << j.dump(2) << "\n";
    } else {
        out << "model: " << describe_model(model) << "\n";
        if (!cex) {
            out << "counterexample: none (every non-singleton state has a preferred proper "
                   "subteam state)\n";
        } else {
            out << "counterexample:\n"
                << "  alpha: " << print(cex->alpha) << "\n"
                << "  beta:  " << print(cex->beta) << "\n"
                << "  gamma: " << print(cex->gamma) << "\n"
                << "  alpha |~ gamma and beta |~ gamma hold; alpha | beta |~ gamma fails\n"
                << "  refuting minimal team: " << team_str(dom, cex->witness_team) << "\n";
        }
    }
    return 0;
}

json theorem_report_json(const PreferentialModel& w, const TheoremMainReport& report) {
    json j{{"model", w.name()},
           {"states", w.num_states()},
           {"triangle", report.triangle},
           {"star", report.star_all},
           {"audit_pass", report.audit_pass},
           {"consistent", report.consistent()},
           {"inconsistencies", report.inconsistencies}};
    j["triangle_witness"] =
        report.triangle_witness ? state_json(w, *report.triangle_witness) : json();
    if (report.star_failed_pair)
        j["star_failed_pair"] =
            json::array({print(report.star_failed_pair->first), print(report.star_failed_pair->second)});
    else
        j["star_failed_pair"] = json();
    j["star_witness"] =
        report.star_witness ? team_json(w.domain(), *report.star_witness) : json();
    j["counterexample"] =
        report.counterexample ? counterexample_json(w, *report.counterexample) : json();
    return j;
}

int run_verify_main(const CommonOptions& common, const std::string& model_spec, int random_models,
                    std::uint64_t model_seed, const CorpusOptionsCli& corpus_opts,
                    std::ostream& out) {
    TeamDomain dom = TeamDomain::parse(common.domain_text);
    std::vector<Formula> corpus =
        build_corpus(dom, corpus_opts.depth, parse_fragment(corpus_opts.fragment),
                     corpus_opts.seed, corpus_opts.count, corpus_opts.includes);

    // Star samples: every (Θ_Y, Θ_Z) pair for domains of up to 2 variables;
    // a seeded 256-pair sample above that.
    std::vector<std::pair<Formula, Formula>> star_samples;
    if (dom.size() <= 2) {
        star_samples = theta_pair_samples(dom);
    } else {
        SplitMix64 rng(corpus_opts.seed);
        for (int i = 0; i < 256; ++i) {
            Team y(dom, rng.below(dom.num_teams()));
            Team z(dom, rng.below(dom.num_teams()));
            star_samples.emplace_back(theta_formula(y, dom), theta_formula(z, dom));
        }
    }

    std::vector<PreferentialModel> models;
    if (!model_spec.empty()) models.push_back(resolve_model(model_spec, dom));
    for (int i = 0; i < random_models; ++i)
        models.push_back(PreferentialModel::random_standard(dom, model_seed + static_cast<std::uint64_t>(i)));
    if (models.empty()) throw Error("verify-main needs --model and/or --random N");

    bool all_consistent = true;
    json results = json::array();
    for (const auto& model : models) {
        TheoremMainReport report = verify_theorem_main(model, corpus, star_samples);
        all_consistent = all_consistent && report.consistent();
        if (common.json_out) {
            results.push_back(theorem_report_json(model, report));
        } else {
            out << model.name() << ": triangle=" << (report.triangle ? "true" : "false")
                << " star=" << (report.star_all ? "true" : "false")
                << " audit=" << (report.audit_pass ? "pass" : "violations")
                << " counterexample="
                << (report.counterexample ? "verified" : (report.triangle ? "n/a" : "MISSING"))
                << " -> " << (report.consistent() ? "consistent" : "INCONSISTENT") << "\n";
            for (const auto& msg : report.inconsistencies) out << "  FAILURE: " << msg << "\n";
        }
    }

    if (common.json_out) {
        json j{{"command", "verify-main"},
               {"domain", dom.to_string()},
               {"corpus", corpus_json(corpus)},
               {"star_samples", star_samples.size()},
               {"models", results},
               {"all_consistent", all_consistent}};
        out << j.dump(2) << "\n";
    } else {
        out << "models checked: " << models.size() << "\n"
            << "result: " << (all_consistent ? "consistent" : "FAILURE") << "\n";
    }
    return all_consistent ? 0 : 1;
}

int run_verify_flatten(const CommonOptions& common, const std::string& model_spec,
                       const CorpusOptionsCli& corpus_opts, std::ostream& out) {
    TeamDomain dom = TeamDomain::parse(common.domain_text);
    PreferentialModel model = resolve_model(model_spec, dom);
    Fragment fragment = parse_fragment(corpus_opts.fragment);
    if (fragment != Fragment::PL && fragment != Fragment::PDL)
        throw Error("verify-flatten requires a pl or pdl corpus (flattening is PDL-only)");
    std::vector<Formula> corpus = build_corpus(dom, corpus_opts.depth, fragment, corpus_opts.seed,
                                               corpus_opts.count, corpus_opts.includes);
    std::vector<std::pair<Formula, Formula>> pairs = all_ordered_pairs(corpus);
    FlatteningReport report = verify_flattening_theorem(model, pairs);

    if (common.json_out) {
        json disagreements = json::array();
        for (const auto& d : report.disagreements)
            disagreements.push_back(json{{"a", print(d.a)},
                                         {"b", print(d.b)},
                                         {"team_side", d.team_side},
                                         {"classical_side", d.classical_side}});
        json j{{"command", "verify-flatten"},
               {"domain", dom.to_string()},
               {"model", model.name()},
               {"pairs_checked", report.pairs_checked},
               {"agree", report.agree()},
               {"disagreements", disagreements}};
        out << j.dump(2) << "\n";
    } else {
        out << "model: " << describe_model(model) << "\n"
            << "pairs checked: " << report.pairs_checked << "\n"
            << "result: " << (report.agree() ? "100% agreement" : "FAILURE: disagreements found")
            << "\n";
        for (const auto& d : report.disagreements)
            out << "  disagreement: A = " << print(d.a) << " ; B = " << print(d.b)
                << " ; team side " << (d.team_side ? "true" : "false") << " ; classical side "
                << (d.classical_side ? "true" : "false") << "\n";
    }
    return report.agree() ? 0 : 1;
}

}  // namespace

// ============================================================================
// Entry point
// ============================================================================

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"prefteam — reasoning engine for preferential propositional team logics"};
    app.require_subcommand(1);

    int exit_code = 0;

    // --- sat ---------------------------------------------------------------
    auto sat_common = std::make_shared<CommonOptions>();
    auto sat_team = std::make_shared<std::string>();
    auto sat_formula = std::make_shared<std::string>();
    auto sat_strategy = std::make_shared<std::string>("auto");
    {
        CLI::App* cmd = app.add_subcommand("sat", "Decide team satisfaction X |= formula");
        add_common(cmd, *sat_common);
        cmd->add_option("--team", *sat_team, "Team file (one 0/1 valuation line per member)")
            ->required();
        cmd->add_option("--strategy", *sat_strategy,
                        "Disjunction strategy: auto, cover, partition, union");
        cmd->add_option("formula", *sat_formula, "Formula text")->required();
        cmd->callback(
            [&, sat_common, sat_team, sat_formula, sat_strategy] {
                exit_code = run_sat(*sat_common, *sat_team, *sat_formula, *sat_strategy, out);
            });
    }

    // --- mod ---------------------------------------------------------------
    auto mod_common = std::make_shared<CommonOptions>();
    auto mod_formula = std::make_shared<std::string>();
    auto mod_limit = std::make_shared<int>(64);
    {
        CLI::App* cmd = app.add_subcommand("mod", "Compute the team family Mod(formula)");
        add_common(cmd, *mod_common);
        cmd->add_option("--limit", *mod_limit, "Max teams listed in text output (default 64)");
        cmd->add_option("formula", *mod_formula, "Formula text")->required();
        cmd->callback([&, mod_common, mod_formula, mod_limit] {
            exit_code = run_mod(*mod_common, *mod_formula, *mod_limit, out);
        });
    }

    // --- entail ------------------------------------------------------------
    auto ent_common = std::make_shared<CommonOptions>();
    auto ent_lhs = std::make_shared<std::string>();
    auto ent_rhs = std::make_shared<std::string>();
    auto ent_classical = std::make_shared<bool>(false);
    {
        CLI::App* cmd =
            app.add_subcommand("entail", "Monotone team entailment (or classical with --classical)");
        add_common(cmd, *ent_common);
        cmd->add_flag("--classical", *ent_classical,
                      "Valuation-level classical entailment (PL formulas only)");
        cmd->add_option("lhs", *ent_lhs, "Premise formula")->required();
        cmd->add_option("rhs", *ent_rhs, "Conclusion formula")->required();
        cmd->callback([&, ent_common, ent_lhs, ent_rhs, ent_classical] {
            exit_code = run_entail(*ent_common, *ent_lhs, *ent_rhs, *ent_classical, out);
        });
    }

    // --- nm-entail -----------------------------------------------------------
    auto nm_common = std::make_shared<CommonOptions>();
    auto nm_model = std::make_shared<std::string>();
    auto nm_premise = std::make_shared<std::string>();
    auto nm_conclusion = std::make_shared<std::string>();
    auto nm_max_witnesses = std::make_shared<int>(16);
    {
        CLI::App* cmd = app.add_subcommand(
            "nm-entail", "Non-monotonic entailment premise |~ conclusion over a model");
        add_common(cmd, *nm_common);
        cmd->add_option("--model", *nm_model, "builtin:<name> or a model file path")->required();
        cmd->add_option("--max-witnesses", *nm_max_witnesses,
                        "Cap on listed minimal/refuting states (default 16)");
        cmd->add_option("premise", *nm_premise, "Premise formula")->required();
        cmd->add_option("conclusion", *nm_conclusion, "Conclusion formula")->required();
        cmd->callback([&, nm_common, nm_model, nm_premise, nm_conclusion, nm_max_witnesses] {
            exit_code = run_nm_entail(*nm_common, *nm_model, *nm_premise, *nm_conclusion,
                                      *nm_max_witnesses, out);
        });
    }

    // --- props ---------------------------------------------------------------
    auto props_common = std::make_shared<CommonOptions>();
    auto props_formula = std::make_shared<std::string>();
    {
        CLI::App* cmd = app.add_subcommand(
            "props", "Closure property report (flat/downward/union/empty-team)");
        add_common(cmd, *props_common);
        cmd->add_option("formula", *props_formula, "Formula text")->required();
        cmd->callback([&, props_common, props_formula] {
            exit_code = run_props(*props_common, *props_formula, out);
        });
    }

    // --- audit -----------------------------------------------------------------
    auto audit_common = std::make_shared<CommonOptions>();
    auto audit_model = std::make_shared<std::string>();
    auto audit_system = std::make_shared<std::string>("P");
    auto audit_corpus = std::make_shared<CorpusOptionsCli>();
    auto audit_max_violations = std::make_shared<int>(5);
    {
        CLI::App* cmd =
            app.add_subcommand("audit", "Audit System C / System P rules over a formula corpus");
        add_common(cmd, *audit_common);
        cmd->add_option("--model", *audit_model, "builtin:<name> or a model file path")->required();
        cmd->add_option("--system", *audit_system, "Rule system: C or P (default P)");
        add_corpus(cmd, *audit_corpus);
        cmd->add_option("--max-violations", *audit_max_violations,
                        "Violations reported per rule (default 5)");
        cmd->callback([&, audit_common, audit_model, audit_system, audit_corpus,
                       audit_max_violations] {
            exit_code = run_audit(*audit_common, *audit_model, *audit_system, *audit_corpus,
                                  *audit_max_violations, out);
        });
    }

    // --- counterexample-or -------------------------------------------------------
    auto cex_common = std::make_shared<CommonOptions>();
    auto cex_model = std::make_shared<std::string>();
    {
        CLI::App* cmd = app.add_subcommand(
            "counterexample-or", "Construct an (Or) violation from a triangle-property failure");
        add_common(cmd, *cex_common);
        cmd->add_option("--model", *cex_model, "builtin:<name> or a model file path")->required();
        cmd->callback([&, cex_common, cex_model] {
            exit_code = run_counterexample_or(*cex_common, *cex_model, out);
        });
    }

    // --- verify-main ---------------------------------------------------------------
    auto vm_common = std::make_shared<CommonOptions>();
    auto vm_model = std::make_shared<std::string>();
    auto vm_random = std::make_shared<int>(0);
    auto vm_model_seed = std::make_shared<std::uint64_t>(1);
    auto vm_corpus = std::make_shared<CorpusOptionsCli>();
    {
        CLI::App* cmd = app.add_subcommand(
            "verify-main",
            "Check triangle/star/System-P consistency on given and/or random standard models");
        add_common(cmd, *vm_common);
        cmd->add_option("--model", *vm_model, "builtin:<name> or a model file path");
        cmd->add_option("--random", *vm_random, "Number of seeded random standard models");
        cmd->add_option("--model-seed", *vm_model_seed,
                        "First seed for random models (default 1)");
        add_corpus(cmd, *vm_corpus);
        cmd->callback([&, vm_common, vm_model, vm_random, vm_model_seed, vm_corpus] {
            exit_code =
                run_verify_main(*vm_common, *vm_model, *vm_random, *vm_model_seed, *vm_corpus, out);
        });
    }

    // --- verify-flatten ---------------------------------------------------------------
    auto vf_common = std::make_shared<CommonOptions>();
    auto vf_model = std::make_shared<std::string>();
    auto vf_corpus = std::make_shared<CorpusOptionsCli>();
    {
        CLI::App* cmd = app.add_subcommand(
            "verify-flatten",
            "Check the flattening correspondence against the induced classical model");
        add_common(cmd, *vf_common);
        cmd->add_option("--model", *vf_model, "builtin:<name> or a model file path")->required();
        add_corpus(cmd, *vf_corpus);
        cmd->callback([&, vf_common, vf_model, vf_corpus] {
            exit_code = run_verify_flatten(*vf_common, *vf_model, *vf_corpus, out);
        });
    }

    std::vector<const char*> argv;
    argv.push_back("prefteam");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return exit_code;
}

}  // namespace prefteam
