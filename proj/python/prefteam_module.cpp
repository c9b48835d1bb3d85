#include "prefteam/postulates.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

namespace py = pybind11;
using namespace prefteam;

namespace {

EvalOptions options_from(const std::string& strategy) {
    if (strategy == "auto") return {DisjunctionStrategy::Auto};
    if (strategy == "cover") return {DisjunctionStrategy::CoverSearch};
    if (strategy == "partition") return {DisjunctionStrategy::PartitionSearch};
    if (strategy == "union") return {DisjunctionStrategy::UnionShortcut};
    throw std::invalid_argument("unknown strategy '" + strategy + "'");
}

py::dict closure_dict(const ClosureReport& r) {
    py::dict d;
    d["flat"] = r.flat;
    d["downward_closed"] = r.downward_closed;
    d["union_closed"] = r.union_closed;
    d["empty_team"] = r.empty_team;
    return d;
}

py::dict violation_dict(const RuleViolation& v) {
    py::dict d;
    d["rule"] = rule_name(v.rule);
    d["alpha"] = print(v.alpha);
    d["beta"] = v.beta ? py::object(py::str(print(v.beta))) : py::object(py::none());
    d["gamma"] = v.gamma ? py::object(py::str(print(v.gamma))) : py::object(py::none());
    d["witness_states"] = v.witness_states;
    return d;
}

py::dict audit_dict(const AuditReport& report) {
    py::dict d;
    d["all_hold"] = report.all_hold();
    py::list verdicts;
    for (const auto& v : report.verdicts) {
        py::dict vd;
        vd["rule"] = rule_name(v.rule);
        vd["holds"] = v.holds();
        vd["premise_instances"] = v.premise_instances;
        py::list violations;
        for (const auto& viol : v.violations) violations.append(violation_dict(viol));
        vd["violations"] = violations;
        verdicts.append(vd);
    }
    d["verdicts"] = verdicts;
    return d;
}

py::object counterexample_obj(const std::optional<OrCounterexample>& cex) {
    if (!cex) return py::none();
    py::dict d;
    d["alpha"] = print(cex->alpha);
    d["beta"] = print(cex->beta);
    d["gamma"] = print(cex->gamma);
    d["witness_team"] = cex->witness_team;
    d["witness_state"] = cex->witness_state;
    return d;
}

}  // namespace

PYBIND11_MODULE(_prefteam, m) {
    m.doc() = "Reasoning engine for preferential propositional team logics";

    py::register_exception<Error>(m, "PrefteamError");

    py::enum_<Fragment>(m, "Fragment")
        .value("PL", Fragment::PL)
        .value("PDL", Fragment::PDL)
        .value("PINCL", Fragment::PIncl)
        .value("MIXED", Fragment::Mixed);

    py::class_<TeamDomain>(m, "TeamDomain")
        .def(py::init([](const std::string& text) { return TeamDomain::parse(text); }))
        .def(py::init<std::vector<std::string>>())
        .def_property_readonly("size", &TeamDomain::size)
        .def_property_readonly("num_valuations", &TeamDomain::num_valuations)
        .def_property_readonly("vars", &TeamDomain::vars)
        .def("__str__", &TeamDomain::to_string)
        .def("__eq__", [](const TeamDomain& a, const TeamDomain& b) { return a == b; });

    py::class_<Team>(m, "Team")
        .def(py::init<const TeamDomain&, TeamBits>())
        .def_static("from_text",
                    [](const TeamDomain& dom, const std::string& text) {
                        return Team::from_text(dom, text);
                    })
        .def_static("of", &Team::of)
        .def_property_readonly("bits", &Team::bits)
        .def_property_readonly("cardinality", &Team::cardinality)
        .def_property_readonly("valuations", &Team::valuations)
        .def("to_text", &Team::to_text)
        .def("__eq__", [](const Team& a, const Team& b) { return a == b; });

    py::class_<FormulaNode>(m, "Formula")
        .def_property_readonly("fragment", &FormulaNode::fragment)
        .def_property_readonly("depth", &FormulaNode::depth)
        .def("__str__", [](const FormulaNode& f) { return print(&f); })
        .def("__eq__",
             [](const FormulaNode& a, const FormulaNode& b) { return &a == &b; });

    m.def("parse", &parse, py::return_value_policy::reference, py::arg("text"),
          py::arg("domain"));
    m.def("print_formula", &print, py::arg("formula"));
    m.def("flatten", &flatten, py::return_value_policy::reference);
    m.def(
        "theta_formula",
        [](const Team& x, const TeamDomain& dom) { return theta_formula(x, dom); },
        py::return_value_policy::reference);
    m.def(
        "cardinality_formula",
        [](const Team& x, const TeamDomain& dom, int l) { return cardinality_formula(x, dom, l); },
        py::return_value_policy::reference);
    m.def(
        "generate_corpus",
        [](const TeamDomain& dom, int depth, Fragment atoms, std::uint64_t seed, int count) {
            return generate_corpus(dom, depth, atoms, seed, count);
        },
        py::return_value_policy::reference, py::arg("domain"), py::arg("depth"),
        py::arg("atoms"), py::arg("seed"), py::arg("count"));

    m.def(
        "satisfies",
        [](const TeamDomain& dom, const Team& x, Formula f, const std::string& strategy) {
            return satisfies(dom, x, f, options_from(strategy));
        },
        py::arg("domain"), py::arg("team"), py::arg("formula"), py::arg("strategy") = "auto");
    m.def("mod_set", [](Formula f, const TeamDomain& dom) { return mod_set(f, dom).members(); });
    m.def("entails", &entails);
    m.def("classical_entails", &classical_entails);
    m.def("check_closure_properties", [](Formula f, const TeamDomain& dom) {
        return closure_dict(check_closure_properties(f, dom));
    });

    py::class_<PreferentialModel>(m, "PreferentialModel")
        .def_static("builtin", &PreferentialModel::builtin)
        .def_static("load_file", &PreferentialModel::load_file)
        .def_static("random_standard", &PreferentialModel::random_standard, py::arg("domain"),
                    py::arg("seed"), py::arg("edge_probability") = std::nullopt)
        .def_property_readonly("num_states", &PreferentialModel::num_states)
        .def_property_readonly("name", &PreferentialModel::name)
        .def("label_bits", &PreferentialModel::label_bits)
        .def("less", &PreferentialModel::less);

    m.def("states_of",
          [](const PreferentialModel& w, Formula f) { return states_of(w, f).to_indices(); });
    m.def("min_states", &min_states);
    m.def("entails_nm", [](const PreferentialModel& w, Formula a, Formula b) {
        NmResult r = entails_nm(w, a, b);
        py::dict d;
        d["holds"] = r.holds;
        d["minimal"] = r.minimal;
        d["violating"] = r.violating;
        return d;
    });
    m.def("check_standard", [](const PreferentialModel& w) {
        StandardnessReport r = check_standard(w);
        py::dict d;
        d["s1_ok"] = r.s1_ok;
        d["s2_ok"] = r.s2_ok;
        d["s1_witnesses"] = r.s1_witnesses;
        d["s2_missing"] = r.s2_missing;
        return d;
    });
    m.def("check_smoothness", [](const PreferentialModel& w, const std::vector<Formula>& corpus) {
        return check_smoothness(w, corpus);
    });

    m.def("audit",
          [](const PreferentialModel& w, const std::vector<Formula>& corpus,
             const std::string& system, int max_violations) {
              RuleSystem sys = system == "C" ? RuleSystem::C : RuleSystem::P;
              return audit_dict(audit(w, corpus, sys, {max_violations}));
          },
          py::arg("model"), py::arg("corpus"), py::arg("system") = "P",
          py::arg("max_violations") = 5);
    m.def("check_triangle", [](const PreferentialModel& w) {
        TriangleResult r = check_triangle(w);
        return py::make_tuple(r.holds, r.witness ? py::object(py::int_(*r.witness))
                                                 : py::object(py::none()));
    });
    m.def("check_star", [](const PreferentialModel& w, Formula a, Formula b) {
        StarResult r = check_star(w, a, b);
        return py::make_tuple(r.holds, r.witness_team ? py::object(py::int_(*r.witness_team))
                                                      : py::object(py::none()));
    });
    m.def("or_counterexample",
          [](const PreferentialModel& w) { return counterexample_obj(or_counterexample(w)); });
    m.def("verify_theorem_main",
          [](const PreferentialModel& w, const std::vector<Formula>& corpus) {
              auto stars = theta_pair_samples(w.domain());
              TheoremMainReport r = verify_theorem_main(w, corpus, stars);
              py::dict d;
              d["triangle"] = r.triangle;
              d["star"] = r.star_all;
              d["audit_pass"] = r.audit_pass;
              d["consistent"] = r.consistent();
              d["inconsistencies"] = r.inconsistencies;
              d["counterexample"] = counterexample_obj(r.counterexample);
              return d;
          });
    m.def("verify_flattening_theorem",
          [](const PreferentialModel& w, const std::vector<Formula>& corpus) {
              FlatteningReport r = verify_flattening_theorem(w, all_ordered_pairs(corpus));
              py::dict d;
              d["pairs_checked"] = r.pairs_checked;
              d["agree"] = r.agree();
              return d;
          });
}
