#include "uac/decoupling.hpp"
#include "uac/measures.hpp"
#include "uac/parallel.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace uac;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    bool json = false;
    std::string out;
    int parties = 3;
    int ancillas = 1;
    int budget = 4;
    int q = 2;
    int rows = 1;
    bool paper_states = false;
    bool enumerate = false;
    std::vector<std::string> args;
};

void progress(const std::string& msg) { std::cerr << msg << std::endl; }

std::string trim(std::string s) {
    auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
    return s;
}

/// Inline text, or the contents of a file if the argument names one. JSON
/// objects follow the AlphaVector schema, JSON arrays list the coefficients.
AlphaVector load_alpha(const std::string& arg, int n, int m) {
    std::string text = arg;
    std::error_code ec;
    if (std::filesystem::is_regular_file(arg, ec)) {
        std::ifstream in(arg);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    text = trim(text);
    if (!text.empty() && (text[0] == '{' || text[0] == '[')) {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw UsageError(std::string("bad alpha JSON: ") + e.what());
        }
        if (j.is_object()) return alpha_from_json(j);
        AlphaVector a(n, m);
        if (j.size() != a.coeffs.size())
            throw UsageError("alpha needs " + std::to_string(a.coeffs.size()) + " coefficients");
        for (size_t i = 0; i < j.size(); ++i)
            a.coeffs[i] = j[i].is_string() ? parse_rational(j[i].get<std::string>()) : Rational(j[i].get<long>());
        return a;
    }
    return parse_alpha(text, n, m);
}

const std::string& arg(const Options& o, size_t i, const char* what) {
    if (i >= o.args.size()) throw UsageError(std::string("missing ") + what);
    return o.args[i];
}

std::string form_str(const AncillaForm& f) {
    return "eliminate " + f.eliminated + ", V=" + f.v_label + ", W=" + f.w_label;
}

std::string pad(std::string s, size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
}

// ------------------------------------------------------------------ commands

int cmd_classes(const Options& o, std::ostream& out) {
    int n = std::stoi(arg(o, 0, "party count"));
    int m = std::stoi(arg(o, 1, "ancilla count"));
    if (n < 1 || n > 3 || m < 1 || m > 2) throw UsageError("classes supports 1..3 parties and 1..2 ancillas");
    auto classes = equivalence_classes(n, m);
    if (o.json) {
        json a = json::array();
        for (const auto& c : classes) {
            json mem = json::array();
            for (const auto& d : c.members) mem.push_back(d.str());
            a.push_back({{"representative", c.representative.str()},
                         {"alias", c.printed_alias ? json(c.printed_alias->str()) : json(nullptr)},
                         {"size", c.members.size()},
                         {"members", mem}});
        }
        out << json{{"parties", n}, {"ancillas", m}, {"classes", a}}.dump(2) << "\n";
        return 0;
    }
    out << classes.size() << " classes of " << n << "-party " << m << "-ancilla decouplings\n";
    for (const auto& c : classes) {
        out << pad(std::to_string(c.members.size()), 4) << pad(c.representative.str(), m == 1 ? 7 : 12);
        if (c.printed_alias) out << " alias " << c.printed_alias->str();
        out << " :";
        for (const auto& d : c.members) out << " " << d.str();
        out << "\n";
    }
    return 0;
}

std::vector<LinearState> printed_states_for(const Decoupling& d) {
    auto [a, b] = d.pairs[0];
    if (has_paper_states(a, b)) return paper_states(a, b);
    for (const auto& g : symmetry_group(3, 1)) {
        if (g.ancilla_perm != std::vector<int>{0, 1}) continue;
        for (const auto& rep : printed_representatives(3)) {
            if (!(act(g, rep) == d)) continue;
            return transport_states(g, paper_states(rep.pairs[0].first, rep.pairs[0].second));
        }
    }
    throw UsageError("no printed states for " + d.str() + "; use --enumerate");
}

std::vector<LinearState> cone_states(const Options& o, const Decoupling& d) {
    if (o.enumerate) {
        EnumOptions eo;
        eo.max_ancilla_rows = o.rows;
        eo.budget = o.budget;
        std::vector<LinearState> states;
        std::set<StateNormalForm> seen;
        enumerate_states(o.q, o.budget, doubled_ground(d.n_parties, 1), eo, [&](const LinearState& s) {
            if (seen.insert(normal_form(s)).second) states.push_back(s);
            return true;
        });
        progress("enumerated " + std::to_string(states.size()) + " states");
        return states;
    }
    if (d.n_parties == 2) return bipartite_states();
    if (d.n_parties == 3) return printed_states_for(d);
    throw UsageError("no default states for " + std::to_string(d.n_parties) + " parties; use --enumerate");
}

void print_rays(std::ostream& out, const ConeBoundResult& r, const std::vector<Vec>& rays, bool lineality) {
    auto status = [&](const Vec& v) -> std::string {
        for (const auto& [c, _] : r.certificates)
            if (c == v) return "certified";
        for (const auto& [c, _] : r.failures)
            if (c == v) return "FAIL";
        return "";
    };
    for (const auto& v : rays) {
        AlphaVector a(r.decoupling.n_parties, 1, v);
        std::string s = status(v);
        if (lineality) {
            Vec w = v;
            for (auto& x : w) x = -x;
            s += "/" + status(w);
        }
        out << "  " << (lineality ? "±" : " ") << pad(render(a), 40) << " " << pad(vec_str(v), 26) << " " << s << "\n";
    }
}

int cmd_cone(const Options& o, std::ostream& out) {
    Decoupling d = parse_decoupling(arg(o, 0, "decoupling"), o.parties);
    if (d.n_ancillas() != 1) throw UsageError("cone takes a single-ancilla decoupling; see cone2");
    if (o.paper_states && o.enumerate) throw UsageError("--paper-states and --enumerate are exclusive");
    auto states = cone_states(o, d);
    progress("building cone " + d.str() + " from " + std::to_string(states.size()) + " states");
    ConeBoundResult r = build_cone(d, states);
    if (o.json) {
        out << to_json(r).dump(2) << "\n";
        return 0;
    }
    out << "decoupling " << d.str() << "  status " << status_name(r.status) << "  states " << states.size()
        << "  constraints " << r.h.ineqs.size() << "\n";
    out << "outer: " << r.outer.rays.size() << " rays, " << r.outer.lineality.size() << " lineality, "
        << r.outer.generator_count() << " generators\n";
    print_rays(out, r, r.outer.rays, false);
    print_rays(out, r, r.outer.lineality, true);
    out << "inner: " << r.inner.rays.size() << " rays, " << r.inner.lineality.size() << " lineality\n";
    if (!r.failures.empty()) {
        out << "uncertified:\n";
        for (const auto& [v, w] : r.failures) out << "   " << render(AlphaVector(d.n_parties, 1, v)) << "\n";
    }
    return 0;
}

int cmd_cone2(const Options& o, std::ostream& out) {
    Decoupling d = parse_decoupling(arg(o, 0, "decoupling"), o.parties);
    if (d.n_ancillas() != 2) throw UsageError("cone2 takes a two-ancilla decoupling");
    if (!d.consistent()) throw UsageError(d.str() + " is not consistent");
    progress("building single-ancilla cones");
    auto db = ConeDatabase::build(d.n_parties);
    TwoAncillaCone c = two_ancilla_cone(*db, d);
    if (o.json) {
        out << to_json(c).dump(2) << "\n";
        return 0;
    }
    const char* names[] = {"V", "W", "VW"};
    out << "decoupling " << d.str() << "  " << (c.solved() ? "solved" : "bounded") << "\n";
    for (size_t i = 0; i < 3; ++i)
        out << "  block " << pad(names[i], 3) << pad(c.blocks[i].str(), 7) << " class " << pad(c.representatives[i].str(), 7)
            << status_name(c.statuses[i]) << "\n";
    auto dump = [&](const char* title, const ConeV& v) {
        out << title << ": " << v.rays.size() << " rays, " << v.lineality.size() << " lineality\n";
        for (const auto& r : v.rays) out << "   " << render(AlphaVector(d.n_parties, 2, r)) << "\n";
        for (const auto& r : v.lineality) out << "  ±" << render(AlphaVector(d.n_parties, 2, r)) << "\n";
    };
    dump("outer", c.outer);
    if (!c.solved()) dump("inner", c.inner);
    return 0;
}

int cmd_prove(const Options& o, std::ostream& out) {
    Decoupling d = parse_decoupling(arg(o, 1, "decoupling"), o.parties);
    AlphaVector a = load_alpha(arg(o, 0, "alpha"), d.n_parties, d.n_ancillas());
    EntropyFunctional delta = delta_functional(d, a);
    progress("proving over " + std::to_string(2 * d.n_parties + d.n_ancillas()) + " systems");
    Prover prover(doubled_ground(d.n_parties, d.n_ancillas()));
    ProveResult r = prover.prove(delta);
    bool ok = r.proved && r.certificate && verify(*r.certificate, delta);
    if (o.json) {
        json j{{"alpha", to_json(a)}, {"decoupling", to_json(d)}, {"delta", to_json(delta)},
               {"result", ok ? "proved" : "unprovable"}};
        if (ok) j["certificate"] = to_json(*r.certificate);
        if (r.witness) j["witness"] = to_json(*r.witness, prover.ground());
        out << j.dump(2) << "\n";
        return ok ? 0 : 1;
    }
    out << "alpha " << render(a) << "\n";
    out << "decoupling " << d.str() << "\n";
    out << "delta " << render(delta) << " <= 0\n";
    if (ok) {
        out << "proved with " << r.certificate->lambdas.size() << " inequalities and " << r.certificate->mus.size()
            << " equalities\n";
        for (const auto& [ins, c] : r.certificate->lambdas) out << "  " << pad(c.get_str(), 6) << " " << ins.describe() << "\n";
        for (const auto& [eq, c] : r.certificate->mus) out << "  " << pad(c.get_str(), 6) << " " << eq.describe() << "\n";
        return 0;
    }
    out << "unprovable\n";
    if (r.witness) {
        out << "witness h with delta(h) = " << delta.eval([&](Mask m) { return r.witness->h[m]; }).get_str()
            << (verify_witness(*r.witness, delta, prover) ? " (verified)" : " (NOT verified)") << "\n";
        const Ground& g = prover.ground();
        for (Mask m = 1; m < r.witness->h.size(); ++m)
            if (sgn(r.witness->h[m]) != 0) out << "  h(" << g.name(m) << ") = " << r.witness->h[m].get_str() << "\n";
    }
    return 1;
}

int cmd_refute(const Options& o, std::ostream& out) {
    Decoupling d = parse_decoupling(arg(o, 1, "decoupling"), o.parties);
    AlphaVector a = load_alpha(arg(o, 0, "alpha"), d.n_parties, d.n_ancillas());
    EntropyFunctional delta = delta_functional(d, a);
    RefuteOptions ro;
    ro.q = o.q;
    ro.max_symbols = o.budget;
    ro.budget = o.budget;
    ro.max_ancilla_rows = o.rows;
    progress("searching product states with up to " + std::to_string(o.budget) + " symbols");
    auto s = refute_classical(delta, doubled_ground(d.n_parties, d.n_ancillas()), ro);
    if (o.json) {
        json j{{"alpha", to_json(a)}, {"decoupling", to_json(d)}, {"delta", to_json(delta)},
               {"result", s ? "refuted" : "no-counterexample"}};
        if (s) {
            j["state"] = to_json(*s);
            j["delta_value"] = delta.eval([&](Mask m) { return entropy(*s, m); }).get_str();
        }
        out << j.dump(2) << "\n";
        return s ? 1 : 0;
    }
    out << "delta " << render(delta) << " <= 0\n";
    if (!s) {
        out << "no counterexample among the enumerated states\n";
        return 0;
    }
    out << "refuted by q=" << s->q << " k=" << s->k << ": " << s->describe() << "\n";
    out << "delta = " << delta.eval([&](Mask m) { return entropy(*s, m); }).get_str() << " log " << s->q << "\n";
    return 1;
}

int cmd_classify(const Options& o, std::ostream& out) {
    std::string which = arg(o, 0, "measure name or 'all'");
    std::vector<const MeasureSpec*> list;
    if (which == "all") {
        for (const auto& m : builtin_measures()) list.push_back(&m);
    } else {
        try {
            list.push_back(&find_measure(which));
        } catch (const std::out_of_range&) {
            throw UsageError("unknown measure " + which);
        }
    }
    progress("building single-ancilla cones");
    MembershipCache cache(ConeDatabase::build(3));
    Prover full(doubled_ground(3, 2));
    std::vector<ClassificationResult> results;
    for (const auto* m : list) {
        progress("classifying " + m->name);
        results.push_back(classify(*m, cache, &full));
    }
    if (o.json) {
        json a = json::array();
        for (const auto& r : results) a.push_back(to_json(r));
        out << a.dump(2) << "\n";
        return 0;
    }
    out << pad("measure", 8) << pad("verdict", 24) << pad("witnesses", 11) << pad("decoupling", 12) << "form\n";
    for (const auto& r : results) {
        out << pad(r.measure, 8) << pad(verdict_name(r.verdict), 24) << pad(std::to_string(r.witnesses.size()), 11);
        if (!r.witnesses.empty()) {
            const auto& w = r.witnesses.front();
            out << pad(w.decoupling.str(), 12) << form_str(r.forms[w.form]) << (r.witness_verified ? "" : " (unverified)");
        } else if (r.undetermined_pairs) {
            out << pad("-", 12) << r.undetermined_pairs << " undetermined";
        } else {
            out << "-";
        }
        out << "\n";
    }
    return 0;
}

int cmd_states(const Options& o, std::ostream& out) {
    Decoupling d = parse_decoupling(arg(o, 0, "decoupling"), o.parties);
    if (d.n_ancillas() != 1) throw UsageError("states takes a single-ancilla decoupling");
    auto states = cone_states(o, d);
    if (o.json) {
        json a = json::array();
        for (const auto& s : states) {
            json j = to_json(s);
            j["beta"] = vec_str(beta_vector(d, s));
            a.push_back(j);
        }
        out << json{{"decoupling", to_json(d)}, {"states", a}}.dump(2) << "\n";
        return 0;
    }
    out << states.size() << " states for " << d.str() << "\n";
    for (size_t i = 0; i < states.size(); ++i)
        out << pad(std::to_string(i + 1), 4) << "q=" << states[i].q << "  " << pad(states[i].describe(), 44)
            << " beta " << vec_str(beta_vector(d, states[i])) << "\n";
    return 0;
}

int cmd_render(const Options& o, std::ostream& out) {
    AlphaVector a = load_alpha(arg(o, 0, "alpha"), o.parties, o.ancillas);
    if (o.json) {
        json j = to_json(a);
        j["text"] = render(a);
        j["vector"] = vec_str(a.coeffs);
        j["balanced"] = is_balanced(a);
        out << j.dump(2) << "\n";
        return 0;
    }
    out << render(a) << "\n" << vec_str(a.coeffs) << "\n";
    if (!is_balanced(a)) out << "unbalanced\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Uniform additivity of optimized linear entropic formulas", "uac"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_flag("--json", o.json, "JSON output");
    app.add_option("--out", o.out, "Write output to FILE");
    app.add_option("--parties", o.parties, "Number of parties")->check(CLI::Range(1, 3));
    app.add_option("--budget", o.budget, "Symbol budget for enumeration")->check(CLI::Range(1, 8));

    struct Sub {
        const char* name;
        const char* help;
        int (*run)(const Options&, std::ostream&);
    };
    const Sub subs[] = {
        {"classes", "Equivalence classes: classes N M", cmd_classes},
        {"cone", "Single-ancilla cone: cone a,b [--paper-states | --enumerate]", cmd_cone},
        {"cone2", "Two-ancilla direct-sum cone: cone2 a,b,c,d", cmd_cone2},
        {"prove", "Prove uniform additivity: prove ALPHA DECOUPLING", cmd_prove},
        {"refute", "Search a classical counterexample: refute ALPHA DECOUPLING", cmd_refute},
        {"classify", "Classify a measure: classify NAME|all", cmd_classify},
        {"states", "List the classical states of a cone: states a,b", cmd_states},
        {"render", "Render an alpha vector: render ALPHA", cmd_render},
    };
    std::vector<CLI::App*> apps;
    for (const auto& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("args", o.args, "Positional arguments");
        apps.push_back(sub);
    }
    apps[1]->add_flag("--paper-states", o.paper_states, "Use the printed states (default)");
    for (size_t i : {1, 6}) {
        apps[i]->add_flag("--enumerate", o.enumerate, "Enumerate product states");
        apps[i]->add_option("--q", o.q, "Field size")->check(CLI::IsMember({2, 3, 5, 7}));
        apps[i]->add_option("--rows", o.rows, "Rows per ancilla")->check(CLI::Range(1, 3));
    }
    apps[4]->add_option("--q", o.q, "Field size")->check(CLI::IsMember({2, 3, 5, 7}));
    apps[4]->add_option("--rows", o.rows, "Rows per ancilla")->check(CLI::Range(1, 3));
    apps[7]->add_option("--ancillas", o.ancillas, "Number of ancillas")->check(CLI::Range(1, 2));

    // Formulas such as "-S(A|BV)" are positionals; every real option is long.
    std::vector<std::string> tokens;
    for (int i = argc - 1; i >= 1; --i) {
        std::string t = argv[i];
        if (t.size() > 1 && t[0] == '-' && t[1] != '-' && t != "-h") t.insert(0, " ");
        tokens.push_back(t);
    }
    try {
        app.parse(tokens);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::ostringstream buf;
    int code = 0;
    try {
        for (size_t i = 0; i < apps.size(); ++i)
            if (apps[i]->parsed()) code = subs[i].run(o, buf);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConstraintViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    if (o.out.empty()) {
        std::cout << buf.str();
    } else {
        std::ofstream f(o.out);
        if (!f) {
            std::cerr << "error: cannot write " << o.out << "\n";
            return 2;
        }
        f << buf.str();
    }
    return code;
}
