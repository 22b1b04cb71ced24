// Command-line front end. Exit codes: 0 success, 1 the analysis found a
// failure, 2 unreadable or invalid input, 3 a size bound was exceeded.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qca/qca.hpp"
#include "qca/oracle.hpp"
#include "qca/suite.hpp"

namespace {

using namespace qca;

struct Options {
    std::size_t depth = 3;
    std::string mass_floor = "0";
    std::string out;
    std::uint64_t seed = 1;
    unsigned jobs = 1;
    bool depth_given = false;
};

// Collects a verb's output and its exit status.
struct Report {
    std::ostringstream text;
    int status = 0;
};

std::string set_str(const Alphabet& a, const std::vector<Symbol>& s) { return detail::set_names(a, s); }

std::string bool_str(bool b) { return b ? "true" : "false"; }

std::string bullet_list(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + v[i];
    return s;
}

std::string rationals_str(const std::vector<rational>& v) {
    std::vector<std::string> s;
    for (const auto& x : v) s.push_back(to_string(x));
    return bullet_list(s);
}

// ------------------------------------------------------------ quasigroups

void qg_validate(Report& r, const std::string& path) {
    try {
        Quasigroup q = load_table(path);
        r.text << "LATIN OK N=" << q.order() << "\n";
    } catch (const error& e) {
        if (e.code() != errc::duplicate_in_row && e.code() != errc::duplicate_in_column && e.code() != errc::bad_entry)
            throw;
        std::string args;
        for (std::size_t i = 0; i < e.detail().size(); ++i) args += (i ? "," : "") + std::to_string(e.detail()[i]);
        r.text << "NOT LATIN " << to_string(e.code()) << "(" << args << ")\n";
        r.status = 1;
    }
}

void qg_sub(Report& r, const std::string& path, bool all, bool check) {
    Quasigroup q = load_table(path);
    auto subs = subquasigroups(q, all);
    for (const auto& s : subs) r.text << set_str(q.alphabet(), s.members) << "\n";
    r.text << "count=" << subs.size() << "\n";
    if (check) {
        const bool same = oracle::subquasigroups(q, all) == subs;
        r.text << "oracle=" << (same ? "agree" : "DISAGREE") << "\n";
        if (!same) r.status = 1;
    }
}

void qg_assoc(Report& r, const std::string& path) {
    Quasigroup q = load_table(path);
    if (auto w = associativity_witness(q)) {
        const auto& a = q.alphabet();
        r.text << "associative=false witness=" << a.name((*w)[0]) << "," << a.name((*w)[1]) << "," << a.name((*w)[2])
               << "\n";
    } else {
        r.text << "associative=true\n";
    }
}

// ------------------------------------------------------------ automata

void ca_step(Report& r, const std::string& rule_path, const std::string& word, std::size_t steps) {
    RuleFile rf = load_rule(rule_path);
    Word w = rf.alphabet.parse_word(word);
    for (std::size_t i = 0; i < steps; ++i) {
        w = rf.rule.is_rnnca() ? qca::step(rf.rule, w) : qca::apply(rf.rule, w);
        r.text << rf.alphabet.format_word(w) << "\n";
    }
}

void ca_orbit(Report& r, const std::string& rule_path, const std::string& word) {
    RuleFile rf = load_rule(rule_path);
    const OrbitPeriod p = orbit_period(rf.rule, rf.alphabet.parse_word(word));
    r.text << "preperiod=" << p.preperiod << " period=" << p.period << "\n";
}

void ca_fiber(Report& r, const std::string& rule_path, const std::string& word) {
    RuleFile rf = load_rule(rule_path);
    const Qgca ca(rf.rule);
    const Word w = rf.alphabet.parse_word(word);
    r.text << "first\tpreimage\n";
    const auto pre = fiber_preimages(ca, w);
    for (Symbol b = 0; b < pre.size(); ++b) r.text << rf.alphabet.name(b) << "\t" << rf.alphabet.format_word(pre[b]) << "\n";
}

void ca_tau(Report& r, const std::string& rule_path, const std::string& word) {
    RuleFile rf = load_rule(rule_path);
    const Qgca ca(rf.rule);
    r.text << rf.alphabet.format_word(tau(ca, rf.alphabet.parse_word(word))) << "\n";
}

void ca_xi(Report& r, const std::string& rule_path, const std::string& word, bool inverse) {
    RuleFile rf = load_rule(rule_path);
    const Qgca ca(rf.rule);
    const Word w = rf.alphabet.parse_word(word);
    r.text << rf.alphabet.format_word(inverse ? xi_inverse(ca, w) : xi(ca, w)) << "\n";
}

void ca_dual(Report& r, const std::string& rule_path) {
    RuleFile rf = load_rule(rule_path);
    r.text << print_rule({dual_rule(Qgca(rf.rule)), rf.alphabet});
}

void ca_recode(Report& r, const std::string& rule_path) {
    RuleFile rf = load_rule(rule_path);
    BlockRecoding rec(rf.rule);
    std::vector<std::string> names;
    Word digits;
    for (std::uint64_t s = 0; s < rec.gamma().alphabet_size(); ++s) {
        word_from_index(s, rec.base_alphabet(), rec.block_length(), digits);
        std::string name;
        for (std::size_t i = 0; i < digits.size(); ++i) name += (i ? "." : "") + rf.alphabet.name(digits[i]);
        names.push_back(name);
    }
    r.text << print_rule({rec.gamma(), Alphabet(names)});
}

void ca_perm(Report& r, const std::string& rule_path) {
    RuleFile rf = load_rule(rule_path);
    r.text << "left_permutative=" << bool_str(is_left_permutative(rf.rule))
           << " right_permutative=" << bool_str(is_right_permutative(rf.rule)) << "\n";
}

// ------------------------------------------------------------ measures

void mu_eval(Report& r, const std::string& path, const std::string& word) {
    MeasureFile mf = load_measure(path);
    r.text << to_string(mf.measure.eval(mf.alphabet.parse_word(word))) << "\n";
}

void mu_invariance(Report& r, const Options& o, const std::string& path, const std::string& rule_path) {
    MeasureFile mf = load_measure(path);
    std::optional<RuleFile> rf;
    if (!rule_path.empty()) rf = load_rule(rule_path);
    const auto rep = invariance_report(mf.measure, rf ? &rf->rule : nullptr, o.depth, o.jobs);
    r.text << "max_dev=" << to_string(rep.max_abs_deviation);
    if (rep.max_abs_deviation != 0) r.text << " worst=" << mf.alphabet.format_word(rep.worst_word);
    r.text << "\n";
    if (rep.max_abs_deviation != 0) r.status = 1;
}

void mu_entropy(Report& r, const Options& o, const std::string& path) {
    MeasureFile mf = load_measure(path);
    r.text << "n\tH_n\tH_n-H_{n-1}\n";
    double prev = 0;
    for (std::size_t n = 1; n <= o.depth; ++n) {
        const double h = block_entropy(mf.measure, n, o.jobs);
        r.text << n << "\t" << format_float(h) << "\t" << (n > 1 ? format_float(h - prev) : "-") << "\n";
        prev = h;
    }
}

void mu_conditional(Report& r, const std::string& path, const std::string& word) {
    MeasureFile mf = load_measure(path);
    const auto dist = conditional_dist(mf.measure, mf.alphabet.parse_word(word));
    r.text << "symbol\tprobability\n";
    for (Symbol b = 0; b < dist.size(); ++b) r.text << mf.alphabet.name(b) << "\t" << to_string(dist[b]) << "\n";
}

void mu_cmeasure(Report& r, const Options& o, const std::string& path, const std::string& group_path,
                 const std::string& members) {
    MeasureFile mf = load_measure(path);
    GroupTable g = load_group(group_path);
    Word c = g.alphabet().parse_word(members);
    std::sort(c.begin(), c.end());
    const auto rep = coset_measure_check(mf.measure, g, c, o.depth, parse_rational(o.mass_floor), o.jobs);
    r.text << "depth\tresult\twords_checked\tshift_dev\twitness\n";
    r.text << rep.depth << "\t" << (rep.pass ? "pass" : "fail") << "\t" << rep.words_checked << "\t"
           << to_string(rep.shift_deviation) << "\t";
    if (rep.witness) r.text << mf.alphabet.format_word(*rep.witness) << " -> " << rationals_str(rep.witness_dist);
    else r.text << "-";
    r.text << "\n";
    if (!rep.pass) r.status = 1;
}

void mu_fibers(Report& r, const Options& o, const std::string& path, const std::string& rule_path) {
    MeasureFile mf = load_measure(path);
    RuleFile rf = load_rule(rule_path);
    const auto rep = fiber_spectrum(mf.measure, rf.rule, o.depth, parse_rational(o.mass_floor), o.jobs);
    r.text << "word\ttotal_mass\tsupport\tweights\n";
    for (const auto& row : rep.rows)
        r.text << mf.alphabet.format_word(row.word) << "\t" << to_string(row.total_mass) << "\t" << row.support_count
               << "\t" << rationals_str(row.weights) << "\n";
    r.text << "# depth=" << rep.depth << " K=" << rep.k_estimate
           << " eta=" << (rep.eta_constant ? to_string(*rep.eta_constant) : "nonconstant")
           << " entropy_check=" << format_float(rep.entropy_check)
           << " invariance_dev=" << to_string(rep.invariance_deviation) << "\n";
}

void mu_support(Report& r, const Options& o, const std::string& path, const std::string& table_path) {
    MeasureFile mf = load_measure(path);
    const auto rep = support_alphabet(mf.measure, std::max<std::size_t>(o.depth, 2), o.jobs);
    r.text << "symbols=" << set_str(mf.alphabet, rep.symbols) << " depth=" << rep.depth
           << " positive_words=" << rep.positive_words
           << " full_shift_over_support=" << bool_str(rep.full_shift_over_support) << "\n";
    if (!table_path.empty()) {
        Quasigroup q = load_table(table_path);
        const auto matches = support_subquasigroups(rep, q);
        r.text << "matching_subquasigroups=" << matches.size();
        for (const auto& b : matches) r.text << " " << set_str(q.alphabet(), b.members);
        r.text << "\n";
    }
}

void mu_example11(Report& r, const Options& o, const std::string& group_path) {
    const GroupTable c = load_group(group_path);
    const GroupTable a = example11_group(c);
    const auto mu = example11(c);
    const LocalRule rule = from_quasigroup(a.quasigroup());
    const std::size_t d = o.depth;
    const auto sig = invariance_report(mu, nullptr, d, o.jobs);
    const auto phi = invariance_report(mu, &rule, d, o.jobs);
    r.text << "check\tvalue\n";
    r.text << "alphabet_size\t" << a.order() << "\n";
    r.text << "sigma_dev\t" << to_string(sig.max_abs_deviation) << "\n";
    r.text << "phi_dev\t" << to_string(phi.max_abs_deviation) << "\n";
    const auto inc = entropy_rate_profile(mu, d + 1, o.jobs);
    for (std::size_t k = 0; k < inc.size(); ++k) r.text << "H_" << k + 2 << "-H_" << k + 1 << "\t" << format_float(inc[k]) << "\n";
    r.text << "log2|C|\t" << format_float(std::log2(static_cast<double>(c.order()))) << "\n";
    const auto coset = coset_measure_check(mu, a, example11_coset_subgroup(c), d, parse_rational(o.mass_floor), o.jobs);
    r.text << "coset_check\t" << (coset.pass ? "pass" : "fail") << "\n";
    const auto fib = fiber_spectrum(mu, rule, d, parse_rational(o.mass_floor), o.jobs);
    r.text << "K\t" << fib.k_estimate << "\n";
    r.text << "eta\t" << (fib.eta_constant ? to_string(*fib.eta_constant) : "nonconstant") << "\n";
    r.text << "entropy_check\t" << format_float(fib.entropy_check) << "\n";
    const auto sup = support_alphabet(mu, std::max<std::size_t>(d, 2), o.jobs);
    r.text << "support_symbols\t" << sup.symbols.size() << "\n";
    r.text << "full_shift_over_support\t" << bool_str(sup.full_shift_over_support) << "\n";
    r.text << "matching_subquasigroups\t" << support_subquasigroups(sup, a.quasigroup()).size() << "\n";
    if (sig.max_abs_deviation != 0 || phi.max_abs_deviation != 0 || !coset.pass) r.status = 1;
}

// ------------------------------------------------------------ eca

std::vector<Symbol> rho_from(const std::string& rule_path, const GroupTable& g) {
    if (rule_path.empty()) return identity_permutation(g.order());
    return kernel(load_rule(rule_path).rule, g).rho;
}

void eca_decompose(Report& r, const std::string& rule_path, const std::string& group_path) {
    RuleFile rf = load_rule(rule_path);
    GroupTable g = load_group(group_path);
    const auto d = decompose_affine(rf.rule, g);
    const auto& a = g.alphabet();
    if (auto ea = elementary_abelian(g); ea && g.order() > 64) {
        auto m0 = matrix_of(*ea, d.phi0), m1 = matrix_of(*ea, d.phi1);
        r.text << "phi0 matrix\n" << (m0 ? print_matrix(*m0) : "not linear\n");
        r.text << "phi1 matrix\n" << (m1 ? print_matrix(*m1) : "not linear\n");
    } else {
        r.text << "symbol\tphi0\tphi1\n";
        for (Symbol x = 0; x < g.order(); ++x) r.text << a.name(x) << "\t" << a.name(d.phi0[x]) << "\t" << a.name(d.phi1[x]) << "\n";
    }
    r.text << "phi0_automorphism=" << bool_str(d.phi0_automorphism) << " phi1_automorphism=" << bool_str(d.phi1_automorphism)
           << " bipermutative=" << bool_str(d.bipermutative) << "\n";
}

void eca_kernel(Report& r, const std::string& rule_path, const std::string& group_path) {
    RuleFile rf = load_rule(rule_path);
    GroupTable g = load_group(group_path);
    const auto k = kernel(rf.rule, g);
    r.text << "symbol\trho\tperiod\tzeta\n";
    for (Symbol a = 0; a < g.order(); ++a)
        r.text << g.alphabet().name(a) << "\t" << g.alphabet().name(k.rho[a]) << "\t" << k.periods[a] << "\t"
               << g.alphabet().format_word(k.zeta[a]) << "\n";
}

void eca_orbits(Report& r, const std::string& rule_path, const std::string& group_path) {
    GroupTable g = load_group(group_path);
    const auto o = rho_orbits(rho_from(rule_path, g), g);
    for (const auto& cyc : o.orbits) r.text << set_str(g.alphabet(), cyc) << "\n";
    r.text << "orbits=" << o.orbits.size() << " single_orbit=" << bool_str(o.single_orbit) << "\n";
}

void eca_invsubgroups(Report& r, const std::string& group_path, const std::string& rule_path, bool check) {
    GroupTable g = load_group(group_path);
    const auto rho = rho_from(rule_path, g);
    const auto subs = invariant_subgroups(g, rho);
    for (const auto& s : subs) r.text << set_str(g.alphabet(), s) << "\n";
    r.text << "count=" << subs.size() << "\n";
    if (check) {
        const bool same = oracle::invariant_subgroups(g, rho) == subs;
        r.text << "oracle=" << (same ? "agree" : "DISAGREE") << "\n";
        if (!same) r.status = 1;
    }
}

void eca_hmax(Report& r, const std::string& group_path) {
    GroupTable g = load_group(group_path);
    std::vector<std::size_t> sizes;
    for (const auto& s : subgroups(g)) sizes.push_back(s.size());
    std::sort(sizes.begin(), sizes.end());
    std::vector<std::string> orders;
    for (auto s : sizes) orders.push_back(std::to_string(s));
    r.text << "subgroup_orders=" << bullet_list(orders) << "\n";
    r.text << "h_max=" << format_float(h_max(g)) << "\n";
}

void eca_charpoly(Report& r, const std::string& matrix_path) {
    const auto cm = char_min_poly(load_matrix(matrix_path));
    r.text << "char=" << cm.characteristic.to_string() << "\nmin=" << cm.minimal.to_string() << "\n";
}

void eca_rcf(Report& r, const std::string& matrix_path) {
    const MatrixFp m = load_matrix(matrix_path);
    const auto f = rcf(m);
    r.text << "blocks=" << detail::poly_list(f.blocks) << "\nsimple=" << bool_str(f.simple) << "\n";
    r.text << print_matrix(rcf_matrix(f.blocks, m.modulus()));
}

void eca_invsubspaces(Report& r, const std::string& matrix_path, bool check) {
    const MatrixFp m = load_matrix(matrix_path);
    const auto subs = invariant_subspaces(m);
    for (const auto& u : subs) r.text << "dim=" << u.dim() << "\t" << detail::subspace_str(u) << "\n";
    r.text << "count=" << subs.size() << "\n";
    if (check) {
        const bool same = oracle::invariant_subspaces(m) == subs;
        r.text << "oracle=" << (same ? "agree" : "DISAGREE") << "\n";
        if (!same) r.status = 1;
    }
}

void eca_audit(Report& r, const std::string& rule_path, const std::string& group_path, const std::string& matrix_path) {
    bool agree = true;
    if (!matrix_path.empty()) {
        const auto a = simple_lemma_audit(load_matrix(matrix_path));
        r.text << "simple_lemma\t" << detail::simple_lemma_str(a) << "\n";
        agree = a.agree;
    } else {
        GroupTable g = load_group(group_path);
        const auto a = lemma_audit(g, load_rule(rule_path).rule);
        r.text << "orbit_lemma\t" << detail::orbit_lemma_str(a.orbit, g.alphabet()) << "\n";
        agree = a.orbit.agree;
        if (a.simple) {
            r.text << "simple_lemma\t" << detail::simple_lemma_str(*a.simple) << "\n";
            agree = agree && a.simple->agree;
        } else {
            r.text << "simple_lemma\tn/a (group is not elementary abelian with linear rho)\n";
        }
    }
    if (!agree) r.status = 1;
}

// ------------------------------------------------------------ suite

void paper_suite_verb(Report& r, const Options& o, const std::string& fixtures_dir) {
    SuiteOptions so;
    if (o.depth_given) so.depth = o.depth;
    so.seed = o.seed;
    so.jobs = o.jobs;
    const Fixtures fx = fixtures_dir.empty() ? Fixtures::builtin() : Fixtures::load(fixtures_dir);
    const auto rows = paper_suite(fx, so);
    r.text << format_suite(rows);
    if (!suite_passed(rows)) r.status = 1;
}

void export_verb(Report& r, const std::string& dir) {
    for (const auto& name : export_fixtures(dir)) r.text << name << "\n";
}

int exit_code(const error& e) {
    if (e.is_bound_error()) return 3;
    if (e.is_input_error()) return 2;
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quasigroup cellular automata, cylinder measures and endomorphic-CA analysis"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* c) {
        c->add_option("--depth", o.depth, "word length for enumerations")->each([&](const std::string&) { o.depth_given = true; });
        c->add_option("--mass-floor", o.mass_floor, "skip words below this mass (p/q)");
        c->add_option("--out", o.out, "write the report here instead of stdout");
        c->add_option("--seed", o.seed, "seed for randomized sweeps");
        c->add_option("--jobs", o.jobs, "worker threads (0 = all cores)");
    };

    Report rep;
    std::function<void()> action;
    std::string a1, a2, a3, rule_opt, table_opt, matrix_opt, group_opt;
    bool flag = false;
    std::size_t steps = 1;

    auto verb = [&](CLI::App* parent, const char* name, const char* help) {
        auto* c = parent->add_subcommand(name, help);
        common(c);
        return c;
    };

    auto* qg = app.add_subcommand("qg", "quasigroup tables")->require_subcommand(1);
    {
        auto* c = verb(qg, "validate", "check the Latin property");
        c->add_option("table", a1)->required();
        c->callback([&] { action = [&] { qg_validate(rep, a1); }; });
        c = verb(qg, "dual", "print the dual table");
        c->add_option("table", a1)->required();
        c->callback([&] { action = [&] { rep.text << print_table(dual(load_table(a1))); }; });
        c = verb(qg, "sub", "list subquasigroups");
        c->add_option("table", a1)->required();
        c->add_flag("--all", flag, "include singletons and the whole set");
        auto* check = c->add_flag("--check", "compare with the exhaustive subset scan");
        c->callback([&, check] { action = [&, check] { qg_sub(rep, a1, flag, check->count() > 0); }; });
        c = verb(qg, "assoc", "associativity test with a witness");
        c->add_option("table", a1)->required();
        c->callback([&] { action = [&] { qg_assoc(rep, a1); }; });
    }

    auto* ca = app.add_subcommand("ca", "cellular automaton rules")->require_subcommand(1);
    {
        auto* c = verb(ca, "step", "apply the rule to a word");
        c->add_option("rule", a1)->required();
        c->add_option("word", a2)->required();
        c->add_option("--steps", steps, "number of steps");
        c->callback([&] { action = [&] { ca_step(rep, a1, a2, steps); }; });
        c = verb(ca, "orbit", "preperiod and period of a periodic point");
        c->add_option("rule", a1)->required();
        c->add_option("word", a2, "one period")->required();
        c->callback([&] { action = [&] { ca_orbit(rep, a1, a2); }; });
        c = verb(ca, "fiber", "the N preimages of a word");
        c->add_option("rule", a1)->required();
        c->add_option("word", a2)->required();
        c->callback([&] { action = [&] { ca_fiber(rep, a1, a2); }; });
        c = verb(ca, "tau", "fiber companion with the first symbol incremented");
        c->add_option("rule", a1)->required();
        c->add_option("word", a2)->required();
        c->callback([&] { action = [&] { ca_tau(rep, a1, a2); }; });
        c = verb(ca, "xi", "first column of the space-time triangle");
        c->add_option("rule", a1)->required();
        c->add_option("word", a2)->required();
        c->add_flag("--inverse", flag, "invert instead");
        c->callback([&] { action = [&] { ca_xi(rep, a1, a2, flag); }; });
        c = verb(ca, "dual", "print the dual rule");
        c->add_option("rule", a1)->required();
        c->callback([&] { action = [&] { ca_dual(rep, a1); }; });
        c = verb(ca, "recode", "nearest-neighbour recoding over blocks");
        c->add_option("rule", a1)->required();
        c->callback([&] { action = [&] { ca_recode(rep, a1); }; });
        c = verb(ca, "perm", "left/right permutativity");
        c->add_option("rule", a1)->required();
        c->callback([&] { action = [&] { ca_perm(rep, a1); }; });
    }

    auto* mu = app.add_subcommand("mu", "cylinder measures")->require_subcommand(1);
    {
        auto* c = verb(mu, "eval", "probability of a cylinder");
        c->add_option("measure", a1)->required();
        c->add_option("word", a2)->required();
        c->callback([&] { action = [&] { mu_eval(rep, a1, a2); }; });
        c = verb(mu, "invariance", "max deviation from shift or CA invariance");
        c->add_option("measure", a1)->required();
        c->add_option("--ca", rule_opt, "rule file (default: the shift)");
        c->add_flag("--shift", flag, "compare with the shift image");
        c->callback([&] { action = [&] { mu_invariance(rep, o, a1, rule_opt); }; });
        c = verb(mu, "entropy", "block entropies and increments");
        c->add_option("measure", a1)->required();
        c->callback([&] { action = [&] { mu_entropy(rep, o, a1); }; });
        c = verb(mu, "conditional", "distribution of x_0 given the next symbols");
        c->add_option("measure", a1)->required();
        c->add_option("word", a2)->required();
        c->callback([&] { action = [&] { mu_conditional(rep, a1, a2); }; });
        c = verb(mu, "cmeasure", "conditionals uniform on cosets of a subgroup");
        c->add_option("measure", a1)->required();
        c->add_option("group", a2)->required();
        c->add_option("members", a3, "subgroup members")->required();
        c->callback([&] { action = [&] { mu_cmeasure(rep, o, a1, a2, a3); }; });
        c = verb(mu, "fibers", "fiber weights of every image word");
        c->add_option("measure", a1)->required();
        c->add_option("rule", a2)->required();
        c->callback([&] { action = [&] { mu_fibers(rep, o, a1, a2); }; });
        c = verb(mu, "support", "support symbols and full-shift test");
        c->add_option("measure", a1)->required();
        c->add_option("--table", table_opt, "also compare with this table's subquasigroups");
        c->callback([&] { action = [&] { mu_support(rep, o, a1, table_opt); }; });
        c = verb(mu, "example11", "the product-measure counterexample for a group C");
        c->add_option("group", a1)->required();
        c->callback([&] { action = [&] { mu_example11(rep, o, a1); }; });
    }

    auto* eca = app.add_subcommand("eca", "endomorphic CA and linear algebra")->require_subcommand(1);
    {
        auto* c = verb(eca, "decompose", "phi(a,b) = phi0(a) + phi1(b)");
        c->add_option("rule", a1)->required();
        c->add_option("group", a2)->required();
        c->callback([&] { action = [&] { eca_decompose(rep, a1, a2); }; });
        c = verb(eca, "kernel", "kernel words and rho");
        c->add_option("rule", a1)->required();
        c->add_option("group", a2)->required();
        c->callback([&] { action = [&] { eca_kernel(rep, a1, a2); }; });
        c = verb(eca, "orbits", "rho-orbits on the non-identity symbols");
        c->add_option("rule", a1)->required();
        c->add_option("group", a2)->required();
        c->callback([&] { action = [&] { eca_orbits(rep, a1, a2); }; });
        c = verb(eca, "invsubgroups", "rho-invariant subgroups");
        c->add_option("group", a1)->required();
        c->add_option("--rule", rule_opt, "take rho from this rule's kernel (default: identity)");
        auto* check = c->add_flag("--check", "compare with the exhaustive subset scan");
        c->callback([&, check] { action = [&, check] { eca_invsubgroups(rep, a1, rule_opt, check->count() > 0); }; });
        c = verb(eca, "hmax", "subgroup orders and h_max");
        c->add_option("group", a1)->required();
        c->callback([&] { action = [&] { eca_hmax(rep, a1); }; });
        c = verb(eca, "charpoly", "characteristic and minimal polynomials");
        c->add_option("matrix", a1)->required();
        c->callback([&] { action = [&] { eca_charpoly(rep, a1); }; });
        c = verb(eca, "rcf", "rational canonical form");
        c->add_option("matrix", a1)->required();
        c->callback([&] { action = [&] { eca_rcf(rep, a1); }; });
        c = verb(eca, "invsubspaces", "invariant subspaces");
        c->add_option("matrix", a1)->required();
        auto* sub_check = c->add_flag("--check", "compare with exhaustive subspace enumeration");
        c->callback([&, sub_check] { action = [&, sub_check] { eca_invsubspaces(rep, a1, sub_check->count() > 0); }; });
        c = verb(eca, "audit", "audit the orbit and simple-form equivalences");
        c->add_option("rule", a1);
        c->add_option("group", a2);
        c->add_option("--matrix", matrix_opt, "audit only the simple-form equivalence for this matrix");
        c->callback([&] {
            if (matrix_opt.empty() && (a1.empty() || a2.empty())) throw CLI::ValidationError("audit needs rule and group, or --matrix");
            action = [&] { eca_audit(rep, a1, a2, matrix_opt); };
        });
    }

    {
        auto* c = verb(&app, "paper-suite", "run every reproduction scenario");
        c->add_option("--fixtures", a1, "read fixture files from this directory");
        c->callback([&] { action = [&] { paper_suite_verb(rep, o, a1); }; });
        c = verb(&app, "export-fixtures", "write the built-in fixture files");
        c->add_option("dir", a1)->required();
        c->callback([&] { action = [&] { export_verb(rep, a1); }; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        action();
    } catch (const error& e) {
        std::cerr << e.what() << "\n";
        return exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    if (o.out.empty()) {
        std::cout << rep.text.str();
    } else {
        std::ofstream out(o.out, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write '" << o.out << "'\n";
            return 2;
        }
        out << rep.text.str();
    }
    return rep.status;
}
