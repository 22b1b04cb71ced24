#pragma once

// The reproduction suite: nine end-to-end scenarios over the worked examples
// plus informational lemma-audit rows, and the fixture files they read.

#include <cmath>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "eca.hpp"
#include "io.hpp"
#include "measure.hpp"
#include "oracle.hpp"
#include "sample.hpp"

namespace qca {

/// Fixture files read by the suite. Everything else it needs is built in.
struct Fixtures {
    std::string d7_table;
    std::string quaternion_table;
    std::string f7_matrix;

    static MatrixFp f7() { return MatrixFp(7, 4, {0, 0, 0, 1, 1, 0, 0, 1, 0, 1, 0, 1, 0, 0, 1, 1}); }

    static Fixtures builtin() {
        return {print_table(qca::builtin("D7")), print_table(qca::builtin("quaternion")), print_matrix(f7())};
    }

    static Fixtures load(const std::filesystem::path& dir) {
        return {read_file(dir / "d7.table"), read_file(dir / "quaternion.table"), read_file(dir / "f7.matrix")};
    }
};

/// Writes every fixture file (the suite's three plus the groups, rules and
/// measures used in the CLI examples) into `dir`; returns the file names.
inline std::vector<std::string> export_fixtures(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const Fixtures f = Fixtures::builtin();
    const std::vector<std::pair<std::string, std::string>> files = {
        {"d7.table", f.d7_table},
        {"quaternion.table", f.quaternion_table},
        {"f7.matrix", f.f7_matrix},
        {"identity_f2.matrix", "2 2\n1 0\n0 1\n"},
        {"quaternion.group", print_group(GroupTable(builtin("quaternion")))},
        {"c2.group", print_group(GroupTable(builtin("cyclic", {2})))},
        {"z3.group", print_group(GroupTable(builtin("cyclic", {3})))},
        {"nonabelian21.group", "builtin nonabelian21\n"},
        {"example11.group", "builtin product(cyclic(2),quaternion)\n"},
        {"z7_4.group", "builtin power(cyclic(7),4)\n"},
        {"d7.rule", "7 0 1\nquasigroup d7.table\n"},
        {"quaternion.rule", "8 0 1\nquasigroup quaternion.table\n"},
        {"xor.rule", print_rule({from_quasigroup(builtin("ledrappier", {2, 1, 1})), Alphabet::numbered(2)})},
        {"z3_difference.rule", "3 0 1\nbuiltin ledrappier(3,2,1)\n"},
        {"example11.rule", "16 0 1\nbuiltin product(cyclic(2),quaternion)\n"},
        {"product.rule", "16 0 1\nbuiltin product(cyclic(2),quaternion)\n"},
        {"z7_4.rule", "2401 0 1\nlinear f7.matrix\n"},
        {"d7_uniform.measure", "kind=uniform\ntable=d7.table\n"},
        {"c2_uniform.measure", "kind=uniform\ngroup=c2.group\n"},
        {"quaternion_orbit.measure", "kind=orbit\ntable=quaternion.table\nperiod_word=i j k\n"},
        {"example11.measure", "kind=product\nleft=c2_uniform.measure\nright=quaternion_orbit.measure\n"},
        {"bernoulli.measure", "kind=bernoulli\nalphabet=2\nweights=1/3 2/3\n"},
        {"markov.measure", "kind=markov\nalphabet=2\ninitial=1 0\ntransition=1/2 1/2; 1/3 2/3\n"},
    };
    std::vector<std::string> names;
    for (const auto& [name, text] : files) {
        write_file(dir / name, text);
        names.push_back(name);
    }
    return names;
}

struct SuiteOptions {
    /// Overrides the depth of the measure scenarios (3 and 4).
    std::optional<std::size_t> depth;
    std::uint64_t seed = 1;
    unsigned jobs = 1;
};

struct SuiteRow {
    std::string id;
    std::string name;
    std::string status; // PASS, FAIL or INFO
    std::string detail;
};

namespace detail {

inline std::string set_names(const Alphabet& a, const std::vector<Symbol>& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + a.name(s[i]);
    return out + "}";
}

inline std::string vec_str(const VectorFp& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
    return out + ")";
}

inline std::string subspace_str(const Subspace& u) {
    std::string out = "span[";
    for (std::size_t i = 0; i < u.basis.size(); ++i) out += (i ? " " : "") + vec_str(u.basis[i]);
    return out + "]";
}

inline std::string poly_list(const std::vector<PolyFp>& ps) {
    std::string out = "[";
    for (std::size_t i = 0; i < ps.size(); ++i) out += (i ? ", " : "") + ps[i].to_string();
    return out + "]";
}

struct Checker {
    bool ok = true;
    std::vector<std::string> notes;
    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            notes.push_back("FAILED " + what);
        }
    }
    void note(const std::string& s) { notes.push_back(s); }
    SuiteRow row(std::string id, std::string name) const {
        std::string d;
        for (std::size_t i = 0; i < notes.size(); ++i) d += (i ? "; " : "") + notes[i];
        return {std::move(id), std::move(name), ok ? "PASS" : "FAIL", d};
    }
};

inline std::string orbit_lemma_str(const OrbitLemmaAudit& a, const Alphabet& names) {
    std::string s = a.agree ? "AGREE" : "DISAGREE";
    s += " single_orbit=" + std::string(a.orbits.single_orbit ? "true" : "false");
    s += " no_invariant_subgroup=" + std::string(a.no_invariant_subgroup ? "true" : "false");
    s += " orbits=" + std::to_string(a.orbits.orbits.size());
    if (names.size() <= 64) {
        s += " partition=";
        for (const auto& o : a.orbits.orbits) s += set_names(names, o);
    }
    if (a.witness) s += " witness_subgroup_order=" + std::to_string(a.witness->size());
    if (a.witness && a.witness->size() <= 16) s += " witness=" + set_names(names, *a.witness);
    return s;
}

inline std::string simple_lemma_str(const SimpleLemmaAudit& a) {
    std::string s = a.agree ? "AGREE" : "DISAGREE";
    s += " simple=" + std::string(a.form.simple ? "true" : "false");
    s += " blocks=" + poly_list(a.form.blocks);
    s += " invariant_subspaces=" + std::to_string(a.invariant.size());
    s += " roots=[";
    for (std::size_t i = 0; i < a.roots.size(); ++i) s += (i ? "," : "") + std::to_string(a.roots[i]);
    s += "]";
    if (!a.invariant.empty()) s += " witness=" + subspace_str(a.invariant.front());
    return s;
}

} // namespace detail

// Each scenario returns one row; any exception turns the row into FAIL.

inline SuiteRow suite_d7_subquasigroups(const Fixtures& fx, const SuiteOptions&) {
    detail::Checker c;
    Quasigroup q = parse_table(fx.d7_table);
    c.note("LATIN OK N=" + std::to_string(q.order()));
    auto subs = subquasigroups(q);
    auto brute = oracle::subquasigroups(q);
    std::string found;
    for (const auto& s : subs) found += detail::set_names(q.alphabet(), s.members);
    c.note("nontrivial=" + found);
    c.require(subs == brute, "closure enumeration matches the 2^N subset scan");
    auto has = [&](std::vector<std::string> names) {
        std::vector<Symbol> m;
        for (auto& n : names) m.push_back(q.alphabet().index_of(n));
        std::sort(m.begin(), m.end());
        return std::find(subs.begin(), subs.end(), SubquasigroupSet{m}) != subs.end();
    };
    c.require(has({"a1", "a2"}) && has({"b1", "b2"}), "{a1,a2} and {b1,b2} present");
    return c.row("1", "example-D subquasigroups");
}

inline SuiteRow suite_quaternion_orbit(const Fixtures& fx, const SuiteOptions&) {
    detail::Checker c;
    Quasigroup q = parse_table(fx.quaternion_table);
    const LocalRule rule = from_quasigroup(q);
    const Word p = q.alphabet().parse_word("i j k");
    auto periodic_step = [&](const Word& w) {
        Word ext = w;
        ext.push_back(w[0]);
        return step(rule, ext);
    };
    Word w = p;
    std::size_t back = 0;
    for (std::size_t t = 1; t <= 6 && !back; ++t) {
        w = periodic_step(w);
        if (t == 1) {
            c.note("step=" + q.alphabet().format_word(w));
            c.require(w == q.alphabet().parse_word("k i j"), "first image is k i j");
        }
        if (w == p) back = t;
    }
    c.require(back == 3, "returns after exactly 3 steps");
    const OrbitPeriod op = orbit_period(rule, p);
    c.note("preperiod=" + std::to_string(op.preperiod) + " period=" + std::to_string(op.period));
    c.require(op == OrbitPeriod{0, 3}, "orbit_period = (0, 3)");
    return c.row("2", "quaternion orbit");
}

inline SuiteRow suite_uniform_invariance(const Fixtures& fx, const SuiteOptions& opt) {
    detail::Checker c;
    const std::size_t depth = opt.depth.value_or(5);
    std::vector<LocalRule> rules{from_quasigroup(parse_table(fx.d7_table)),
                                 from_quasigroup(parse_table(fx.quaternion_table))};
    Rng rng(opt.seed);
    for (int i = 0; i < 25; ++i) rules.push_back(random_bipermutative_rule(2 + draw(rng, 4), rng));
    std::size_t checks = 0;
    for (const auto& r : rules) {
        const auto lambda = CylinderMeasure::uniform(r.alphabet_size());
        for (std::size_t d = 1; d <= depth; ++d) {
            auto rep = invariance_report(lambda, &r, d, opt.jobs);
            ++checks;
            if (rep.max_abs_deviation != 0)
                c.require(false, "rule over N=" + std::to_string(r.alphabet_size()) + " depth " + std::to_string(d) +
                                     " deviation " + to_string(rep.max_abs_deviation));
        }
    }
    c.note(std::to_string(rules.size()) + " rules, depths 1.." + std::to_string(depth) + ", " +
           std::to_string(checks) + " reports, max_dev=0/1");
    return c.row("3", "uniform invariance");
}

inline SuiteRow suite_example11(const Fixtures& fx, const SuiteOptions& opt) {
    detail::Checker c;
    const std::size_t depth = opt.depth.value_or(4);
    const GroupTable c2(builtin("cyclic", {2}));
    const GroupTable quat(parse_table(fx.quaternion_table));
    const GroupTable a(direct_product(c2.quasigroup(), quat.quasigroup()));
    const auto mu = CylinderMeasure::product(CylinderMeasure::uniform(2),
                                             CylinderMeasure::orbit(8, quat.alphabet().parse_word("i j k")));
    const LocalRule rule = from_quasigroup(a.quasigroup());

    const auto sig = invariance_report(mu, nullptr, depth, opt.jobs);
    const auto phi = invariance_report(mu, &rule, depth, opt.jobs);
    c.note("sigma_dev=" + to_string(sig.max_abs_deviation) + " phi_dev=" + to_string(phi.max_abs_deviation));
    c.require(sig.max_abs_deviation == 0 && phi.max_abs_deviation == 0, "sigma and Phi invariance");

    const auto inc = entropy_rate_profile(mu, depth + 1, opt.jobs);
    double worst = 0;
    for (double x : inc) worst = std::max(worst, std::fabs(x - 1.0));
    c.note("increments k=1.." + std::to_string(inc.size()) + " max|dH-1|=" + format_float(worst));
    c.require(inc.size() == depth && worst <= 1e-12, "entropy increments equal 1");

    std::vector<Symbol> sub;
    for (Symbol x = 0; x < 2; ++x) sub.push_back(x * 8);
    const auto coset = coset_measure_check(mu, a, sub, depth, 0, opt.jobs);
    c.note("coset_check=" + std::string(coset.pass ? "pass" : "fail") + " words=" + std::to_string(coset.words_checked));
    c.require(coset.pass && coset.words_checked > 0, "conditionals uniform on cosets of C x {1}");

    const auto fib = fiber_spectrum(mu, rule, depth, 0, opt.jobs);
    c.note("K=" + std::to_string(fib.k_estimate) + " eta=" + (fib.eta_constant ? to_string(*fib.eta_constant) : "nonconstant") +
           " entropy_check=" + format_float(fib.entropy_check));
    bool all_half = !fib.rows.empty();
    for (const auto& r : fib.rows) all_half = all_half && r.support_count == 2;
    c.require(fib.k_estimate == 2 && all_half && fib.eta_constant && *fib.eta_constant == rational(1, 2) &&
                  fib.entropy_check <= 1e-12,
              "fiber spectrum K=2, weights 1/2");

    const auto sup = support_alphabet(mu, std::max<std::size_t>(depth, 2), opt.jobs);
    const auto matches = support_subquasigroups(sup, a.quasigroup());
    c.note("support=" + std::to_string(sup.symbols.size()) + " symbols full_shift=" +
           (sup.full_shift_over_support ? "true" : "false") + " matching_subquasigroups=" + std::to_string(matches.size()));
    c.require(sup.symbols.size() == 6 && !sup.full_shift_over_support && matches.empty(),
              "support is not B^N for any subquasigroup B");
    return c.row("4", "example-11 suite");
}

inline SuiteRow suite_xi_conjugacy(const Fixtures& fx, const SuiteOptions& opt) {
    detail::Checker c;
    Rng rng(opt.seed + 5);
    std::size_t words = 0;
    for (const std::string* text : {&fx.d7_table, &fx.quaternion_table}) {
        const Qgca ca(parse_table(*text));
        const LocalRule dual = dual_rule(ca);
        for (int i = 0; i < 200; ++i) {
            const Word w = random_word(ca.size(), 2 + draw(rng, 11), rng);
            const Word xw = xi(ca, w);
            const Word tail(xw.begin() + 1, xw.end());
            c.require(xi(ca, step(ca.rule(), w)) == tail, "xi(step(w)) = xi(w) without its first symbol");
            c.require(xi_inverse(ca, xw) == w, "xi_inverse(xi(w)) = w");
            c.require(step(dual, xw) == xi(ca, Word(w.begin() + 1, w.end())), "dual rule cube commutes");
            ++words;
            if (!c.ok) return c.row("5", "xi conjugacy");
        }
    }
    c.note(std::to_string(words) + " words, lengths 2..12");
    return c.row("5", "xi conjugacy");
}

inline SuiteRow suite_eca_z7(const Fixtures& fx, const SuiteOptions&) {
    detail::Checker c;
    const MatrixFp m = parse_matrix(fx.f7_matrix);
    const RuleFile rf = linear_rule(m);
    const GroupTable g(direct_power(builtin("cyclic", {static_cast<long>(m.modulus())}), m.dim()));
    const auto dec = decompose_affine(rf.rule, g);
    auto ea = elementary_abelian(g);
    c.require(ea.has_value(), "group is elementary abelian");
    if (!ea) return c.row("6", "ECA audit (Z/7)^4");
    const auto phi0 = matrix_of(*ea, dec.phi0);
    const auto phi1 = matrix_of(*ea, dec.phi1);
    c.require(phi0 && *phi0 == m, "phi0 = M");
    c.require(phi1 && *phi1 == MatrixFp::identity(m.modulus(), m.dim()), "phi1 = identity");
    c.require(dec.phi0_automorphism && dec.phi1_automorphism && dec.bipermutative, "both parts automorphisms");

    const auto audit = lemma_audit(g, rf.rule);
    bool rho_ok = true;
    for (Symbol a = 0; a < g.order(); ++a) rho_ok = rho_ok && audit.kernel.rho[a] == g.inverse(dec.phi0[a]);
    c.require(rho_ok, "kernel rho = -phi0");
    const MatrixFp neg = m.negated();
    const auto form = rcf(neg);
    c.note("rcf(-M)=" + detail::poly_list(form.blocks));
    c.require(form.simple && form.blocks.size() == 1, "rcf(-M) is a single block");
    const auto rts = roots(char_poly(neg));
    std::string r;
    for (auto x : rts) r += (r.empty() ? "" : ",") + std::to_string(x);
    c.note("roots of char(-M) mod 7=[" + r + "]");
    c.note("orbit lemma " + detail::orbit_lemma_str(audit.orbit, g.alphabet()));
    if (audit.simple) c.note("simple lemma " + detail::simple_lemma_str(*audit.simple));
    c.require(audit.simple.has_value(), "simple-form audit ran");
    return c.row("6", "ECA audit (Z/7)^4");
}

inline SuiteRow suite_hmax(const Fixtures&, const SuiteOptions&) {
    detail::Checker c;
    const double h = h_max(GroupTable(builtin("nonabelian21")));
    c.note("h_max(nonabelian21)=" + format_float(h));
    c.require(std::fabs(h - std::log2(7.0)) <= 1e-12, "h_max = log2 7");
    for (long p : {2, 3, 5, 7, 11, 13}) c.require(h_max(GroupTable(builtin("cyclic", {p}))) == 0.0, "h_max(Z/" + std::to_string(p) + ") = 0");
    c.note("h_max(Z/p)=0 for p in 2,3,5,7,11,13");
    return c.row("7", "h_max");
}

inline SuiteRow suite_fiber_sweep(const Fixtures&, const SuiteOptions& opt) {
    detail::Checker c;
    Rng rng(opt.seed + 8);
    std::size_t words = 0;
    for (int i = 0; i < 50 && c.ok; ++i) {
        const std::size_t n = 2 + draw(rng, 5);
        const Qgca ca(random_bipermutative_rule(n, rng));
        const auto lambda = CylinderMeasure::uniform(n);
        const rational share(1, static_cast<unsigned long>(n));
        for (int j = 0; j < 100 && c.ok; ++j) {
            const Word w = random_word(n, 1 + draw(rng, 10), rng);
            const auto pre = fiber_preimages(ca, w);
            std::vector<Word> sorted = pre;
            std::sort(sorted.begin(), sorted.end());
            c.require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), "N distinct preimages");
            rational total = 0;
            for (const auto& x : pre) {
                c.require(step(ca.rule(), x) == w, "preimage maps onto the word");
                total += lambda.eval(x);
            }
            for (const auto& x : pre) c.require(lambda.eval(x) / total == share, "uniform fiber weight 1/N");
            Word t = pre[0];
            for (std::size_t k = 0; k < n; ++k) t = tau(ca, t);
            c.require(t == pre[0], "tau^N = identity");
            ++words;
        }
        const auto fib = fiber_spectrum(lambda, ca.rule(), 2);
        for (const auto& r : fib.rows) c.require(r.support_count == n, "fiber_spectrum support N");
        c.require(fib.eta_constant && *fib.eta_constant == share && fib.k_estimate == n, "fiber_spectrum K = N");
    }
    c.note("50 rules N<=6, " + std::to_string(words) + " words");
    return c.row("8", "fiber sweep");
}

inline SuiteRow suite_lemma_audits(const Fixtures&, const SuiteOptions&) {
    detail::Checker c;
    const GroupTable z3(builtin("cyclic", {3}));
    const auto orbit = orbit_lemma_audit(z3, identity_permutation(3));
    c.note("Z/3 rho=id " + detail::orbit_lemma_str(orbit, z3.alphabet()));
    c.require(!orbit.agree && orbit.orbits.orbits.size() == 2, "Z/3 identity rho gives DISAGREE with two orbits");

    const MatrixFp id = MatrixFp::identity(2, 2);
    const auto simple = simple_lemma_audit(id);
    c.note("identity F_2^2 " + detail::simple_lemma_str(simple));
    const PolyFp xp1(2, {1, 1});
    c.require(simple.form.blocks == std::vector<PolyFp>{xp1, xp1} && !simple.form.simple, "blocks [x + 1, x + 1]");
    c.require(simple.invariant.size() == 3, "three invariant lines");
    c.require(simple.invariant == oracle::invariant_subspaces(id), "subspace strategies agree");
    c.require(oracle::smith_invariant_factors(id) == simple.form.blocks, "Smith form agrees");
    return c.row("9", "lemma audits");
}

using SuiteScenario = SuiteRow (*)(const Fixtures&, const SuiteOptions&);

inline const std::vector<SuiteScenario>& suite_scenarios() {
    static const std::vector<SuiteScenario> all = {
        suite_d7_subquasigroups, suite_quaternion_orbit, suite_uniform_invariance, suite_example11, suite_xi_conjugacy,
        suite_eca_z7,            suite_hmax,             suite_fiber_sweep,        suite_lemma_audits,
    };
    return all;
}

/// Runs scenario `i` (1-based), turning exceptions into a FAIL row.
inline SuiteRow run_scenario(std::size_t i, const Fixtures& fx, const SuiteOptions& opt) {
    try {
        return suite_scenarios().at(i - 1)(fx, opt);
    } catch (const std::exception& e) {
        return {std::to_string(i), "scenario " + std::to_string(i), "FAIL", e.what()};
    }
}

/// Informational rows: both sides of each audited equivalence on the small
/// instances and on the (Z/7)^4 example.
inline std::vector<SuiteRow> lemma_info_rows(const Fixtures& fx) {
    std::vector<SuiteRow> rows;
    auto guarded = [&](const std::string& id, const std::string& name, const std::function<std::string()>& f) {
        try {
            rows.push_back({id, name, "INFO", f()});
        } catch (const std::exception& e) {
            rows.push_back({id, name, "INFO", std::string("ERROR ") + e.what()});
        }
    };
    guarded("L1", "orbit lemma Z/3 rho=id", [] {
        const GroupTable g(builtin("cyclic", {3}));
        return detail::orbit_lemma_str(lemma_audit(g, from_quasigroup(builtin("ledrappier", {3, 2, 1}))).orbit, g.alphabet());
    });
    guarded("L2", "orbit lemma Z/2 xor", [] {
        const GroupTable g(builtin("cyclic", {2}));
        return detail::orbit_lemma_str(lemma_audit(g, from_quasigroup(builtin("ledrappier", {2, 1, 1}))).orbit, g.alphabet());
    });
    const MatrixFp m = parse_matrix(fx.f7_matrix);
    std::optional<LemmaAudit> z7;
    std::optional<GroupTable> g7;
    guarded("L3", "orbit lemma (Z/7)^4", [&] {
        g7.emplace(direct_power(builtin("cyclic", {static_cast<long>(m.modulus())}), m.dim()));
        z7 = lemma_audit(*g7, linear_rule(m).rule);
        return detail::orbit_lemma_str(z7->orbit, g7->alphabet());
    });
    guarded("L4", "simple lemma (Z/7)^4 rho=-M", [&] {
        if (!z7 || !z7->simple) throw error(errc::bad_params, "audit unavailable");
        return detail::simple_lemma_str(*z7->simple);
    });
    guarded("L5", "simple lemma identity F_2^2",
            [] { return detail::simple_lemma_str(simple_lemma_audit(MatrixFp::identity(2, 2))); });
    return rows;
}

inline std::vector<SuiteRow> paper_suite(const Fixtures& fx, const SuiteOptions& opt) {
    std::vector<SuiteRow> rows;
    for (std::size_t i = 1; i <= suite_scenarios().size(); ++i) rows.push_back(run_scenario(i, fx, opt));
    for (auto& r : lemma_info_rows(fx)) rows.push_back(std::move(r));
    return rows;
}

inline std::string format_suite(const std::vector<SuiteRow>& rows) {
    std::string s = "id\tscenario\tstatus\tdetail\n";
    for (const auto& r : rows) s += r.id + "\t" + r.name + "\t" + r.status + "\t" + r.detail + "\n";
    return s;
}

inline bool suite_passed(const std::vector<SuiteRow>& rows) {
    return std::none_of(rows.begin(), rows.end(), [](const SuiteRow& r) { return r.status == "FAIL"; });
}

} // namespace qca
