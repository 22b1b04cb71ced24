#pragma once

// Plain-text formats for tables, groups, rules, matrices and measure specs.
// Blank lines and lines starting with '#' are ignored everywhere.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "builtin.hpp"
#include "finite_field.hpp"
#include "group.hpp"
#include "measure.hpp"

namespace qca {

namespace detail {

inline std::vector<std::string> content_lines(std::string_view text) {
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        out.push_back(line.substr(first));
    }
    return out;
}

inline std::size_t parse_count(const std::string& tok, const char* what) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(tok, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != tok.size() || tok.empty() || tok[0] == '-')
        throw error(errc::parse, std::string("expected ") + what + ", got '" + tok + "'");
    return static_cast<std::size_t>(v);
}

inline std::string strip(std::string s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

} // namespace detail

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error(errc::parse, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error(errc::parse, "cannot write '" + path.string() + "'");
    out << text;
}

// ---------------------------------------------------------------- tables

namespace detail {

inline Quasigroup parse_table_lines(const std::vector<std::string>& lines, std::size_t& used) {
    if (lines.empty()) throw error(errc::parse, "empty table file");
    auto head = split_ws(lines[0]);
    const std::size_t n = parse_count(head[0], "the order N");
    if (head.size() != n + 1) throw error(errc::parse, "header must list exactly N symbol names");
    Alphabet names(std::vector<std::string>(head.begin() + 1, head.end()));
    if (lines.size() < n + 1) throw error(errc::parse, "table has fewer than N rows");
    std::vector<Symbol> flat;
    for (std::size_t r = 0; r < n; ++r) {
        auto row = names.parse_word(lines[r + 1]);
        if (row.size() != n) throw error(errc::parse, "row " + std::to_string(r) + " does not have N entries");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    used = n + 1;
    return validate_latin(flat, names);
}

} // namespace detail

/// "N name_1 .. name_N" followed by N rows of N names.
inline Quasigroup parse_table(std::string_view text) {
    auto lines = detail::content_lines(text);
    std::size_t used = 0;
    Quasigroup q = detail::parse_table_lines(lines, used);
    if (used != lines.size()) throw error(errc::parse, "trailing lines after the table");
    return q;
}

inline std::string print_table(const Quasigroup& q) {
    const std::size_t n = q.order();
    std::string s = std::to_string(n);
    for (const auto& name : q.alphabet().names()) s += " " + name;
    s += "\n";
    for (Symbol r = 0; r < n; ++r) {
        for (Symbol c = 0; c < n; ++c) s += (c ? " " : "") + q.alphabet().name(q(r, c));
        s += "\n";
    }
    return s;
}

// ---------------------------------------------------------------- groups

/// A table file followed by "identity <name>", or a single line
/// "builtin <expr>".
inline GroupTable parse_group(std::string_view text) {
    auto lines = detail::content_lines(text);
    if (!lines.empty() && lines[0].rfind("builtin ", 0) == 0) {
        if (lines.size() != 1) throw error(errc::parse, "trailing lines after 'builtin'");
        return GroupTable(builtin_expr(detail::strip(lines[0].substr(8))));
    }
    std::size_t used = 0;
    Quasigroup q = detail::parse_table_lines(lines, used);
    if (used + 1 != lines.size()) throw error(errc::parse, "group file needs one 'identity <symbol>' line after the table");
    auto tail = split_ws(lines[used]);
    if (tail.size() != 2 || tail[0] != "identity") throw error(errc::parse, "expected 'identity <symbol>'");
    const Symbol e = q.alphabet().index_of(tail[1]);
    return GroupTable(std::move(q), e);
}

inline std::string print_group(const GroupTable& g) {
    return print_table(g.quasigroup()) + "identity " + g.alphabet().name(g.identity()) + "\n";
}

// ---------------------------------------------------------------- matrices

/// "p N" followed by N rows of N residues.
inline MatrixFp parse_matrix(std::string_view text) {
    auto lines = detail::content_lines(text);
    if (lines.empty()) throw error(errc::parse, "empty matrix file");
    auto head = split_ws(lines[0]);
    if (head.size() != 2) throw error(errc::parse, "matrix header must be 'p N'");
    const auto p = detail::parse_count(head[0], "the prime p");
    const auto n = detail::parse_count(head[1], "the dimension N");
    if (lines.size() != n + 1) throw error(errc::parse, "matrix file needs exactly N rows");
    detail::check_prime(p);
    std::vector<Residue> entries;
    for (std::size_t r = 0; r < n; ++r) {
        auto row = split_ws(lines[r + 1]);
        if (row.size() != n) throw error(errc::parse, "matrix row " + std::to_string(r) + " needs N entries");
        for (const auto& tok : row) {
            auto v = detail::parse_count(tok, "a residue");
            if (v >= p) throw error(errc::bad_entry, {r, entries.size() % n}, "residue not reduced mod p");
            entries.push_back(static_cast<Residue>(v));
        }
    }
    return MatrixFp(static_cast<Residue>(p), n, std::move(entries));
}

inline std::string print_matrix(const MatrixFp& m) {
    std::string s = std::to_string(m.modulus()) + " " + std::to_string(m.dim()) + "\n";
    for (std::size_t r = 0; r < m.dim(); ++r) {
        for (std::size_t c = 0; c < m.dim(); ++c) s += (c ? " " : "") + std::to_string(m(r, c));
        s += "\n";
    }
    return s;
}

// ---------------------------------------------------------------- rules

/// A rule together with the names of its symbols.
struct RuleFile {
    LocalRule rule;
    Alphabet alphabet;
};

/// The rule phi(a0, a1) = M a0 + a1 on (Z/p)^N, with symbols named and
/// indexed as in power(cyclic(p), N).
inline RuleFile linear_rule(const MatrixFp& m) {
    const std::size_t p = m.modulus(), k = m.dim();
    Quasigroup group = direct_power(builtin("cyclic", {static_cast<long>(p)}), k);
    const std::size_t n = group.order();
    std::vector<Symbol> t(n * n);
    Word a, b, c(k);
    for (Symbol x = 0; x < n; ++x) {
        word_from_index(x, p, k, a);
        const VectorFp ma = m.apply(VectorFp(a.begin(), a.end()));
        for (Symbol y = 0; y < n; ++y) {
            word_from_index(y, p, k, b);
            for (std::size_t i = 0; i < k; ++i) c[i] = static_cast<Symbol>((ma[i] + b[i]) % p);
            t[x * n + y] = static_cast<Symbol>(index_of_word(c, p));
        }
    }
    return {LocalRule(n, 0, 1, std::move(t)), group.alphabet()};
}

/// Line 1 "N l r". Then either an optional "symbols <names>" line and one
/// "<in_1> .. <in_k> <out>" line per neighbourhood tuple, or a single
/// directive: "quasigroup <table path>", "builtin <expr>" or
/// "linear <matrix path>". Relative paths resolve against `base_dir`.
inline RuleFile parse_rule(std::string_view text, const std::filesystem::path& base_dir = {}) {
    auto lines = detail::content_lines(text);
    if (lines.empty()) throw error(errc::parse, "empty rule file");
    auto head = split_ws(lines[0]);
    if (head.size() != 3) throw error(errc::parse, "rule header must be 'N l r'");
    const auto n = detail::parse_count(head[0], "N");
    const auto left = detail::parse_count(head[1], "l");
    const auto right = detail::parse_count(head[2], "r");

    if (lines.size() == 2) {
        const std::string& d = lines[1];
        auto directive = [&](const char* key) { return d.rfind(key, 0) == 0; };
        std::optional<RuleFile> rf;
        if (directive("quasigroup ")) {
            Quasigroup q = parse_table(read_file(base_dir / detail::strip(d.substr(11))));
            rf = RuleFile{from_quasigroup(q), q.alphabet()};
        } else if (directive("builtin ")) {
            Quasigroup q = builtin_expr(detail::strip(d.substr(8)));
            rf = RuleFile{from_quasigroup(q), q.alphabet()};
        } else if (directive("linear ")) {
            rf = linear_rule(parse_matrix(read_file(base_dir / detail::strip(d.substr(7)))));
        }
        if (rf) {
            if (rf->rule.alphabet_size() != n || left != 0 || right != 1)
                throw error(errc::parse, "header does not match the derived rule (expected '" +
                                             std::to_string(rf->rule.alphabet_size()) + " 0 1')");
            return *rf;
        }
    }

    std::size_t next = 1;
    Alphabet names = Alphabet::numbered(n);
    if (lines.size() > 1 && lines[1].rfind("symbols", 0) == 0) {
        auto toks = split_ws(lines[1]);
        names = Alphabet(std::vector<std::string>(toks.begin() + 1, toks.end()));
        if (names.size() != n) throw error(errc::parse, "'symbols' must list exactly N names");
        next = 2;
    }
    const std::size_t k = left + right + 1;
    const std::uint64_t size = checked_pow(n, k);
    if (size > rule_table_limit) throw error(errc::too_large, "rule table exceeds 2^24 entries");
    constexpr Symbol unset = static_cast<Symbol>(-1);
    std::vector<Symbol> table(size, unset);
    for (std::size_t i = next; i < lines.size(); ++i) {
        Word w = names.parse_word(lines[i]);
        if (w.size() != k + 1) throw error(errc::parse, "tuple line must have l+r+2 symbols: '" + lines[i] + "'");
        const std::uint64_t idx = index_of_word(Word(w.begin(), w.begin() + k), n);
        if (table[idx] != unset) throw error(errc::parse, "duplicate tuple line '" + lines[i] + "'");
        table[idx] = w.back();
    }
    for (std::uint64_t i = 0; i < size; ++i)
        if (table[i] == unset)
            throw error(errc::parse, "missing tuple '" + names.format_word(word_from_index(i, n, k)) + "'");
    return {LocalRule(n, left, right, std::move(table)), names};
}

inline std::string print_rule(const RuleFile& rf) {
    const LocalRule& r = rf.rule;
    const std::size_t n = r.alphabet_size(), k = r.arity();
    std::string s = std::to_string(n) + " " + std::to_string(r.left_radius()) + " " +
                    std::to_string(r.right_radius()) + "\nsymbols";
    for (const auto& name : rf.alphabet.names()) s += " " + name;
    s += "\n";
    Word w;
    for (std::uint64_t i = 0; i < r.table().size(); ++i) {
        word_from_index(i, n, k, w);
        s += rf.alphabet.format_word(w) + " " + rf.alphabet.name(r.table()[i]) + "\n";
    }
    return s;
}

// ---------------------------------------------------------------- measures

/// Parsed `key=value` measure description, kept verbatim so it prints back
/// unchanged.
struct MeasureSpec {
    std::vector<std::pair<std::string, std::string>> entries;

    const std::string* find(const std::string& key) const {
        for (const auto& [k, v] : entries)
            if (k == key) return &v;
        return nullptr;
    }
    const std::string& get(const std::string& key) const {
        if (auto v = find(key)) return *v;
        throw error(errc::parse, "measure spec lacks '" + key + "'");
    }
};

inline MeasureSpec parse_measure_spec(std::string_view text) {
    static const char* known[] = {"kind",    "alphabet",   "symbols",     "table", "group", "builtin", "weights",
                                  "initial", "transition", "period_word", "left",  "right", "base",    "rule"};
    MeasureSpec spec;
    for (const auto& line : detail::content_lines(text)) {
        auto eq = line.find('=');
        if (eq == std::string::npos) throw error(errc::parse, "expected key=value: '" + line + "'");
        std::string key = detail::strip(line.substr(0, eq)), value = detail::strip(line.substr(eq + 1));
        if (std::find(std::begin(known), std::end(known), key) == std::end(known))
            throw error(errc::parse, "unknown measure key '" + key + "'");
        if (spec.find(key)) throw error(errc::parse, "duplicate measure key '" + key + "'");
        spec.entries.emplace_back(key, value);
    }
    spec.get("kind");
    return spec;
}

inline std::string print_measure_spec(const MeasureSpec& spec) {
    std::string s;
    for (const auto& [k, v] : spec.entries) s += k + "=" + v + "\n";
    return s;
}

/// A measure together with the names of its symbols.
struct MeasureFile {
    CylinderMeasure measure;
    Alphabet alphabet;
};

inline MeasureFile load_measure(const std::filesystem::path& path);

namespace detail {

inline std::vector<rational> parse_rationals(const std::string& text) {
    std::vector<rational> out;
    for (auto& tok : split_ws(text)) out.push_back(parse_rational(tok));
    return out;
}

inline Alphabet measure_alphabet(const MeasureSpec& spec, const std::filesystem::path& dir) {
    if (auto v = spec.find("symbols")) return Alphabet(split_ws(*v));
    if (auto v = spec.find("alphabet")) return Alphabet::numbered(parse_count(*v, "alphabet size"));
    if (auto v = spec.find("table")) return parse_table(read_file(dir / *v)).alphabet();
    if (auto v = spec.find("group")) return parse_group(read_file(dir / *v)).alphabet();
    if (auto v = spec.find("builtin")) return builtin_expr(*v).alphabet();
    throw error(errc::parse, "measure spec needs one of symbols=, alphabet=, table=, group=, builtin=");
}

} // namespace detail

/// Builds the measure a spec describes. Nested measures and rules are file
/// references resolved against `dir`.
inline MeasureFile build_measure(const MeasureSpec& spec, const std::filesystem::path& dir = {}) {
    const std::string& kind = spec.get("kind");
    if (kind == "product") {
        MeasureFile l = load_measure(dir / spec.get("left"));
        MeasureFile r = load_measure(dir / spec.get("right"));
        std::vector<std::string> names;
        for (const auto& a : l.alphabet.names())
            for (const auto& b : r.alphabet.names()) names.push_back("(" + a + "," + b + ")");
        return {CylinderMeasure::product(l.measure, r.measure), Alphabet(names)};
    }
    if (kind == "pushforward_ca") {
        MeasureFile base = load_measure(dir / spec.get("base"));
        const auto rule_path = dir / spec.get("rule");
        RuleFile rf = parse_rule(read_file(rule_path), rule_path.parent_path());
        return {CylinderMeasure::pushforward_ca(base.measure, rf.rule), base.alphabet};
    }
    if (kind == "pushforward_shift") {
        MeasureFile base = load_measure(dir / spec.get("base"));
        return {CylinderMeasure::pushforward_shift(base.measure), base.alphabet};
    }
    Alphabet names = detail::measure_alphabet(spec, dir);
    const std::size_t n = names.size();
    if (kind == "uniform") return {CylinderMeasure::uniform(n), names};
    if (kind == "bernoulli") {
        auto w = detail::parse_rationals(spec.get("weights"));
        if (w.size() != n) throw error(errc::parse, "weights must have one entry per symbol");
        return {CylinderMeasure::bernoulli(std::move(w)), names};
    }
    if (kind == "markov") {
        auto init = detail::parse_rationals(spec.get("initial"));
        std::string t = spec.get("transition");
        std::replace(t.begin(), t.end(), ';', ' ');
        auto trans = detail::parse_rationals(t);
        if (init.size() != n || trans.size() != n * n)
            throw error(errc::parse, "markov needs N initial weights and N*N transition entries");
        return {CylinderMeasure::markov(std::move(init), std::move(trans)), names};
    }
    if (kind == "orbit") return {CylinderMeasure::orbit(n, names.parse_word(spec.get("period_word"))), names};
    throw error(errc::parse, "unknown measure kind '" + kind + "'");
}

inline MeasureFile load_measure(const std::filesystem::path& path) {
    return build_measure(parse_measure_spec(read_file(path)), path.parent_path());
}

inline Quasigroup load_table(const std::filesystem::path& path) { return parse_table(read_file(path)); }
inline GroupTable load_group(const std::filesystem::path& path) { return parse_group(read_file(path)); }
inline MatrixFp load_matrix(const std::filesystem::path& path) { return parse_matrix(read_file(path)); }
inline RuleFile load_rule(const std::filesystem::path& path) {
    return parse_rule(read_file(path), path.parent_path());
}

} // namespace qca
