#include <gtest/gtest.h>

#include <filesystem>

#include <unistd.h>

#include "qca/qca.hpp"
#include "qca/suite.hpp"

using namespace qca;
namespace fs = std::filesystem;

namespace {

errc parse_error_code(auto f) {
    try {
        f();
    } catch (const error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error";
    return errc::too_large;
}

// Fresh directory holding the exported fixture files.
class Exported : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        dir_ = fs::temp_directory_path() / ("qca_io_" + std::to_string(::getpid()));
        export_fixtures(dir_);
    }
    static void TearDownTestSuite() { fs::remove_all(dir_); }
    static fs::path dir_;
};
fs::path Exported::dir_;

} // namespace

TEST(Table, RoundTrip) {
    for (const char* name : {"D7", "quaternion", "nonabelian21"}) {
        const std::string text = print_table(builtin(name));
        EXPECT_EQ(print_table(parse_table(text)), text);
        EXPECT_EQ(parse_table(text), builtin(name));
    }
}

TEST(Table, CommentsAndBlankLinesAreSkipped) {
    const Quasigroup q = parse_table("# two elements\n2 e x\n\ne x\nx e\n");
    EXPECT_EQ(q.order(), 2u);
    EXPECT_EQ(q(1, 1), 0u);
}

TEST(Table, Errors) {
    EXPECT_EQ(parse_error_code([] { parse_table("2 a b\na b\na b\n"); }), errc::duplicate_in_column);
    EXPECT_EQ(parse_error_code([] { parse_table("2 a b\na c\nb a\n"); }), errc::unknown_name);
    EXPECT_EQ(parse_error_code([] { parse_table("3 a b\n"); }), errc::parse);
    EXPECT_EQ(parse_error_code([] { parse_table("2 a b\na b\n"); }), errc::parse);
    EXPECT_EQ(parse_error_code([] { parse_table("2 a b\na b\nb a\nb a\n"); }), errc::parse);
}

TEST(Group, RoundTripAndBuiltin) {
    const GroupTable g(builtin("quaternion"));
    const std::string text = print_group(g);
    EXPECT_EQ(print_group(parse_group(text)), text);
    EXPECT_EQ(parse_group("builtin power(cyclic(7),4)").order(), 2401u);
    EXPECT_THROW(parse_group(print_table(builtin("cyclic", {3})) + "identity 1\n"), error);
    EXPECT_THROW(parse_group(print_table(builtin("cyclic", {3}))), error);
}

TEST(Matrix, RoundTrip) {
    const std::string text = "7 4\n0 0 0 1\n1 0 0 1\n0 1 0 1\n0 0 1 1\n";
    EXPECT_EQ(print_matrix(parse_matrix(text)), text);
    EXPECT_THROW(parse_matrix("6 1\n1\n"), error);
    EXPECT_THROW(parse_matrix("7 2\n1 2\n"), error);
}

TEST(Rule, TuplesRoundTrip) {
    const std::string text = "2 1 1\nsymbols o x\n"
                             "o o o o\no o x x\no x o o\no x x x\nx o o x\nx o x o\nx x o x\nx x x o\n";
    const RuleFile rf = parse_rule(text);
    EXPECT_EQ(rf.rule.arity(), 3u);
    EXPECT_EQ(print_rule(rf), text);
}

TEST(Rule, MissingAndDuplicateTuples) {
    EXPECT_EQ(parse_error_code([] { parse_rule("2 0 1\n0 0 0\n0 1 1\n1 0 1\n"); }), errc::parse);
    EXPECT_EQ(parse_error_code([] { parse_rule("2 0 1\n0 0 0\n0 1 1\n1 0 1\n1 1 0\n1 1 1\n"); }), errc::parse);
    EXPECT_EQ(parse_error_code([] { parse_rule("2 0 1\n0 0 0\n0 1 1\n1 0 1\n1 1 2\n"); }), errc::unknown_name);
}

TEST(Rule, DirectiveHeaderMustMatch) {
    EXPECT_NO_THROW(parse_rule("3 0 1\nbuiltin ledrappier(3,2,1)\n"));
    EXPECT_THROW(parse_rule("4 0 1\nbuiltin ledrappier(3,2,1)\n"), error);
}

TEST(MeasureSpec, VerbatimRoundTrip) {
    const std::string text = "kind=markov\nalphabet=2\ninitial=1 0\ntransition=1/2 1/2; 1/3 2/3\n";
    EXPECT_EQ(print_measure_spec(parse_measure_spec(text)), text);
    EXPECT_THROW(parse_measure_spec("kind=uniform\ncolour=red\n"), error);
    EXPECT_THROW(parse_measure_spec("alphabet=2\n"), error);
    EXPECT_THROW(parse_measure_spec("kind=uniform\nkind=uniform\n"), error);
}

TEST(MeasureSpec, BuildsEachKind) {
    EXPECT_EQ(build_measure(parse_measure_spec("kind=uniform\nalphabet=3\n")).measure.eval({1}), rational(1, 3));
    const auto b = build_measure(parse_measure_spec("kind=bernoulli\nsymbols=h t\nweights=1/4 3/4\n"));
    EXPECT_EQ(b.measure.eval(b.alphabet.parse_word("t t")), rational(9, 16));
    EXPECT_THROW(build_measure(parse_measure_spec("kind=bernoulli\nalphabet=3\nweights=1/2 1/2\n")), error);
    EXPECT_THROW(build_measure(parse_measure_spec("kind=mystery\nalphabet=3\n")), error);
}

TEST(Rational, ParseAndPrint) {
    EXPECT_EQ(parse_rational("6/4"), rational(3, 2));
    EXPECT_EQ(to_string(rational(0)), "0/1");
    EXPECT_EQ(to_string(rational(3, 2)), "3/2");
    EXPECT_THROW(parse_rational("1/0"), error);
    EXPECT_THROW(parse_rational("x"), error);
}

TEST_F(Exported, PrintedFixturesRoundTrip) {
    for (const char* name : {"d7.table", "quaternion.table"}) {
        const std::string text = read_file(dir_ / name);
        EXPECT_EQ(print_table(parse_table(text)), text) << name;
    }
    for (const char* name : {"quaternion.group", "c2.group", "z3.group"}) {
        const std::string text = read_file(dir_ / name);
        EXPECT_EQ(print_group(parse_group(text)), text) << name;
    }
    for (const char* name : {"f7.matrix", "identity_f2.matrix"}) {
        const std::string text = read_file(dir_ / name);
        EXPECT_EQ(print_matrix(parse_matrix(text)), text) << name;
    }
    const std::string xr = read_file(dir_ / "xor.rule");
    EXPECT_EQ(print_rule(parse_rule(xr)), xr);
    for (const auto& e : fs::directory_iterator(dir_))
        if (e.path().extension() == ".measure") {
            const std::string text = read_file(e.path());
            EXPECT_EQ(print_measure_spec(parse_measure_spec(text)), text) << e.path();
        }
}

TEST_F(Exported, DirectiveRulesExpandToTheSameRule) {
    for (const char* name : {"d7.rule", "quaternion.rule", "z3_difference.rule", "example11.rule"}) {
        const RuleFile rf = load_rule(dir_ / name);
        const RuleFile again = parse_rule(print_rule(rf));
        EXPECT_EQ(again.rule, rf.rule) << name;
        EXPECT_EQ(again.alphabet, rf.alphabet) << name;
    }
}

TEST_F(Exported, MeasuresLoadWithNamedSymbols) {
    const MeasureFile m = load_measure(dir_ / "example11.measure");
    EXPECT_EQ(m.alphabet.size(), 16u);
    EXPECT_EQ(m.measure.eval(m.alphabet.parse_word("(0,i) (1,j)")), rational(1, 12));
    const MeasureFile q = load_measure(dir_ / "quaternion_orbit.measure");
    EXPECT_EQ(q.measure.eval(q.alphabet.parse_word("k i")), rational(1, 3));
}

TEST_F(Exported, SuiteReadsExportedFixtures) {
    const Fixtures fx = Fixtures::load(dir_);
    const Fixtures built = Fixtures::builtin();
    EXPECT_EQ(fx.d7_table, built.d7_table);
    EXPECT_EQ(fx.quaternion_table, built.quaternion_table);
    EXPECT_EQ(fx.f7_matrix, built.f7_matrix);
}

TEST(Suite, CorruptedTableFailsFirstRow) {
    Fixtures fx = Fixtures::builtin();
    // first row "a1 a2 ..." becomes "a1 a1 ...", no longer Latin
    const auto at = fx.d7_table.find("a1 a2", fx.d7_table.find('\n'));
    ASSERT_NE(at, std::string::npos);
    fx.d7_table.replace(at, 5, "a1 a1");
    const SuiteRow row = run_scenario(1, fx, {});
    EXPECT_EQ(row.status, "FAIL");
}

TEST(Suite, DeterministicOutput) {
    SuiteOptions opt;
    opt.depth = 3;
    const Fixtures fx = Fixtures::builtin();
    const auto rows = paper_suite(fx, opt);
    EXPECT_TRUE(suite_passed(rows));
    EXPECT_EQ(format_suite(rows), format_suite(paper_suite(fx, opt)));
}
