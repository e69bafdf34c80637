#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "json.hpp"
#include "leaders/concerns/concerns.hpp"
#include "leaders/concerns/gamma.hpp"
#include "leaders/corpus/porter_stemmer.hpp"
#include "leaders/error.hpp"
#include "support/concern_fixture.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

using namespace leaders;
using namespace leaders::concerns;
using testing::TempDir;

namespace {

ContingencyTable table2x2(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
    return {{"r0", "r1"}, {"c0", "c1"}, {a, b, c, d}};
}

std::vector<std::string> stems(std::initializer_list<const char*> words) {
    std::vector<std::string> out;
    for (auto w : words) out.push_back(corpus::porter_stem(w));
    return out;
}

std::vector<std::string> names_of(const ConcernLabels& l, const ConcernLexicon& lex) {
    std::vector<std::string> out;
    for (auto i : l.concerns) out.push_back(lex[i].name);
    return out;
}

}  // namespace

TEST_SUITE("concerns") {

TEST_CASE("default lexicon") {
    auto lex = ConcernLexicon::defaults();
    REQUIRE(lex.size() == 6);
    CHECK(lex[0].name == "symptoms");
    CHECK(lex[2].name == "countermeasures:hygiene");
    CHECK(lex[4].keywords == std::vector<std::string>{"travel", "flying", "fly", "airplane", "flight", "trip"});
    CHECK(lex.merged_names() ==
          std::vector<std::string>{"symptoms", "vaccination", "countermeasures", "travel", "pandemic"});
    CHECK(lex.merged_index(2) == 2);
    CHECK(lex.merged_index(3) == 2);
    CHECK(lex.merged_index(5) == 4);
}

TEST_CASE("bundled toml matches the defaults") {
    auto file = load_concern_lexicon(LEADERS_TEST_DATA_DIR "/concerns.toml");
    auto def = ConcernLexicon::defaults();
    REQUIRE(file.size() == def.size());
    for (std::size_t i = 0; i < def.size(); ++i) {
        CHECK(file[i].name == def[i].name);
        CHECK(file[i].stemmed == def[i].stemmed);
    }
}

TEST_CASE("lexicon loading errors") {
    TempDir dir("concerns");
    dir.write("ok.toml", "[concerns]\nzeta = [\"Zed\"]\nalpha = [\"a\", \"b\"]\n");
    auto lex = load_concern_lexicon(dir / "ok.toml");
    REQUIRE(lex.size() == 2);
    CHECK(lex[0].name == "zeta");
    CHECK(lex[0].keywords == std::vector<std::string>{"zed"});
    dir.write("bad.toml", "[concerns]\nx = 3\n");
    CHECK_THROWS_AS(load_concern_lexicon(dir / "bad.toml"), ParseError);
    dir.write("syntax.toml", "[concerns\n");
    CHECK_THROWS_AS(load_concern_lexicon(dir / "syntax.toml"), ParseError);
    CHECK_THROWS(load_concern_lexicon(dir / "absent.toml"));
    using Spec = std::vector<std::pair<std::string, std::vector<std::string>>>;
    CHECK_THROWS_AS(ConcernLexicon(Spec{{"a", {"x"}}, {"a", {"y"}}}), InvalidArgument);
    CHECK_THROWS_AS(ConcernLexicon(Spec{{"", {"x"}}}), InvalidArgument);
}

TEST_CASE("annotation on stemmed tokens") {
    auto lex = ConcernLexicon::defaults();
    CHECK(names_of(annotate_concerns(stems({"vaccine"}), lex), lex) == std::vector<std::string>{"vaccination"});
    CHECK(names_of(annotate_concerns(stems({"vaccination", "today"}), lex), lex) ==
          std::vector<std::string>{"vaccination"});
    CHECK(names_of(annotate_concerns(stems({"flights", "cancelled", "traveling"}), lex), lex) ==
          std::vector<std::string>{"travel"});
    CHECK(names_of(annotate_concerns(stems({"pandemic", "wash"}), lex), lex) ==
          std::vector<std::string>{"countermeasures:hygiene", "pandemic"});
    CHECK(annotate_concerns(stems({"nothing", "here"}), lex).empty());
}

TEST_CASE("annotation ignores token order") {
    auto lex = ConcernLexicon::defaults();
    auto t = stems({"mask", "fever", "trip", "symptoms", "hands", "news"});
    const auto base = annotate_concerns(t, lex);
    std::mt19937_64 gen(1);
    for (int i = 0; i < 50; ++i) {
        std::shuffle(t.begin(), t.end(), gen);
        CHECK(annotate_concerns(t, lex) == base);
    }
    auto ind = merged_indicators(base, lex);
    CHECK(ind == std::vector<double>{1, 0, 1, 1, 0});
}

TEST_CASE("alignment matches the hand counted table") {
    auto lex = ConcernLexicon::defaults();
    auto f = testing::concern_fixture();
    auto al = concern_alignment(f.labels, f.cluster_of, f.cluster_names, lex);
    CHECK(al.table.rows == std::vector<std::string>{"C0", "C1", "C2", "C3"});
    CHECK(al.table.cols == lex.merged_names());
    CHECK(al.table.cells == f.expected);
    for (std::size_t r = 0; r < al.table.rows.size(); ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < al.table.cols.size(); ++c) s += al.shares[r * al.table.cols.size() + c];
        CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("alignment edge cases") {
    auto lex = ConcernLexicon::defaults();
    std::vector<ConcernLabels> one{{{4}}, {{4}}};
    std::vector<std::uint32_t> c{0, 0};
    std::vector<std::string> names{"only"};
    auto al = concern_alignment(one, c, names, lex);
    CHECK(al.table.rows.size() == 1);
    CHECK(std::ranges::count_if(al.table.cells, [](auto v) { return v != 0; }) == 1);
    CHECK(std::ranges::count(al.shares, 1.0) == 1);
    std::vector<ConcernLabels> empty{{}, {}};
    CHECK_THROWS_WITH_AS(concern_alignment(empty, c, names, lex), doctest::Contains("empty contingency"),
                         InvalidArgument);
}

TEST_CASE("alignment csv") {
    TempDir dir("alignment");
    auto lex = ConcernLexicon::defaults();
    auto f = testing::concern_fixture();
    write_alignment(dir / "a.csv", concern_alignment(f.labels, f.cluster_of, f.cluster_names, lex));
    auto text = testing::slurp(dir / "a.csv");
    CHECK(text.rfind("cluster,concern,count,share\nC0,symptoms,1,0.25\n", 0) == 0);
    CHECK(std::ranges::count(text, '\n') == 21);
}

TEST_CASE("pruning drops empty rows and columns") {
    auto lex = ConcernLexicon::defaults();
    auto f = testing::concern_fixture();
    auto t = concern_alignment(f.labels, f.cluster_of, f.cluster_names, lex).table;
    CHECK(t.pruned().cells == t.cells);
    ContingencyTable z{{"a", "b", "c"}, {"x", "y", "z"}, {1, 0, 2, 0, 0, 0, 3, 0, 4}};
    auto p = z.pruned();
    CHECK(p.rows == std::vector<std::string>{"a", "c"});
    CHECK(p.cols == std::vector<std::string>{"x", "z"});
    CHECK(p.cells == std::vector<std::uint64_t>{1, 2, 3, 4});
}

TEST_CASE("chi-square example tables") {
    auto even = chi_square_independence(table2x2(10, 10, 10, 10));
    CHECK(even.statistic == 0.0);
    CHECK(even.p_value == doctest::Approx(1.0));
    CHECK_FALSE(even.reject_null);

    auto a = chi_square_independence(table2x2(10, 20, 20, 10));
    CHECK(a.df == 1);
    CHECK(a.statistic == doctest::Approx(20.0 / 3.0).epsilon(1e-12));
    CHECK(a.p_value == doctest::Approx(oracle::chi2_sf_df1(20.0 / 3.0)).epsilon(1e-9));
    CHECK(a.p_value == doctest::Approx(0.0098).epsilon(0.01));
    CHECK(a.reject_null);

    auto b = chi_square_independence(table2x2(30, 10, 10, 30));
    CHECK(b.statistic == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(b.p_value == doctest::Approx(oracle::chi2_sf_df1(20.0)).epsilon(1e-9));
    CHECK(b.p_value == doctest::Approx(7.7e-6).epsilon(0.01));
}

TEST_CASE("chi-square errors") {
    CHECK_THROWS_WITH_AS(chi_square_independence(table2x2(0, 0, 5, 5)), doctest::Contains("degenerate table"),
                         InvalidArgument);
    ContingencyTable small{{"r"}, {"a", "b"}, {1, 2}};
    CHECK_THROWS_AS(chi_square_independence(small), InvalidArgument);
}

TEST_CASE("chi-square invariances") {
    std::mt19937_64 gen(3);
    std::uniform_int_distribution<std::uint64_t> cell(1, 40);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t R = 2 + trial % 3, C = 2 + trial % 4;
        ContingencyTable t;
        for (std::size_t r = 0; r < R; ++r) t.rows.push_back("r" + std::to_string(r));
        for (std::size_t c = 0; c < C; ++c) t.cols.push_back("c" + std::to_string(c));
        for (std::size_t i = 0; i < R * C; ++i) t.cells.push_back(cell(gen));
        const auto base = chi_square_independence(t);
        CHECK(base.df == static_cast<int>((R - 1) * (C - 1)));
        CHECK(base.reject_null == (base.p_value < base.alpha));

        ContingencyTable perm = t;
        std::vector<std::size_t> rp(R), cp(C);
        std::iota(rp.begin(), rp.end(), 0);
        std::iota(cp.begin(), cp.end(), 0);
        std::shuffle(rp.begin(), rp.end(), gen);
        std::shuffle(cp.begin(), cp.end(), gen);
        for (std::size_t r = 0; r < R; ++r)
            for (std::size_t c = 0; c < C; ++c) perm.at(r, c) = t.at(rp[r], cp[c]);
        CHECK(chi_square_independence(perm).statistic == doctest::Approx(base.statistic).epsilon(1e-12));

        const std::uint64_t m = 1 + trial % 5;
        ContingencyTable scaled = t;
        for (auto& v : scaled.cells) v *= m;
        CHECK(chi_square_independence(scaled).statistic == doctest::Approx(base.statistic * m).epsilon(1e-12));
    }
}

TEST_CASE("chi-square tail is monotone") {
    for (int df = 1; df <= 10; ++df) {
        double prev = 1.0;
        for (double x = 0.0; x <= 80.0; x += 0.5) {
            const double p = chi_square_sf(x, df);
            CHECK(p <= prev);
            CHECK(p >= 0.0);
            prev = p;
        }
    }
}

TEST_CASE("incomplete gamma matches a long series") {
    for (int df = 1; df <= 10; ++df) {
        const double a = df / 2.0;
        for (double x : {0.1, 0.5, 1.0, 2.0, 3.5, 5.0, 7.5, 10.0, 15.0, 20.0, 30.0, 40.0, 50.0}) {
            CAPTURE(a);
            CAPTURE(x);
            const double want = oracle::gamma_p_series(a, x);
            CHECK(std::abs(gamma_p(a, x) - want) < 1e-9);
            CHECK(std::abs(gamma_q(a, x) - (1.0 - want)) < 1e-9);
        }
    }
    CHECK(gamma_p(2.0, 0.0) == 0.0);
    CHECK(gamma_q(2.0, 0.0) == 1.0);
}

TEST_CASE("chi-square json") {
    ChiSquareResult r{20.0, 1, 7.7e-6, 0.05, true};
    auto j = nlohmann::json::parse(to_json(r));
    CHECK(j.at("statistic") == 20.0);
    CHECK(j.at("df") == 1);
    CHECK(j.at("reject_null") == true);
    CHECK(j.at("alpha") == 0.05);
    CHECK(j.at("p_value").get<double>() == 7.7e-6);
}

}  // TEST_SUITE
