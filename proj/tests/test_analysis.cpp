#include <doctest.h>

#include <random>

#include "satsmell/analysis.hpp"
#include "satsmell/errors.hpp"

using namespace satsmell;
using analysis::CooccurrenceTable;
using ingest::SmellKind;
using ingest::SourceTool;
using model::PackageProfile;
using model::SmellCombo;

namespace {

PackageProfile prof(const std::string& pkg,
                    std::map<std::pair<SourceTool, std::string>, int> warning_counts,
                    std::array<int, 3> smell_counts) {
    PackageProfile p;
    p.package = pkg;
    p.warning_counts = std::move(warning_counts);
    p.smell_counts = smell_counts;
    p.combo = model::combo_of(p);
    return p;
}

model::AttributedWarning attributed(SourceTool tool, const std::string& rule,
                                    const std::string& pkg, SmellCombo combo) {
    model::AttributedWarning aw;
    aw.record.tool = tool;
    aw.record.rule_id = rule;
    aw.record.normalized = {3};
    aw.package = pkg;
    aw.combo = combo;
    return aw;
}

SmellCombo combo(std::initializer_list<SmellKind> kinds) {
    SmellCombo c;
    for (auto k : kinds) c.add(k);
    return c;
}

}  // namespace

TEST_CASE("correlation: a perfect monotone plant is recovered and rejected") {
    std::vector<PackageProfile> profiles;
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
        int cd = static_cast<int>(rng() % 10);
        profiles.push_back(prof("org.p" + std::to_string(i),
                                {{{SourceTool::PMD, "R"}, 2 * cd}}, {cd, 0, 0}));
    }
    auto result = analysis::correlation_matrix(profiles, 0.05);
    REQUIRE(result.cells.size() == 1);  // UD and HL vectors are constant, skipped
    CHECK(result.cells[0].rho == doctest::Approx(1.0));
    CHECK(result.cells[0].smell == SmellKind::CD);
    CHECK(result.cells[0].outcome.rejected);
    CHECK(result.skipped.size() == 2);
}

TEST_CASE("correlation: fewer than 3 profiles is insufficient") {
    std::vector<PackageProfile> two{prof("a", {{{SourceTool::PMD, "R"}, 1}}, {1, 0, 0}),
                                    prof("b", {{{SourceTool::PMD, "R"}, 2}}, {0, 0, 0})};
    CHECK_THROWS_AS((void)analysis::correlation_matrix(two, 0.05), InsufficientData);
}

TEST_CASE("correlation: invariant to profile input order") {
    std::vector<PackageProfile> profiles;
    std::mt19937_64 rng(17);
    for (int i = 0; i < 30; ++i) {
        profiles.push_back(prof("org.p" + std::to_string(i),
                                {{{SourceTool::PMD, "A"}, static_cast<int>(rng() % 7)},
                                 {{SourceTool::FindBugs, "B"}, static_cast<int>(rng() % 5)}},
                                {static_cast<int>(rng() % 4), static_cast<int>(rng() % 3), 0}));
    }
    auto base = analysis::correlation_matrix(profiles, 0.05);
    std::vector<PackageProfile> shuffled = profiles;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    auto again = analysis::correlation_matrix(shuffled, 0.05);
    REQUIRE(base.cells.size() == again.cells.size());
    for (size_t i = 0; i < base.cells.size(); ++i) {
        CHECK(base.cells[i].rule_id == again.cells[i].rule_id);
        CHECK(base.cells[i].smell == again.cells[i].smell);
        CHECK(base.cells[i].rho == doctest::Approx(again.cells[i].rho));
        CHECK(base.cells[i].outcome.rejected == again.cells[i].outcome.rejected);
    }
}

TEST_CASE("correlation: null plants stay under 10% BH rejections across 50 seeds") {
    long long total_cells = 0, rejected = 0;
    for (uint64_t seed = 1; seed <= 50; ++seed) {
        std::mt19937_64 rng(seed);
        std::vector<PackageProfile> profiles;
        profiles.reserve(500);
        for (int i = 0; i < 500; ++i) {
            std::map<std::pair<SourceTool, std::string>, int> counts;
            for (int r = 0; r < 20; ++r)
                counts[{SourceTool::SonarQube, "rule" + std::to_string(r)}] =
                    static_cast<int>(rng() % 8);
            profiles.push_back(prof("org.p" + std::to_string(i), std::move(counts),
                                    {static_cast<int>(rng() % 5), static_cast<int>(rng() % 5),
                                     static_cast<int>(rng() % 5)}));
        }
        auto result = analysis::correlation_matrix(profiles, 0.05, 2);
        for (const auto& cell : result.cells) {
            ++total_cells;
            if (cell.outcome.rejected) ++rejected;
        }
    }
    CHECK(total_cells == 50 * 20 * 3);
    CHECK(static_cast<double>(rejected) <= 0.10 * static_cast<double>(total_cells));
}

TEST_CASE("top quartile: boundary-inclusive Q3 selection") {
    auto cell = [](const std::string& rule, double rho) {
        analysis::CorrelationCell c;
        c.tool = SourceTool::PMD;
        c.rule_id = rule;
        c.smell = SmellKind::CD;
        c.rho = rho;
        return c;
    };
    auto result = analysis::top_quartile_warnings(
        {cell("a", 0.1), cell("b", 0.2), cell("c", 0.3), cell("d", 0.4)});
    REQUIRE(result.groups.size() == 1);
    CHECK(result.groups[0].q3 == doctest::Approx(0.325));
    CHECK(result.groups[0].rules == std::vector<std::string>{"d"});

    auto all_equal = analysis::top_quartile_warnings(
        {cell("a", 0.5), cell("b", 0.5), cell("c", 0.5), cell("d", 0.5)});
    CHECK(all_equal.groups[0].rules.size() == 4);

    auto small = analysis::top_quartile_warnings({cell("a", 0.1), cell("b", 0.2), cell("c", 0.3)});
    CHECK(small.groups.empty());
    REQUIRE(small.skipped.size() == 1);
}

TEST_CASE("cooccurrence: instances bin into their package's combo") {
    std::vector<model::AttributedWarning> warnings;
    for (int i = 0; i < 3; ++i)
        warnings.push_back(attributed(SourceTool::PMD, "R", "org.cd", combo({SmellKind::CD})));
    warnings.push_back(attributed(SourceTool::PMD, "R", "org.clean", combo({})));
    auto table = analysis::cooccurrence_table(warnings);
    CHECK(table.at({SourceTool::PMD, "R"}, combo({SmellKind::CD})) == 3);
    CHECK(table.at({SourceTool::PMD, "R"}, combo({})) == 1);
    CHECK(table.rule_total({SourceTool::PMD, "R"}) == 4);
}

TEST_CASE("cooccurrence: empty input and full-combo binning") {
    CHECK(analysis::cooccurrence_table({}).counts.empty());
    auto full = combo({SmellKind::CD, SmellKind::UD, SmellKind::HL});
    auto table = analysis::cooccurrence_table({attributed(SourceTool::PMD, "R", "p", full)});
    CHECK(table.at({SourceTool::PMD, "R"}, full) == 1);
    CHECK(table.at({SourceTool::PMD, "R"}, combo({SmellKind::CD})) == 0);
}

TEST_CASE("cooccurrence: per-rule counts sum to attributed totals") {
    std::mt19937_64 rng(23);
    std::vector<model::AttributedWarning> warnings;
    std::map<analysis::RuleKey, long long> totals;
    for (int i = 0; i < 500; ++i) {
        SourceTool tool = static_cast<SourceTool>(rng() % 4);
        std::string rule = "r" + std::to_string(rng() % 6);
        warnings.push_back(attributed(tool, rule, "p" + std::to_string(rng() % 20),
                                      SmellCombo{static_cast<uint8_t>(rng() % 8)}));
        totals[{tool, rule}] += 1;
    }
    auto table = analysis::cooccurrence_table(warnings);
    for (const auto& [rule, want] : totals) CHECK(table.rule_total(rule) == want);
}

TEST_CASE("p-scores: relative frequency within tool and combo") {
    std::vector<model::AttributedWarning> warnings;
    auto cd = combo({SmellKind::CD});
    for (int i = 0; i < 3; ++i) warnings.push_back(attributed(SourceTool::PMD, "A", "p1", cd));
    warnings.push_back(attributed(SourceTool::PMD, "B", "p1", cd));
    auto result = analysis::p_scores(analysis::cooccurrence_table(warnings));
    REQUIRE(result.scores.size() == 2);
    CHECK(result.scores[0].rule_id == "A");
    CHECK(result.scores[0].p == doctest::Approx(0.75));
    CHECK(result.scores[1].p == doctest::Approx(0.25));
    // Combos with no PMD instances are reported as skipped.
    CHECK(result.skipped.size() == 7);
}

TEST_CASE("p-scores: single rule in a combo scores 1.0; sums are 1 per (tool, combo)") {
    std::mt19937_64 rng(31);
    std::vector<model::AttributedWarning> warnings;
    for (int i = 0; i < 400; ++i) {
        SourceTool tool = static_cast<SourceTool>(rng() % 4);
        warnings.push_back(attributed(tool, "r" + std::to_string(rng() % 5),
                                      "p" + std::to_string(i % 25),
                                      SmellCombo{static_cast<uint8_t>(rng() % 8)}));
    }
    auto table = analysis::cooccurrence_table(warnings);
    auto result = analysis::p_scores(table);
    std::map<std::pair<SourceTool, uint8_t>, double> sums;
    for (const auto& s : result.scores) sums[{s.tool, s.combo.mask}] += s.p;
    for (const auto& [key, sum] : sums) CHECK(std::fabs(sum - 1.0) < 1e-12);

    auto single = analysis::p_scores(
        analysis::cooccurrence_table({attributed(SourceTool::PMD, "only", "p", combo({}))}));
    REQUIRE(single.scores.size() == 1);
    CHECK(single.scores[0].p == doctest::Approx(1.0));
}

TEST_CASE("h2: planted extreme separation is rejected") {
    std::vector<PackageProfile> profiles;
    for (int i = 0; i < 10; ++i) {
        profiles.push_back(
            prof("org.cd" + std::to_string(i), {{{SourceTool::PMD, "R"}, 5}}, {1, 0, 0}));
        profiles.push_back(prof("org.ud" + std::to_string(i), {}, {0, 1, 0}));
    }
    std::vector<model::AttributedWarning> warnings;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 5; ++j)
            warnings.push_back(
                attributed(SourceTool::PMD, "R", "org.cd" + std::to_string(i), combo({SmellKind::CD})));
    auto table = analysis::cooccurrence_table(warnings);
    auto battery = analysis::h2_battery(table, profiles, 0.05);
    bool found = false;
    for (const auto& row : battery) {
        if (row.smell_a == SmellKind::CD && row.smell_b == SmellKind::UD) {
            found = true;
            CHECK(row.testable);
            CHECK(row.test.method == "exact");
            CHECK(row.outcome.rejected);
        }
    }
    CHECK(found);
}

TEST_CASE("h2: too few packages in a group is insufficient data") {
    std::vector<PackageProfile> profiles{
        prof("a", {{{SourceTool::PMD, "R"}, 1}}, {1, 0, 0}),
        prof("b", {}, {1, 0, 0}),
        prof("c", {}, {0, 1, 0}),
        prof("d", {}, {0, 1, 0}),
        prof("e", {}, {0, 1, 0}),
        prof("f", {}, {0, 1, 0}),
        prof("g", {}, {0, 1, 0}),
    };
    auto table = analysis::cooccurrence_table(
        {attributed(SourceTool::PMD, "R", "a", combo({SmellKind::CD}))});
    auto battery = analysis::h2_battery(table, profiles, 0.05);
    for (const auto& row : battery) {
        CHECK_FALSE(row.testable);
        CHECK(row.note.find("insufficient") != std::string::npos);
    }
}

TEST_CASE("h2: null fixture is clean in at least 90% of 50 seeds") {
    int clean = 0;
    for (uint64_t seed = 1; seed <= 50; ++seed) {
        std::mt19937_64 rng(seed);
        std::vector<PackageProfile> profiles;
        std::vector<model::AttributedWarning> warnings;
        for (int i = 0; i < 60; ++i) {
            std::string pkg = "org.p" + std::to_string(i);
            std::array<int, 3> smells{};
            for (int k = 0; k < 3; ++k) smells[k] = rng() % 2 ? 1 : 0;
            std::map<std::pair<SourceTool, std::string>, int> counts;
            SmellCombo c;
            for (int k = 0; k < 3; ++k)
                if (smells[k]) c.add(static_cast<SmellKind>(k));
            for (int r = 0; r < 5; ++r) {
                int n = static_cast<int>(rng() % 10);  // independent of the combo
                std::string rule = "rule" + std::to_string(r);
                if (n > 0) counts[{SourceTool::PMD, rule}] = n;
                for (int j = 0; j < n; ++j)
                    warnings.push_back(attributed(SourceTool::PMD, rule, pkg, c));
            }
            profiles.push_back(prof(pkg, std::move(counts), smells));
        }
        auto battery =
            analysis::h2_battery(analysis::cooccurrence_table(warnings), profiles, 0.05);
        bool any_rejected = false;
        for (const auto& row : battery) any_rejected |= row.outcome.rejected;
        if (!any_rejected) ++clean;
    }
    CHECK(clean >= 45);
}

TEST_CASE("h3: identical tools are not testable, extremes are rejected, single tool is empty") {
    // Two tools with identical per-combo share vectors.
    std::vector<model::AttributedWarning> equal;
    auto cd = combo({SmellKind::CD});
    for (int r = 0; r < 6; ++r) {
        for (int tool = 0; tool < 2; ++tool) {
            SourceTool t = tool ? SourceTool::PMD : SourceTool::FindBugs;
            equal.push_back(attributed(t, "r" + std::to_string(r), "p1", cd));
            equal.push_back(attributed(t, "r" + std::to_string(r), "p2", combo({})));
        }
    }
    auto battery = analysis::h3_battery(analysis::cooccurrence_table(equal), 0.05);
    int not_testable = 0;
    for (const auto& row : battery)
        if (!row.testable && row.note.find("not testable") != std::string::npos) ++not_testable;
    CHECK(not_testable > 0);

    // Tool A concentrated in {CD}, tool B in NCO.
    std::vector<model::AttributedWarning> planted;
    for (int r = 0; r < 8; ++r) {
        for (int i = 0; i < 4; ++i) {
            planted.push_back(attributed(SourceTool::PMD, "a" + std::to_string(r), "pcd", cd));
            planted.push_back(
                attributed(SourceTool::FindBugs, "b" + std::to_string(r), "pclean", combo({})));
        }
    }
    auto planted_battery = analysis::h3_battery(analysis::cooccurrence_table(planted), 0.05);
    bool cd_rejected = false;
    for (const auto& row : planted_battery)
        if (row.combo == cd && row.testable && row.outcome.rejected) cd_rejected = true;
    CHECK(cd_rejected);

    // A single tool gives an empty battery.
    std::vector<model::AttributedWarning> solo{attributed(SourceTool::PMD, "r", "p", cd)};
    CHECK(analysis::h3_battery(analysis::cooccurrence_table(solo), 0.05).empty());
}
