// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Statistical criteria run against independent oracles and
// seeded Monte Carlo fixtures; the end-to-end criterion drives the CLI binary
// on the bundled mini-corpus.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <set>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "procutil.hpp"
#include "satsmell/analysis.hpp"
#include "satsmell/errors.hpp"
#include "satsmell/io.hpp"
#include "satsmell/model.hpp"
#include "satsmell/npstats.hpp"
#include "satsmell/prioritize.hpp"
#include "satsmell/synth.hpp"

namespace fs = std::filesystem;
using namespace satsmell;
using nlohmann::json;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

void note(const std::string& text) { g_notes.push_back(text); }

struct Criterion {
    const char* name;
    bool (*fn)();
    double budget_seconds;
};

bool expect(bool ok, const std::string& what) {
    if (!ok) note("FAILED: " + what);
    return ok;
}

// --- criterion 1: statistics oracles ------------------------------------

bool criterion_stats_oracles() {
    bool ok = true;

    // Spearman vs rank-then-Pearson on 1,000 random tied/untied vectors.
    std::mt19937_64 rng(901);
    int checked = 0;
    while (checked < 1000) {
        size_t n = 3 + rng() % 60;
        bool ties = checked % 2 == 0;
        auto x = oracles::random_vector(rng, n, ties);
        auto y = oracles::random_vector(rng, n, ties);
        double want = oracles::spearman(x, y);
        if (std::isnan(want)) continue;  // constant draw; not a valid case
        double got;
        try {
            got = stats::spearman_rho(x, y).statistic;
        } catch (const ConstantInput&) {
            continue;
        }
        ++checked;
        ok &= expect(std::fabs(got - want) < 1e-12,
                     "spearman oracle mismatch: " + std::to_string(got) + " vs " +
                         std::to_string(want));
    }

    // Wilcoxon exact vs full 2^n enumeration for every tie-free pattern n <= 10.
    for (int n = 2; n <= 10 && ok; ++n) {
        for (uint32_t mask = 0; mask < (1u << n); ++mask) {
            std::vector<double> a(n), b(n);
            for (int i = 0; i < n; ++i) {
                double d = static_cast<double>(i + 1);
                a[i] = 50.0;
                b[i] = (mask & (1u << i)) ? 50.0 - d : 50.0 + d;
            }
            auto got = stats::wilcoxon_signed_rank(a, b);
            double want = oracles::wilcoxon_exact_p(n, got.statistic);
            if (got.method != "exact" || std::fabs(got.p_value - want) > 1e-12) {
                ok = expect(false, "wilcoxon exact mismatch at n=" + std::to_string(n));
                break;
            }
        }
    }

    // BH q-values and rejection sets vs the hand procedure on 200 vectors.
    std::mt19937_64 rng2(902);
    for (int trial = 0; trial < 200 && ok; ++trial) {
        size_t m = 1 + rng2() % 50;
        std::vector<double> p(m);
        for (auto& e : p) {
            e = static_cast<double>(rng2() >> 11) * 0x1.0p-53;
            if (rng2() % 4 == 0) e = std::round(e * 20.0) / 20.0;
        }
        auto got = stats::bh_adjust(p, 0.05);
        auto want = oracles::bh_by_hand(p, 0.05);
        for (size_t i = 0; i < m; ++i) {
            if (std::fabs(got[i].q_value - want[i].q) > 1e-12 ||
                got[i].rejected != want[i].rejected || got[i].rank_index != want[i].rank) {
                ok = expect(false, "bh mismatch on trial " + std::to_string(trial));
                break;
            }
        }
    }
    return ok;
}

// --- criterion 2: planted-correlation recovery ---------------------------

synth::PlantSpec plant(uint64_t seed, double rho) {
    synth::PlantSpec spec;
    spec.seed = seed;
    spec.n_packages = 500;
    spec.combo_mix = {0, 1, 0, 0, 0, 0, 0, 0};
    synth::RulePlant rule;
    rule.tool = ingest::SourceTool::SonarQube;
    rule.rule_id = "planted";
    rule.level = 3;
    rule.mean = 8.0;
    rule.sigma = 0.75;
    if (rho != 0.0) {
        rule.target_smell = ingest::SmellKind::CD;
        rule.target_rho = rho;
    }
    spec.rules.push_back(std::move(rule));
    return spec;
}

bool criterion_planted_recovery() {
    bool ok = true;
    for (double target : {0.0, 0.3, -0.3, 0.5, -0.5, 0.8, -0.8}) {
        double sum = 0.0;
        for (uint64_t seed = 1; seed <= 50; ++seed) {
            auto corpus = synth::generate(plant(seed, target));
            auto join = model::build_profiles(corpus.warnings, corpus.smells, {});
            auto result = analysis::correlation_matrix(join.profiles, 0.05);
            for (const auto& cell : result.cells)
                if (cell.rule_id == "planted" && cell.smell == ingest::SmellKind::CD)
                    sum += cell.rho;
        }
        double mean = sum / 50.0;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "target %+.1f measured %+.4f", target, mean);
        note(buf);
        ok &= expect(std::fabs(mean - target) <= 0.07,
                     std::string(buf) + " outside +-0.07");
    }

    // Null plants: independent rules, BH rejections at alpha=0.05 stay under 10%.
    long long cells = 0, rejected = 0;
    for (uint64_t seed = 1; seed <= 50; ++seed) {
        synth::PlantSpec spec;
        spec.seed = seed;
        spec.n_packages = 500;
        spec.combo_mix = {0.125, 0.125, 0.125, 0.125, 0.125, 0.125, 0.125, 0.125};
        for (int r = 0; r < 20; ++r) {
            synth::RulePlant rule;
            rule.tool = static_cast<ingest::SourceTool>(r % 4);
            rule.rule_id = "rule" + std::to_string(r);
            rule.level = rule.tool == ingest::SourceTool::FindBugs ? 3 : 2;
            rule.mean = 2.0;
            rule.sigma = 0.75;
            spec.rules.push_back(std::move(rule));
        }
        auto corpus = synth::generate(spec);
        auto join = model::build_profiles(corpus.warnings, corpus.smells, {});
        auto result = analysis::correlation_matrix(join.profiles, 0.05, 2);
        for (const auto& cell : result.cells) {
            ++cells;
            if (cell.outcome.rejected) ++rejected;
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "null plants: %lld of %lld cells rejected", rejected, cells);
    note(buf);
    ok &= expect(cells > 0 && static_cast<double>(rejected) <= 0.10 * static_cast<double>(cells),
                 "null rejection rate above 10%");
    return ok;
}

// --- criterion 3: conservation invariants --------------------------------

bool check_conservation(const std::vector<ingest::WarningRecord>& warnings,
                        const std::vector<ingest::SmellInstance>& smells,
                        const model::DerivationConfig& cfg, const char* label) {
    bool ok = true;
    auto join = model::build_profiles(warnings, smells, cfg);
    auto table = analysis::cooccurrence_table(join.warnings);

    // Per rule: combo counts sum to the attributed total (exact).
    std::map<analysis::RuleKey, long long> attributed;
    for (const auto& aw : join.warnings) attributed[{aw.record.tool, aw.record.rule_id}] += 1;
    for (const auto& [rule, want] : attributed)
        ok &= expect(table.rule_total(rule) == want,
                     std::string(label) + ": combo counts do not sum for " + rule.second);

    // The independent naive recount agrees exactly.
    ok &= expect(synth::oracle_counts(warnings, smells, cfg) == table,
                 std::string(label) + ": oracle recount differs");

    // P sums to 1 per (tool, combo) within 1e-12.
    auto scores = analysis::p_scores(table);
    std::map<std::pair<ingest::SourceTool, uint8_t>, double> sums;
    for (const auto& s : scores.scores) sums[{s.tool, s.combo.mask}] += s.p;
    for (const auto& [key, sum] : sums)
        ok &= expect(std::fabs(sum - 1.0) <= 1e-12, std::string(label) + ": P sum off 1");
    return ok;
}

bool criterion_conservation() {
    bool ok = true;
    // Generated fixtures across presets and seeds.
    for (uint64_t seed : {1ull, 2ull, 3ull}) {
        synth::PlantSpec spec;
        spec.seed = seed;
        spec.n_packages = 80;
        spec.combo_mix = {0.3, 0.15, 0.1, 0.1, 0.1, 0.1, 0.05, 0.1};
        for (int r = 0; r < 6; ++r) {
            synth::RulePlant rule;
            rule.tool = static_cast<ingest::SourceTool>(r % 4);
            rule.rule_id = "rule" + std::to_string(r);
            rule.level = rule.tool == ingest::SourceTool::FindBugs ? 4 : 3;
            rule.mean = 3.0;
            rule.sigma = 0.8;
            if (r == 0) {
                rule.target_smell = ingest::SmellKind::CD;
                rule.target_rho = 0.6;
            }
            spec.rules.push_back(std::move(rule));
        }
        auto corpus = synth::generate(spec);
        ok &= check_conservation(corpus.warnings, corpus.smells, {},
                                 ("synth seed " + std::to_string(seed)).c_str());
    }

    // Mini-corpus through the real parsers.
    ingest::SeverityMap map;
    std::vector<ingest::WarningRecord> warnings;
    std::vector<ingest::SmellInstance> smells;
    fs::path corpus = fs::path(FIXTURES_DIR) / "mini-corpus";
    for (const char* project : {"alpha", "beta", "gamma"}) {
        fs::path dir = corpus / project;
        auto add = [&](std::vector<ingest::WarningRecord> records) {
            warnings.insert(warnings.end(), records.begin(), records.end());
        };
        add(ingest::parse_checkstyle(procutil::slurp(dir / "checkstyle.xml"), map));
        add(ingest::parse_pmd(procutil::slurp(dir / "pmd.xml"), map));
        add(ingest::parse_findbugs(procutil::slurp(dir / "findbugs.xml"), map));
        add(ingest::parse_sonarqube(procutil::slurp(dir / "sonarqube.json"), map));
        auto s = ingest::parse_arcan(procutil::slurp(dir / "arcan.csv"));
        smells.insert(smells.end(), s.begin(), s.end());
    }
    model::DerivationConfig cfg;
    cfg.source_roots = {"src/main/java"};
    ok &= check_conservation(warnings, smells, cfg, "mini-corpus");
    return ok;
}

// --- criterion 4: dominance -----------------------------------------------

long long weighted_prefix(const std::vector<prioritize::RankedWarning>& r, size_t k) {
    long long sum = 0;
    for (size_t i = 0; i < k && i < r.size(); ++i) sum += prioritize::bucket_weight(r[i].bucket);
    return sum;
}

std::vector<prioritize::RankedWarning> as_ranking(const std::vector<prioritize::Bucket>& buckets) {
    std::vector<prioritize::RankedWarning> out;
    int i = 0;
    for (auto b : buckets)
        out.push_back({ingest::SourceTool::PMD, "r", 0.0, b, "p", "f", i++});
    return out;
}

bool criterion_dominance() {
    bool ok = true;
    using prioritize::Bucket;

    // Exhaustive: every permutation of a mixed multiset up to n = 7.
    std::vector<Bucket> pool{Bucket::Critical, Bucket::High,     Bucket::Medium, Bucket::None,
                             Bucket::Critical, Bucket::Medium, Bucket::None};
    for (size_t n = 2; n <= pool.size() && ok; ++n) {
        std::vector<Bucket> buckets(pool.begin(), pool.begin() + n);
        std::sort(buckets.begin(), buckets.end());
        auto optimal = as_ranking(buckets);
        std::sort(optimal.begin(), optimal.end(), [](const auto& a, const auto& b) {
            return prioritize::bucket_weight(a.bucket) > prioritize::bucket_weight(b.bucket);
        });
        do {
            auto candidate = as_ranking(buckets);
            for (int x = 10; x <= 100; x += 10) {
                size_t k = static_cast<size_t>(
                    std::ceil(static_cast<double>(x) * static_cast<double>(n) / 100.0 - 1e-9));
                if (weighted_prefix(optimal, k) < weighted_prefix(candidate, k)) {
                    ok = expect(false, "dominance violated at n=" + std::to_string(n));
                    break;
                }
            }
        } while (ok && std::next_permutation(buckets.begin(), buckets.end()));
    }

    // Randomized: n = 200 against 1,000 random rankings.
    std::mt19937_64 rng(4004);
    std::vector<prioritize::RankedWarning> ranking;
    for (int i = 0; i < 200; ++i)
        ranking.push_back({ingest::SourceTool::PMD, "r", 0.0,
                           static_cast<Bucket>(rng() % 4), "p", "f", i});
    auto optimal = ranking;
    std::sort(optimal.begin(), optimal.end(), [](const auto& a, const auto& b) {
        return prioritize::bucket_weight(a.bucket) > prioritize::bucket_weight(b.bucket);
    });
    ok &= expect(prioritize::popt_area(optimal).value == 1.0, "popt(optimal) != 1 exactly");
    for (int t = 0; t < 1000 && ok; ++t) {
        std::shuffle(ranking.begin(), ranking.end(), rng);
        for (int x = 10; x <= 100; x += 10) {
            size_t k = static_cast<size_t>(std::ceil(2.0 * x - 1e-9));
            if (weighted_prefix(optimal, k) < weighted_prefix(ranking, k)) {
                ok = expect(false, "dominance violated at n=200");
                break;
            }
        }
    }
    return ok;
}

// --- criterion 5: end-to-end golden run ------------------------------------

bool criterion_golden_run() {
    bool ok = true;
    const std::string bin = SATSMELL_BIN;
    const std::string corpus = (fs::path(FIXTURES_DIR) / "mini-corpus").string();

    auto run_pipeline = [&](const fs::path& dir) {
        std::string roots = " --roots src/main/java --deterministic";
        bool all = true;
        all &= procutil::run(bin + " ingest -d " + dir.string() + " --input " + corpus + roots)
                   .exit_code == 0;
        all &= procutil::run(bin + " analyze -d " + dir.string() + roots).exit_code == 0;
        all &= procutil::run(bin + " rank -d " + dir.string() + roots).exit_code == 0;
        all &= procutil::run(bin + " report -d " + dir.string() + " --deterministic").exit_code == 0;
        return all;
    };

    auto dir1 = procutil::fresh_dir("acceptance_a");
    auto dir2 = procutil::fresh_dir("acceptance_b");
    ok &= expect(run_pipeline(dir1), "pipeline run 1 failed");
    ok &= expect(run_pipeline(dir2), "pipeline run 2 failed");
    if (!ok) return false;

    int files = 0;
    for (const auto& entry : fs::recursive_directory_iterator(dir1)) {
        if (!entry.is_regular_file()) continue;
        fs::path rel = fs::relative(entry.path(), dir1);
        if (!fs::exists(dir2 / rel) ||
            procutil::slurp(entry.path()) != procutil::slurp(dir2 / rel)) {
            ok = expect(false, "outputs not byte-stable: " + rel.string());
            continue;
        }
        ++files;
    }
    note("byte-stable files: " + std::to_string(files));

    // Ingest counts match the bundled manifest.
    json manifest = json::parse(procutil::slurp(fs::path(corpus) / "manifest.json"));
    json report = json::parse(procutil::slurp(dir1 / "dumps" / "parse_report.json"));
    for (auto& [tool, want] : manifest["counts"].items())
        ok &= expect(report["counts"][tool] == want, "ingest count mismatch for " + tool);

    // Summary carries the NCO fraction and the top-5 table.
    std::string summary = procutil::slurp(dir1 / "report" / "summary.txt");
    ok &= expect(summary.find("non-co-occurring warnings: 20.00%") != std::string::npos,
                 "NCO fraction missing or wrong");
    ok &= expect(summary.find("top-5 warnings per tool and smell") != std::string::npos,
                 "top-5 table missing");

    // Three effort curves whose x=100 rows coincide.
    auto curves = io::curves_from_csv(procutil::slurp(dir1 / "rank" / "curves.csv"));
    ok &= expect(curves.size() == 3, "expected 3 effort curves");
    for (const auto& curve : curves) {
        ok &= expect(curve.points[9].medium == curves[0].points[9].medium &&
                         curve.points[9].high == curves[0].points[9].high &&
                         curve.points[9].critical == curves[0].points[9].critical,
                     "x=100 rows differ across rankers");
    }
    return ok;
}

// --- criterion 6: battery sanity ---------------------------------------------

bool criterion_battery_sanity() {
    bool ok = true;

    // Planted extreme H2: a rule firing only in CD packages, against UD.
    {
        synth::PlantSpec spec;
        spec.seed = 5;
        spec.n_packages = 60;
        spec.combo_mix = {0, 0.5, 0.5, 0, 0, 0, 0, 0};  // CD half, UD half
        synth::RulePlant concentrated;
        concentrated.tool = ingest::SourceTool::PMD;
        concentrated.rule_id = "cd_only";
        concentrated.level = 4;
        concentrated.mean = 6.0;
        concentrated.sigma = 0.5;
        concentrated.combo_weights = {0, 1, 0, 0, 0, 0, 0, 0};
        spec.rules.push_back(concentrated);
        auto corpus = synth::generate(spec);
        auto join = model::build_profiles(corpus.warnings, corpus.smells, {});
        auto battery =
            analysis::h2_battery(analysis::cooccurrence_table(join.warnings), join.profiles, 0.05);
        bool rejected = false;
        for (const auto& row : battery)
            if (row.rule_id == "cd_only" && row.smell_a == ingest::SmellKind::CD &&
                row.smell_b == ingest::SmellKind::UD && row.testable)
                rejected = row.outcome.rejected;
        ok &= expect(rejected, "planted extreme H2 not rejected");
    }

    // Planted extreme H4: optimal vs reverse-optimal on a critical-heavy set.
    {
        using prioritize::Bucket;
        std::vector<prioritize::RankedWarning> mix;
        for (int i = 0; i < 40; ++i) {
            Bucket b = i < 14 ? Bucket::Critical : i < 24 ? Bucket::High : i < 32 ? Bucket::Medium
                                                                                  : Bucket::None;
            mix.push_back({ingest::SourceTool::PMD, "r", 0.0, b, "p", "f", i});
        }
        auto optimal = mix;
        std::sort(optimal.begin(), optimal.end(), [](const auto& a, const auto& b) {
            return prioritize::bucket_weight(a.bucket) > prioritize::bucket_weight(b.bucket);
        });
        auto reversed = optimal;
        std::reverse(reversed.begin(), reversed.end());
        auto battery = prioritize::compare_rankers(
            {prioritize::effort_curve(optimal, "optimal"),
             prioritize::effort_curve(reversed, "reverse")},
            0.05);
        bool rejected = false;
        for (const auto& row : battery)
            if (row.bucket == Bucket::Critical && row.testable && row.outcome.rejected)
                rejected = true;
        ok &= expect(rejected, "planted extreme H4 not rejected for Critical");
    }

    // Null fixtures: independent rule placement; the battery stays quiet in at
    // least 90% of 50 seeds.
    int clean = 0;
    for (uint64_t seed = 1; seed <= 50; ++seed) {
        synth::PlantSpec spec;
        spec.seed = seed;
        spec.n_packages = 60;
        spec.combo_mix = {0.25, 0.25, 0.25, 0, 0.25, 0, 0, 0};
        for (int r = 0; r < 5; ++r) {
            synth::RulePlant rule;
            rule.tool = ingest::SourceTool::PMD;
            rule.rule_id = "rule" + std::to_string(r);
            rule.level = 3;
            rule.mean = 4.0;
            rule.sigma = 0.75;
            spec.rules.push_back(std::move(rule));
        }
        auto corpus = synth::generate(spec);
        auto join = model::build_profiles(corpus.warnings, corpus.smells, {});
        auto battery =
            analysis::h2_battery(analysis::cooccurrence_table(join.warnings), join.profiles, 0.05);
        bool any = false;
        for (const auto& row : battery) any |= row.outcome.rejected;
        if (!any) ++clean;
    }
    note("null H2 batteries clean in " + std::to_string(clean) + "/50 seeds");
    ok &= expect(clean >= 45, "null batteries rejected too often");

    // Identical-performance rankers differing only in tie order: not rejected.
    {
        using prioritize::Bucket;
        std::vector<prioritize::RankedWarning> a, b;
        for (int i = 0; i < 30; ++i) {
            Bucket bucket = i % 2 ? Bucket::Critical : Bucket::Medium;
            a.push_back({ingest::SourceTool::PMD, "x", 0.0, bucket, "p", "f", i});
            b.push_back({ingest::SourceTool::PMD, "y", 0.0, bucket, "p", "f", 1000 - i});
        }
        auto battery = prioritize::compare_rankers(
            {prioritize::effort_curve(a, "a"), prioritize::effort_curve(b, "b")}, 0.05);
        for (const auto& row : battery)
            ok &= expect(!row.outcome.rejected, "tie-order-only rankers rejected");
    }
    return ok;
}

}  // namespace

int main() {
    const Criterion criteria[] = {
        {"statistics oracles (spearman/wilcoxon/bh)", criterion_stats_oracles, 30.0},
        {"planted-correlation recovery and null calibration", criterion_planted_recovery, 60.0},
        {"conservation invariants (combo counts, P sums, oracle recount)", criterion_conservation,
         60.0},
        {"optimal-ranker dominance and popt bounds", criterion_dominance, 60.0},
        {"end-to-end golden run on the mini-corpus", criterion_golden_run, 10.0},
        {"battery sanity (planted extremes and nulls)", criterion_battery_sanity, 60.0},
    };
    int index = 0;
    double total_seconds = 0.0;
    for (const auto& criterion : criteria) {
        ++index;
        g_notes.clear();
        auto start = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = criterion.fn();
        } catch (const std::exception& e) {
            note(std::string("exception: ") + e.what());
        }
        double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        total_seconds += seconds;
        if (seconds > criterion.budget_seconds) {
            ok = false;
            note("over budget: " + std::to_string(seconds) + "s > " +
                 std::to_string(criterion.budget_seconds) + "s");
        }
        std::printf("[%s] criterion %d: %s (%.1fs)\n", ok ? "PASS" : "FAIL", index,
                    criterion.name, seconds);
        for (const auto& n : g_notes) std::printf("        %s\n", n.c_str());
        if (!ok) ++g_failures;
    }
    if (total_seconds > 180.0) {
        std::printf("[FAIL] suite runtime %.1fs exceeds the 180s target\n", total_seconds);
        ++g_failures;
    }
    return g_failures == 0 ? 0 : 1;
}
