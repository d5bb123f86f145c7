#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "satsmell/model.hpp"
#include "satsmell/npstats.hpp"

namespace satsmell::analysis {

using model::PackageProfile;
using model::SmellCombo;
using model::SmellKind;
using model::SourceTool;

using RuleKey = std::pair<SourceTool, std::string>;

struct CorrelationCell {
    SourceTool tool;
    std::string rule_id;
    SmellKind smell;
    double rho = 0.0;
    stats::TestOutcome test;       // statistic = rho, raw p
    stats::AdjustedOutcome outcome;
    int n_packages = 0;
};

struct CorrelationResult {
    std::vector<CorrelationCell> cells;
    std::vector<std::string> skipped;  // constant-vector pairs, with reason
};

// Spearman rho of per-package rule counts against per-package smell instance
// counts, one cell per (rule, smell) pair with variance on both sides, all
// raw p-values BH-adjusted jointly. Throws InsufficientData below 3 profiles.
CorrelationResult correlation_matrix(const std::vector<PackageProfile>& profiles, double alpha,
                                     unsigned jobs = 1);

struct TopQuartileGroup {
    SourceTool tool;
    SmellKind smell;
    double q3 = 0.0;
    std::vector<std::string> rules;  // descending rho, then rule_id
};

struct TopQuartileResult {
    std::vector<TopQuartileGroup> groups;
    std::vector<std::string> skipped;  // groups with fewer than 4 cells
};

// Per (tool, smell): rules whose rho >= Q3 of the group's rho distribution.
TopQuartileResult top_quartile_warnings(const std::vector<CorrelationCell>& cells);

struct CooccurrenceTable {
    // Per (tool, rule): warning-instance counts binned by the package combo,
    // indexed by combo mask.
    std::map<RuleKey, std::array<long long, model::kComboCount>> counts;

    long long at(const RuleKey& rule, SmellCombo combo) const;
    long long rule_total(const RuleKey& rule) const;
    long long tool_combo_total(SourceTool tool, SmellCombo combo) const;

    bool operator==(const CooccurrenceTable&) const = default;
};

// Bins every attributed warning instance into exactly one combo bucket.
CooccurrenceTable cooccurrence_table(const std::vector<model::AttributedWarning>& warnings);

struct PScore {
    SourceTool tool;
    std::string rule_id;
    SmellCombo combo;
    double p = 0.0;
};

struct PScoreResult {
    std::vector<PScore> scores;
    std::vector<std::string> skipped;  // (tool, combo) cells with zero denominator
};

// Relative frequency of each rule among its tool's warnings inside each combo.
PScoreResult p_scores(const CooccurrenceTable& table);

struct H2Result {
    SourceTool tool;
    std::string rule_id;
    SmellKind smell_a;
    SmellKind smell_b;
    int n_pairs = 0;
    bool testable = false;
    stats::TestOutcome test;
    stats::AdjustedOutcome outcome;
    std::string note;
};

// For each rule and smell pair: paired signed-rank test of the rule's
// per-package counts in packages with smell_a present versus smell_b present,
// rank-matched by total warning load and truncated to equal length.
// BH-adjusted within the battery.
std::vector<H2Result> h2_battery(const CooccurrenceTable& table,
                                 const std::vector<PackageProfile>& profiles, double alpha);

struct H3Result {
    SourceTool tool_a;
    SourceTool tool_b;
    SmellCombo combo;
    int n_pairs = 0;
    bool testable = false;
    stats::TestOutcome test;
    stats::AdjustedOutcome outcome;
    std::string note;
};

// For each tool pair and combo: paired signed-rank test of the tools'
// per-rule combo shares (a rule's fraction of instances falling in the
// combo), rank-matched by share and truncated to equal length. BH-adjusted
// within the battery.
std::vector<H3Result> h3_battery(const CooccurrenceTable& table, double alpha);

}  // namespace satsmell::analysis
