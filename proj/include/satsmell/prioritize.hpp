#pragma once

#include <array>
#include <string>
#include <vector>

#include "satsmell/analysis.hpp"
#include "satsmell/model.hpp"

namespace satsmell::prioritize {

using analysis::PScore;
using model::AttributedWarning;
using model::SmellCombo;
using model::SourceTool;

// Smell-proneness bucket of a warning's combo: the combo's severity is the
// max of its member smell severities (5/7/9), mapped onto Medium/High/
// Critical; NCO maps to None.
enum class Bucket { None, Medium, High, Critical };

const char* to_string(Bucket bucket);
int bucket_weight(Bucket bucket);  // None=0, Medium=5, High=7, Critical=9

Bucket bucket_of(SmellCombo combo);

struct RankedWarning {
    SourceTool tool;
    std::string rule_id;
    double key = 0.0;  // ranker-specific score, descending
    Bucket bucket = Bucket::None;
    // Instance identity, used only as the final deterministic tie-break.
    std::string package;
    std::string file_path;
    int line = 0;
};

enum class RankUnit { Instance, Rule };

// Collapses instances to one entry per distinct rule; the rule's bucket is
// its dominant combo (most instances, severity then mask as tie-breaks).
std::vector<AttributedWarning> collapse_to_rules(const std::vector<AttributedWarning>& warnings);

// Descending normalized severity; ties by descending rule instance count,
// then rule id.
std::vector<RankedWarning> rank_by_severity(const std::vector<AttributedWarning>& warnings);

// Descending P(rule, combo); rules without a score for the combo rank last.
// Throws UnknownCombo when no score exists for the combo at all.
std::vector<RankedWarning> rank_by_p(const std::vector<AttributedWarning>& warnings,
                                     const std::vector<PScore>& scores, SmellCombo combo);

// Descending combo severity; the reference ("optimal") ordering.
std::vector<RankedWarning> rank_optimal(const std::vector<AttributedWarning>& warnings);

enum class CutoffMode { Ceiling, Floor };

struct CurvePoint {
    int cutoff_pct = 0;  // 10..100
    long long medium = 0;
    long long high = 0;
    long long critical = 0;
};

struct EffortCurve {
    std::string ranker;
    std::array<CurvePoint, 10> points;
};

// Captured Medium/High/Critical warnings among the first ceil(x% * n)
// entries, x in {10, ..., 100}. Throws EmptyRanking.
EffortCurve effort_curve(const std::vector<RankedWarning>& ranking, std::string ranker_name,
                         CutoffMode mode = CutoffMode::Ceiling);

struct PoptResult {
    double value = 1.0;
    bool degenerate = false;  // all weights equal; 1.0 by convention
};

// 1 - (area between the optimal cumulative severity-capture curve and the
// ranking's curve) / (area between the optimal and worst-case curves).
// Throws EmptyRanking.
PoptResult popt_area(const std::vector<RankedWarning>& ranking);

struct H4Result {
    std::string ranker_a;
    std::string ranker_b;
    Bucket bucket = Bucket::None;
    int n_points = 0;
    bool testable = false;
    stats::TestOutcome test;
    stats::AdjustedOutcome outcome;
    std::string note;
};

// Pairwise signed-rank tests over the 10 paired cutoff captures per bucket,
// BH-adjusted within the battery. Curves must agree at x = 100 (same warning
// set); throws InsufficientData otherwise or with fewer than 2 curves.
std::vector<H4Result> compare_rankers(const std::vector<EffortCurve>& curves, double alpha);

}  // namespace satsmell::prioritize
