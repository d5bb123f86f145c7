#include "satsmell/prioritize.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "satsmell/errors.hpp"

namespace satsmell::prioritize {

const char* to_string(Bucket bucket) {
    switch (bucket) {
        case Bucket::None: return "None";
        case Bucket::Medium: return "Medium";
        case Bucket::High: return "High";
        case Bucket::Critical: return "Critical";
    }
    return "?";
}

int bucket_weight(Bucket bucket) {
    switch (bucket) {
        case Bucket::None: return 0;
        case Bucket::Medium: return 5;
        case Bucket::High: return 7;
        case Bucket::Critical: return 9;
    }
    return 0;
}

Bucket bucket_of(SmellCombo combo) {
    if (combo.is_nco()) return Bucket::None;
    int severity = 0;
    for (model::SmellKind kind : ingest::kAllSmells)
        if (combo.contains(kind)) severity = std::max(severity, ingest::default_smell_severity(kind));
    if (severity >= 9) return Bucket::Critical;
    if (severity >= 7) return Bucket::High;
    return Bucket::Medium;
}

namespace {

using analysis::RuleKey;

std::map<RuleKey, long long> rule_instance_counts(const std::vector<AttributedWarning>& warnings) {
    std::map<RuleKey, long long> counts;
    for (const auto& aw : warnings) counts[{aw.record.tool, aw.record.rule_id}] += 1;
    return counts;
}

RankedWarning make_entry(const AttributedWarning& aw, double key) {
    return {aw.record.tool, aw.record.rule_id, key, bucket_of(aw.combo), aw.package,
            aw.record.file_path, aw.record.line.value_or(0)};
}

// key descending, rule instance count descending, then stable identity.
void sort_ranking(std::vector<RankedWarning>& ranking,
                  const std::map<RuleKey, long long>& counts) {
    std::sort(ranking.begin(), ranking.end(), [&](const RankedWarning& a, const RankedWarning& b) {
        if (a.key != b.key) return a.key > b.key;
        long long ca = counts.at({a.tool, a.rule_id});
        long long cb = counts.at({b.tool, b.rule_id});
        if (ca != cb) return ca > cb;
        if (a.rule_id != b.rule_id) return a.rule_id < b.rule_id;
        if (a.tool != b.tool) return a.tool < b.tool;
        if (a.package != b.package) return a.package < b.package;
        if (a.file_path != b.file_path) return a.file_path < b.file_path;
        return a.line < b.line;
    });
}

}  // namespace

std::vector<AttributedWarning> collapse_to_rules(const std::vector<AttributedWarning>& warnings) {
    // Per rule: instance counts per combo, plus a representative record.
    std::map<RuleKey, std::array<long long, model::kComboCount>> combo_counts;
    std::map<RuleKey, const AttributedWarning*> representative;
    for (const auto& aw : warnings) {
        RuleKey key{aw.record.tool, aw.record.rule_id};
        combo_counts[key][aw.combo.mask] += 1;
        if (!representative.count(key)) representative[key] = &aw;
    }
    std::vector<AttributedWarning> out;
    out.reserve(combo_counts.size());
    for (const auto& [key, per_combo] : combo_counts) {
        SmellCombo dominant{};
        long long best = -1;
        for (uint8_t mask = 0; mask < model::kComboCount; ++mask) {
            SmellCombo combo{mask};
            long long c = per_combo[mask];
            if (c > best ||
                (c == best && bucket_weight(bucket_of(combo)) > bucket_weight(bucket_of(dominant)))) {
                best = c;
                dominant = combo;
            }
        }
        AttributedWarning collapsed = *representative.at(key);
        collapsed.package.clear();
        collapsed.record.file_path.clear();
        collapsed.record.line.reset();
        collapsed.combo = dominant;
        out.push_back(std::move(collapsed));
    }
    return out;
}

std::vector<RankedWarning> rank_by_severity(const std::vector<AttributedWarning>& warnings) {
    auto counts = rule_instance_counts(warnings);
    std::vector<RankedWarning> ranking;
    ranking.reserve(warnings.size());
    for (const auto& aw : warnings)
        ranking.push_back(make_entry(aw, static_cast<double>(aw.record.normalized.level)));
    sort_ranking(ranking, counts);
    return ranking;
}

std::vector<RankedWarning> rank_by_p(const std::vector<AttributedWarning>& warnings,
                                     const std::vector<PScore>& scores, SmellCombo combo) {
    std::map<RuleKey, double> score_of;
    bool combo_seen = false;
    for (const auto& s : scores) {
        if (s.combo == combo) {
            score_of[{s.tool, s.rule_id}] = s.p;
            combo_seen = true;
        }
    }
    if (!combo_seen)
        throw UnknownCombo("rank_by_p: no scores for combo " + model::to_string(combo));

    auto counts = rule_instance_counts(warnings);
    std::vector<RankedWarning> ranking;
    ranking.reserve(warnings.size());
    for (const auto& aw : warnings) {
        auto it = score_of.find({aw.record.tool, aw.record.rule_id});
        double key = it == score_of.end() ? -1.0 : it->second;  // unscored rules last
        ranking.push_back(make_entry(aw, key));
    }
    sort_ranking(ranking, counts);
    return ranking;
}

std::vector<RankedWarning> rank_optimal(const std::vector<AttributedWarning>& warnings) {
    auto counts = rule_instance_counts(warnings);
    std::vector<RankedWarning> ranking;
    ranking.reserve(warnings.size());
    for (const auto& aw : warnings)
        ranking.push_back(make_entry(aw, static_cast<double>(bucket_weight(bucket_of(aw.combo)))));
    sort_ranking(ranking, counts);
    return ranking;
}

EffortCurve effort_curve(const std::vector<RankedWarning>& ranking, std::string ranker_name,
                         CutoffMode mode) {
    if (ranking.empty()) throw EmptyRanking("effort_curve: empty ranking");
    const double n = static_cast<double>(ranking.size());
    EffortCurve curve{std::move(ranker_name), {}};
    for (int step = 0; step < 10; ++step) {
        int pct = (step + 1) * 10;
        double exact = static_cast<double>(pct) * n / 100.0;
        size_t take = mode == CutoffMode::Ceiling ? static_cast<size_t>(std::ceil(exact - 1e-9))
                                                  : static_cast<size_t>(std::floor(exact + 1e-9));
        take = std::min(take, ranking.size());
        CurvePoint point{pct, 0, 0, 0};
        for (size_t i = 0; i < take; ++i) {
            switch (ranking[i].bucket) {
                case Bucket::Medium: ++point.medium; break;
                case Bucket::High: ++point.high; break;
                case Bucket::Critical: ++point.critical; break;
                case Bucket::None: break;
            }
        }
        curve.points[step] = point;
    }
    return curve;
}

PoptResult popt_area(const std::vector<RankedWarning>& ranking) {
    if (ranking.empty()) throw EmptyRanking("popt_area: empty ranking");
    std::vector<double> weights;
    weights.reserve(ranking.size());
    for (const auto& r : ranking) weights.push_back(static_cast<double>(bucket_weight(r.bucket)));

    // Discrete area under the cumulative capture curve: sum of prefix sums.
    auto area = [](const std::vector<double>& w) {
        double cum = 0.0, total = 0.0;
        for (double v : w) {
            cum += v;
            total += cum;
        }
        return total;
    };
    double given = area(weights);
    std::vector<double> sorted = weights;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double best = area(sorted);
    std::reverse(sorted.begin(), sorted.end());
    double worst = area(sorted);
    if (best == worst) return {1.0, true};
    return {1.0 - (best - given) / (best - worst), false};
}

std::vector<H4Result> compare_rankers(const std::vector<EffortCurve>& curves, double alpha) {
    if (curves.size() < 2)
        throw InsufficientData("compare_rankers: need >= 2 curves, got " +
                               std::to_string(curves.size()));
    const CurvePoint& reference = curves.front().points.back();
    for (const auto& c : curves) {
        const CurvePoint& last = c.points.back();
        if (last.medium != reference.medium || last.high != reference.high ||
            last.critical != reference.critical)
            throw InsufficientData("compare_rankers: curves disagree at x=100 ('" +
                                   curves.front().ranker + "' vs '" + c.ranker +
                                   "'); rankings cover different warning sets");
    }

    constexpr Bucket kBuckets[] = {Bucket::Medium, Bucket::High, Bucket::Critical};
    auto capture = [](const EffortCurve& c, Bucket bucket, int step) -> double {
        const CurvePoint& p = c.points[step];
        switch (bucket) {
            case Bucket::Medium: return static_cast<double>(p.medium);
            case Bucket::High: return static_cast<double>(p.high);
            case Bucket::Critical: return static_cast<double>(p.critical);
            case Bucket::None: break;
        }
        return 0.0;
    };

    std::vector<H4Result> results;
    for (size_t a = 0; a < curves.size(); ++a) {
        for (size_t b = a + 1; b < curves.size(); ++b) {
            for (Bucket bucket : kBuckets) {
                H4Result row{curves[a].ranker, curves[b].ranker, bucket, 10, false, {}, {}, ""};
                std::vector<double> x(10), y(10);
                for (int step = 0; step < 10; ++step) {
                    x[step] = capture(curves[a], bucket, step);
                    y[step] = capture(curves[b], bucket, step);
                }
                try {
                    row.test = stats::wilcoxon_signed_rank(x, y);
                    row.testable = true;
                } catch (const AllZeroDifferences&) {
                    row.note = "not testable: identical capture curves";
                }
                results.push_back(std::move(row));
            }
        }
    }

    std::vector<double> raw;
    std::vector<size_t> testable_idx;
    for (size_t i = 0; i < results.size(); ++i) {
        if (results[i].testable) {
            raw.push_back(results[i].test.p_value);
            testable_idx.push_back(i);
        }
    }
    if (!raw.empty()) {
        auto adjusted = stats::bh_adjust(raw, alpha);
        for (size_t i = 0; i < adjusted.size(); ++i) results[testable_idx[i]].outcome = adjusted[i];
    }
    return results;
}

}  // namespace satsmell::prioritize
