#include "satsmell/analysis.hpp"

#include <algorithm>
#include <set>

#include "satsmell/errors.hpp"
#include "satsmell/util.hpp"

namespace satsmell::analysis {

namespace {

std::string rule_label(const RuleKey& rule) {
    return std::string(ingest::to_string(rule.first)) + "/" + rule.second;
}

bool is_constant(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
}

}  // namespace

CorrelationResult correlation_matrix(const std::vector<PackageProfile>& profiles, double alpha,
                                     unsigned jobs) {
    if (profiles.size() < 3)
        throw InsufficientData("correlation_matrix: need >= 3 profiles, got " +
                               std::to_string(profiles.size()));

    std::set<RuleKey> rules;
    for (const auto& p : profiles)
        for (const auto& [key, count] : p.warning_counts) rules.insert(key);

    CorrelationResult result;
    struct Pair {
        RuleKey rule;
        SmellKind smell;
        std::vector<double> x, y;
    };
    std::vector<Pair> pairs;
    for (const auto& rule : rules) {
        std::vector<double> x;
        x.reserve(profiles.size());
        for (const auto& p : profiles) {
            auto it = p.warning_counts.find(rule);
            x.push_back(it == p.warning_counts.end() ? 0.0 : static_cast<double>(it->second));
        }
        if (is_constant(x)) {
            result.skipped.push_back(rule_label(rule) + ": constant warning vector");
            continue;
        }
        for (SmellKind smell : ingest::kAllSmells) {
            std::vector<double> y;
            y.reserve(profiles.size());
            for (const auto& p : profiles) y.push_back(static_cast<double>(p.smell_count(smell)));
            if (is_constant(y)) {
                result.skipped.push_back(rule_label(rule) + " vs " + ingest::to_string(smell) +
                                         ": constant smell vector");
                continue;
            }
            pairs.push_back({rule, smell, x, std::move(y)});
        }
    }

    std::vector<CorrelationCell> cells(pairs.size());
    util::parallel_for(pairs.size(), jobs, [&](size_t i) {
        const auto& p = pairs[i];
        stats::TestOutcome t = stats::spearman_rho(p.x, p.y);
        cells[i] = {p.rule.first, p.rule.second, p.smell, t.statistic, t, {},
                    static_cast<int>(profiles.size())};
    });

    if (!cells.empty()) {
        std::vector<double> raw;
        raw.reserve(cells.size());
        for (const auto& c : cells) raw.push_back(c.test.p_value);
        auto adjusted = stats::bh_adjust(raw, alpha);
        for (size_t i = 0; i < cells.size(); ++i) cells[i].outcome = adjusted[i];
    }
    result.cells = std::move(cells);
    return result;
}

TopQuartileResult top_quartile_warnings(const std::vector<CorrelationCell>& cells) {
    std::map<std::pair<SourceTool, SmellKind>, std::vector<const CorrelationCell*>> groups;
    for (const auto& c : cells) groups[{c.tool, c.smell}].push_back(&c);

    TopQuartileResult result;
    for (const auto& [key, members] : groups) {
        std::string label = std::string(ingest::to_string(key.first)) + " vs " +
                            ingest::to_string(key.second);
        if (members.size() < 4) {
            result.skipped.push_back(label + ": only " + std::to_string(members.size()) +
                                     " cells, need 4");
            continue;
        }
        std::vector<double> rhos;
        rhos.reserve(members.size());
        for (const auto* c : members) rhos.push_back(c->rho);
        double q3 = stats::quartiles(rhos).q3;

        TopQuartileGroup group{key.first, key.second, q3, {}};
        std::vector<const CorrelationCell*> selected;
        for (const auto* c : members)
            if (c->rho >= q3) selected.push_back(c);
        std::sort(selected.begin(), selected.end(), [](const auto* a, const auto* b) {
            if (a->rho != b->rho) return a->rho > b->rho;
            return a->rule_id < b->rule_id;
        });
        for (const auto* c : selected) group.rules.push_back(c->rule_id);
        result.groups.push_back(std::move(group));
    }
    return result;
}

long long CooccurrenceTable::at(const RuleKey& rule, SmellCombo combo) const {
    auto it = counts.find(rule);
    return it == counts.end() ? 0 : it->second[combo.mask];
}

long long CooccurrenceTable::rule_total(const RuleKey& rule) const {
    auto it = counts.find(rule);
    if (it == counts.end()) return 0;
    long long total = 0;
    for (long long c : it->second) total += c;
    return total;
}

long long CooccurrenceTable::tool_combo_total(SourceTool tool, SmellCombo combo) const {
    long long total = 0;
    for (const auto& [rule, per_combo] : counts)
        if (rule.first == tool) total += per_combo[combo.mask];
    return total;
}

CooccurrenceTable cooccurrence_table(const std::vector<model::AttributedWarning>& warnings) {
    CooccurrenceTable table;
    for (const auto& aw : warnings) {
        auto& per_combo = table.counts[{aw.record.tool, aw.record.rule_id}];
        per_combo[aw.combo.mask] += 1;
    }
    return table;
}

PScoreResult p_scores(const CooccurrenceTable& table) {
    PScoreResult result;
    std::set<SourceTool> tools;
    for (const auto& [rule, per_combo] : table.counts) tools.insert(rule.first);

    for (SourceTool tool : tools) {
        for (SmellCombo combo : model::all_combos()) {
            long long denom = table.tool_combo_total(tool, combo);
            if (denom == 0) {
                result.skipped.push_back(std::string(ingest::to_string(tool)) + " in " +
                                         model::to_string(combo) + ": no instances");
                continue;
            }
            for (const auto& [rule, per_combo] : table.counts) {
                if (rule.first != tool) continue;
                long long num = per_combo[combo.mask];
                if (num == 0) continue;
                result.scores.push_back({tool, rule.second, combo,
                                         static_cast<double>(num) / static_cast<double>(denom)});
            }
        }
    }
    return result;
}

namespace {

// Profiles with a given smell present, ordered by total warning load
// (descending, package id as tie-break) for rank matching.
std::vector<const PackageProfile*> group_for(const std::vector<PackageProfile>& profiles,
                                             SmellKind smell) {
    std::vector<const PackageProfile*> group;
    for (const auto& p : profiles)
        if (p.smell_present(smell)) group.push_back(&p);
    std::sort(group.begin(), group.end(), [](const auto* a, const auto* b) {
        int ta = a->total_warnings(), tb = b->total_warnings();
        if (ta != tb) return ta > tb;
        return a->package < b->package;
    });
    return group;
}

}  // namespace

std::vector<H2Result> h2_battery(const CooccurrenceTable& table,
                                 const std::vector<PackageProfile>& profiles, double alpha) {
    constexpr int kMinGroup = 5;
    std::array<std::vector<const PackageProfile*>, 3> groups;
    for (SmellKind s : ingest::kAllSmells) groups[static_cast<int>(s)] = group_for(profiles, s);

    std::vector<H2Result> results;
    for (const auto& [rule, per_combo] : table.counts) {
        for (size_t a = 0; a < 3; ++a) {
            for (size_t b = a + 1; b < 3; ++b) {
                SmellKind sa = ingest::kAllSmells[a];
                SmellKind sb = ingest::kAllSmells[b];
                H2Result row{rule.first, rule.second, sa, sb, 0, false, {}, {}, ""};
                const auto& ga = groups[a];
                const auto& gb = groups[b];
                size_t len = std::min(ga.size(), gb.size());
                if (static_cast<int>(len) < kMinGroup) {
                    row.note = "insufficient data: groups of " + std::to_string(ga.size()) +
                               " and " + std::to_string(gb.size()) + " packages";
                    results.push_back(std::move(row));
                    continue;
                }
                std::vector<double> x, y;
                x.reserve(len);
                y.reserve(len);
                auto count_of = [&](const PackageProfile* p) {
                    auto it = p->warning_counts.find(rule);
                    return it == p->warning_counts.end() ? 0.0 : static_cast<double>(it->second);
                };
                for (size_t i = 0; i < len; ++i) {
                    x.push_back(count_of(ga[i]));
                    y.push_back(count_of(gb[i]));
                }
                row.n_pairs = static_cast<int>(len);
                try {
                    row.test = stats::wilcoxon_signed_rank(x, y);
                    row.testable = true;
                } catch (const AllZeroDifferences&) {
                    row.note = "not testable: all paired differences are zero";
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

std::vector<H3Result> h3_battery(const CooccurrenceTable& table, double alpha) {
    constexpr int kMinRules = 5;
    std::set<SourceTool> tool_set;
    for (const auto& [rule, per_combo] : table.counts) tool_set.insert(rule.first);
    std::vector<SourceTool> tools(tool_set.begin(), tool_set.end());

    // Per tool and combo: every rule's share of its own instances landing in
    // that combo, sorted descending for rank matching.
    auto shares_for = [&](SourceTool tool, SmellCombo combo) {
        std::vector<double> shares;
        for (const auto& [rule, per_combo] : table.counts) {
            if (rule.first != tool) continue;
            long long total = table.rule_total(rule);
            if (total == 0) continue;
            shares.push_back(static_cast<double>(per_combo[combo.mask]) /
                             static_cast<double>(total));
        }
        std::sort(shares.begin(), shares.end(), std::greater<>());
        return shares;
    };

    std::vector<H3Result> results;
    for (size_t a = 0; a < tools.size(); ++a) {
        for (size_t b = a + 1; b < tools.size(); ++b) {
            for (SmellCombo combo : model::all_combos()) {
                H3Result row{tools[a], tools[b], combo, 0, false, {}, {}, ""};
                std::vector<double> x = shares_for(tools[a], combo);
                std::vector<double> y = shares_for(tools[b], combo);
                size_t len = std::min(x.size(), y.size());
                if (static_cast<int>(len) < kMinRules) {
                    row.note = "insufficient data: rule sets of " + std::to_string(x.size()) +
                               " and " + std::to_string(y.size());
                    results.push_back(std::move(row));
                    continue;
                }
                x.resize(len);
                y.resize(len);
                row.n_pairs = static_cast<int>(len);
                try {
                    row.test = stats::wilcoxon_signed_rank(x, y);
                    row.testable = true;
                } catch (const AllZeroDifferences&) {
                    row.note = "not testable: all paired differences are zero";
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

}  // namespace satsmell::analysis
