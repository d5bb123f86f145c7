#include "satsmell/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <json.hpp>

#include "satsmell/errors.hpp"
#include "satsmell/npstats.hpp"

namespace satsmell::synth {

namespace {

// Fixed stream discipline: one uniform per call, normals via the inverse CDF,
// never through std::*_distribution (those are implementation-defined).
struct Rng {
    std::mt19937_64 engine;

    explicit Rng(uint64_t seed) : engine(seed) {}

    double uniform() {
        return static_cast<double>(engine() >> 11) * 0x1.0p-53;
    }

    double normal() {
        double u = uniform();
        if (u <= 0.0) u = 0x1.0p-53;
        return stats::normal_quantile(u);
    }
};

long long quantize_count(double mean, double sigma, double z) {
    // Monotone in z; floor(exp(.)) keeps counts nonnegative with enough
    // distinct values for rank statistics.
    return static_cast<long long>(std::floor(std::exp(std::log(mean) + sigma * z)));
}

std::string native_raw_for(SourceTool tool, int level) {
    switch (tool) {
        case SourceTool::Checkstyle: {
            static const char* names[] = {"ignore", "info", "warning", "error"};
            return names[level - 1];
        }
        case SourceTool::PMD:
            return std::to_string(6 - level);
        case SourceTool::FindBugs: {
            static const int ranks[] = {0, 17, 12, 7, 3};  // level 2..5
            return std::to_string(ranks[level - 1]);
        }
        case SourceTool::SonarQube: {
            static const char* names[] = {"Info", "Minor", "Major", "Critical", "Blocker"};
            return names[level - 1];
        }
    }
    return "";
}

int level_range_min(SourceTool tool) { return tool == SourceTool::FindBugs ? 2 : 1; }
int level_range_max(SourceTool tool) { return tool == SourceTool::Checkstyle ? 4 : 5; }

std::string package_name(const PlantSpec& spec, int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), ".p%04d", index);
    return spec.package_prefix + buf;
}

}  // namespace

void PlantSpec::validate() const {
    if (n_packages < 1) throw InvalidSpec("plant spec: n_packages must be positive");
    double mix_total = 0.0;
    for (double w : combo_mix) {
        if (w < 0.0) throw InvalidSpec("plant spec: combo_mix weights must be nonnegative");
        mix_total += w;
    }
    if (std::fabs(mix_total - 1.0) > 1e-9)
        throw InvalidSpec("plant spec: combo_mix must sum to 1, got " + std::to_string(mix_total));

    std::set<std::pair<SourceTool, std::string>> seen;
    std::set<SmellKind> exact_targets;
    for (const auto& rule : rules) {
        if (rule.rule_id.empty()) throw InvalidSpec("plant spec: rule with empty id");
        if (!seen.insert({rule.tool, rule.rule_id}).second)
            throw InvalidSpec("plant spec: duplicate rule " + rule.rule_id);
        if (rule.level < level_range_min(rule.tool) || rule.level > level_range_max(rule.tool))
            throw InvalidSpec("plant spec: rule " + rule.rule_id + " level " +
                              std::to_string(rule.level) + " not representable for " +
                              ingest::to_string(rule.tool));
        if (rule.mean <= 0.0 || rule.sigma <= 0.0)
            throw InvalidSpec("plant spec: rule " + rule.rule_id + " needs positive mean/sigma");
        if (std::fabs(rule.target_rho) > 1.0)
            throw InvalidSpec("plant spec: rule " + rule.rule_id + " target_rho outside [-1,1]");
        if (rule.target_rho != 0.0 && !rule.target_smell)
            throw InvalidSpec("plant spec: rule " + rule.rule_id + " has target_rho but no smell");
        for (double w : rule.combo_weights)
            if (w < 0.0) throw InvalidSpec("plant spec: negative combo weight");
        if (rule.target_smell && std::fabs(rule.target_rho) == 1.0 &&
            !exact_targets.insert(*rule.target_smell).second)
            throw InvalidSpec("plant spec: two rules plant |rho|=1 on the same smell");
    }
    for (double m : smell_mean)
        if (m <= 0.0) throw InvalidSpec("plant spec: smell_mean must be positive");
    for (double s : smell_sigma)
        if (s <= 0.0) throw InvalidSpec("plant spec: smell_sigma must be positive");
}

Corpus generate(const PlantSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    const int n = spec.n_packages;
    const size_t n_rules = spec.rules.size();

    // Draw everything in a fixed order first: per package, one combo uniform,
    // three smell latents, then one latent per rule.
    std::vector<uint8_t> combo_mask(n);
    std::vector<std::array<double, 3>> smell_z(n);
    std::vector<std::vector<double>> rule_z(n, std::vector<double>(n_rules));
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform();
        double acc = 0.0;
        uint8_t mask = model::kComboCount - 1;
        for (uint8_t m = 0; m < model::kComboCount; ++m) {
            acc += spec.combo_mix[m];
            if (u < acc) {
                mask = m;
                break;
            }
        }
        combo_mask[i] = mask;
        for (int k = 0; k < 3; ++k) smell_z[i][k] = rng.normal();
        for (size_t r = 0; r < n_rules; ++r) rule_z[i][r] = rng.normal();
    }

    // Rule counts, with the Gaussian-copula coupling against the target
    // smell's latent.
    std::vector<std::vector<long long>> rule_counts(n_rules, std::vector<long long>(n));
    for (size_t r = 0; r < n_rules; ++r) {
        const RulePlant& rule = spec.rules[r];
        double pearson_r = 0.0;
        bool coupled = rule.target_smell && std::fabs(rule.target_rho) != 1.0 &&
                       rule.target_rho != 0.0;
        if (coupled) pearson_r = 2.0 * std::sin(M_PI * rule.target_rho / 6.0);
        for (int i = 0; i < n; ++i) {
            double w;
            if (coupled) {
                double zs = smell_z[i][static_cast<int>(*rule.target_smell)];
                w = pearson_r * zs + std::sqrt(1.0 - pearson_r * pearson_r) * rule_z[i][r];
            } else {
                w = rule_z[i][r];
            }
            long long count = quantize_count(rule.mean, rule.sigma, w);
            double weight = rule.combo_weights[combo_mask[i]];
            rule_counts[r][i] = static_cast<long long>(std::floor(static_cast<double>(count) * weight));
        }
    }

    // Smell counts: combo-mix presence with coupled magnitudes by default;
    // |rho| = 1 plants override the kind deterministically (y = 2x keeps the
    // tie structure, so the measured rho is exactly +-1).
    std::array<std::vector<long long>, 3> smell_counts;
    for (int k = 0; k < 3; ++k) smell_counts[k].assign(n, 0);
    std::array<const RulePlant*, 3> exact_rule{nullptr, nullptr, nullptr};
    std::array<size_t, 3> exact_rule_idx{0, 0, 0};
    for (size_t r = 0; r < n_rules; ++r) {
        const RulePlant& rule = spec.rules[r];
        if (rule.target_smell && std::fabs(rule.target_rho) == 1.0) {
            exact_rule[static_cast<int>(*rule.target_smell)] = &rule;
            exact_rule_idx[static_cast<int>(*rule.target_smell)] = r;
        }
    }
    for (int k = 0; k < 3; ++k) {
        if (exact_rule[k]) {
            const auto& x = rule_counts[exact_rule_idx[k]];
            if (exact_rule[k]->target_rho > 0) {
                for (int i = 0; i < n; ++i) smell_counts[k][i] = 2 * x[i];
            } else {
                long long max_x = *std::max_element(x.begin(), x.end());
                for (int i = 0; i < n; ++i) smell_counts[k][i] = 2 * (max_x - x[i]);
            }
            continue;
        }
        for (int i = 0; i < n; ++i) {
            if (model::SmellCombo{combo_mask[i]}.contains(static_cast<SmellKind>(k)))
                smell_counts[k][i] =
                    1 + quantize_count(spec.smell_mean[k], spec.smell_sigma[k], smell_z[i][k]);
        }
    }

    Corpus corpus;
    for (int i = 0; i < n; ++i) {
        std::string pkg = package_name(spec, i);
        std::string pkg_path = pkg;
        std::replace(pkg_path.begin(), pkg_path.end(), '.', '/');
        for (size_t r = 0; r < n_rules; ++r) {
            const RulePlant& rule = spec.rules[r];
            for (long long j = 0; j < rule_counts[r][i]; ++j) {
                int class_idx = static_cast<int>(j % 3);
                WarningRecord rec;
                rec.tool = rule.tool;
                rec.rule_id = rule.rule_id;
                rec.category = "synthetic";
                rec.native = {rule.tool, native_raw_for(rule.tool, rule.level)};
                rec.normalized = {rule.level};
                rec.file_path = "src/" + pkg_path + "/C" + std::to_string(class_idx) + ".java";
                rec.line = static_cast<int>(10 + j);
                rec.fq_class = pkg + ".C" + std::to_string(class_idx);
                if (rule.tool == SourceTool::SonarQube) rec.effort = "5min";
                corpus.warnings.push_back(std::move(rec));
            }
        }
        for (int k = 0; k < 3; ++k) {
            for (long long j = 0; j < smell_counts[k][i]; ++j) {
                SmellInstance smell;
                smell.kind = static_cast<SmellKind>(k);
                smell.granularity = ingest::Granularity::Package;
                smell.affected = {pkg};
                smell.severity = ingest::default_smell_severity(smell.kind);
                corpus.smells.push_back(std::move(smell));
            }
        }
    }
    return corpus;
}

analysis::CooccurrenceTable oracle_counts(const std::vector<WarningRecord>& warnings,
                                          const std::vector<SmellInstance>& smells,
                                          const model::DerivationConfig& config) {
    analysis::CooccurrenceTable table;
    for (const auto& rec : warnings) {
        std::string pkg = rec.fq_class ? model::derive_package(*rec.fq_class, config)
                                       : model::derive_package(rec.file_path, config);
        model::SmellCombo combo;
        for (const auto& smell : smells) {
            for (const auto& entity : smell.affected) {
                std::string smell_pkg = smell.granularity == ingest::Granularity::Package
                                            ? entity
                                            : model::derive_package(entity, config);
                if (smell_pkg == pkg) {
                    combo.add(smell.kind);
                    break;
                }
            }
        }
        table.counts[{rec.tool, rec.rule_id}][combo.mask] += 1;
    }
    return table;
}

PlantSpec PlantSpec::from_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidSpec(std::string("plant spec: invalid JSON: ") + e.what());
    }
    PlantSpec spec;
    try {
        spec.seed = doc.value("seed", spec.seed);
        spec.n_packages = doc.value("n_packages", spec.n_packages);
        spec.package_prefix = doc.value("package_prefix", spec.package_prefix);
        if (doc.contains("combo_mix")) {
            spec.combo_mix.fill(0.0);
            for (auto& [label, weight] : doc["combo_mix"].items())
                spec.combo_mix[model::combo_from_string(label).mask] = weight.get<double>();
        }
        if (doc.contains("smell_mean"))
            for (auto& [kind, v] : doc["smell_mean"].items())
                spec.smell_mean[static_cast<int>(ingest::smell_from_string(kind))] = v.get<double>();
        if (doc.contains("smell_sigma"))
            for (auto& [kind, v] : doc["smell_sigma"].items())
                spec.smell_sigma[static_cast<int>(ingest::smell_from_string(kind))] = v.get<double>();
        for (const auto& r : doc.value("rules", nlohmann::json::array())) {
            RulePlant rule;
            rule.tool = ingest::tool_from_string(r.at("tool").get<std::string>());
            rule.rule_id = r.at("rule").get<std::string>();
            rule.level = r.value("level", rule.level);
            rule.mean = r.value("mean", rule.mean);
            rule.sigma = r.value("sigma", rule.sigma);
            if (r.contains("target_smell")) {
                rule.target_smell = ingest::smell_from_string(r["target_smell"].get<std::string>());
                rule.target_rho = r.value("target_rho", 0.0);
            }
            if (r.contains("combo_weights")) {
                for (auto& [label, weight] : r["combo_weights"].items())
                    rule.combo_weights[model::combo_from_string(label).mask] = weight.get<double>();
            }
            spec.rules.push_back(std::move(rule));
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidSpec(std::string("plant spec: ") + e.what());
    }
    spec.validate();
    return spec;
}

std::string PlantSpec::to_json() const {
    nlohmann::json doc;
    doc["seed"] = seed;
    doc["n_packages"] = n_packages;
    doc["package_prefix"] = package_prefix;
    nlohmann::json mix;
    for (uint8_t m = 0; m < model::kComboCount; ++m)
        if (combo_mix[m] != 0.0) mix[model::to_string(model::SmellCombo{m})] = combo_mix[m];
    doc["combo_mix"] = mix;
    for (int k = 0; k < 3; ++k) {
        doc["smell_mean"][ingest::to_string(static_cast<SmellKind>(k))] = smell_mean[k];
        doc["smell_sigma"][ingest::to_string(static_cast<SmellKind>(k))] = smell_sigma[k];
    }
    doc["rules"] = nlohmann::json::array();
    for (const auto& rule : rules) {
        nlohmann::json r;
        r["tool"] = ingest::to_string(rule.tool);
        r["rule"] = rule.rule_id;
        r["level"] = rule.level;
        r["mean"] = rule.mean;
        r["sigma"] = rule.sigma;
        if (rule.target_smell) {
            r["target_smell"] = ingest::to_string(*rule.target_smell);
            r["target_rho"] = rule.target_rho;
        }
        nlohmann::json weights;
        for (uint8_t m = 0; m < model::kComboCount; ++m)
            if (rule.combo_weights[m] != 1.0)
                weights[model::to_string(model::SmellCombo{m})] = rule.combo_weights[m];
        if (!weights.empty()) r["combo_weights"] = weights;
        doc["rules"].push_back(std::move(r));
    }
    return doc.dump(2);
}

namespace {

std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

namespace {

// Records grouped by file path, first-seen order preserved.
std::vector<std::pair<std::string, std::vector<const WarningRecord*>>> group_by_file(
    const std::vector<WarningRecord>& warnings, SourceTool tool) {
    std::vector<std::pair<std::string, std::vector<const WarningRecord*>>> groups;
    std::map<std::string, size_t> index;
    for (const auto& rec : warnings) {
        if (rec.tool != tool) continue;
        auto [it, inserted] = index.try_emplace(rec.file_path, groups.size());
        if (inserted) groups.push_back({rec.file_path, {}});
        groups[it->second].second.push_back(&rec);
    }
    return groups;
}

}  // namespace

std::string to_checkstyle_xml(const std::vector<WarningRecord>& warnings) {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<checkstyle version=\"8.45\">\n";
    for (const auto& [file, records] : group_by_file(warnings, SourceTool::Checkstyle)) {
        out += "<file name=\"" + xml_escape(file) + "\">\n";
        for (const WarningRecord* rec : records) {
            std::string category = rec->category.empty() ? "checks" : rec->category;
            out += "  <error line=\"" + std::to_string(rec->line.value_or(1)) + "\" severity=\"" +
                   xml_escape(rec->native.raw) +
                   "\" message=\"synthetic\" source=\"com.puppycrawl.tools.checkstyle." +
                   xml_escape(category) + "." + xml_escape(rec->rule_id) + "\"/>\n";
        }
        out += "</file>\n";
    }
    out += "</checkstyle>\n";
    return out;
}

std::string to_pmd_xml(const std::vector<WarningRecord>& warnings) {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<pmd version=\"6.55.0\">\n";
    for (const auto& [file, records] : group_by_file(warnings, SourceTool::PMD)) {
        out += "<file name=\"" + xml_escape(file) + "\">\n";
        for (const WarningRecord* rec : records) {
            std::string pkg, cls;
            if (rec->fq_class) {
                auto dot = rec->fq_class->rfind('.');
                pkg = rec->fq_class->substr(0, dot);
                cls = rec->fq_class->substr(dot + 1);
            }
            out += "  <violation beginline=\"" + std::to_string(rec->line.value_or(1)) +
                   "\" rule=\"" + xml_escape(rec->rule_id) + "\" ruleset=\"" +
                   xml_escape(rec->category.empty() ? "synthetic" : rec->category) +
                   "\" priority=\"" + xml_escape(rec->native.raw) + "\" package=\"" +
                   xml_escape(pkg) + "\" class=\"" + xml_escape(cls) +
                   "\">synthetic</violation>\n";
        }
        out += "</file>\n";
    }
    out += "</pmd>\n";
    return out;
}

std::string to_findbugs_xml(const std::vector<WarningRecord>& warnings) {
    std::string out =
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<BugCollection version=\"3.0.1\">\n";
    for (const auto& rec : warnings) {
        if (rec.tool != SourceTool::FindBugs) continue;
        out += "  <BugInstance type=\"" + xml_escape(rec.rule_id) + "\" priority=\"2\" rank=\"" +
               xml_escape(rec.native.raw) + "\" category=\"" +
               xml_escape(rec.category.empty() ? "STYLE" : rec.category) + "\">\n";
        if (rec.fq_class)
            out += "    <Class classname=\"" + xml_escape(*rec.fq_class) + "\"/>\n";
        out += "    <SourceLine classname=\"" + xml_escape(rec.fq_class.value_or("")) +
               "\" start=\"" + std::to_string(rec.line.value_or(1)) + "\" sourcepath=\"" +
               xml_escape(rec.file_path) + "\"/>\n";
        out += "  </BugInstance>\n";
    }
    out += "</BugCollection>\n";
    return out;
}

std::string to_sonarqube_json(const std::vector<WarningRecord>& warnings) {
    nlohmann::json issues = nlohmann::json::array();
    for (const auto& rec : warnings) {
        if (rec.tool != SourceTool::SonarQube) continue;
        nlohmann::json issue;
        issue["rule"] = rec.rule_id;
        issue["severity"] = rec.native.raw;
        issue["component"] = "synth:" + rec.file_path;
        if (rec.line) issue["line"] = *rec.line;
        if (rec.effort) issue["effort"] = *rec.effort;
        issue["type"] = rec.category.empty() ? "CODE_SMELL" : rec.category;
        issues.push_back(std::move(issue));
    }
    nlohmann::json doc;
    doc["issues"] = std::move(issues);
    return doc.dump(2) + "\n";
}

std::string to_arcan_csv(const std::vector<SmellInstance>& smells, const ingest::ArcanFormat& format) {
    std::string d(1, format.delimiter);
    std::string out = "smell_type" + d + "granularity" + d + "affected_entities\n";
    for (const auto& smell : smells) {
        std::string entities;
        for (size_t i = 0; i < smell.affected.size(); ++i) {
            if (i) entities += format.entity_delimiter;
            entities += smell.affected[i];
        }
        out += std::string(ingest::to_string(smell.kind)) + d +
               ingest::to_string(smell.granularity) + d + entities + "\n";
    }
    return out;
}

}  // namespace satsmell::synth
