#include "satsmell/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "satsmell/errors.hpp"
#include "satsmell/util.hpp"

namespace satsmell::io {

using nlohmann::json;
using util::split;
using util::trim;

namespace {

std::string fmt(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

json parse_json_line(std::string_view line, const char* what) {
    try {
        return json::parse(line);
    } catch (const json::exception& e) {
        throw MalformedReport(std::string(what) + ": invalid JSON line: " + e.what());
    }
}

}  // namespace

std::string warning_to_json(const WarningRecord& rec) {
    json j;
    j["tool"] = ingest::to_string(rec.tool);
    j["rule"] = rec.rule_id;
    j["category"] = rec.category;
    j["native"] = rec.native.raw;
    j["level"] = rec.normalized.level;
    j["file"] = rec.file_path;
    if (rec.line) j["line"] = *rec.line;
    if (rec.fq_class) j["class"] = *rec.fq_class;
    if (rec.effort) j["effort"] = *rec.effort;
    return j.dump();
}

WarningRecord warning_from_json(std::string_view line) {
    json j = parse_json_line(line, "warning record");
    WarningRecord rec;
    try {
        rec.tool = ingest::tool_from_string(j.at("tool").get<std::string>());
        rec.rule_id = j.at("rule").get<std::string>();
        rec.category = j.value("category", std::string{});
        rec.native = {rec.tool, j.at("native").get<std::string>()};
        rec.normalized = {j.at("level").get<int>()};
        rec.file_path = j.value("file", std::string{});
        if (j.contains("line")) rec.line = j["line"].get<int>();
        if (j.contains("class")) rec.fq_class = j["class"].get<std::string>();
        if (j.contains("effort")) rec.effort = j["effort"].get<std::string>();
    } catch (const json::exception& e) {
        throw MalformedReport(std::string("warning record: ") + e.what());
    }
    return rec;
}

std::string smell_to_json(const SmellInstance& smell) {
    json j;
    j["kind"] = ingest::to_string(smell.kind);
    j["granularity"] = ingest::to_string(smell.granularity);
    j["affected"] = smell.affected;
    j["severity"] = smell.severity;
    return j.dump();
}

SmellInstance smell_from_json(std::string_view line) {
    json j = parse_json_line(line, "smell record");
    SmellInstance smell;
    try {
        smell.kind = ingest::smell_from_string(j.at("kind").get<std::string>());
        std::string gran = j.at("granularity").get<std::string>();
        smell.granularity =
            gran == "class" ? ingest::Granularity::Class : ingest::Granularity::Package;
        smell.affected = j.at("affected").get<std::vector<std::string>>();
        smell.severity = j.value("severity", ingest::default_smell_severity(smell.kind));
    } catch (const json::exception& e) {
        throw MalformedReport(std::string("smell record: ") + e.what());
    }
    return smell;
}

namespace {

template <typename T, typename ToJson>
std::string to_ndjson(const std::vector<T>& items, ToJson&& to_json_fn) {
    std::string out;
    for (const auto& item : items) {
        out += to_json_fn(item);
        out += '\n';
    }
    return out;
}

template <typename T, typename FromJson>
std::vector<T> from_ndjson(std::string_view text, FromJson&& from_json_fn) {
    std::vector<T> out;
    for (const auto& line : split(text, '\n')) {
        std::string t = trim(line);
        if (t.empty()) continue;
        out.push_back(from_json_fn(t));
    }
    return out;
}

}  // namespace

std::string warnings_to_ndjson(const std::vector<WarningRecord>& records) {
    return to_ndjson(records, warning_to_json);
}

std::vector<WarningRecord> warnings_from_ndjson(std::string_view text) {
    return from_ndjson<WarningRecord>(text, [](const std::string& l) { return warning_from_json(l); });
}

std::string smells_to_ndjson(const std::vector<SmellInstance>& smells) {
    return to_ndjson(smells, smell_to_json);
}

std::vector<SmellInstance> smells_from_ndjson(std::string_view text) {
    return from_ndjson<SmellInstance>(text, [](const std::string& l) { return smell_from_json(l); });
}

namespace {

std::string sparse_pairs(const PackageProfile& p) {
    std::string out;
    for (const auto& [key, count] : p.warning_counts) {
        if (!out.empty()) out += ';';
        out += std::string(ingest::to_string(key.first)) + "/" + key.second + "=" +
               std::to_string(count);
    }
    return out;
}

std::string smell_pairs(const PackageProfile& p) {
    std::string out;
    for (ingest::SmellKind kind : ingest::kAllSmells) {
        if (p.smell_count(kind) == 0) continue;
        if (!out.empty()) out += ';';
        out += std::string(ingest::to_string(kind)) + "=" + std::to_string(p.smell_count(kind));
    }
    return out;
}

}  // namespace

std::string profiles_to_csv(const std::vector<PackageProfile>& profiles) {
    std::string out = "package,combo,smells,warnings\n";
    for (const auto& p : profiles) {
        out += p.package + "," + model::to_string(p.combo) + "," + smell_pairs(p) + "," +
               sparse_pairs(p) + "\n";
    }
    return out;
}

std::vector<PackageProfile> profiles_from_csv(std::string_view text) {
    std::vector<PackageProfile> out;
    bool header_seen = false;
    for (const auto& line : split(text, '\n')) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            if (t.rfind("package,", 0) == 0) continue;
        }
        auto fields = split(t, ',');
        if (fields.size() != 4)
            throw MalformedReport("profile row needs 4 fields, got " +
                                  std::to_string(fields.size()));
        PackageProfile p;
        p.package = fields[0];
        for (const auto& pair : split(fields[2], ';')) {
            if (trim(pair).empty()) continue;
            auto eq = pair.find('=');
            if (eq == std::string::npos) throw MalformedReport("bad smell pair: " + pair);
            p.smell_counts[static_cast<int>(ingest::smell_from_string(trim(pair.substr(0, eq))))] =
                std::stoi(pair.substr(eq + 1));
        }
        for (const auto& pair : split(fields[3], ';')) {
            if (trim(pair).empty()) continue;
            auto eq = pair.find('=');
            auto slash = pair.find('/');
            if (eq == std::string::npos || slash == std::string::npos || slash > eq)
                throw MalformedReport("bad warning pair: " + pair);
            auto tool = ingest::tool_from_string(trim(pair.substr(0, slash)));
            std::string rule = pair.substr(slash + 1, eq - slash - 1);
            p.warning_counts[{tool, rule}] = std::stoi(pair.substr(eq + 1));
        }
        p.combo = model::combo_of(p);
        if (model::to_string(p.combo) != fields[1] && !(p.combo.is_nco() && fields[1] == "NCO"))
            throw MalformedReport("profile row combo '" + fields[1] +
                                  "' disagrees with smell counts");
        out.push_back(std::move(p));
    }
    return out;
}

std::string profiles_to_ndjson(const std::vector<PackageProfile>& profiles) {
    std::string out;
    for (const auto& p : profiles) {
        json j;
        j["package"] = p.package;
        j["combo"] = model::to_string(p.combo);
        json smells = json::object();
        for (ingest::SmellKind kind : ingest::kAllSmells)
            if (p.smell_count(kind) > 0) smells[ingest::to_string(kind)] = p.smell_count(kind);
        j["smells"] = smells;
        json warnings = json::object();
        for (const auto& [key, count] : p.warning_counts)
            warnings[std::string(ingest::to_string(key.first)) + "/" + key.second] = count;
        j["warnings"] = warnings;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<PackageProfile> profiles_from_ndjson(std::string_view text) {
    return from_ndjson<PackageProfile>(text, [](const std::string& line) {
        json j = parse_json_line(line, "profile record");
        PackageProfile p;
        p.package = j.at("package").get<std::string>();
        for (auto& [kind, count] : j.at("smells").items())
            p.smell_counts[static_cast<int>(ingest::smell_from_string(kind))] = count.get<int>();
        for (auto& [key, count] : j.at("warnings").items()) {
            auto slash = key.find('/');
            if (slash == std::string::npos)
                throw MalformedReport("profile record: bad warning key " + key);
            p.warning_counts[{ingest::tool_from_string(key.substr(0, slash)),
                              key.substr(slash + 1)}] = count.get<int>();
        }
        p.combo = model::combo_of(p);
        return p;
    });
}

std::string metadata_header(const Metadata& metadata) {
    std::string out;
    for (const auto& [key, value] : metadata) out += "# " + key + "=" + value + "\n";
    return out;
}

std::string correlation_to_csv(const std::vector<analysis::CorrelationCell>& cells,
                               const stats::RhoBands& bands, const Metadata& metadata) {
    std::string out = metadata_header(metadata);
    out += "tool,rule,smell,n,rho,band,p,q,rank,rejected\n";
    for (const auto& c : cells) {
        out += std::string(ingest::to_string(c.tool)) + "," + c.rule_id + "," +
               ingest::to_string(c.smell) + "," + std::to_string(c.n_packages) + "," +
               fmt(c.rho) + "," + stats::to_string(stats::interpret_rho(c.rho, bands)) + "," +
               fmt(c.test.p_value) + "," + fmt(c.outcome.q_value) + "," +
               std::to_string(c.outcome.rank_index) + "," + (c.outcome.rejected ? "1" : "0") +
               "\n";
    }
    return out;
}

std::vector<CorrelationRow> correlation_from_csv(std::string_view text) {
    std::vector<CorrelationRow> out;
    for (const auto& line : split(text, '\n')) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t.rfind("tool,", 0) == 0) continue;
        auto fields = split(t, ',');
        if (fields.size() != 10)
            throw MalformedReport("correlation row needs 10 fields: " + t);
        CorrelationRow row;
        row.tool = ingest::tool_from_string(fields[0]);
        row.rule_id = fields[1];
        row.smell = ingest::smell_from_string(fields[2]);
        row.n_packages = std::stoi(fields[3]);
        row.rho = std::stod(fields[4]);
        row.band = fields[5];
        row.p = std::stod(fields[6]);
        row.q = std::stod(fields[7]);
        row.rank_index = std::stoi(fields[8]);
        row.rejected = fields[9] == "1";
        out.push_back(std::move(row));
    }
    return out;
}

std::string cooccurrence_to_csv(const analysis::CooccurrenceTable& table,
                                const Metadata& metadata) {
    std::string out = metadata_header(metadata);
    out += "tool,rule,combo,count\n";
    for (const auto& [rule, per_combo] : table.counts) {
        for (uint8_t mask = 0; mask < model::kComboCount; ++mask) {
            if (per_combo[mask] == 0) continue;
            out += std::string(ingest::to_string(rule.first)) + "," + rule.second + "," +
                   model::to_string(model::SmellCombo{mask}) + "," +
                   std::to_string(per_combo[mask]) + "\n";
        }
    }
    return out;
}

analysis::CooccurrenceTable cooccurrence_from_csv(std::string_view text) {
    analysis::CooccurrenceTable table;
    for (const auto& line : split(text, '\n')) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t.rfind("tool,", 0) == 0) continue;
        auto fields = split(t, ',');
        if (fields.size() != 4)
            throw MalformedReport("cooccurrence row needs 4 fields: " + t);
        auto tool = ingest::tool_from_string(fields[0]);
        auto combo = model::combo_from_string(fields[2]);
        table.counts[{tool, fields[1]}][combo.mask] += std::stoll(fields[3]);
    }
    return table;
}

std::string pscores_to_csv(const std::vector<analysis::PScore>& scores, const Metadata& metadata) {
    std::string out = metadata_header(metadata);
    out += "tool,combo,rule,p\n";
    for (const auto& s : scores) {
        out += std::string(ingest::to_string(s.tool)) + "," + model::to_string(s.combo) + "," +
               s.rule_id + "," + fmt(s.p) + "\n";
    }
    return out;
}

std::vector<analysis::PScore> pscores_from_csv(std::string_view text) {
    std::vector<analysis::PScore> out;
    for (const auto& line : split(text, '\n')) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t.rfind("tool,", 0) == 0) continue;
        auto fields = split(t, ',');
        if (fields.size() != 4)
            throw MalformedReport("p-score row needs 4 fields: " + t);
        out.push_back({ingest::tool_from_string(fields[0]), fields[2],
                       model::combo_from_string(fields[1]), std::stod(fields[3])});
    }
    return out;
}

std::string top_quartile_to_csv(const analysis::TopQuartileResult& result,
                                const Metadata& metadata) {
    std::string out = metadata_header(metadata);
    out += "tool,smell,q3,rules\n";
    for (const auto& g : result.groups) {
        out += std::string(ingest::to_string(g.tool)) + "," + ingest::to_string(g.smell) + "," +
               fmt(g.q3) + "," + util::join(g.rules, ";") + "\n";
    }
    return out;
}

std::string h2_to_csv(const std::vector<analysis::H2Result>& results, const Metadata& metadata) {
    std::string out = metadata_header(metadata);
    out += "tool,rule,smell_a,smell_b,n_pairs,testable,w,method,p,q,rejected,note\n";
    for (const auto& r : results) {
        out += std::string(ingest::to_string(r.tool)) + "," + r.rule_id + "," +
               ingest::to_string(r.smell_a) + "," + ingest::to_string(r.smell_b) + "," +
               std::to_string(r.n_pairs) + "," + (r.testable ? "1" : "0") + "," +
               fmt(r.test.statistic) + "," + r.test.method + "," + fmt(r.test.p_value) + "," +
               fmt(r.outcome.q_value) + "," + (r.outcome.rejected ? "1" : "0") + "," + r.note +
               "\n";
    }
    return out;
}

std::string h3_to_csv(const std::vector<analysis::H3Result>& results, const Metadata& metadata) {
    std::string out = metadata_header(metadata);
    out += "tool_a,tool_b,combo,n_pairs,testable,w,method,p,q,rejected,note\n";
    for (const auto& r : results) {
        out += std::string(ingest::to_string(r.tool_a)) + "," + ingest::to_string(r.tool_b) +
               "," + model::to_string(r.combo) + "," + std::to_string(r.n_pairs) + "," +
               (r.testable ? "1" : "0") + "," + fmt(r.test.statistic) + "," + r.test.method +
               "," + fmt(r.test.p_value) + "," + fmt(r.outcome.q_value) + "," +
               (r.outcome.rejected ? "1" : "0") + "," + r.note + "\n";
    }
    return out;
}

std::string ranking_to_csv(const std::vector<prioritize::RankedWarning>& ranking,
                           const Metadata& metadata) {
    std::string out = metadata_header(metadata);
    out += "position,tool,rule,key,bucket,package\n";
    for (size_t i = 0; i < ranking.size(); ++i) {
        const auto& r = ranking[i];
        out += std::to_string(i + 1) + "," + ingest::to_string(r.tool) + "," + r.rule_id + "," +
               fmt(r.key) + "," + prioritize::to_string(r.bucket) + "," + r.package + "\n";
    }
    return out;
}

std::string curves_to_csv(const std::vector<prioritize::EffortCurve>& curves,
                          const Metadata& metadata) {
    std::string out = metadata_header(metadata);
    out += "ranker,x,medium,high,critical\n";
    for (const auto& curve : curves) {
        for (const auto& p : curve.points) {
            out += curve.ranker + "," + std::to_string(p.cutoff_pct) + "," +
                   std::to_string(p.medium) + "," + std::to_string(p.high) + "," +
                   std::to_string(p.critical) + "\n";
        }
    }
    return out;
}

std::vector<prioritize::EffortCurve> curves_from_csv(std::string_view text) {
    std::vector<prioritize::EffortCurve> curves;
    for (const auto& line : split(text, '\n')) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t.rfind("ranker,", 0) == 0) continue;
        auto fields = split(t, ',');
        if (fields.size() != 5) throw MalformedReport("curve row needs 5 fields: " + t);
        if (curves.empty() || curves.back().ranker != fields[0])
            curves.push_back({fields[0], {}});
        int x = std::stoi(fields[1]);
        if (x % 10 != 0 || x < 10 || x > 100) throw MalformedReport("curve cutoff not in 10..100");
        curves.back().points[x / 10 - 1] = {x, std::stoll(fields[2]), std::stoll(fields[3]),
                                            std::stoll(fields[4])};
    }
    return curves;
}

std::string curves_to_plot_json(const std::vector<prioritize::EffortCurve>& curves) {
    json doc;
    doc["curves"] = json::array();
    for (const auto& curve : curves) {
        json c;
        c["ranker"] = curve.ranker;
        c["x"] = json::array();
        c["medium"] = json::array();
        c["high"] = json::array();
        c["critical"] = json::array();
        for (const auto& p : curve.points) {
            c["x"].push_back(p.cutoff_pct);
            c["medium"].push_back(p.medium);
            c["high"].push_back(p.high);
            c["critical"].push_back(p.critical);
        }
        doc["curves"].push_back(std::move(c));
    }
    return doc.dump(2) + "\n";
}

std::string h4_to_csv(const std::vector<prioritize::H4Result>& results, const Metadata& metadata) {
    std::string out = metadata_header(metadata);
    out += "ranker_a,ranker_b,bucket,n,testable,w,method,p,q,rejected,note\n";
    for (const auto& r : results) {
        out += r.ranker_a + "," + r.ranker_b + "," + prioritize::to_string(r.bucket) + "," +
               std::to_string(r.n_points) + "," + (r.testable ? "1" : "0") + "," +
               fmt(r.test.statistic) + "," + r.test.method + "," + fmt(r.test.p_value) + "," +
               fmt(r.outcome.q_value) + "," + (r.outcome.rejected ? "1" : "0") + "," + r.note +
               "\n";
    }
    return out;
}

namespace {

json adjusted_json(const stats::AdjustedOutcome& outcome) {
    json j;
    j["q"] = outcome.q_value;
    j["rank"] = outcome.rank_index;
    j["rejected"] = outcome.rejected;
    return j;
}

std::string dump_array(const json& array) { return array.dump(2) + "\n"; }

}  // namespace

std::string correlation_to_json(const std::vector<analysis::CorrelationCell>& cells,
                                const stats::RhoBands& bands) {
    json out = json::array();
    for (const auto& c : cells) {
        json j;
        j["tool"] = ingest::to_string(c.tool);
        j["rule"] = c.rule_id;
        j["smell"] = ingest::to_string(c.smell);
        j["n"] = c.n_packages;
        j["rho"] = c.rho;
        j["band"] = stats::to_string(stats::interpret_rho(c.rho, bands));
        j["p"] = c.test.p_value;
        j.update(adjusted_json(c.outcome));
        out.push_back(std::move(j));
    }
    return dump_array(out);
}

std::string cooccurrence_to_json(const analysis::CooccurrenceTable& table) {
    json out = json::array();
    for (const auto& [rule, per_combo] : table.counts) {
        for (uint8_t mask = 0; mask < model::kComboCount; ++mask) {
            if (per_combo[mask] == 0) continue;
            json j;
            j["tool"] = ingest::to_string(rule.first);
            j["rule"] = rule.second;
            j["combo"] = model::to_string(model::SmellCombo{mask});
            j["count"] = per_combo[mask];
            out.push_back(std::move(j));
        }
    }
    return dump_array(out);
}

std::string pscores_to_json(const std::vector<analysis::PScore>& scores) {
    json out = json::array();
    for (const auto& s : scores) {
        json j;
        j["tool"] = ingest::to_string(s.tool);
        j["combo"] = model::to_string(s.combo);
        j["rule"] = s.rule_id;
        j["p"] = s.p;
        out.push_back(std::move(j));
    }
    return dump_array(out);
}

std::string top_quartile_to_json(const analysis::TopQuartileResult& result) {
    json out = json::array();
    for (const auto& g : result.groups) {
        json j;
        j["tool"] = ingest::to_string(g.tool);
        j["smell"] = ingest::to_string(g.smell);
        j["q3"] = g.q3;
        j["rules"] = g.rules;
        out.push_back(std::move(j));
    }
    return dump_array(out);
}

std::string h2_to_json(const std::vector<analysis::H2Result>& results) {
    json out = json::array();
    for (const auto& r : results) {
        json j;
        j["tool"] = ingest::to_string(r.tool);
        j["rule"] = r.rule_id;
        j["smell_a"] = ingest::to_string(r.smell_a);
        j["smell_b"] = ingest::to_string(r.smell_b);
        j["n_pairs"] = r.n_pairs;
        j["testable"] = r.testable;
        if (r.testable) {
            j["w"] = r.test.statistic;
            j["method"] = r.test.method;
            j["p"] = r.test.p_value;
            j.update(adjusted_json(r.outcome));
        }
        if (!r.note.empty()) j["note"] = r.note;
        out.push_back(std::move(j));
    }
    return dump_array(out);
}

std::string h3_to_json(const std::vector<analysis::H3Result>& results) {
    json out = json::array();
    for (const auto& r : results) {
        json j;
        j["tool_a"] = ingest::to_string(r.tool_a);
        j["tool_b"] = ingest::to_string(r.tool_b);
        j["combo"] = model::to_string(r.combo);
        j["n_pairs"] = r.n_pairs;
        j["testable"] = r.testable;
        if (r.testable) {
            j["w"] = r.test.statistic;
            j["method"] = r.test.method;
            j["p"] = r.test.p_value;
            j.update(adjusted_json(r.outcome));
        }
        if (!r.note.empty()) j["note"] = r.note;
        out.push_back(std::move(j));
    }
    return dump_array(out);
}

std::string h4_to_json(const std::vector<prioritize::H4Result>& results) {
    json out = json::array();
    for (const auto& r : results) {
        json j;
        j["ranker_a"] = r.ranker_a;
        j["ranker_b"] = r.ranker_b;
        j["bucket"] = prioritize::to_string(r.bucket);
        j["n"] = r.n_points;
        j["testable"] = r.testable;
        if (r.testable) {
            j["w"] = r.test.statistic;
            j["method"] = r.test.method;
            j["p"] = r.test.p_value;
            j.update(adjusted_json(r.outcome));
        }
        if (!r.note.empty()) j["note"] = r.note;
        out.push_back(std::move(j));
    }
    return dump_array(out);
}

std::string ranking_to_json(const std::vector<prioritize::RankedWarning>& ranking) {
    json out = json::array();
    for (size_t i = 0; i < ranking.size(); ++i) {
        const auto& r = ranking[i];
        json j;
        j["position"] = i + 1;
        j["tool"] = ingest::to_string(r.tool);
        j["rule"] = r.rule_id;
        j["key"] = r.key;
        j["bucket"] = prioritize::to_string(r.bucket);
        if (!r.package.empty()) j["package"] = r.package;
        out.push_back(std::move(j));
    }
    return dump_array(out);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path.string());
    out << content;
}

}  // namespace satsmell::io
