#include "satsmell/ingest.hpp"

#include <algorithm>
#include <charconv>

#include <json.hpp>

#include "satsmell/errors.hpp"
#include "satsmell/util.hpp"
#include "satsmell/xml.hpp"

namespace satsmell::ingest {

using util::split;
using util::to_lower;
using util::trim;

const char* to_string(SourceTool tool) {
    switch (tool) {
        case SourceTool::Checkstyle: return "Checkstyle";
        case SourceTool::FindBugs: return "FindBugs";
        case SourceTool::PMD: return "PMD";
        case SourceTool::SonarQube: return "SonarQube";
    }
    return "?";
}

SourceTool tool_from_string(std::string_view name) {
    std::string low = to_lower(name);
    if (low == "checkstyle") return SourceTool::Checkstyle;
    if (low == "findbugs" || low == "spotbugs") return SourceTool::FindBugs;
    if (low == "pmd") return SourceTool::PMD;
    if (low == "sonarqube" || low == "sonar") return SourceTool::SonarQube;
    throw ConfigError("unknown tool name: " + std::string(name));
}

bool WarningRecord::operator==(const WarningRecord& o) const {
    return tool == o.tool && rule_id == o.rule_id && category == o.category &&
           native.raw == o.native.raw && normalized.level == o.normalized.level &&
           file_path == o.file_path && line == o.line && fq_class == o.fq_class &&
           effort == o.effort;
}

const char* to_string(FindBugsGroup group) {
    switch (group) {
        case FindBugsGroup::Scariest: return "scariest";
        case FindBugsGroup::Scary: return "scary";
        case FindBugsGroup::Troubling: return "troubling";
        case FindBugsGroup::Concern: return "concern";
    }
    return "?";
}

FindBugsGroup rank_group(int rank) {
    if (rank < 1 || rank > 20)
        throw OutOfRange("rank_group: rank outside 1..20: " + std::to_string(rank));
    if (rank <= 4) return FindBugsGroup::Scariest;
    if (rank <= 9) return FindBugsGroup::Scary;
    if (rank <= 14) return FindBugsGroup::Troubling;
    return FindBugsGroup::Concern;
}

void SeverityMap::apply_overrides(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("severity map: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("severity map: expected a flat JSON object");
    for (auto& [key, value] : doc.items()) {
        if (!value.is_number_integer())
            throw ConfigError("severity map: level for '" + key + "' must be an integer");
        int level = value.get<int>();
        if (level < 1 || level > 5)
            throw ConfigError("severity map: level for '" + key + "' outside 1..5");
        auto dot = key.find('.');
        if (dot == std::string::npos)
            throw ConfigError("severity map: key '" + key + "' must be tool.raw");
        std::string tool = to_lower(key.substr(0, dot));
        std::string raw = to_lower(key.substr(dot + 1));
        if (tool == "checkstyle") checkstyle[raw] = level;
        else if (tool == "pmd") pmd[raw] = level;
        else if (tool == "findbugs") findbugs[raw] = level;
        else if (tool == "sonarqube") sonarqube[raw] = level;
        else throw ConfigError("severity map: unknown tool in key '" + key + "'");
    }
}

namespace {

int parse_int(std::string_view s) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw MalformedReport("expected an integer, got '" + std::string(s) + "'");
    return value;
}

}  // namespace

NormalizedSeverity normalize_severity(const NativeSeverity& native, const SeverityMap& mapping) {
    std::string key = to_lower(native.raw);
    const std::map<std::string, int>* table = nullptr;
    switch (native.tool) {
        case SourceTool::Checkstyle:
            table = &mapping.checkstyle;
            break;
        case SourceTool::PMD: {
            int p;
            auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), p);
            if (ec != std::errc{} || ptr != key.data() + key.size() || p < 1 || p > 5)
                throw UnknownSeverity("PMD priority outside 1..5: '" + native.raw + "'");
            table = &mapping.pmd;
            break;
        }
        case SourceTool::FindBugs: {
            int rank;
            auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), rank);
            if (ec != std::errc{} || ptr != key.data() + key.size() || rank < 1 || rank > 20)
                throw UnknownSeverity("FindBugs rank outside 1..20: '" + native.raw + "'");
            key = to_string(rank_group(rank));
            table = &mapping.findbugs;
            break;
        }
        case SourceTool::SonarQube:
            table = &mapping.sonarqube;
            break;
    }
    auto it = table->find(key);
    if (it == table->end())
        throw UnknownSeverity(std::string(to_string(native.tool)) + ": unknown severity '" +
                              native.raw + "'");
    return {it->second};
}

namespace {

WarningRecord make_record(SourceTool tool, std::string rule, std::string category,
                          std::string raw, const SeverityMap& mapping, std::string file,
                          std::optional<int> line, std::optional<std::string> fq_class,
                          std::optional<std::string> effort = std::nullopt) {
    if (rule.empty()) throw MalformedReport("warning without a rule identifier");
    if (file.empty() && !fq_class)
        throw MalformedReport("warning '" + rule + "' carries neither file path nor class");
    if (file.empty()) line.reset();
    WarningRecord rec{tool,
                      std::move(rule),
                      std::move(category),
                      {tool, raw},
                      {},
                      std::move(file),
                      line,
                      std::move(fq_class),
                      std::move(effort)};
    rec.normalized = normalize_severity(rec.native, mapping);
    return rec;
}

}  // namespace

std::vector<WarningRecord> parse_checkstyle(std::string_view report_bytes,
                                            const SeverityMap& mapping) {
    xml::Element root = xml::parse(report_bytes);
    if (root.name != "checkstyle")
        throw MalformedReport("checkstyle: expected <checkstyle> root, got <" + root.name + ">");
    std::vector<WarningRecord> out;
    for (const auto* file : root.children_named("file")) {
        const std::string* fname = file->attr("name");
        if (!fname) throw MalformedReport("checkstyle: <file> without name attribute");
        for (const auto* err : file->children_named("error")) {
            const std::string* severity = err->attr("severity");
            const std::string* source = err->attr("source");
            if (!severity || !source)
                throw MalformedReport("checkstyle: <error> missing severity or source");
            // Rule id is the trailing segment of the source attribute; the
            // segment before it is Checkstyle's own grouping.
            auto segments = split(*source, '.');
            std::string rule = segments.back();
            std::string category = segments.size() >= 2 ? segments[segments.size() - 2] : "";
            std::optional<int> line;
            if (const std::string* l = err->attr("line")) line = parse_int(*l);
            out.push_back(make_record(SourceTool::Checkstyle, std::move(rule),
                                      std::move(category), *severity, mapping, *fname, line,
                                      std::nullopt));
        }
    }
    return out;
}

std::vector<WarningRecord> parse_pmd(std::string_view report_bytes, const SeverityMap& mapping) {
    xml::Element root = xml::parse(report_bytes);
    if (root.name != "pmd")
        throw MalformedReport("pmd: expected <pmd> root, got <" + root.name + ">");
    std::vector<WarningRecord> out;
    for (const auto* file : root.children_named("file")) {
        const std::string* fname = file->attr("name");
        if (!fname) throw MalformedReport("pmd: <file> without name attribute");
        for (const auto* v : file->children_named("violation")) {
            const std::string* rule = v->attr("rule");
            const std::string* priority = v->attr("priority");
            if (!rule || !priority)
                throw MalformedReport("pmd: <violation> missing rule or priority");
            std::string category = v->attr("ruleset") ? *v->attr("ruleset") : "";
            std::optional<int> line;
            if (const std::string* l = v->attr("beginline")) line = parse_int(*l);
            std::optional<std::string> fqcn;
            const std::string* pkg = v->attr("package");
            const std::string* cls = v->attr("class");
            if (pkg && cls && !pkg->empty() && !cls->empty()) fqcn = *pkg + "." + *cls;
            out.push_back(make_record(SourceTool::PMD, *rule, std::move(category), *priority,
                                      mapping, *fname, line, std::move(fqcn)));
        }
    }
    return out;
}

std::vector<WarningRecord> parse_findbugs(std::string_view report_bytes,
                                          const SeverityMap& mapping) {
    xml::Element root = xml::parse(report_bytes);
    if (root.name != "BugCollection")
        throw MalformedReport("findbugs: expected <BugCollection> root, got <" + root.name + ">");
    std::vector<WarningRecord> out;
    for (const auto* bug : root.children_named("BugInstance")) {
        const std::string* type = bug->attr("type");
        const std::string* rank = bug->attr("rank");
        if (!type || !rank) throw MalformedReport("findbugs: <BugInstance> missing type or rank");
        std::string category = bug->attr("category") ? *bug->attr("category") : "";
        std::optional<std::string> fqcn;
        if (const xml::Element* cls = bug->first_child("Class")) {
            if (const std::string* cn = cls->attr("classname")) fqcn = *cn;
        }
        std::string file;
        std::optional<int> line;
        if (const xml::Element* sl = bug->first_child("SourceLine")) {
            if (const std::string* sp = sl->attr("sourcepath")) file = *sp;
            if (const std::string* st = sl->attr("start")) line = parse_int(*st);
            if (!fqcn) {
                if (const std::string* cn = sl->attr("classname")) fqcn = *cn;
            }
        }
        out.push_back(make_record(SourceTool::FindBugs, *type, std::move(category), *rank,
                                  mapping, std::move(file), line, std::move(fqcn)));
    }
    return out;
}

std::vector<WarningRecord> parse_sonarqube(std::string_view report_bytes,
                                           const SeverityMap& mapping) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(report_bytes);
    } catch (const nlohmann::json::exception& e) {
        throw MalformedReport(std::string("sonarqube: invalid JSON: ") + e.what());
    }
    const nlohmann::json* issues = nullptr;
    if (doc.is_array()) issues = &doc;
    else if (doc.is_object() && doc.contains("issues") && doc["issues"].is_array())
        issues = &doc["issues"];
    else throw MalformedReport("sonarqube: expected an issue array or {\"issues\": [...]}");

    std::vector<WarningRecord> out;
    for (const auto& issue : *issues) {
        if (!issue.is_object()) throw MalformedReport("sonarqube: issue entry is not an object");
        if (!issue.contains("rule") || !issue.contains("severity"))
            throw MalformedReport("sonarqube: issue missing rule or severity");
        std::string rule = issue["rule"].get<std::string>();
        std::string severity = issue["severity"].get<std::string>();
        std::string category = issue.value("type", std::string{});
        std::string file;
        if (issue.contains("component")) {
            file = issue["component"].get<std::string>();
            // Components are "<projectKey>:<path>"; keep the path part.
            auto colon = file.find(':');
            if (colon != std::string::npos) file = file.substr(colon + 1);
        }
        std::optional<int> line;
        if (issue.contains("line") && issue["line"].is_number_integer())
            line = issue["line"].get<int>();
        std::optional<std::string> effort;
        if (issue.contains("effort") && issue["effort"].is_string())
            effort = issue["effort"].get<std::string>();
        else if (issue.contains("debt") && issue["debt"].is_string())
            effort = issue["debt"].get<std::string>();
        out.push_back(make_record(SourceTool::SonarQube, std::move(rule), std::move(category),
                                  std::move(severity), mapping, std::move(file), line,
                                  std::nullopt, std::move(effort)));
    }
    return out;
}

const char* to_string(SmellKind kind) {
    switch (kind) {
        case SmellKind::CD: return "CD";
        case SmellKind::UD: return "UD";
        case SmellKind::HL: return "HL";
    }
    return "?";
}

SmellKind smell_from_string(std::string_view name) {
    if (name == "CD") return SmellKind::CD;
    if (name == "UD") return SmellKind::UD;
    if (name == "HL") return SmellKind::HL;
    throw UnknownSmellKind("unknown smell kind: '" + std::string(name) + "'");
}

int default_smell_severity(SmellKind kind) {
    switch (kind) {
        case SmellKind::CD: return 5;
        case SmellKind::UD: return 7;
        case SmellKind::HL: return 9;
    }
    return 0;
}

const char* to_string(Granularity g) {
    return g == Granularity::Class ? "class" : "package";
}

std::vector<SmellInstance> parse_arcan(std::string_view report_bytes, const ArcanFormat& format) {
    std::vector<std::string> lines;
    {
        std::string text(report_bytes);
        for (auto& line : split(text, '\n')) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            lines.push_back(std::move(line));
        }
    }
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) throw MalformedReport("arcan: empty report");

    auto header = split(lines.front(), format.delimiter);
    int col_kind = -1, col_gran = -1, col_entities = -1;
    for (size_t i = 0; i < header.size(); ++i) {
        std::string name = to_lower(trim(header[i]));
        if (name == "smell_type") col_kind = static_cast<int>(i);
        else if (name == "granularity") col_gran = static_cast<int>(i);
        else if (name == "affected_entities") col_entities = static_cast<int>(i);
    }
    if (col_kind < 0 || col_gran < 0 || col_entities < 0)
        throw MalformedReport(
            "arcan: header must name smell_type, granularity and affected_entities");

    std::vector<SmellInstance> out;
    for (size_t row = 1; row < lines.size(); ++row) {
        if (trim(lines[row]).empty()) continue;
        auto fields = split(lines[row], format.delimiter);
        if (fields.size() < header.size())
            throw MalformedReport("arcan: row " + std::to_string(row + 1) + " has " +
                                  std::to_string(fields.size()) + " fields, header has " +
                                  std::to_string(header.size()));
        SmellInstance smell;
        smell.kind = smell_from_string(trim(fields[col_kind]));
        std::string gran = to_lower(trim(fields[col_gran]));
        if (gran == "class") smell.granularity = Granularity::Class;
        else if (gran == "package") smell.granularity = Granularity::Package;
        else throw MalformedReport("arcan: unknown granularity '" + gran + "'");
        for (auto& entity : split(fields[col_entities], format.entity_delimiter)) {
            std::string e = trim(entity);
            if (!e.empty()) smell.affected.push_back(std::move(e));
        }
        std::sort(smell.affected.begin(), smell.affected.end());
        smell.affected.erase(std::unique(smell.affected.begin(), smell.affected.end()),
                             smell.affected.end());
        if (smell.affected.empty())
            throw MalformedReport("arcan: row " + std::to_string(row + 1) +
                                  " has no affected entities");
        smell.severity = default_smell_severity(smell.kind);
        out.push_back(std::move(smell));
    }
    return out;
}

}  // namespace satsmell::ingest
