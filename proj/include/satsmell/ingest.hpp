#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace satsmell::ingest {

enum class SourceTool { Checkstyle, FindBugs, PMD, SonarQube };

constexpr SourceTool kAllTools[] = {SourceTool::Checkstyle, SourceTool::FindBugs,
                                    SourceTool::PMD, SourceTool::SonarQube};

const char* to_string(SourceTool tool);
SourceTool tool_from_string(std::string_view name);

// Severity exactly as the tool emitted it. Checkstyle and SonarQube are
// textual, PMD priorities and FindBugs ranks are kept as decimal strings.
struct NativeSeverity {
    SourceTool tool;
    std::string raw;
};

// Shared ordinal scale, 1..5, 5 = most severe.
struct NormalizedSeverity {
    int level = 0;
};

struct WarningRecord {
    SourceTool tool;
    std::string rule_id;
    std::string category;
    NativeSeverity native;
    NormalizedSeverity normalized;
    std::string file_path;
    std::optional<int> line;
    std::optional<std::string> fq_class;
    std::optional<std::string> effort;  // SonarQube remediation-cost text, kept verbatim

    bool operator==(const WarningRecord&) const;
};

enum class FindBugsGroup { Scariest, Scary, Troubling, Concern };

const char* to_string(FindBugsGroup group);

// Boundary-inclusive rank grouping: 1-4 scariest, 5-9 scary, 10-14 troubling,
// 15-20 concern. Throws OutOfRange outside 1..20.
FindBugsGroup rank_group(int rank);

// Per-tool mapping from native severity onto the shared 1..5 scale.
// Keys: Checkstyle/SonarQube native strings (lower-cased), PMD priorities
// "1".."5", FindBugs group names "scariest".."concern".
struct SeverityMap {
    std::map<std::string, int> checkstyle{{"error", 4}, {"warning", 3}, {"info", 2}, {"ignore", 1}};
    std::map<std::string, int> pmd{{"1", 5}, {"2", 4}, {"3", 3}, {"4", 2}, {"5", 1}};
    std::map<std::string, int> findbugs{{"scariest", 5}, {"scary", 4}, {"troubling", 3}, {"concern", 2}};
    std::map<std::string, int> sonarqube{{"blocker", 5}, {"critical", 4}, {"major", 3}, {"minor", 2}, {"info", 1}};

    // Applies overrides from a flat JSON document {"tool.raw": level, ...},
    // e.g. {"checkstyle.error": 5, "sonarqube.blocker": 5}.
    void apply_overrides(std::string_view json_text);
};

// Deterministic 1..5 level for a native severity. Throws UnknownSeverity when
// the raw value is outside the tool's native domain.
NormalizedSeverity normalize_severity(const NativeSeverity& native, const SeverityMap& mapping);

enum class SmellKind { CD, UD, HL };

constexpr SmellKind kAllSmells[] = {SmellKind::CD, SmellKind::UD, SmellKind::HL};

const char* to_string(SmellKind kind);
SmellKind smell_from_string(std::string_view name);

// Default severity weights on the 1..10 scale.
int default_smell_severity(SmellKind kind);

enum class Granularity { Class, Package };

const char* to_string(Granularity g);

struct SmellInstance {
    SmellKind kind;
    Granularity granularity;
    std::vector<std::string> affected;  // non-empty, deduplicated, sorted
    int severity;                       // ordinal 1..10

    bool operator==(const SmellInstance&) const = default;
};

// --- parsers ------------------------------------------------------------
// All parsers are pure functions over the report bytes: same bytes, same
// record list, in document order. They throw MalformedReport /
// UnknownSeverity / UnknownSmellKind.

std::vector<WarningRecord> parse_checkstyle(std::string_view report_bytes, const SeverityMap& mapping);
std::vector<WarningRecord> parse_pmd(std::string_view report_bytes, const SeverityMap& mapping);
std::vector<WarningRecord> parse_findbugs(std::string_view report_bytes, const SeverityMap& mapping);
std::vector<WarningRecord> parse_sonarqube(std::string_view report_bytes, const SeverityMap& mapping);

struct ArcanFormat {
    char delimiter = ',';
    char entity_delimiter = ';';
};

std::vector<SmellInstance> parse_arcan(std::string_view report_bytes, const ArcanFormat& format = {});

}  // namespace satsmell::ingest
