#include <doctest.h>

#include "satsmell/errors.hpp"
#include "satsmell/ingest.hpp"

using namespace satsmell;
using ingest::SeverityMap;
using ingest::SourceTool;

namespace {

const SeverityMap kDefaults;

constexpr const char* kCheckstyleFixture = R"(<?xml version="1.0" encoding="UTF-8"?>
<checkstyle version="8.45">
<file name="src/main/java/org/example/App.java">
  <error line="12" column="5" severity="error" message="Missing a Javadoc comment."
         source="com.puppycrawl.tools.checkstyle.checks.javadoc.JavadocMethodCheck"/>
  <error line="30" severity="warning" message="Line is longer than 100 characters."
         source="com.puppycrawl.tools.checkstyle.checks.sizes.LineLengthCheck"/>
</file>
<file name="src/main/java/org/example/util/Text.java">
  <error line="3" severity="info" message="." source="com.puppycrawl.tools.checkstyle.checks.whitespace.EmptyLineSeparatorCheck"/>
</file>
</checkstyle>)";

constexpr const char* kPmdFixture = R"(<?xml version="1.0" encoding="UTF-8"?>
<pmd version="6.55.0" timestamp="2024-01-05T10:00:00">
<file name="src/main/java/org/example/App.java">
  <violation beginline="5" endline="9" begincolumn="1" endcolumn="10" rule="GodClass"
             ruleset="Design" package="org.example" class="App" priority="1">God class</violation>
  <violation beginline="44" rule="UnusedLocalVariable" ruleset="Best Practices"
             package="org.example" class="App" priority="3">Unused</violation>
</file>
</pmd>)";

constexpr const char* kFindbugsFixture = R"(<?xml version="1.0" encoding="UTF-8"?>
<BugCollection version="3.0.1" sequence="0">
  <BugInstance type="DMI_EMPTY_DB_PASSWORD" priority="1" rank="3" category="SECURITY">
    <Class classname="org.example.Db"/>
    <SourceLine classname="org.example.Db" start="42" end="42" sourcefile="Db.java"
                sourcepath="org/example/Db.java"/>
  </BugInstance>
  <BugInstance type="EQ_COMPARING_CLASS_NAMES" priority="2" rank="17" category="CORRECTNESS">
    <Class classname="org.example.util.Eq"/>
    <SourceLine classname="org.example.util.Eq" start="7" sourcepath="org/example/util/Eq.java"/>
  </BugInstance>
</BugCollection>)";

constexpr const char* kSonarFixture = R"({
  "total": 3,
  "issues": [
    {"key": "AX1", "rule": "java:S1118", "severity": "Blocker",
     "component": "demo:src/main/java/org/example/App.java", "line": 10,
     "effort": "5min", "type": "BUG"},
    {"key": "AX2", "rule": "java:S125", "severity": "Minor",
     "component": "demo:src/main/java/org/example/util/Text.java", "line": 2,
     "type": "CODE_SMELL"},
    {"key": "AX3", "rule": "java:S2095", "severity": "Critical",
     "component": "demo:src/main/java/org/example/App.java", "type": "BUG"}
  ]
})";

constexpr const char* kArcanFixture =
    "smell_type,granularity,affected_entities,extra\n"
    "CD,package,org.a;org.b,x\n"
    "HL,class,org.a.Helper,y\n"
    "UD,package,org.c,z\n";

}  // namespace

TEST_CASE("checkstyle: records carry trailing-segment rule ids") {
    auto records = ingest::parse_checkstyle(kCheckstyleFixture, kDefaults);
    REQUIRE(records.size() == 3);
    CHECK(records[0].tool == SourceTool::Checkstyle);
    CHECK(records[0].rule_id == "JavadocMethodCheck");
    CHECK(records[0].category == "javadoc");
    CHECK(records[0].native.raw == "error");
    CHECK(records[0].normalized.level == 4);
    CHECK(records[0].file_path == "src/main/java/org/example/App.java");
    CHECK(records[0].line == 12);
    CHECK(records[1].rule_id == "LineLengthCheck");
    CHECK(records[1].normalized.level == 3);
    CHECK(records[2].normalized.level == 2);
}

TEST_CASE("checkstyle: zero error elements, unknown severity, malformed document") {
    CHECK(ingest::parse_checkstyle(R"(<checkstyle><file name="A.java"/></checkstyle>)", kDefaults)
              .empty());
    CHECK_THROWS_AS(
        (void)ingest::parse_checkstyle(
            R"(<checkstyle><file name="A.java"><error severity="fatal" source="x.Y"/></file></checkstyle>)",
            kDefaults),
        UnknownSeverity);
    CHECK_THROWS_AS((void)ingest::parse_checkstyle("<checkstyle><file></checkstyle>", kDefaults),
                    MalformedReport);
    CHECK_THROWS_AS((void)ingest::parse_checkstyle("<pmd/>", kDefaults), MalformedReport);
}

TEST_CASE("pmd: priority is the native scale, 1 most severe") {
    auto records = ingest::parse_pmd(kPmdFixture, kDefaults);
    REQUIRE(records.size() == 2);
    CHECK(records[0].rule_id == "GodClass");
    CHECK(records[0].native.raw == "1");
    CHECK(records[0].normalized.level == 5);
    CHECK(records[0].category == "Design");
    REQUIRE(records[0].fq_class.has_value());
    CHECK(*records[0].fq_class == "org.example.App");
    CHECK(records[0].line == 5);
    CHECK(records[1].normalized.level == 3);
}

TEST_CASE("pmd: empty report and out-of-domain priority") {
    CHECK(ingest::parse_pmd("<pmd/>", kDefaults).empty());
    CHECK_THROWS_AS(
        (void)ingest::parse_pmd(
            R"(<pmd><file name="A.java"><violation rule="X" priority="6">.</violation></file></pmd>)",
            kDefaults),
        UnknownSeverity);
}

TEST_CASE("findbugs: bug pattern type preserved verbatim, rank groups applied") {
    auto records = ingest::parse_findbugs(kFindbugsFixture, kDefaults);
    REQUIRE(records.size() == 2);
    CHECK(records[0].rule_id == "DMI_EMPTY_DB_PASSWORD");
    CHECK(records[0].native.raw == "3");
    CHECK(ingest::rank_group(3) == ingest::FindBugsGroup::Scariest);
    CHECK(records[0].normalized.level == 5);
    REQUIRE(records[0].fq_class.has_value());
    CHECK(*records[0].fq_class == "org.example.Db");
    CHECK(records[0].file_path == "org/example/Db.java");
    CHECK(records[0].line == 42);
    CHECK(records[1].rule_id == "EQ_COMPARING_CLASS_NAMES");
    CHECK(records[1].normalized.level == 2);
}

TEST_CASE("findbugs: rank 0 is out of domain") {
    CHECK_THROWS_AS(
        (void)ingest::parse_findbugs(
            R"(<BugCollection><BugInstance type="X" rank="0"><Class classname="a.B"/></BugInstance></BugCollection>)",
            kDefaults),
        UnknownSeverity);
}

TEST_CASE("sonarqube: issues with effort metadata") {
    auto records = ingest::parse_sonarqube(kSonarFixture, kDefaults);
    REQUIRE(records.size() == 3);
    CHECK(records[0].rule_id == "java:S1118");
    CHECK(records[0].normalized.level == 5);
    CHECK(records[0].file_path == "src/main/java/org/example/App.java");
    REQUIRE(records[0].effort.has_value());
    CHECK(*records[0].effort == "5min");
    CHECK(records[1].normalized.level == 2);
    CHECK_FALSE(records[1].effort.has_value());
    CHECK_FALSE(records[2].line.has_value());
}

TEST_CASE("sonarqube: empty export, unknown severity, malformed document") {
    CHECK(ingest::parse_sonarqube(R"({"issues": []})", kDefaults).empty());
    CHECK(ingest::parse_sonarqube("[]", kDefaults).empty());
    CHECK_THROWS_AS((void)ingest::parse_sonarqube(
                        R"({"issues": [{"rule": "r", "severity": "Urgent", "component": "p:f"}]})",
                        kDefaults),
                    UnknownSeverity);
    CHECK_THROWS_AS((void)ingest::parse_sonarqube("{not json", kDefaults), MalformedReport);
    CHECK_THROWS_AS((void)ingest::parse_sonarqube(R"({"no_issues": 1})", kDefaults),
                    MalformedReport);
}

TEST_CASE("arcan: rows become smell instances with default severities") {
    auto smells = ingest::parse_arcan(kArcanFixture);
    REQUIRE(smells.size() == 3);
    CHECK(smells[0].kind == ingest::SmellKind::CD);
    CHECK(smells[0].granularity == ingest::Granularity::Package);
    CHECK(smells[0].affected == std::vector<std::string>{"org.a", "org.b"});
    CHECK(smells[0].severity == 5);
    CHECK(smells[1].kind == ingest::SmellKind::HL);
    CHECK(smells[1].granularity == ingest::Granularity::Class);
    CHECK(smells[1].severity == 9);
    CHECK(smells[2].severity == 7);
}

TEST_CASE("arcan: unknown smell kind and malformed table") {
    CHECK_THROWS_AS(
        (void)ingest::parse_arcan("smell_type,granularity,affected_entities\nGC,package,org.a\n"),
        UnknownSmellKind);
    CHECK_THROWS_AS((void)ingest::parse_arcan("kind,scope\nCD,package\n"), MalformedReport);
    CHECK_THROWS_AS((void)ingest::parse_arcan(""), MalformedReport);
    // configurable delimiters
    auto smells = ingest::parse_arcan("smell_type|granularity|affected_entities\nCD|package|a:b\n",
                                      {'|', ':'});
    REQUIRE(smells.size() == 1);
    CHECK(smells[0].affected.size() == 2);
}

TEST_CASE("severity normalization: stated default mapping") {
    auto level = [](SourceTool tool, const char* raw) {
        return ingest::normalize_severity({tool, raw}, kDefaults).level;
    };
    CHECK(level(SourceTool::PMD, "1") == 5);
    CHECK(level(SourceTool::PMD, "5") == 1);
    CHECK(level(SourceTool::FindBugs, "17") == 2);
    CHECK(level(SourceTool::Checkstyle, "error") == 4);
    CHECK(level(SourceTool::SonarQube, "Blocker") == 5);
    CHECK(level(SourceTool::SonarQube, "Info") == 1);
    CHECK_THROWS_AS((void)ingest::normalize_severity({SourceTool::Checkstyle, "fatal"}, kDefaults),
                    UnknownSeverity);
}

TEST_CASE("severity normalization: monotone over each native domain") {
    auto level = [](SourceTool tool, const std::string& raw) {
        return ingest::normalize_severity({tool, raw}, kDefaults).level;
    };
    // PMD: priority 1 most severe; level must not increase with priority.
    for (int p = 1; p < 5; ++p)
        CHECK(level(SourceTool::PMD, std::to_string(p)) >=
              level(SourceTool::PMD, std::to_string(p + 1)));
    // FindBugs: rank 1 most severe.
    for (int r = 1; r < 20; ++r)
        CHECK(level(SourceTool::FindBugs, std::to_string(r)) >=
              level(SourceTool::FindBugs, std::to_string(r + 1)));
    const char* cs[] = {"error", "warning", "info", "ignore"};
    for (int i = 0; i < 3; ++i) CHECK(level(SourceTool::Checkstyle, cs[i]) >= level(SourceTool::Checkstyle, cs[i + 1]));
    const char* sq[] = {"Blocker", "Critical", "Major", "Minor", "Info"};
    for (int i = 0; i < 4; ++i) CHECK(level(SourceTool::SonarQube, sq[i]) >= level(SourceTool::SonarQube, sq[i + 1]));
}

TEST_CASE("severity map overrides") {
    SeverityMap map;
    map.apply_overrides(R"({"checkstyle.error": 5, "pmd.2": 5})");
    CHECK(ingest::normalize_severity({SourceTool::Checkstyle, "error"}, map).level == 5);
    CHECK(ingest::normalize_severity({SourceTool::PMD, "2"}, map).level == 5);
    CHECK(ingest::normalize_severity({SourceTool::PMD, "3"}, map).level == 3);
    CHECK_THROWS_AS(map.apply_overrides(R"({"pmd.1": 9})"), ConfigError);
    CHECK_THROWS_AS(map.apply_overrides("nope"), ConfigError);
    CHECK_THROWS_AS(map.apply_overrides(R"({"badkey": 3})"), ConfigError);
}

TEST_CASE("rank_group: boundary inclusive per group") {
    using ingest::FindBugsGroup;
    CHECK(ingest::rank_group(1) == FindBugsGroup::Scariest);
    CHECK(ingest::rank_group(4) == FindBugsGroup::Scariest);
    CHECK(ingest::rank_group(5) == FindBugsGroup::Scary);
    CHECK(ingest::rank_group(9) == FindBugsGroup::Scary);
    CHECK(ingest::rank_group(10) == FindBugsGroup::Troubling);
    CHECK(ingest::rank_group(14) == FindBugsGroup::Troubling);
    CHECK(ingest::rank_group(15) == FindBugsGroup::Concern);
    CHECK(ingest::rank_group(20) == FindBugsGroup::Concern);
    CHECK_THROWS_AS((void)ingest::rank_group(0), OutOfRange);
    CHECK_THROWS_AS((void)ingest::rank_group(21), OutOfRange);
}

TEST_CASE("parsers are pure: same bytes give identical record lists") {
    auto a = ingest::parse_checkstyle(kCheckstyleFixture, kDefaults);
    auto b = ingest::parse_checkstyle(kCheckstyleFixture, kDefaults);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    auto s1 = ingest::parse_arcan(kArcanFixture);
    auto s2 = ingest::parse_arcan(kArcanFixture);
    CHECK(s1 == s2);
}

TEST_CASE("cardinality is lossless against the fixture element counts") {
    CHECK(ingest::parse_checkstyle(kCheckstyleFixture, kDefaults).size() == 3);
    CHECK(ingest::parse_pmd(kPmdFixture, kDefaults).size() == 2);
    CHECK(ingest::parse_findbugs(kFindbugsFixture, kDefaults).size() == 2);
    CHECK(ingest::parse_sonarqube(kSonarFixture, kDefaults).size() == 3);
    CHECK(ingest::parse_arcan(kArcanFixture).size() == 3);
}
