#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "satsmell/analysis.hpp"
#include "satsmell/ingest.hpp"
#include "satsmell/model.hpp"
#include "satsmell/npstats.hpp"
#include "satsmell/prioritize.hpp"

namespace satsmell::io {

using ingest::SmellInstance;
using ingest::WarningRecord;
using model::PackageProfile;

// --- canonical newline-delimited records -------------------------------

std::string warning_to_json(const WarningRecord& rec);
WarningRecord warning_from_json(std::string_view line);

std::string smell_to_json(const SmellInstance& smell);
SmellInstance smell_from_json(std::string_view line);

std::string warnings_to_ndjson(const std::vector<WarningRecord>& records);
std::vector<WarningRecord> warnings_from_ndjson(std::string_view text);

std::string smells_to_ndjson(const std::vector<SmellInstance>& smells);
std::vector<SmellInstance> smells_from_ndjson(std::string_view text);

// --- profile dumps (round-trip loadable) --------------------------------

std::string profiles_to_csv(const std::vector<PackageProfile>& profiles);
std::vector<PackageProfile> profiles_from_csv(std::string_view text);

std::string profiles_to_ndjson(const std::vector<PackageProfile>& profiles);
std::vector<PackageProfile> profiles_from_ndjson(std::string_view text);

// --- analysis/rank tables ------------------------------------------------

// "# key=value" lines prepended to delimited-text outputs.
using Metadata = std::map<std::string, std::string>;

std::string metadata_header(const Metadata& metadata);

std::string correlation_to_csv(const std::vector<analysis::CorrelationCell>& cells,
                               const stats::RhoBands& bands, const Metadata& metadata);

struct CorrelationRow {
    ingest::SourceTool tool;
    std::string rule_id;
    ingest::SmellKind smell;
    int n_packages = 0;
    double rho = 0.0;
    std::string band;
    double p = 1.0;
    double q = 1.0;
    int rank_index = 0;
    bool rejected = false;
};

std::vector<CorrelationRow> correlation_from_csv(std::string_view text);

std::string cooccurrence_to_csv(const analysis::CooccurrenceTable& table, const Metadata& metadata);
analysis::CooccurrenceTable cooccurrence_from_csv(std::string_view text);
std::string pscores_to_csv(const std::vector<analysis::PScore>& scores, const Metadata& metadata);
std::vector<analysis::PScore> pscores_from_csv(std::string_view text);
std::string top_quartile_to_csv(const analysis::TopQuartileResult& result, const Metadata& metadata);
std::string h2_to_csv(const std::vector<analysis::H2Result>& results, const Metadata& metadata);
std::string h3_to_csv(const std::vector<analysis::H3Result>& results, const Metadata& metadata);
std::string ranking_to_csv(const std::vector<prioritize::RankedWarning>& ranking,
                           const Metadata& metadata);
std::string curves_to_csv(const std::vector<prioritize::EffortCurve>& curves,
                          const Metadata& metadata);
std::vector<prioritize::EffortCurve> curves_from_csv(std::string_view text);
std::string curves_to_plot_json(const std::vector<prioritize::EffortCurve>& curves);
std::string h4_to_csv(const std::vector<prioritize::H4Result>& results, const Metadata& metadata);

// --- structured-object mirrors of the tabular outputs -----------------------

std::string correlation_to_json(const std::vector<analysis::CorrelationCell>& cells,
                                const stats::RhoBands& bands);
std::string cooccurrence_to_json(const analysis::CooccurrenceTable& table);
std::string pscores_to_json(const std::vector<analysis::PScore>& scores);
std::string top_quartile_to_json(const analysis::TopQuartileResult& result);
std::string h2_to_json(const std::vector<analysis::H2Result>& results);
std::string h3_to_json(const std::vector<analysis::H3Result>& results);
std::string h4_to_json(const std::vector<prioritize::H4Result>& results);
std::string ranking_to_json(const std::vector<prioritize::RankedWarning>& ranking);

// --- files ----------------------------------------------------------------

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace satsmell::io
