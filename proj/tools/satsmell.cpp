// satsmell: joins static-analysis warnings with architectural-smell
// detections at package granularity, quantifies their correlation and
// co-occurrence, and builds warning-based remediation rankings.
//
// Pipeline: ingest -> analyze -> rank -> report, all batch, all flat files.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "satsmell/analysis.hpp"
#include "satsmell/errors.hpp"
#include "satsmell/ingest.hpp"
#include "satsmell/io.hpp"
#include "satsmell/model.hpp"
#include "satsmell/npstats.hpp"
#include "satsmell/prioritize.hpp"
#include "satsmell/synth.hpp"
#include "satsmell/util.hpp"

namespace fs = std::filesystem;
using namespace satsmell;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Options {
    std::string dir;
    std::string input;
    std::vector<std::string> checkstyle, pmd, findbugs, sonarqube, arcan;
    std::vector<std::string> roots;
    std::string severity_map_file;
    std::string config_file;
    double alpha = 0.05;
    std::string rho_bands = "0.4,0.7";
    std::string cutoff_mode = "ceiling";
    std::string rank_unit = "instance";
    std::string p_combo = "auto";
    unsigned jobs = 0;
    bool deterministic = false;
    bool keep_going = false;
    std::string delimiter = ",";
    std::string entity_delimiter = ";";
    uint64_t seed = 1;
    int packages = 100;
    std::string spec_file;
    std::string preset = "demo";
    std::string diag_test = "spearman";
    std::string diag_x, diag_y, diag_p;
};

fs::path dumps_dir(const Options& o) { return fs::path(o.dir) / "dumps"; }
fs::path analysis_dir(const Options& o) { return fs::path(o.dir) / "analysis"; }
fs::path rank_dir(const Options& o) { return fs::path(o.dir) / "rank"; }
fs::path report_dir(const Options& o) { return fs::path(o.dir) / "report"; }
fs::path corpus_dir(const Options& o) { return fs::path(o.dir) / "corpus"; }

stats::RhoBands parse_bands(const std::string& text) {
    auto parts = util::split(text, ',');
    if (parts.size() != 2) throw ConfigError("--rho-bands expects 'weak_hi,moderate_hi'");
    stats::RhoBands bands{std::stod(parts[0]), std::stod(parts[1])};
    if (!(bands.weak_hi > 0 && bands.weak_hi < bands.moderate_hi && bands.moderate_hi < 1.0))
        throw ConfigError("--rho-bands must satisfy 0 < weak < moderate < 1");
    return bands;
}

std::vector<double> parse_doubles(const std::string& text, const char* what) {
    std::vector<double> out;
    for (const auto& part : util::split(text, ',')) {
        if (util::trim(part).empty()) continue;
        try {
            out.push_back(std::stod(util::trim(part)));
        } catch (...) {
            throw ConfigError(std::string(what) + ": not a number: '" + part + "'");
        }
    }
    return out;
}

io::Metadata base_metadata(const Options& o) {
    io::Metadata meta{{"tool", "satsmell"}, {"version", kVersion},
                      {"alpha", std::to_string(o.alpha)}};
    if (!o.roots.empty()) meta["roots"] = util::join(o.roots, ";");
    if (!o.deterministic) {
        auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[32];
        std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&now));
        meta["generated_at"] = buf;
    }
    return meta;
}

model::DerivationConfig derivation_config(const Options& o) {
    model::DerivationConfig cfg;
    cfg.source_roots = o.roots;
    return cfg;
}

ingest::SeverityMap severity_map(const Options& o) {
    ingest::SeverityMap map;
    if (!o.severity_map_file.empty()) map.apply_overrides(io::read_file(o.severity_map_file));
    return map;
}

// --- ingest ------------------------------------------------------------

struct InputFile {
    std::string tool;  // checkstyle/pmd/findbugs/sonarqube/arcan
    fs::path path;
};

std::vector<InputFile> collect_inputs(const Options& o) {
    std::vector<InputFile> files;
    auto add_all = [&](const std::vector<std::string>& paths, const char* tool) {
        for (const auto& p : paths) files.push_back({tool, p});
    };
    add_all(o.checkstyle, "checkstyle");
    add_all(o.pmd, "pmd");
    add_all(o.findbugs, "findbugs");
    add_all(o.sonarqube, "sonarqube");
    add_all(o.arcan, "arcan");
    if (!o.input.empty()) {
        if (!fs::is_directory(o.input))
            throw ConfigError("--input is not a directory: " + o.input);
        for (const auto& entry : fs::recursive_directory_iterator(o.input)) {
            if (!entry.is_regular_file()) continue;
            std::string name = util::to_lower(entry.path().filename().string());
            auto starts = [&](const char* prefix) { return name.rfind(prefix, 0) == 0; };
            if (starts("checkstyle") && name.ends_with(".xml"))
                files.push_back({"checkstyle", entry.path()});
            else if (starts("pmd") && name.ends_with(".xml"))
                files.push_back({"pmd", entry.path()});
            else if ((starts("findbugs") || starts("spotbugs")) && name.ends_with(".xml"))
                files.push_back({"findbugs", entry.path()});
            else if (starts("sonarqube") && name.ends_with(".json"))
                files.push_back({"sonarqube", entry.path()});
            else if (starts("arcan") && name.ends_with(".csv"))
                files.push_back({"arcan", entry.path()});
        }
    }
    std::sort(files.begin(), files.end(), [](const InputFile& a, const InputFile& b) {
        return a.path.string() < b.path.string();
    });
    return files;
}

int cmd_ingest(const Options& o) {
    auto files = collect_inputs(o);
    if (files.empty())
        throw ConfigError("no input report files found (use --input DIR or per-format flags)");
    auto map = severity_map(o);
    ingest::ArcanFormat arcan_format{o.delimiter.empty() ? ',' : o.delimiter[0],
                                     o.entity_delimiter.empty() ? ';' : o.entity_delimiter[0]};

    struct FileResult {
        std::vector<ingest::WarningRecord> warnings;
        std::vector<ingest::SmellInstance> smells;
        std::string error;
    };
    std::vector<FileResult> results(files.size());
    util::parallel_for(files.size(), o.jobs, [&](size_t i) {
        const auto& file = files[i];
        try {
            std::string bytes = io::read_file(file.path);
            if (file.tool == "checkstyle") results[i].warnings = ingest::parse_checkstyle(bytes, map);
            else if (file.tool == "pmd") results[i].warnings = ingest::parse_pmd(bytes, map);
            else if (file.tool == "findbugs") results[i].warnings = ingest::parse_findbugs(bytes, map);
            else if (file.tool == "sonarqube") results[i].warnings = ingest::parse_sonarqube(bytes, map);
            else results[i].smells = ingest::parse_arcan(bytes, arcan_format);
        } catch (const Error& e) {
            results[i].error = e.what();
        }
    });

    // Without --keep-going the first failure aborts the run.
    if (!o.keep_going) {
        for (size_t i = 0; i < files.size(); ++i) {
            if (!results[i].error.empty())
                throw MalformedReport(files[i].path.string() + ": " + results[i].error);
        }
    }

    std::map<std::string, std::vector<ingest::WarningRecord>> by_tool;
    std::vector<ingest::SmellInstance> smells;
    json report;
    report["files"] = json::array();
    for (size_t i = 0; i < files.size(); ++i) {
        json entry;
        entry["path"] = files[i].path.string();
        entry["format"] = files[i].tool;
        if (!results[i].error.empty()) {
            entry["status"] = "error";
            entry["error"] = results[i].error;
        } else {
            entry["status"] = "ok";
            entry["records"] = results[i].warnings.size() + results[i].smells.size();
            auto& bucket = by_tool[files[i].tool];
            bucket.insert(bucket.end(), results[i].warnings.begin(), results[i].warnings.end());
            smells.insert(smells.end(), results[i].smells.begin(), results[i].smells.end());
        }
        report["files"].push_back(std::move(entry));
    }

    // Pre-check package derivability so unresolved entities surface early.
    auto cfg = derivation_config(o);
    std::vector<std::string> unresolved;
    for (const auto& [tool, records] : by_tool) {
        for (const auto& rec : records) {
            try {
                if (rec.fq_class) model::derive_package(*rec.fq_class, cfg);
                else model::derive_package(rec.file_path, cfg);
            } catch (const UnresolvablePackage& e) {
                unresolved.push_back(e.what());
            }
        }
    }

    const char* tools[] = {"checkstyle", "pmd", "findbugs", "sonarqube"};
    json counts;
    for (const char* tool : tools) {
        const auto& records = by_tool[tool];
        counts[tool] = records.size();
        io::write_file(dumps_dir(o) / (std::string("warnings_") + tool + ".ndjson"),
                       io::warnings_to_ndjson(records));
    }
    counts["smells"] = smells.size();
    io::write_file(dumps_dir(o) / "smells.ndjson", io::smells_to_ndjson(smells));
    report["counts"] = counts;
    report["unresolved"] = unresolved;
    report["alpha"] = o.alpha;
    report["roots"] = o.roots;
    io::write_file(dumps_dir(o) / "parse_report.json", report.dump(2) + "\n");

    std::cout << "ingest: " << by_tool["checkstyle"].size() << " checkstyle, "
              << by_tool["pmd"].size() << " pmd, " << by_tool["findbugs"].size() << " findbugs, "
              << by_tool["sonarqube"].size() << " sonarqube warnings, " << smells.size()
              << " smells";
    if (!unresolved.empty()) std::cout << ", " << unresolved.size() << " unresolved";
    std::cout << "\n";
    return 0;
}

// --- analyze -----------------------------------------------------------

struct LoadedCorpus {
    std::vector<ingest::WarningRecord> warnings;
    std::vector<ingest::SmellInstance> smells;
};

LoadedCorpus load_dumps(const Options& o) {
    LoadedCorpus corpus;
    const char* tools[] = {"checkstyle", "pmd", "findbugs", "sonarqube"};
    bool any = false;
    for (const char* tool : tools) {
        fs::path path = dumps_dir(o) / (std::string("warnings_") + tool + ".ndjson");
        if (!fs::exists(path)) continue;
        any = true;
        auto records = io::warnings_from_ndjson(io::read_file(path));
        corpus.warnings.insert(corpus.warnings.end(), records.begin(), records.end());
    }
    fs::path smells_path = dumps_dir(o) / "smells.ndjson";
    if (fs::exists(smells_path)) corpus.smells = io::smells_from_ndjson(io::read_file(smells_path));
    if (!any)
        throw ConfigError("no canonical dumps under " + dumps_dir(o).string() +
                          "; run 'satsmell ingest' first");
    return corpus;
}

int cmd_analyze(const Options& o) {
    auto corpus = load_dumps(o);
    auto bands = parse_bands(o.rho_bands);
    auto join = model::build_profiles(corpus.warnings, corpus.smells, derivation_config(o),
                                      /*strict=*/false);
    auto meta = base_metadata(o);
    json report;
    report["unresolved"] = join.unresolved;
    report["profiles"] = join.profiles.size();

    io::write_file(analysis_dir(o) / "profiles.csv",
                   io::metadata_header(meta) + io::profiles_to_csv(join.profiles));
    io::write_file(analysis_dir(o) / "profiles.ndjson", io::profiles_to_ndjson(join.profiles));

    // Normality gate: the per-rule count vectors that feed the correlation.
    // Rank correlation is always used downstream; this records why.
    {
        int tested = 0, non_normal = 0;
        std::string skipped;
        std::set<analysis::RuleKey> rules;
        for (const auto& p : join.profiles)
            for (const auto& [key, count] : p.warning_counts) rules.insert(key);
        for (const auto& rule : rules) {
            std::vector<double> counts;
            counts.reserve(join.profiles.size());
            for (const auto& p : join.profiles) {
                auto it = p.warning_counts.find(rule);
                counts.push_back(it == p.warning_counts.end() ? 0.0
                                                              : static_cast<double>(it->second));
            }
            try {
                ++tested;
                if (stats::anderson_darling(counts).p_value <= o.alpha) ++non_normal;
            } catch (const Error&) {
                --tested;
                skipped += (skipped.empty() ? "" : "; ") + rule.second;
            }
        }
        report["normality"] = {{"tested", tested}, {"non_normal", non_normal}};
        if (!skipped.empty()) report["normality"]["skipped"] = skipped;
    }

    std::vector<analysis::CorrelationCell> cells;
    try {
        auto correlation = analysis::correlation_matrix(join.profiles, o.alpha, o.jobs);
        cells = std::move(correlation.cells);
        report["correlation_skipped"] = correlation.skipped;
    } catch (const InsufficientData& e) {
        report["correlation_error"] = e.what();
        std::cerr << "analyze: correlation skipped: " << e.what() << "\n";
    }
    io::write_file(analysis_dir(o) / "correlation.csv", io::correlation_to_csv(cells, bands, meta));
    io::write_file(analysis_dir(o) / "correlation.json", io::correlation_to_json(cells, bands));

    auto topq = analysis::top_quartile_warnings(cells);
    report["top_quartile_skipped"] = topq.skipped;
    io::write_file(analysis_dir(o) / "top_quartile.csv", io::top_quartile_to_csv(topq, meta));
    io::write_file(analysis_dir(o) / "top_quartile.json", io::top_quartile_to_json(topq));

    auto table = analysis::cooccurrence_table(join.warnings);
    io::write_file(analysis_dir(o) / "cooccurrence.csv", io::cooccurrence_to_csv(table, meta));
    io::write_file(analysis_dir(o) / "cooccurrence.json", io::cooccurrence_to_json(table));

    auto scores = analysis::p_scores(table);
    report["pscore_skipped"] = scores.skipped;
    io::write_file(analysis_dir(o) / "pscores.csv", io::pscores_to_csv(scores.scores, meta));
    io::write_file(analysis_dir(o) / "pscores.json", io::pscores_to_json(scores.scores));

    auto pairing_meta = meta;
    pairing_meta["pairing"] = "rank-matched-by-total-warning-load";
    auto h2 = analysis::h2_battery(table, join.profiles, o.alpha);
    io::write_file(analysis_dir(o) / "h2.csv", io::h2_to_csv(h2, pairing_meta));
    io::write_file(analysis_dir(o) / "h2.json", io::h2_to_json(h2));
    auto h3_meta = meta;
    h3_meta["pairing"] = "rank-matched-rule-combo-shares";
    auto h3 = analysis::h3_battery(table, o.alpha);
    io::write_file(analysis_dir(o) / "h3.csv", io::h3_to_csv(h3, h3_meta));
    io::write_file(analysis_dir(o) / "h3.json", io::h3_to_json(h3));

    io::write_file(analysis_dir(o) / "analysis_report.json", report.dump(2) + "\n");
    std::cout << "analyze: " << join.profiles.size() << " profiles, " << cells.size()
              << " correlation cells, " << h2.size() << " h2 rows, " << h3.size() << " h3 rows\n";
    return 0;
}

// --- rank --------------------------------------------------------------

model::SmellCombo choose_p_combo(const Options& o, const analysis::CooccurrenceTable& table,
                                 const std::vector<analysis::PScore>& scores) {
    if (o.p_combo != "auto") return model::combo_from_string(o.p_combo);
    // Auto: the non-NCO combo with the largest instance mass, smallest mask on
    // ties; NCO when nothing co-occurs.
    std::array<long long, model::kComboCount> mass{};
    for (const auto& [rule, per_combo] : table.counts)
        for (uint8_t m = 0; m < model::kComboCount; ++m) mass[m] += per_combo[m];
    uint8_t best = 0;
    long long best_mass = 0;
    for (uint8_t m = 1; m < model::kComboCount; ++m) {
        if (mass[m] > best_mass) {
            best_mass = mass[m];
            best = m;
        }
    }
    model::SmellCombo combo{best};
    for (const auto& s : scores)
        if (s.combo == combo) return combo;
    return model::SmellCombo{};  // fall back to the NCO ranking
}

int cmd_rank(const Options& o) {
    auto corpus = load_dumps(o);
    fs::path pscores_path = analysis_dir(o) / "pscores.csv";
    if (!fs::exists(pscores_path))
        throw ConfigError("missing " + pscores_path.string() + "; run 'satsmell analyze' first");
    auto scores = io::pscores_from_csv(io::read_file(pscores_path));

    auto join = model::build_profiles(corpus.warnings, corpus.smells, derivation_config(o),
                                      /*strict=*/false);
    if (join.warnings.empty()) throw EmptyRanking("rank: no attributed warnings to rank");
    auto table = analysis::cooccurrence_table(join.warnings);

    std::vector<model::AttributedWarning> unit =
        o.rank_unit == "rule" ? prioritize::collapse_to_rules(join.warnings) : join.warnings;
    prioritize::CutoffMode mode = o.cutoff_mode == "floor" ? prioritize::CutoffMode::Floor
                                                           : prioritize::CutoffMode::Ceiling;

    auto meta = base_metadata(o);
    meta["rank_unit"] = o.rank_unit;
    meta["cutoff_mode"] = o.cutoff_mode;

    auto severity = prioritize::rank_by_severity(unit);
    auto optimal = prioritize::rank_optimal(unit);
    model::SmellCombo p_combo = choose_p_combo(o, table, scores);
    auto p_based = prioritize::rank_by_p(unit, scores, p_combo);
    std::string p_label = "p_" + model::to_string(p_combo);

    io::write_file(rank_dir(o) / "ranking_severity.csv", io::ranking_to_csv(severity, meta));
    io::write_file(rank_dir(o) / "ranking_severity.json", io::ranking_to_json(severity));
    io::write_file(rank_dir(o) / "ranking_optimal.csv", io::ranking_to_csv(optimal, meta));
    io::write_file(rank_dir(o) / "ranking_optimal.json", io::ranking_to_json(optimal));
    io::write_file(rank_dir(o) / ("ranking_" + p_label + ".csv"),
                   io::ranking_to_csv(p_based, meta));
    io::write_file(rank_dir(o) / ("ranking_" + p_label + ".json"), io::ranking_to_json(p_based));

    // Every combo with scores gets its ranking file; reports pick what they need.
    std::set<uint8_t> combos_with_scores;
    for (const auto& s : scores) combos_with_scores.insert(s.combo.mask);
    for (uint8_t mask : combos_with_scores) {
        model::SmellCombo combo{mask};
        if (combo == p_combo) continue;
        auto ranking = prioritize::rank_by_p(unit, scores, combo);
        io::write_file(rank_dir(o) / ("ranking_p_" + model::to_string(combo) + ".csv"),
                       io::ranking_to_csv(ranking, meta));
    }

    std::vector<prioritize::EffortCurve> curves{
        prioritize::effort_curve(severity, "severity", mode),
        prioritize::effort_curve(p_based, p_label, mode),
        prioritize::effort_curve(optimal, "optimal", mode),
    };
    io::write_file(rank_dir(o) / "curves.csv", io::curves_to_csv(curves, meta));
    io::write_file(rank_dir(o) / "curves.json", io::curves_to_plot_json(curves));

    std::string popt_csv = io::metadata_header(meta) + "ranker,popt,degenerate\n";
    auto popt_row = [&](const std::string& name, const std::vector<prioritize::RankedWarning>& r) {
        auto popt = prioritize::popt_area(r);
        char buf[80];
        std::snprintf(buf, sizeof(buf), "%s,%.6f,%d\n", name.c_str(), popt.value,
                      popt.degenerate ? 1 : 0);
        popt_csv += buf;
    };
    popt_row("severity", severity);
    popt_row(p_label, p_based);
    popt_row("optimal", optimal);
    io::write_file(rank_dir(o) / "popt.csv", popt_csv);

    auto h4 = prioritize::compare_rankers(curves, o.alpha);
    io::write_file(rank_dir(o) / "h4.csv", io::h4_to_csv(h4, meta));
    io::write_file(rank_dir(o) / "h4.json", io::h4_to_json(h4));

    std::cout << "rank: " << unit.size() << " entries per ranking, p-ranker combo "
              << model::to_string(p_combo) << "\n";
    return 0;
}

// --- report ------------------------------------------------------------

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int col(const std::string& name) const {
        for (size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        throw MalformedReport("missing column '" + name + "'");
    }
};

CsvTable load_csv(const fs::path& path) {
    CsvTable table;
    for (const auto& line : util::split(io::read_file(path), '\n')) {
        std::string t = util::trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto fields = util::split(t, ',');
        if (table.header.empty()) table.header = fields;
        else table.rows.push_back(fields);
    }
    if (table.header.empty()) throw MalformedReport("empty table: " + path.string());
    return table;
}

int cmd_report(const Options& o) {
    fs::path correlation_path = analysis_dir(o) / "correlation.csv";
    fs::path cooccurrence_path = analysis_dir(o) / "cooccurrence.csv";
    if (!fs::exists(correlation_path) || !fs::exists(cooccurrence_path))
        throw ConfigError("missing analysis outputs under " + analysis_dir(o).string() +
                          "; run 'satsmell analyze' first");

    auto correlation = io::correlation_from_csv(io::read_file(correlation_path));
    auto table = io::cooccurrence_from_csv(io::read_file(cooccurrence_path));

    char line[256];
    std::string out;
    out += "satsmell summary\n";
    out += "================\n\n";

    long long total = 0, nco = 0;
    std::map<std::string, long long> per_tool;
    for (const auto& [rule, per_combo] : table.counts) {
        for (uint8_t m = 0; m < model::kComboCount; ++m) {
            total += per_combo[m];
            if (m == 0) nco += per_combo[m];
            per_tool[ingest::to_string(rule.first)] += per_combo[m];
        }
    }
    std::snprintf(line, sizeof(line), "warnings attributed: %lld\n", total);
    out += line;
    for (const auto& [tool, count] : per_tool) {
        std::snprintf(line, sizeof(line), "  %-10s %lld\n", tool.c_str(), count);
        out += line;
    }
    double nco_pct =
        total > 0 ? 100.0 * static_cast<double>(nco) / static_cast<double>(total) : 0.0;
    std::snprintf(line, sizeof(line), "non-co-occurring warnings: %.2f%% (%lld of %lld)\n\n",
                  nco_pct, nco, total);
    out += line;

    // Correlation overview: band histogram plus the BH rejection rate.
    std::map<std::string, int> bands;
    int rejected = 0;
    for (const auto& row : correlation) {
        bands[row.band] += 1;
        if (row.rejected) ++rejected;
    }
    std::snprintf(line, sizeof(line), "correlation cells: %zu, rejected after BH: %d (%.1f%%)\n",
                  correlation.size(), rejected,
                  correlation.empty() ? 0.0
                                      : 100.0 * rejected / static_cast<double>(correlation.size()));
    out += line;
    std::string histogram_csv = "band,count\n";
    for (const char* band : {"none", "weak", "moderate", "strong", "perfect"}) {
        std::snprintf(line, sizeof(line), "  %-9s %d\n", band, bands[band]);
        out += line;
        histogram_csv += std::string(band) + "," + std::to_string(bands[band]) + "\n";
    }
    out += "\n";

    // Top-5 rules per (tool, smell) by rho.
    out += "top-5 warnings per tool and smell (by rho):\n";
    std::map<std::pair<std::string, std::string>, std::vector<const io::CorrelationRow*>> groups;
    for (const auto& row : correlation)
        groups[{ingest::to_string(row.tool), ingest::to_string(row.smell)}].push_back(&row);
    for (auto& [key, rows] : groups) {
        std::sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) {
            if (a->rho != b->rho) return a->rho > b->rho;
            return a->rule_id < b->rule_id;
        });
        std::snprintf(line, sizeof(line), "  %s vs %s:\n", key.first.c_str(), key.second.c_str());
        out += line;
        for (size_t i = 0; i < rows.size() && i < 5; ++i) {
            std::snprintf(line, sizeof(line), "    %-40s rho=%+.3f q=%.4f %s\n",
                          rows[i]->rule_id.c_str(), rows[i]->rho, rows[i]->q,
                          rows[i]->band.c_str());
            out += line;
        }
    }
    out += "\n";

    // Battery rejection rates from the analyze/rank stages.
    auto battery_line = [&](const char* label, const fs::path& path) {
        if (!fs::exists(path)) return;
        auto csv = load_csv(path);
        int testable_col = csv.col("testable");
        int rejected_col = csv.col("rejected");
        int tested = 0, rej = 0;
        for (const auto& row : csv.rows) {
            if (row[testable_col] == "1") {
                ++tested;
                if (row[rejected_col] == "1") ++rej;
            }
        }
        std::snprintf(line, sizeof(line), "%s: %zu comparisons, %d testable, %d rejected\n", label,
                      csv.rows.size(), tested, rej);
        out += line;
    };
    battery_line("h2 (rule vs smell pair)", analysis_dir(o) / "h2.csv");
    battery_line("h3 (tool pair vs combo)", analysis_dir(o) / "h3.csv");
    battery_line("h4 (ranker pair vs bucket)", rank_dir(o) / "h4.csv");

    // Ranker summary when the rank stage has run.
    fs::path curves_path = rank_dir(o) / "curves.csv";
    if (fs::exists(curves_path)) {
        auto curves = io::curves_from_csv(io::read_file(curves_path));
        out += "\neffort curves (captured at x=50 / x=100):\n";
        bool coincide = true;
        for (const auto& curve : curves) {
            const auto& mid = curve.points[4];
            const auto& last = curve.points[9];
            std::snprintf(line, sizeof(line), "  %-12s M %lld/%lld  H %lld/%lld  C %lld/%lld\n",
                          curve.ranker.c_str(), mid.medium, last.medium, mid.high, last.high,
                          mid.critical, last.critical);
            out += line;
            if (last.medium != curves[0].points[9].medium ||
                last.high != curves[0].points[9].high ||
                last.critical != curves[0].points[9].critical)
                coincide = false;
        }
        out += coincide ? "  x=100 rows coincide across rankers\n"
                        : "  WARNING: x=100 rows differ across rankers\n";
        fs::path popt_path = rank_dir(o) / "popt.csv";
        if (fs::exists(popt_path)) {
            auto popt = load_csv(popt_path);
            for (const auto& row : popt.rows) {
                std::snprintf(line, sizeof(line), "  popt %-12s %s\n", row[0].c_str(),
                              row[1].c_str());
                out += line;
            }
        }
    }

    io::write_file(report_dir(o) / "summary.txt", out);
    io::write_file(report_dir(o) / "band_histogram.csv", histogram_csv);
    std::cout << out;
    return 0;
}

// --- synth -------------------------------------------------------------

synth::PlantSpec preset_spec(const Options& o) {
    synth::PlantSpec spec;
    spec.seed = o.seed;
    spec.n_packages = o.packages;
    auto rule = [&](ingest::SourceTool tool, const char* id, int level, double mean,
                    std::optional<ingest::SmellKind> smell = std::nullopt, double rho = 0.0) {
        synth::RulePlant r;
        r.tool = tool;
        r.rule_id = id;
        r.level = level;
        r.mean = mean;
        r.sigma = 0.75;
        r.target_smell = smell;
        r.target_rho = rho;
        return r;
    };
    using ingest::SmellKind;
    using ingest::SourceTool;
    if (o.preset == "demo") {
        spec.combo_mix = {0.34, 0.22, 0.08, 0.08, 0.10, 0.08, 0.04, 0.06};
        spec.rules = {
            rule(SourceTool::SonarQube, "java:S1118", 5, 6.0, SmellKind::CD, 0.55),
            rule(SourceTool::SonarQube, "java:S125", 2, 9.0),
            rule(SourceTool::SonarQube, "java:S2095", 4, 3.0, SmellKind::HL, 0.45),
            rule(SourceTool::FindBugs, "DMI_EMPTY_DB_PASSWORD", 5, 2.0, SmellKind::CD, 0.5),
            rule(SourceTool::FindBugs, "EQ_COMPARING_CLASS_NAMES", 2, 4.0),
            rule(SourceTool::PMD, "GodClass", 5, 5.0, SmellKind::UD, 0.4),
            rule(SourceTool::PMD, "UnusedLocalVariable", 3, 8.0),
            rule(SourceTool::Checkstyle, "JavadocMethodCheck", 4, 10.0, SmellKind::CD, 0.35),
            rule(SourceTool::Checkstyle, "LineLengthCheck", 3, 12.0),
        };
    } else if (o.preset == "null") {
        spec.combo_mix = {0.3, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1};
        for (int i = 0; i < 8; ++i) {
            std::string id = "rule" + std::to_string(i);
            spec.rules.push_back(
                rule(static_cast<SourceTool>(i % 4), id.c_str(), 2 + i % 3, 5.0));
        }
    } else if (o.preset == "calibration") {
        spec.combo_mix = {0, 1, 0, 0, 0, 0, 0, 0};
        spec.rules = {rule(SourceTool::SonarQube, "planted", 3, 8.0, SmellKind::CD, 0.5)};
    } else if (o.preset == "extreme") {
        spec.combo_mix = {0.5, 0.5, 0, 0, 0, 0, 0, 0};
        auto concentrated = rule(SourceTool::PMD, "cd_only", 4, 6.0);
        concentrated.combo_weights = {0, 1, 0, 0, 0, 0, 0, 0};
        auto clean = rule(SourceTool::FindBugs, "nco_only", 3, 6.0);
        clean.combo_weights = {1, 0, 0, 0, 0, 0, 0, 0};
        spec.rules = {concentrated, clean, rule(SourceTool::SonarQube, "background", 3, 4.0)};
    } else {
        throw ConfigError("unknown preset '" + o.preset + "'");
    }
    return spec;
}

int cmd_synth(const Options& o) {
    synth::PlantSpec spec = o.spec_file.empty()
                                ? preset_spec(o)
                                : synth::PlantSpec::from_json(io::read_file(o.spec_file));
    auto corpus = synth::generate(spec);
    fs::path dir = corpus_dir(o);
    io::write_file(dir / "checkstyle.xml", synth::to_checkstyle_xml(corpus.warnings));
    io::write_file(dir / "pmd.xml", synth::to_pmd_xml(corpus.warnings));
    io::write_file(dir / "findbugs.xml", synth::to_findbugs_xml(corpus.warnings));
    io::write_file(dir / "sonarqube.json", synth::to_sonarqube_json(corpus.warnings));
    io::write_file(dir / "arcan.csv", synth::to_arcan_csv(corpus.smells));
    io::write_file(dir / "warnings.ndjson", io::warnings_to_ndjson(corpus.warnings));
    io::write_file(dir / "smells.ndjson", io::smells_to_ndjson(corpus.smells));
    io::write_file(dir / "plant_spec.json", spec.to_json() + "\n");

    json manifest;
    std::map<std::string, size_t> counts;
    for (const auto& rec : corpus.warnings) counts[ingest::to_string(rec.tool)] += 1;
    manifest["warnings"] = json::object();
    for (const auto& [tool, n] : counts) manifest["warnings"][tool] = n;
    manifest["smells"] = corpus.smells.size();
    manifest["seed"] = spec.seed;
    manifest["n_packages"] = spec.n_packages;
    io::write_file(dir / "manifest.json", manifest.dump(2) + "\n");

    std::cout << "synth: " << corpus.warnings.size() << " warnings, " << corpus.smells.size()
              << " smells -> " << dir.string() << "\n";
    return 0;
}

// --- diag --------------------------------------------------------------

int cmd_diag(const Options& o) {
    auto print_vector = [](const char* label, const std::vector<double>& v) {
        std::printf("%s:", label);
        for (double e : v) std::printf(" %g", e);
        std::printf("\n");
    };
    if (o.diag_test == "spearman") {
        auto x = parse_doubles(o.diag_x, "--x");
        auto y = parse_doubles(o.diag_y, "--y");
        print_vector("x", x);
        print_vector("y", y);
        print_vector("rank(x)", stats::average_ranks(x));
        print_vector("rank(y)", stats::average_ranks(y));
        auto r = stats::spearman_rho(x, y);
        std::printf("rho=%.12g p=%.12g method=%s\n", r.statistic, r.p_value, r.method.c_str());
    } else if (o.diag_test == "wilcoxon") {
        auto x = parse_doubles(o.diag_x, "--x");
        auto y = parse_doubles(o.diag_y, "--y");
        if (x.size() != y.size()) throw ConfigError("--x and --y must have equal length");
        std::vector<double> abs_d;
        for (size_t i = 0; i < x.size(); ++i)
            if (x[i] != y[i]) abs_d.push_back(std::fabs(x[i] - y[i]));
        print_vector("|d| (zeros dropped)", abs_d);
        print_vector("rank(|d|)", stats::average_ranks(abs_d));
        auto r = stats::wilcoxon_signed_rank(x, y);
        std::printf("W=%.12g p=%.12g method=%s\n", r.statistic, r.p_value, r.method.c_str());
    } else if (o.diag_test == "bh") {
        auto p = parse_doubles(o.diag_p, "--p");
        auto rows = stats::bh_adjust(p, o.alpha);
        for (size_t i = 0; i < rows.size(); ++i)
            std::printf("p=%.6g rank=%d q=%.6g rejected=%d\n", rows[i].raw_p, rows[i].rank_index,
                        rows[i].q_value, rows[i].rejected ? 1 : 0);
    } else if (o.diag_test == "ad") {
        auto x = parse_doubles(o.diag_x, "--x");
        auto r = stats::anderson_darling(x);
        std::printf("A*2=%.12g p=%.12g method=%s\n", r.statistic, r.p_value, r.method.c_str());
    } else {
        throw ConfigError("unknown --test '" + o.diag_test + "' (spearman|wilcoxon|bh|ad)");
    }
    return 0;
}

// --- config file ------------------------------------------------------------

// Flat JSON config; CLI flags win, then env vars, then the file.
void apply_config_file(Options& o, const std::string& path) {
    json doc;
    try {
        doc = json::parse(io::read_file(path));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config file: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config file must be a flat JSON object");
    auto str = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    for (auto& [key, value] : doc.items()) {
        if (key == "alpha") o.alpha = value.get<double>();
        else if (key == "dir") o.dir = str(value);
        else if (key == "roots") o.roots = util::split(str(value), ';');
        else if (key == "severity_map") o.severity_map_file = str(value);
        else if (key == "rho_bands") o.rho_bands = str(value);
        else if (key == "cutoff_mode") o.cutoff_mode = str(value);
        else if (key == "rank_unit") o.rank_unit = str(value);
        else if (key == "p_combo") o.p_combo = str(value);
        else if (key == "jobs") o.jobs = value.get<unsigned>();
        else if (key == "deterministic") o.deterministic = value.get<bool>();
        else if (key == "keep_going") o.keep_going = value.get<bool>();
        else if (key == "delimiter") o.delimiter = str(value);
        else if (key == "entity_delimiter") o.entity_delimiter = str(value);
        else if (key == "seed") o.seed = value.get<uint64_t>();
        else if (key == "packages") o.packages = value.get<int>();
        else throw ConfigError("config file: unknown key '" + key + "'");
    }
}

}  // namespace

int main(int argc, char** argv) {
    Options o;

    // The config file must load before option defaults freeze, so scan for it
    // ahead of the CLI11 parse.
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) o.config_file = argv[i + 1];
        else if (arg.rfind("--config=", 0) == 0) o.config_file = arg.substr(9);
    }
    if (o.config_file.empty()) {
        if (const char* env = std::getenv("SATSMELL_CONFIG")) o.config_file = env;
    }
    try {
        if (!o.config_file.empty()) apply_config_file(o, o.config_file);
    } catch (const Error& e) {
        std::cerr << "satsmell: " << e.what() << "\n";
        return 4;
    }

    CLI::App app{"warning/smell correlation, co-occurrence and prioritization toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    app.add_option("--config", o.config_file, "flat JSON config file (CLI flags win)");

    bool dir_from_config = !o.dir.empty();
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", o.config_file, "flat JSON config file (CLI flags win)");
        auto* dir_opt =
            cmd->add_option("-d,--dir", o.dir, "workspace directory")->envname("SATSMELL_DIR");
        if (!dir_from_config && !std::getenv("SATSMELL_DIR")) dir_opt->required();
        cmd->add_option("--alpha", o.alpha, "significance level in (0,1)")
            ->envname("SATSMELL_ALPHA");
        cmd->add_option("--jobs", o.jobs, "worker threads (0 = hardware)")
            ->envname("SATSMELL_JOBS");
        cmd->add_flag("--deterministic", o.deterministic,
                      "omit timestamps so outputs are byte-stable")
            ->envname("SATSMELL_DETERMINISTIC");
    };

    CLI::App* ingest_cmd =
        app.add_subcommand("ingest", "parse native reports into canonical dumps");
    add_common(ingest_cmd);
    ingest_cmd->add_option("--input", o.input, "directory scanned for report files")
        ->envname("SATSMELL_INPUT");
    ingest_cmd->add_option("--checkstyle", o.checkstyle, "Checkstyle report file");
    ingest_cmd->add_option("--pmd", o.pmd, "PMD report file");
    ingest_cmd->add_option("--findbugs", o.findbugs, "FindBugs/SpotBugs report file");
    ingest_cmd->add_option("--sonarqube", o.sonarqube, "SonarQube issue export");
    ingest_cmd->add_option("--arcan", o.arcan, "Arcan smell table");
    ingest_cmd->add_option("--roots", o.roots, "source roots for package derivation")
        ->delimiter(';')
        ->envname("SATSMELL_ROOTS");
    ingest_cmd
        ->add_option("--severity-map", o.severity_map_file,
                     "JSON severity overrides {\"tool.raw\": level}")
        ->envname("SATSMELL_SEVERITY_MAP");
    ingest_cmd->add_flag("--keep-going", o.keep_going, "skip unparseable files, list them");
    ingest_cmd->add_option("--delimiter", o.delimiter, "Arcan column delimiter");
    ingest_cmd->add_option("--entity-delimiter", o.entity_delimiter,
                           "Arcan affected-entities delimiter");

    CLI::App* analyze_cmd =
        app.add_subcommand("analyze", "profiles, correlation, co-occurrence, P, H2/H3");
    add_common(analyze_cmd);
    analyze_cmd->add_option("--roots", o.roots, "source roots for package derivation")
        ->delimiter(';')
        ->envname("SATSMELL_ROOTS");
    analyze_cmd->add_option("--rho-bands", o.rho_bands, "band bounds 'weak_hi,moderate_hi'")
        ->envname("SATSMELL_RHO_BANDS");

    CLI::App* rank_cmd = app.add_subcommand("rank", "rankers, effort curves, Popt, H4");
    add_common(rank_cmd);
    rank_cmd->add_option("--roots", o.roots, "source roots for package derivation")
        ->delimiter(';');
    rank_cmd->add_option("--cutoff-mode", o.cutoff_mode, "ceiling|floor")
        ->check(CLI::IsMember({"ceiling", "floor"}))
        ->envname("SATSMELL_CUTOFF_MODE");
    rank_cmd->add_option("--rank-unit", o.rank_unit, "instance|rule")
        ->check(CLI::IsMember({"instance", "rule"}))
        ->envname("SATSMELL_RANK_UNIT");
    rank_cmd->add_option("--p-combo", o.p_combo, "combo for the P ranking (label or 'auto')");

    CLI::App* report_cmd = app.add_subcommand("report", "human-readable summary");
    add_common(report_cmd);

    CLI::App* synth_cmd = app.add_subcommand("synth", "generate a planted synthetic corpus");
    add_common(synth_cmd);
    synth_cmd->add_option("--spec", o.spec_file, "PlantSpec JSON file");
    synth_cmd->add_option("--seed", o.seed, "generator seed")->envname("SATSMELL_SEED");
    synth_cmd->add_option("--packages", o.packages, "number of packages");
    synth_cmd->add_option("--preset", o.preset, "demo|null|calibration|extreme");

    CLI::App* diag_cmd = app.add_subcommand("diag", "dump a single test's intermediate ranks");
    diag_cmd->add_option("--test", o.diag_test, "spearman|wilcoxon|bh|ad");
    diag_cmd->add_option("--x", o.diag_x, "comma-separated values");
    diag_cmd->add_option("--y", o.diag_y, "comma-separated values");
    diag_cmd->add_option("--p", o.diag_p, "comma-separated p-values (bh)");
    diag_cmd->add_option("--alpha", o.alpha, "significance level");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (!(o.alpha > 0.0 && o.alpha < 1.0))
            throw ConfigError("alpha must be in (0,1), got " + std::to_string(o.alpha));
        if (app.got_subcommand(ingest_cmd)) return cmd_ingest(o);
        if (app.got_subcommand(analyze_cmd)) return cmd_analyze(o);
        if (app.got_subcommand(rank_cmd)) return cmd_rank(o);
        if (app.got_subcommand(report_cmd)) return cmd_report(o);
        if (app.got_subcommand(synth_cmd)) return cmd_synth(o);
        if (app.got_subcommand(diag_cmd)) return cmd_diag(o);
    } catch (const Error& e) {
        std::cerr << "satsmell: " << e.what() << "\n";
        switch (e.category) {
            case ErrorCategory::Parse: return 2;
            case ErrorCategory::Data: return 3;
            case ErrorCategory::Config: return 4;
        }
        return 1;
    }
    return 0;
}
