#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "satsmell/analysis.hpp"
#include "satsmell/ingest.hpp"
#include "satsmell/model.hpp"

namespace satsmell::synth {

using ingest::SmellInstance;
using ingest::SmellKind;
using ingest::SourceTool;
using ingest::WarningRecord;

struct RulePlant {
    SourceTool tool = SourceTool::SonarQube;
    std::string rule_id;
    int level = 3;        // normalized severity 1..5
    double mean = 8.0;    // count-scale of the lognormal-quantized marginal
    double sigma = 0.75;
    std::optional<SmellKind> target_smell;
    double target_rho = 0.0;  // in [-1, 1]; +-1 switches to deterministic coupling
    std::array<double, model::kComboCount> combo_weights{1, 1, 1, 1, 1, 1, 1, 1};
};

struct PlantSpec {
    uint64_t seed = 1;
    int n_packages = 100;
    std::vector<RulePlant> rules;
    // Distribution over the 8 combos in mask order (NCO first); must sum to 1.
    std::array<double, model::kComboCount> combo_mix{1, 0, 0, 0, 0, 0, 0, 0};
    std::array<double, 3> smell_mean{4.0, 4.0, 4.0};
    std::array<double, 3> smell_sigma{0.6, 0.6, 0.6};
    std::string package_prefix = "org.synth";

    void validate() const;  // throws InvalidSpec
    static PlantSpec from_json(std::string_view text);
    std::string to_json() const;
};

struct Corpus {
    std::vector<WarningRecord> warnings;
    std::vector<SmellInstance> smells;
};

// Deterministic for a seed: mt19937_64 with a fixed draw order, uniform and
// normal variates derived in-house so corpora are identical across platforms.
// Planted rank correlation uses a Gaussian-copula coupling (latent Pearson
// r = 2 sin(pi * rho / 6)) quantized to nonnegative counts.
Corpus generate(const PlantSpec& spec);

// Independent brute-force recount of warning-instance combos; must equal
// analysis::cooccurrence_table on the same corpus exactly.
analysis::CooccurrenceTable oracle_counts(const std::vector<WarningRecord>& warnings,
                                          const std::vector<SmellInstance>& smells,
                                          const model::DerivationConfig& config);

// Native-format emission so parsers can be exercised end to end.
std::string to_checkstyle_xml(const std::vector<WarningRecord>& warnings);
std::string to_pmd_xml(const std::vector<WarningRecord>& warnings);
std::string to_findbugs_xml(const std::vector<WarningRecord>& warnings);
std::string to_sonarqube_json(const std::vector<WarningRecord>& warnings);
std::string to_arcan_csv(const std::vector<SmellInstance>& smells,
                         const ingest::ArcanFormat& format = {});

}  // namespace satsmell::synth
