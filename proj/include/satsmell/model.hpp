#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "satsmell/ingest.hpp"

namespace satsmell::model {

using ingest::SmellInstance;
using ingest::SmellKind;
using ingest::SourceTool;
using ingest::WarningRecord;

// Subset of {CD, UD, HL} as a bitmask; the empty subset is NCO.
struct SmellCombo {
    uint8_t mask = 0;

    static constexpr uint8_t bit(SmellKind kind) { return uint8_t{1} << static_cast<int>(kind); }

    bool contains(SmellKind kind) const { return mask & bit(kind); }
    void add(SmellKind kind) { mask |= bit(kind); }
    bool is_nco() const { return mask == 0; }

    auto operator<=>(const SmellCombo&) const = default;
};

constexpr int kComboCount = 8;

// All 8 combos in mask order: NCO, CD, UD, CD+UD, HL, CD+HL, UD+HL, CD+UD+HL.
std::array<SmellCombo, kComboCount> all_combos();

std::string to_string(SmellCombo combo);
SmellCombo combo_from_string(std::string_view label);

// Dotted package name; canonical (non-empty, no path separators, no
// leading/trailing dots).
using PackageId = std::string;

struct Packageresolution;

struct DerivationConfig {
    std::vector<std::string> source_roots;
    // Treat dotted segments starting with an uppercase letter as class names
    // when stripping an FQCN down to its package.
    bool uppercase_class_convention = true;
};

// Maps a file path or fully qualified class name onto its package.
// Throws UnresolvablePackage when no root matches and no dot structure exists.
PackageId derive_package(std::string_view file_path_or_fqcn, const DerivationConfig& config);

struct PackageProfile {
    PackageId package;
    std::map<std::pair<SourceTool, std::string>, int> warning_counts;  // (tool, rule) -> count
    std::array<int, 3> smell_counts{0, 0, 0};                          // per SmellKind instance count
    SmellCombo combo;

    int smell_count(SmellKind kind) const { return smell_counts[static_cast<int>(kind)]; }
    bool smell_present(SmellKind kind) const { return smell_count(kind) > 0; }
    int total_warnings() const;
};

// Pure function of the smells present: the subset, or NCO when empty.
SmellCombo combo_of(const PackageProfile& profile);

// One warning instance with its package attribution and the package's combo.
struct AttributedWarning {
    WarningRecord record;
    PackageId package;
    SmellCombo combo;
};

struct CorpusJoin {
    std::vector<PackageProfile> profiles;          // sorted by package id
    std::vector<AttributedWarning> warnings;       // input order preserved
    std::vector<std::string> unresolved;           // entities that failed derivation (with reason)
};

// Joins warnings and smells at package granularity. Class-granularity smells
// are attributed to the enclosing package; package-granularity smells mark
// presence in each affected package. Packages with neither warnings nor
// smells do not appear. Throws UnresolvablePackage only in strict mode;
// otherwise failures are reported in `unresolved` and the record is skipped.
CorpusJoin build_profiles(const std::vector<WarningRecord>& warnings,
                          const std::vector<SmellInstance>& smells,
                          const DerivationConfig& config, bool strict = true);

}  // namespace satsmell::model
