#include "satsmell/model.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "satsmell/errors.hpp"
#include "satsmell/util.hpp"

namespace satsmell::model {

using util::split;
using util::trim;

std::array<SmellCombo, kComboCount> all_combos() {
    std::array<SmellCombo, kComboCount> out;
    for (uint8_t m = 0; m < kComboCount; ++m) out[m] = SmellCombo{m};
    return out;
}

std::string to_string(SmellCombo combo) {
    if (combo.is_nco()) return "NCO";
    std::string out;
    for (SmellKind kind : ingest::kAllSmells) {
        if (!combo.contains(kind)) continue;
        if (!out.empty()) out += '+';
        out += ingest::to_string(kind);
    }
    return out;
}

SmellCombo combo_from_string(std::string_view label) {
    if (label == "NCO") return {};
    SmellCombo combo;
    for (const auto& part : split(label, '+')) combo.add(ingest::smell_from_string(trim(part)));
    return combo;
}

namespace {

bool has_file_extension(std::string_view s) {
    static const std::set<std::string, std::less<>> kExtensions{
        "java", "kt",  "kts",  "scala", "groovy", "jsp",        "class",
        "xml",  "json", "yml", "yaml",  "txt",    "properties", "md",
        "html", "gradle"};
    auto dot = s.rfind('.');
    if (dot == std::string_view::npos) return false;
    return kExtensions.count(util::to_lower(s.substr(dot + 1))) > 0;
}

bool looks_like_path(std::string_view s) {
    return s.find('/') != std::string_view::npos || s.find('\\') != std::string_view::npos ||
           has_file_extension(s);
}

std::string canonicalize(std::string dotted) {
    while (!dotted.empty() && dotted.front() == '.') dotted.erase(dotted.begin());
    while (!dotted.empty() && dotted.back() == '.') dotted.pop_back();
    return dotted;
}

std::string normalize_slashes(std::string_view s) {
    std::string out(s);
    std::replace(out.begin(), out.end(), '\\', '/');
    return out;
}

}  // namespace

PackageId derive_package(std::string_view input, const DerivationConfig& config) {
    std::string entity = trim(input);
    if (entity.empty()) throw UnresolvablePackage("empty entity name");

    if (looks_like_path(entity)) {
        std::string path = normalize_slashes(entity);
        // Strip the longest matching source root; no match behaves like an
        // empty root.
        std::string best_root;
        for (const auto& root : config.source_roots) {
            std::string r = normalize_slashes(root);
            while (!r.empty() && r.back() == '/') r.pop_back();
            std::string prefix = r + "/";
            if (path.rfind(prefix, 0) == 0 && prefix.size() > best_root.size())
                best_root = prefix;
        }
        std::string rest = path.substr(best_root.size());
        auto slash = rest.rfind('/');
        if (slash == std::string::npos)
            throw UnresolvablePackage("no package structure in path '" + std::string(input) + "'");
        std::string pkg = rest.substr(0, slash);
        std::replace(pkg.begin(), pkg.end(), '/', '.');
        pkg = canonicalize(pkg);
        if (pkg.empty())
            throw UnresolvablePackage("path '" + std::string(input) + "' yields an empty package");
        return pkg;
    }

    // FQCN: strip the class part.
    auto segments = split(canonicalize(entity), '.');
    if (segments.size() < 2)
        throw UnresolvablePackage("no dot structure in '" + std::string(input) + "'");
    size_t keep = segments.size() - 1;
    if (config.uppercase_class_convention) {
        // Also strip nested-class segments: cut at the first uppercase-led
        // segment, keeping at least one.
        for (size_t i = 0; i < segments.size(); ++i) {
            if (!segments[i].empty() && std::isupper(static_cast<unsigned char>(segments[i][0]))) {
                keep = i;
                break;
            }
        }
        if (keep == 0 || keep == segments.size()) keep = segments.size() - 1;
    }
    std::vector<std::string> pkg(segments.begin(), segments.begin() + keep);
    return util::join(pkg, ".");
}

int PackageProfile::total_warnings() const {
    int total = 0;
    for (const auto& [key, count] : warning_counts) total += count;
    return total;
}

SmellCombo combo_of(const PackageProfile& profile) {
    SmellCombo combo;
    for (SmellKind kind : ingest::kAllSmells)
        if (profile.smell_present(kind)) combo.add(kind);
    return combo;
}

CorpusJoin build_profiles(const std::vector<WarningRecord>& warnings,
                          const std::vector<SmellInstance>& smells,
                          const DerivationConfig& config, bool strict) {
    CorpusJoin join;
    std::map<PackageId, PackageProfile> by_package;

    auto resolve = [&](std::string_view entity, const std::string& context) -> std::optional<PackageId> {
        try {
            return derive_package(entity, config);
        } catch (const UnresolvablePackage& e) {
            if (strict) throw UnresolvablePackage(context + ": " + e.what());
            join.unresolved.push_back(context + ": " + e.what());
            return std::nullopt;
        }
    };

    for (const auto& smell : smells) {
        // One instance marks each affected package once, even when several of
        // its entities share a package.
        std::set<PackageId> packages;
        for (const auto& entity : smell.affected) {
            std::optional<PackageId> pkg;
            if (smell.granularity == ingest::Granularity::Package) {
                std::string canon = canonicalize(trim(entity));
                if (canon.empty()) continue;
                pkg = canon;
            } else {
                pkg = resolve(entity, std::string("smell ") + ingest::to_string(smell.kind) +
                                          " entity '" + entity + "'");
            }
            if (pkg) packages.insert(*pkg);
        }
        for (const auto& p : packages)
            by_package[p].smell_counts[static_cast<int>(smell.kind)] += 1;
    }

    for (const auto& rec : warnings) {
        std::optional<PackageId> pkg;
        std::string context = std::string(ingest::to_string(rec.tool)) + " warning '" +
                              rec.rule_id + "'";
        if (rec.fq_class) pkg = resolve(*rec.fq_class, context);
        else pkg = resolve(rec.file_path, context);
        if (!pkg) continue;
        by_package[*pkg].warning_counts[{rec.tool, rec.rule_id}] += 1;
        join.warnings.push_back({rec, *pkg, {}});
    }

    join.profiles.reserve(by_package.size());
    for (auto& [pkg, profile] : by_package) {
        profile.package = pkg;
        profile.combo = combo_of(profile);
        join.profiles.push_back(std::move(profile));
    }

    std::map<PackageId, SmellCombo> combo_by_package;
    for (const auto& p : join.profiles) combo_by_package[p.package] = p.combo;
    for (auto& aw : join.warnings) aw.combo = combo_by_package[aw.package];
    return join;
}

}  // namespace satsmell::model
