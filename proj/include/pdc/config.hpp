#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdc/counting.hpp"
#include "pdc/dispersion.hpp"
#include "pdc/optics.hpp"
#include "pdc/phasematch.hpp"
#include "pdc/spectrum.hpp"

namespace pdc {

struct MeasuredRates {
    double trigger_hz = 3068.0;
    double coincidence_matched_hz = 139.0; // 1 nm analysis filter
    double coincidence_wide_hz = 949.0;    // 10 nm analysis filter
};

struct HomSettings {
    double delay_lo_fs = -600.0;
    double delay_hi_fs = 600.0;
    int delay_samples = 61;
    double wing_pairs_per_bin = 39000.0; // so the wings sit at 19,500 counts
    double bin_duration_s = 10.0;
};

struct RtSettings {
    double mode_overlap_factor = 1.0; // calibrated against the measured dip
    double mean_photon_number = 0.05;
    double coherent_center_nm = 780.0;
    double coherent_duration_fs = 150.0;
    double delay_lo_fs = -600.0;
    double delay_hi_fs = 600.0;
    int delay_samples = 61;
    double wing_triples_per_bin = 600.0;
    double bin_duration_s = 600.0;
};

struct ScanSettings {
    double tilt_lo_deg = 0.0;
    double tilt_hi_deg = 25.0;
    int steps = 126;
};

struct GridSettings {
    double lo_nm = 762.0;
    double hi_nm = 798.0;
    int samples = 361;
};

// Everything a run needs, aggregated from one configuration document.
struct ExperimentConfig {
    std::uint64_t seed = 1;
    CrystalCut crystal;
    std::string sellmeier_set_id = "bbo-kato-1986";
    std::vector<SellmeierSet> extra_sellmeier_sets;
    PumpPulse pump;
    CollectionGeometry geometry;
    AcceptanceWindow window;
    std::map<std::string, FilterSpec> filters;
    LossBudget budget;
    LossBudget budget_nonfilter;
    double coupling = 0.83;
    SourceModel source;
    MeasuredRates rates;
    GridSettings grid;
    double pump_interval_lo_nm = 389.0;
    double pump_interval_hi_nm = 391.0;
    HomSettings hom;
    RtSettings rt;
    double simulate_duration_s = 10.0;
    ScanSettings scan;

    // Resolves the configured Sellmeier id against built-in and extra sets.
    SellmeierSet sellmeier() const;

    // Throws ConfigError naming the missing filter.
    const FilterSpec& filter(const std::string& name) const;
};

// Strict parse: unknown keys are rejected with the offending key named.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const nlohmann::json& j);

// Full echo of the resolved configuration; parse_config(to_json(c)) == c.
nlohmann::ordered_json to_json(const ExperimentConfig& config);

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

} // namespace pdc
