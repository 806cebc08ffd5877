#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdc/optics.hpp"
#include "pdc/spectrum.hpp"

namespace pdc {

// Ordered labeled transmissions of the heralded-photon analysis zone.
struct LossBudget {
    struct Entry {
        std::string label;
        double transmission = 1.0; // in (0, 1]
    };
    std::vector<Entry> entries;

    double product() const;
};

// eta_D = R_c / R_1. Throws std::invalid_argument for R_1 <= 0 or R_c > R_1.
double conditional_efficiency(double coincidence_rate_hz, double trigger_rate_hz);

// H = eta_D / product(budget). Throws SuperUnityHeraldingError when eta_D
// exceeds the budget product.
double heralding_efficiency(double conditional_eff, const LossBudget& budget);

// Model prediction of eta_D for a given heralded-arm filter:
//   eta_D = coupling * prod(budget_nonfilter) * integral S(l) T_F2(l) dl,
// where T_F2 carries the filter's own peak transmission and budget_nonfilter
// must therefore exclude it.
double predicted_conditional_efficiency(const Spectrum& marginal, const FilterSpec& f2,
                                        const LossBudget& budget_nonfilter, double coupling);

// Pulsed-source Monte Carlo parameters.
struct SourceModel {
    double repetition_rate_mhz = 76.0;
    double pair_probability_per_pulse = 1e-4;
    double trigger_path_transmission = 0.404;
    double heralded_path_transmission = 0.31;
    double dark_rate_hz = 100.0; // per detector
    double coincidence_window_ns = 5.0;
};

struct CountRecord {
    double duration_s = 0.0;
    std::uint64_t trigger_counts = 0;  // detector D1
    std::uint64_t heralded_counts = 0; // detector D2
    std::uint64_t coincidences = 0;
    std::uint64_t accidental_estimate = 0; // delayed-window method
    std::uint64_t seed = 0;
};

// Per-pulse Bernoulli pair creation, independent path-survival thinning,
// window-gated dark counts, per-pulse-slot coincidence counting. Bit-identical
// for a fixed seed.
CountRecord simulate_counts(const SourceModel& model, double duration_s, std::uint64_t seed);

} // namespace pdc
