#include "pdc/counting.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "pdc/errors.hpp"

namespace pdc {

double LossBudget::product() const
{
    double p = 1.0;
    for (const Entry& e : entries) {
        if (e.transmission <= 0.0 || e.transmission > 1.0) {
            throw std::invalid_argument("loss budget entry '" + e.label
                                        + "' must have transmission in (0, 1]");
        }
        p *= e.transmission;
    }
    return p;
}

double conditional_efficiency(double coincidence_rate_hz, double trigger_rate_hz)
{
    if (trigger_rate_hz <= 0.0) {
        throw std::invalid_argument("conditional_efficiency: trigger rate must be positive");
    }
    if (coincidence_rate_hz < 0.0 || coincidence_rate_hz > trigger_rate_hz) {
        throw std::invalid_argument(
            "conditional_efficiency: coincidence rate must lie in [0, trigger rate]");
    }
    return coincidence_rate_hz / trigger_rate_hz;
}

double heralding_efficiency(double conditional_eff, const LossBudget& budget)
{
    const double p = budget.product();
    if (conditional_eff > p) {
        std::ostringstream msg;
        msg << "heralding_efficiency: eta_D = " << conditional_eff
            << " exceeds the budget product " << p << " (super-unity heralding)";
        throw SuperUnityHeraldingError(msg.str());
    }
    return conditional_eff / p;
}

double predicted_conditional_efficiency(const Spectrum& marginal, const FilterSpec& f2,
                                        const LossBudget& budget_nonfilter, double coupling)
{
    if (coupling < 0.0 || coupling > 1.0) {
        throw std::invalid_argument("predicted_conditional_efficiency: coupling must be in [0, 1]");
    }
    const double dl = marginal.axis_nm[1] - marginal.axis_nm[0];
    double acceptance = 0.0;
    for (std::size_t i = 0; i < marginal.axis_nm.size(); ++i) {
        acceptance += marginal.density[i] * filter_transmission(f2, marginal.axis_nm[i]);
    }
    acceptance *= dl;
    return coupling * budget_nonfilter.product() * acceptance;
}

namespace {

// Deterministic geometric skip: pulses until the next success of a Bernoulli
// process with probability p. Returns UINT64_MAX for p == 0.
class SlotSampler {
public:
    SlotSampler(std::mt19937_64& rng, double p)
        : rng_(rng)
        , log1mp_(p > 0.0 ? std::log1p(-p) : 0.0)
        , p_(p)
    {
    }

    std::uint64_t next_gap()
    {
        if (p_ <= 0.0) {
            return UINT64_MAX;
        }
        if (p_ >= 1.0) {
            return 1;
        }
        const double u = uniform();
        const double g = std::floor(std::log(u) / log1mp_);
        if (g >= 9.0e18) {
            return UINT64_MAX;
        }
        return static_cast<std::uint64_t>(g) + 1;
    }

    double uniform()
    {
        // (0, 1]: avoids log(0)
        return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
    }

private:
    std::mt19937_64& rng_;
    double log1mp_;
    double p_;
};

std::vector<std::uint64_t> bernoulli_slots(std::mt19937_64& rng, double p, std::uint64_t n_slots)
{
    std::vector<std::uint64_t> slots;
    SlotSampler sampler(rng, p);
    std::uint64_t pos = 0;
    while (true) {
        const std::uint64_t gap = sampler.next_gap();
        if (gap == UINT64_MAX || n_slots - pos < gap) {
            break;
        }
        pos += gap;
        slots.push_back(pos - 1);
    }
    return slots;
}

std::uint64_t count_matches(const std::vector<std::uint64_t>& a,
                            const std::vector<std::uint64_t>& b, std::uint64_t offset_b)
{
    std::uint64_t matches = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const std::uint64_t bj = b[j] + offset_b;
        if (a[i] == bj) {
            ++matches;
            ++i;
            ++j;
        } else if (a[i] < bj) {
            ++i;
        } else {
            ++j;
        }
    }
    return matches;
}

std::vector<std::uint64_t> merge_unique(std::vector<std::uint64_t> a,
                                        const std::vector<std::uint64_t>& b)
{
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

} // namespace

CountRecord simulate_counts(const SourceModel& model, double duration_s, std::uint64_t seed)
{
    if (duration_s <= 0.0) {
        throw std::invalid_argument("simulate_counts: duration must be positive");
    }
    if (model.pair_probability_per_pulse < 0.0 || model.pair_probability_per_pulse > 1.0
        || model.trigger_path_transmission < 0.0 || model.trigger_path_transmission > 1.0
        || model.heralded_path_transmission < 0.0 || model.heralded_path_transmission > 1.0) {
        throw std::invalid_argument("simulate_counts: probabilities must lie in [0, 1]");
    }
    if (model.coincidence_window_ns <= 0.0) {
        throw std::invalid_argument("simulate_counts: coincidence window must be positive");
    }

    const std::uint64_t n_slots =
        static_cast<std::uint64_t>(std::llround(model.repetition_rate_mhz * 1e6 * duration_s));
    // A dark count lands in a slot's gate window with probability rate * window.
    const double p_dark = model.dark_rate_hz * model.coincidence_window_ns * 1e-9;

    std::mt19937_64 rng(seed);
    SlotSampler thinning(rng, 0.0);

    // Pair-creation slots, then independent path survival per pair.
    const std::vector<std::uint64_t> pair_slots =
        bernoulli_slots(rng, model.pair_probability_per_pulse, n_slots);
    std::vector<std::uint64_t> trigger_pairs;
    std::vector<std::uint64_t> heralded_pairs;
    trigger_pairs.reserve(pair_slots.size());
    heralded_pairs.reserve(pair_slots.size());
    for (const std::uint64_t slot : pair_slots) {
        const bool trig = thinning.uniform() <= model.trigger_path_transmission;
        const bool herald = thinning.uniform() <= model.heralded_path_transmission;
        if (trig) trigger_pairs.push_back(slot);
        if (herald) heralded_pairs.push_back(slot);
    }

    const std::vector<std::uint64_t> dark1 = bernoulli_slots(rng, p_dark, n_slots);
    const std::vector<std::uint64_t> dark2 = bernoulli_slots(rng, p_dark, n_slots);

    const std::vector<std::uint64_t> trigger_slots = merge_unique(std::move(trigger_pairs), dark1);
    const std::vector<std::uint64_t> heralded_slots =
        merge_unique(std::move(heralded_pairs), dark2);

    CountRecord rec;
    rec.duration_s = duration_s;
    rec.seed = seed;
    rec.trigger_counts = trigger_slots.size();
    rec.heralded_counts = heralded_slots.size();
    rec.coincidences = count_matches(trigger_slots, heralded_slots, 0);
    rec.accidental_estimate = count_matches(trigger_slots, heralded_slots, 1);
    return rec;
}

} // namespace pdc
