#include "pdc/config.hpp"

#include <fstream>
#include <set>

#include "pdc/errors.hpp"

namespace pdc {

namespace {

using nlohmann::json;

// Tracks which keys of an object have been consumed; leftovers are errors.
class StrictObject {
public:
    StrictObject(const json& j, std::string path)
        : j_(j)
        , path_(std::move(path))
    {
        if (!j_.is_object()) {
            throw ConfigError("config section '" + path_ + "' must be an object");
        }
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& at(const std::string& key)
    {
        if (!j_.contains(key)) {
            throw ConfigError("missing config key '" + join(key) + "'");
        }
        seen_.insert(key);
        return j_.at(key);
    }

    double number(const std::string& key)
    {
        const json& v = at(key);
        if (!v.is_number()) {
            throw ConfigError("config key '" + join(key) + "' must be a number");
        }
        return v.get<double>();
    }

    double number_or(const std::string& key, double fallback)
    {
        return has(key) ? number(key) : fallback;
    }

    int integer(const std::string& key)
    {
        const json& v = at(key);
        if (!v.is_number_integer()) {
            throw ConfigError("config key '" + join(key) + "' must be an integer");
        }
        return v.get<int>();
    }

    std::string text(const std::string& key)
    {
        const json& v = at(key);
        if (!v.is_string()) {
            throw ConfigError("config key '" + join(key) + "' must be a string");
        }
        return v.get<std::string>();
    }

    std::string join(const std::string& key) const
    {
        return path_.empty() ? key : path_ + "." + key;
    }

    void done() const
    {
        for (const auto& item : j_.items()) {
            if (!seen_.count(item.key())) {
                throw ConfigError("unknown config key '" + join(item.key()) + "'");
            }
        }
    }

    const json& raw() const { return j_; }
    const std::string& path() const { return path_; }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

FilterShape parse_shape(const std::string& s, const std::string& path)
{
    if (s == "top-hat") return FilterShape::TopHat;
    if (s == "gaussian") return FilterShape::Gaussian;
    throw ConfigError("config key '" + path + "' must be \"top-hat\" or \"gaussian\"");
}

std::string shape_name(FilterShape s)
{
    return s == FilterShape::TopHat ? "top-hat" : "gaussian";
}

FilterSpec parse_filter(const json& j, const std::string& path)
{
    StrictObject o(j, path);
    FilterSpec f;
    f.center_nm = o.number("center_nm");
    f.fwhm_nm = o.number("fwhm_nm");
    f.peak_transmission = o.number("peak_transmission");
    f.shape = parse_shape(o.text("shape"), o.join("shape"));
    f.tilt_deg = o.number_or("tilt_deg", 0.0);
    f.effective_index = o.number_or("effective_index", 2.0);
    o.done();
    if (f.fwhm_nm <= 0.0) {
        throw ConfigError("config key '" + path + ".fwhm_nm' must be positive");
    }
    if (f.peak_transmission <= 0.0 || f.peak_transmission > 1.0) {
        throw ConfigError("config key '" + path + ".peak_transmission' must be in (0, 1]");
    }
    if (f.tilt_deg < 0.0 || f.tilt_deg > 45.0) {
        throw ConfigError("config key '" + path + ".tilt_deg' must be in [0, 45]");
    }
    if (f.effective_index <= 1.0) {
        throw ConfigError("config key '" + path + ".effective_index' must exceed 1");
    }
    return f;
}

LossBudget parse_budget(const json& j, const std::string& path)
{
    if (!j.is_array()) {
        throw ConfigError("config key '" + path + "' must be an array");
    }
    LossBudget budget;
    int index = 0;
    for (const json& entry : j) {
        const std::string entry_path = path + "[" + std::to_string(index++) + "]";
        StrictObject o(entry, entry_path);
        LossBudget::Entry e;
        e.label = o.text("label");
        e.transmission = o.number("transmission");
        o.done();
        if (e.transmission <= 0.0 || e.transmission > 1.0) {
            throw ConfigError("config key '" + entry_path + ".transmission' must be in (0, 1]");
        }
        budget.entries.push_back(std::move(e));
    }
    return budget;
}

SellmeierCoeffs parse_coeffs(const json& j, const std::string& path)
{
    if (!j.is_array() || j.size() != 4) {
        throw ConfigError("config key '" + path + "' must be an array of four numbers");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

} // namespace

SellmeierSet ExperimentConfig::sellmeier() const
{
    if (sellmeier_set_id == "bbo-kato-1986") {
        return bbo_kato_1986();
    }
    for (const SellmeierSet& s : extra_sellmeier_sets) {
        if (s.id == sellmeier_set_id) {
            return s;
        }
    }
    throw ConfigError("crystal.sellmeier_set '" + sellmeier_set_id
                      + "' does not resolve to a known coefficient set");
}

const FilterSpec& ExperimentConfig::filter(const std::string& name) const
{
    const auto it = filters.find(name);
    if (it == filters.end()) {
        throw ConfigError("filters." + name + " is required by this subcommand");
    }
    return it->second;
}

ExperimentConfig parse_config(const nlohmann::json& j)
{
    ExperimentConfig c;
    StrictObject root(j, "");

    const int schema = root.integer("schema_version");
    if (schema != 1) {
        throw ConfigError("config key 'schema_version' must be 1");
    }
    c.seed = static_cast<std::uint64_t>(root.at("seed").get<std::uint64_t>());

    {
        StrictObject o(root.at("crystal"), "crystal");
        c.crystal.cut_angle_deg = o.number("cut_angle_deg");
        c.crystal.thickness_mm = o.number("thickness_mm");
        c.sellmeier_set_id = o.text("sellmeier_set");
        o.done();
        if (c.crystal.cut_angle_deg <= 0.0 || c.crystal.cut_angle_deg >= 90.0) {
            throw ConfigError("config key 'crystal.cut_angle_deg' must be in (0, 90)");
        }
        if (c.crystal.thickness_mm <= 0.0) {
            throw ConfigError("config key 'crystal.thickness_mm' must be positive");
        }
    }
    if (root.has("sellmeier_sets")) {
        const json& sets = root.at("sellmeier_sets");
        if (!sets.is_array()) {
            throw ConfigError("config key 'sellmeier_sets' must be an array");
        }
        int index = 0;
        for (const json& entry : sets) {
            const std::string path = "sellmeier_sets[" + std::to_string(index++) + "]";
            StrictObject o(entry, path);
            SellmeierSet s;
            s.id = o.text("id");
            s.ordinary = parse_coeffs(o.at("ordinary"), o.join("ordinary"));
            s.extraordinary = parse_coeffs(o.at("extraordinary"), o.join("extraordinary"));
            const json& range = o.at("valid_range_nm");
            if (!range.is_array() || range.size() != 2) {
                throw ConfigError("config key '" + path + ".valid_range_nm' must be [lo, hi]");
            }
            s.valid_min_nm = range[0].get<double>();
            s.valid_max_nm = range[1].get<double>();
            o.done();
            c.extra_sellmeier_sets.push_back(std::move(s));
        }
    }
    {
        StrictObject o(root.at("pump"), "pump");
        c.pump.center_nm = o.number("center_nm");
        c.pump.duration_fwhm_fs = o.number("duration_fwhm_fs");
        c.pump.repetition_rate_mhz = o.number("repetition_rate_mhz");
        c.pump.average_power_mw = o.number("average_power_mw");
        o.done();
        if (c.pump.center_nm <= 0.0 || c.pump.duration_fwhm_fs <= 0.0
            || c.pump.repetition_rate_mhz <= 0.0 || c.pump.average_power_mw <= 0.0) {
            throw ConfigError("config section 'pump' requires positive values");
        }
    }
    {
        StrictObject o(root.at("geometry"), "geometry");
        c.geometry.lens_focal_length_mm = o.number("lens_focal_length_mm");
        c.geometry.crystal_to_lens_distance_cm = o.number("crystal_to_lens_distance_cm");
        c.geometry.fiber_mode_field_diameter_um = o.number("fiber_mode_field_diameter_um");
        c.geometry.pump_spot_diameter_mm = o.number("pump_spot_diameter_mm");
        c.geometry.wavelength_nm = o.number("wavelength_nm");
        o.done();
    }
    {
        StrictObject o(root.at("window"), "window");
        c.window.center_deg = o.number("center_deg");
        c.window.half_width_deg = o.number("half_width_deg");
        o.done();
        if (c.window.half_width_deg <= 0.0 || c.window.center_deg <= c.window.half_width_deg) {
            throw ConfigError("config section 'window' requires half_width > 0 and center > half_width");
        }
    }
    {
        const json& filters = root.at("filters");
        if (!filters.is_object()) {
            throw ConfigError("config key 'filters' must be an object");
        }
        for (const auto& item : filters.items()) {
            c.filters[item.key()] = parse_filter(item.value(), "filters." + item.key());
        }
    }
    c.budget = parse_budget(root.at("budget"), "budget");
    c.budget_nonfilter = parse_budget(root.at("budget_nonfilter"), "budget_nonfilter");
    c.coupling = root.number("coupling");
    if (c.coupling < 0.0 || c.coupling > 1.0) {
        throw ConfigError("config key 'coupling' must be in [0, 1]");
    }
    {
        StrictObject o(root.at("source"), "source");
        c.source.repetition_rate_mhz = o.number("repetition_rate_mhz");
        c.source.pair_probability_per_pulse = o.number("pair_probability_per_pulse");
        c.source.trigger_path_transmission = o.number("trigger_path_transmission");
        c.source.heralded_path_transmission = o.number("heralded_path_transmission");
        c.source.dark_rate_hz = o.number("dark_rate_hz");
        c.source.coincidence_window_ns = o.number("coincidence_window_ns");
        o.done();
    }
    {
        StrictObject o(root.at("rates"), "rates");
        c.rates.trigger_hz = o.number("trigger_hz");
        c.rates.coincidence_matched_hz = o.number("coincidence_matched_hz");
        c.rates.coincidence_wide_hz = o.number("coincidence_wide_hz");
        o.done();
    }
    {
        StrictObject o(root.at("grid"), "grid");
        c.grid.lo_nm = o.number("lo_nm");
        c.grid.hi_nm = o.number("hi_nm");
        c.grid.samples = o.integer("samples");
        o.done();
    }
    {
        const json& interval = root.at("pump_interval_nm");
        if (!interval.is_array() || interval.size() != 2) {
            throw ConfigError("config key 'pump_interval_nm' must be [lo, hi]");
        }
        c.pump_interval_lo_nm = interval[0].get<double>();
        c.pump_interval_hi_nm = interval[1].get<double>();
        if (c.pump_interval_lo_nm > c.pump_interval_hi_nm) {
            throw ConfigError("config key 'pump_interval_nm' must be ordered");
        }
    }
    {
        StrictObject o(root.at("hom"), "hom");
        c.hom.delay_lo_fs = o.number("delay_lo_fs");
        c.hom.delay_hi_fs = o.number("delay_hi_fs");
        c.hom.delay_samples = o.integer("delay_samples");
        c.hom.wing_pairs_per_bin = o.number("wing_pairs_per_bin");
        c.hom.bin_duration_s = o.number("bin_duration_s");
        o.done();
    }
    {
        StrictObject o(root.at("rt"), "rt");
        c.rt.mode_overlap_factor = o.number("mode_overlap_factor");
        c.rt.mean_photon_number = o.number("mean_photon_number");
        c.rt.coherent_center_nm = o.number("coherent_center_nm");
        c.rt.coherent_duration_fs = o.number("coherent_duration_fs");
        c.rt.delay_lo_fs = o.number("delay_lo_fs");
        c.rt.delay_hi_fs = o.number("delay_hi_fs");
        c.rt.delay_samples = o.integer("delay_samples");
        c.rt.wing_triples_per_bin = o.number("wing_triples_per_bin");
        c.rt.bin_duration_s = o.number("bin_duration_s");
        o.done();
    }
    {
        StrictObject o(root.at("simulate"), "simulate");
        c.simulate_duration_s = o.number("duration_s");
        o.done();
    }
    {
        StrictObject o(root.at("scan"), "scan");
        c.scan.tilt_lo_deg = o.number("tilt_lo_deg");
        c.scan.tilt_hi_deg = o.number("tilt_hi_deg");
        c.scan.steps = o.integer("steps");
        o.done();
    }
    root.done();

    c.sellmeier(); // fail fast if the id does not resolve
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream f(path);
    if (!f) {
        throw ConfigError("cannot read config file: " + path.string());
    }
    json j;
    try {
        f >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

nlohmann::ordered_json to_json(const ExperimentConfig& c)
{
    using ordered = nlohmann::ordered_json;
    ordered j;
    j["schema_version"] = 1;
    j["seed"] = c.seed;
    j["crystal"] = {{"cut_angle_deg", c.crystal.cut_angle_deg},
                    {"thickness_mm", c.crystal.thickness_mm},
                    {"sellmeier_set", c.sellmeier_set_id}};
    if (!c.extra_sellmeier_sets.empty()) {
        ordered sets = ordered::array();
        for (const SellmeierSet& s : c.extra_sellmeier_sets) {
            sets.push_back({{"id", s.id},
                            {"ordinary", {s.ordinary.a, s.ordinary.b, s.ordinary.c, s.ordinary.d}},
                            {"extraordinary",
                             {s.extraordinary.a, s.extraordinary.b, s.extraordinary.c,
                              s.extraordinary.d}},
                            {"valid_range_nm", {s.valid_min_nm, s.valid_max_nm}}});
        }
        j["sellmeier_sets"] = std::move(sets);
    }
    j["pump"] = {{"center_nm", c.pump.center_nm},
                 {"duration_fwhm_fs", c.pump.duration_fwhm_fs},
                 {"repetition_rate_mhz", c.pump.repetition_rate_mhz},
                 {"average_power_mw", c.pump.average_power_mw}};
    j["geometry"] = {{"lens_focal_length_mm", c.geometry.lens_focal_length_mm},
                     {"crystal_to_lens_distance_cm", c.geometry.crystal_to_lens_distance_cm},
                     {"fiber_mode_field_diameter_um", c.geometry.fiber_mode_field_diameter_um},
                     {"pump_spot_diameter_mm", c.geometry.pump_spot_diameter_mm},
                     {"wavelength_nm", c.geometry.wavelength_nm}};
    j["window"] = {{"center_deg", c.window.center_deg},
                   {"half_width_deg", c.window.half_width_deg}};
    ordered filters = ordered::object();
    for (const auto& [name, f] : c.filters) {
        filters[name] = {{"center_nm", f.center_nm},
                         {"fwhm_nm", f.fwhm_nm},
                         {"peak_transmission", f.peak_transmission},
                         {"shape", shape_name(f.shape)},
                         {"tilt_deg", f.tilt_deg},
                         {"effective_index", f.effective_index}};
    }
    j["filters"] = std::move(filters);
    const auto budget_json = [](const LossBudget& b) {
        ordered arr = ordered::array();
        for (const LossBudget::Entry& e : b.entries) {
            arr.push_back({{"label", e.label}, {"transmission", e.transmission}});
        }
        return arr;
    };
    j["budget"] = budget_json(c.budget);
    j["budget_nonfilter"] = budget_json(c.budget_nonfilter);
    j["coupling"] = c.coupling;
    j["source"] = {{"repetition_rate_mhz", c.source.repetition_rate_mhz},
                   {"pair_probability_per_pulse", c.source.pair_probability_per_pulse},
                   {"trigger_path_transmission", c.source.trigger_path_transmission},
                   {"heralded_path_transmission", c.source.heralded_path_transmission},
                   {"dark_rate_hz", c.source.dark_rate_hz},
                   {"coincidence_window_ns", c.source.coincidence_window_ns}};
    j["rates"] = {{"trigger_hz", c.rates.trigger_hz},
                  {"coincidence_matched_hz", c.rates.coincidence_matched_hz},
                  {"coincidence_wide_hz", c.rates.coincidence_wide_hz}};
    j["grid"] = {{"lo_nm", c.grid.lo_nm}, {"hi_nm", c.grid.hi_nm}, {"samples", c.grid.samples}};
    j["pump_interval_nm"] = {c.pump_interval_lo_nm, c.pump_interval_hi_nm};
    j["hom"] = {{"delay_lo_fs", c.hom.delay_lo_fs},
                {"delay_hi_fs", c.hom.delay_hi_fs},
                {"delay_samples", c.hom.delay_samples},
                {"wing_pairs_per_bin", c.hom.wing_pairs_per_bin},
                {"bin_duration_s", c.hom.bin_duration_s}};
    j["rt"] = {{"mode_overlap_factor", c.rt.mode_overlap_factor},
               {"mean_photon_number", c.rt.mean_photon_number},
               {"coherent_center_nm", c.rt.coherent_center_nm},
               {"coherent_duration_fs", c.rt.coherent_duration_fs},
               {"delay_lo_fs", c.rt.delay_lo_fs},
               {"delay_hi_fs", c.rt.delay_hi_fs},
               {"delay_samples", c.rt.delay_samples},
               {"wing_triples_per_bin", c.rt.wing_triples_per_bin},
               {"bin_duration_s", c.rt.bin_duration_s}};
    j["simulate"] = {{"duration_s", c.simulate_duration_s}};
    j["scan"] = {{"tilt_lo_deg", c.scan.tilt_lo_deg},
                 {"tilt_hi_deg", c.scan.tilt_hi_deg},
                 {"steps", c.scan.steps}};
    return j;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b)
{
    return to_json(a) == to_json(b);
}

} // namespace pdc
