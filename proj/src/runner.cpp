#include "pdc/runner.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "pdc/counting.hpp"
#include "pdc/errors.hpp"
#include "pdc/interference.hpp"
#include "pdc/io.hpp"
#include "pdc/numeric.hpp"
#include "pdc/version.hpp"

namespace pdc {

namespace {

namespace fs = std::filesystem;
using ordered = nlohmann::ordered_json;

int scaled_samples(int samples, double scale)
{
    const int n = 1 + static_cast<int>(std::lround((samples - 1) * scale));
    return std::max(n, 2);
}

ordered artifact_header(const std::string& subcommand, const ExperimentConfig& cfg)
{
    ordered j;
    j["schema_version"] = kSchemaVersion;
    j["tool_version"] = kToolVersion;
    j["subcommand"] = subcommand;
    j["config"] = to_json(cfg);
    return j;
}

void write_json(const fs::path& path, const ordered& j)
{
    write_text(path, j.dump(2) + "\n");
}

GridSpec interval_grid_spec(const ExperimentConfig& cfg, double grid_scale)
{
    // Interval pump + hard window: the bandwidth-tailoring illustration style.
    GridSpec spec;
    spec.lo_nm = cfg.grid.lo_nm;
    spec.hi_nm = cfg.grid.hi_nm;
    spec.samples = scaled_samples(cfg.grid.samples, grid_scale);
    spec.pump_model = PumpEnvelopeModel::Interval;
    spec.pump_interval_lo_nm = cfg.pump_interval_lo_nm;
    spec.pump_interval_hi_nm = cfg.pump_interval_hi_nm;
    spec.angular_model = AngularWeightModel::HardWindow;
    return spec;
}

GridSpec physical_grid_spec(const ExperimentConfig& cfg, double grid_scale)
{
    // Transform-limited pump + smooth fiber-overlap weights: the physical
    // model used for interference quantities.
    GridSpec spec;
    spec.lo_nm = cfg.grid.lo_nm;
    spec.hi_nm = cfg.grid.hi_nm;
    spec.samples = scaled_samples(cfg.grid.samples, grid_scale);
    spec.pump_model = PumpEnvelopeModel::TransformLimited;
    spec.angular_model = AngularWeightModel::OverlapProfile;
    return spec;
}

void run_tuning_curve(const ExperimentConfig& cfg, const fs::path& out, double grid_scale)
{
    const SellmeierSet set = cfg.sellmeier();
    const int samples = scaled_samples(201, grid_scale);
    std::vector<double> pump_col, signal_col, external_col, internal_col;
    ordered meta = artifact_header("tuning-curve", cfg);
    ordered per_pump = ordered::array();
    for (const double offset : {-1.0, 0.0, 1.0}) {
        const double pump = cfg.pump.center_nm + offset;
        const TuningCurve curve = tuning_curve(pump, cfg.crystal, 680.0, 880.0, samples, set);
        for (const TuningCurvePoint& p : curve.points) {
            pump_col.push_back(pump);
            signal_col.push_back(p.signal_nm);
            external_col.push_back(p.external_deg);
            internal_col.push_back(p.internal_deg);
        }
        per_pump.push_back({{"pump_nm", pump},
                            {"points", curve.points.size()},
                            {"skipped", curve.skipped}});
    }
    write_csv(out / "tuning_curves.csv", "tuning_curve.v1",
              {{"pump_nm", &pump_col},
               {"signal_nm", &signal_col},
               {"external_deg", &external_col},
               {"internal_deg", &internal_col}});
    meta["cut_angle_deg"] = cfg.crystal.cut_angle_deg;
    meta["sellmeier_set"] = set.id;
    meta["curves"] = std::move(per_pump);
    meta["recovered_cut_angle_deg"] =
        solve_degenerate_cut_angle(cfg.pump.center_nm, cfg.window.center_deg, set);
    write_json(out / "tuning_curves.json", meta);
}

void run_acceptance(const ExperimentConfig& cfg, const fs::path& out)
{
    const BackPropagatedMode mode = back_propagate_fiber_mode(cfg.geometry);
    ordered j = artifact_header("acceptance", cfg);
    j["back_propagated_waist_um"] = mode.waist_radius_um;
    j["fiber_to_lens_distance_mm"] = mode.fiber_to_lens_distance_mm;
    j["acceptance_full_width_deg"] = acceptance_angle(cfg.geometry);
    j["acceptance_e2_half_width_deg"] = acceptance_e2_half_width(cfg.geometry);
    j["window_full_spread_deg"] = 2.0 * cfg.window.half_width_deg;
    write_json(out / "acceptance.json", j);
}

ordered marginal_report(const Spectrum& s)
{
    return {{"fwhm_nm", fwhm(s)}, {"bandwidth_nm", bandwidth(s)}};
}

void write_spectrum_csv(const fs::path& path, const std::string& schema, const Spectrum& s)
{
    write_csv(path, schema, {{"heralded_nm", &s.axis_nm}, {"density_per_nm", &s.density}});
}

void write_scan_csv(const fs::path& path, const std::vector<ScanPoint>& trace, double mirror_nm)
{
    std::vector<double> center, rate, mirrored_center;
    for (const ScanPoint& p : trace) {
        center.push_back(p.center_nm);
        rate.push_back(p.rate);
        mirrored_center.push_back(2.0 * mirror_nm - p.center_nm);
    }
    write_csv(path, "spectrometer_scan.v1",
              {{"center_nm", &center}, {"rate", &rate}, {"mirrored_center_nm", &mirrored_center}});
}

void run_spectrum(const ExperimentConfig& cfg, const fs::path& out, double grid_scale)
{
    const SellmeierSet set = cfg.sellmeier();
    const SpectralGrid grid = build_joint_spectrum(cfg.pump, cfg.crystal, cfg.window,
                                                   cfg.geometry, set,
                                                   interval_grid_spec(cfg, grid_scale));

    const FilterSpec& f1_wide = cfg.filter("F1_wide");
    const FilterSpec& f1_narrow = cfg.filter("F1_narrow");
    const FilterSpec& scan_filter = cfg.filter("F2_scan");

    const Spectrum wide = heralded_marginal(grid, f1_wide);
    const Spectrum narrow = heralded_marginal(grid, f1_narrow);
    write_spectrum_csv(out / "marginal_f1_wide.csv", "heralded_marginal.v1", wide);
    write_spectrum_csv(out / "marginal_f1_narrow.csv", "heralded_marginal.v1", narrow);

    const auto trace_wide = spectrometer_scan(wide, scan_filter, cfg.scan.tilt_lo_deg,
                                              cfg.scan.tilt_hi_deg, cfg.scan.steps);
    const auto trace_narrow = spectrometer_scan(narrow, scan_filter, cfg.scan.tilt_lo_deg,
                                                cfg.scan.tilt_hi_deg, cfg.scan.steps);
    write_scan_csv(out / "scan_f1_wide.csv", trace_wide, scan_filter.center_nm);
    write_scan_csv(out / "scan_f1_narrow.csv", trace_narrow, scan_filter.center_nm);

    // Long-form |f|^2 for plotting the joint spectrum.
    {
        std::vector<double> t_col, h_col, w_col;
        const int n = static_cast<int>(grid.trigger_axis_nm.size());
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double w = std::norm(grid.amplitude(i, j));
                if (w == 0.0) continue;
                t_col.push_back(grid.trigger_axis_nm[static_cast<std::size_t>(i)]);
                h_col.push_back(grid.heralded_axis_nm[static_cast<std::size_t>(j)]);
                w_col.push_back(w);
            }
        }
        write_csv(out / "joint_spectrum.csv", "joint_spectrum.v1",
                  {{"trigger_nm", &t_col}, {"heralded_nm", &h_col}, {"weight", &w_col}});
    }

    const AcceptedSet accepted_wide =
        accepted_photon_set(cfg.pump_interval_lo_nm, cfg.pump_interval_hi_nm, f1_wide,
                            cfg.window, cfg.crystal, set);
    const AcceptedSet accepted_narrow =
        accepted_photon_set(cfg.pump_interval_lo_nm, cfg.pump_interval_hi_nm, f1_narrow,
                            cfg.window, cfg.crystal, set);

    ordered j = artifact_header("spectrum", cfg);
    j["grid"] = {{"samples", static_cast<int>(grid.trigger_axis_nm.size())},
                 {"spacing_nm", grid.spacing_nm()},
                 {"norm", grid.norm}};
    j["marginal_f1_wide"] = marginal_report(wide);
    j["marginal_f1_narrow"] = marginal_report(narrow);
    j["accepted_f1_wide"] = {{"heralded_lo_nm", accepted_wide.heralded_lo_nm},
                             {"heralded_hi_nm", accepted_wide.heralded_hi_nm},
                             {"width_nm",
                              accepted_wide.heralded_hi_nm - accepted_wide.heralded_lo_nm}};
    j["accepted_f1_narrow"] = {{"heralded_lo_nm", accepted_narrow.heralded_lo_nm},
                               {"heralded_hi_nm", accepted_narrow.heralded_hi_nm},
                               {"width_nm",
                                accepted_narrow.heralded_hi_nm - accepted_narrow.heralded_lo_nm}};
    write_json(out / "spectrum.json", j);
}

void run_budget(const ExperimentConfig& cfg, const fs::path& out, double grid_scale)
{
    const SellmeierSet set = cfg.sellmeier();
    const double eta_matched =
        conditional_efficiency(cfg.rates.coincidence_matched_hz, cfg.rates.trigger_hz);
    const double eta_wide =
        conditional_efficiency(cfg.rates.coincidence_wide_hz, cfg.rates.trigger_hz);
    const double heralding = heralding_efficiency(eta_wide, cfg.budget);

    const SpectralGrid grid = build_joint_spectrum(cfg.pump, cfg.crystal, cfg.window,
                                                   cfg.geometry, set,
                                                   interval_grid_spec(cfg, grid_scale));
    const Spectrum narrow = heralded_marginal(grid, cfg.filter("F1_narrow"));
    const double pred_narrow = predicted_conditional_efficiency(
        narrow, cfg.filter("F2_narrow"), cfg.budget_nonfilter, cfg.coupling);
    const double pred_wide = predicted_conditional_efficiency(
        narrow, cfg.filter("F2_wide"), cfg.budget_nonfilter, cfg.coupling);

    ordered j = artifact_header("budget", cfg);
    j["formula"] = "eta_D = R_c / R_1; H = eta_D / product(budget); "
                   "eta_D_predicted = coupling * product(budget_nonfilter) * "
                   "integral(S(l) T_F2(l) dl)";
    j["conditional_efficiency_matched"] = eta_matched;
    j["conditional_efficiency_wide"] = eta_wide;
    j["budget_product"] = cfg.budget.product();
    j["heralding_efficiency"] = heralding;
    j["heralding_efficiency_percent"] = 100.0 * heralding;
    j["predicted_conditional_efficiency_narrow"] = pred_narrow;
    j["predicted_conditional_efficiency_wide"] = pred_wide;
    j["predicted_ratio_narrow_over_wide"] = pred_narrow / pred_wide;
    j["measured_ratio_narrow_over_wide"] = eta_matched / eta_wide;
    write_json(out / "budget.json", j);
}

void write_dip_csv(const fs::path& path, const DipTrace& trace)
{
    std::vector<double> delay_um;
    delay_um.reserve(trace.delays.size());
    for (const double fs_delay : trace.delays) {
        delay_um.push_back(fs_delay * kSpeedOfLightNmPerFs * 1e-3); // path length in air
    }
    write_csv(path, "dip_trace.v1",
              {{"delay_fs", &trace.delays}, {"counts", &trace.counts},
               {"delay_um_path", &delay_um}});
}

ordered fit_report(const DipFit& fit)
{
    return {{"visibility", fit.visibility},   {"center", fit.center},
            {"width_sigma", fit.width_sigma}, {"baseline", fit.baseline},
            {"residual_norm", fit.residual_norm}, {"converged", fit.converged},
            {"width_identifiable", fit.width_identifiable}};
}

void run_hom(const ExperimentConfig& cfg, const fs::path& out, double grid_scale)
{
    const SellmeierSet set = cfg.sellmeier();
    const SpectralGrid grid = build_joint_spectrum(cfg.pump, cfg.crystal, cfg.window,
                                                   cfg.geometry, set,
                                                   physical_grid_spec(cfg, grid_scale));
    const std::vector<double> delays =
        linspace(cfg.hom.delay_lo_fs, cfg.hom.delay_hi_fs, cfg.hom.delay_samples);
    const DipTrace trace = hom_dip(grid, cfg.filter("F2_smooth"), cfg.filter("F3_smooth"),
                                   delays, cfg.hom.wing_pairs_per_bin, cfg.hom.bin_duration_s);
    write_dip_csv(out / "hom_dip.csv", trace);

    const DipFit fit = fit_gaussian_dip(trace);
    const double wings = 0.5 * cfg.hom.wing_pairs_per_bin;
    const double center = *std::min_element(trace.counts.begin(), trace.counts.end());
    ordered j = artifact_header("hom", cfg);
    j["wing_counts"] = wings;
    j["center_counts"] = center;
    j["visibility"] = (wings - center) / wings;
    j["fit"] = fit_report(fit);
    write_json(out / "hom_dip.json", j);
}

void run_rt(const ExperimentConfig& cfg, const fs::path& out, double grid_scale)
{
    const SellmeierSet set = cfg.sellmeier();
    SpectralGrid grid = build_joint_spectrum(cfg.pump, cfg.crystal, cfg.window, cfg.geometry,
                                             set, physical_grid_spec(cfg, grid_scale));
    grid = apply_heralded_filter(grid, cfg.filter("F2_smooth"));
    const SpectralDensityOp rho = heralded_density_op(grid, cfg.filter("F1_smooth"));
    const CoherentMode mode =
        coherent_pulse_mode(cfg.rt.coherent_center_nm, cfg.rt.coherent_duration_fs,
                            cfg.filter("F3_smooth"), rho.axis_nm);

    const std::vector<double> delays =
        linspace(cfg.rt.delay_lo_fs, cfg.rt.delay_hi_fs, cfg.rt.delay_samples);
    const DipTrace trace = rt_dip(rho, mode, cfg.rt.mean_photon_number,
                                  cfg.rt.mode_overlap_factor, delays,
                                  cfg.rt.wing_triples_per_bin, cfg.rt.bin_duration_s);
    write_dip_csv(out / "rt_dip.csv", trace);

    const DipFit fit = fit_gaussian_dip(trace);
    ordered j = artifact_header("rt", cfg);
    j["spectral_overlap"] = rt_visibility(rho, mode, 1.0);
    j["mode_overlap_factor"] = cfg.rt.mode_overlap_factor;
    j["visibility_zero_delay"] = rt_visibility(rho, mode, cfg.rt.mode_overlap_factor);
    j["heralded_purity"] = rho.purity;
    j["fit"] = fit_report(fit);
    write_json(out / "rt_dip.json", j);
}

void run_simulate(const ExperimentConfig& cfg, const fs::path& out, std::uint64_t seed)
{
    const CountRecord rec = simulate_counts(cfg.source, cfg.simulate_duration_s, seed);
    ordered j = artifact_header("simulate", cfg);
    j["record"] = {{"duration_s", rec.duration_s},
                   {"trigger_counts", rec.trigger_counts},
                   {"heralded_counts", rec.heralded_counts},
                   {"coincidences", rec.coincidences},
                   {"accidental_estimate", rec.accidental_estimate},
                   {"seed", rec.seed}};
    j["rates_hz"] = {{"trigger", rec.trigger_counts / rec.duration_s},
                     {"heralded", rec.heralded_counts / rec.duration_s},
                     {"coincidence", rec.coincidences / rec.duration_s}};
    j["empirical_conditional_efficiency"] =
        rec.trigger_counts > 0
            ? static_cast<double>(rec.coincidences) / static_cast<double>(rec.trigger_counts)
            : 0.0;
    write_json(out / "counts.json", j);
}

} // namespace

int run_subcommand(const std::string& subcommand, const ExperimentConfig& base_config,
                   const std::filesystem::path& out_dir, const RunOptions& options)
{
    ExperimentConfig cfg = base_config;
    if (options.seed_override) {
        cfg.seed = *options.seed_override;
    }
    try {
        fs::create_directories(out_dir);
        if (subcommand == "tuning-curve") {
            run_tuning_curve(cfg, out_dir, options.grid_scale);
        } else if (subcommand == "acceptance") {
            run_acceptance(cfg, out_dir);
        } else if (subcommand == "spectrum") {
            run_spectrum(cfg, out_dir, options.grid_scale);
        } else if (subcommand == "budget") {
            run_budget(cfg, out_dir, options.grid_scale);
        } else if (subcommand == "hom") {
            run_hom(cfg, out_dir, options.grid_scale);
        } else if (subcommand == "rt") {
            run_rt(cfg, out_dir, options.grid_scale);
        } else if (subcommand == "simulate") {
            run_simulate(cfg, out_dir, cfg.seed);
        } else {
            throw std::invalid_argument("unknown subcommand: " + subcommand);
        }
    } catch (const std::exception& e) {
        ordered err;
        err["schema_version"] = kSchemaVersion;
        err["tool_version"] = kToolVersion;
        err["subcommand"] = subcommand;
        err["error"] = e.what();
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (!ec) {
            try {
                write_json(out_dir / "error.json", err);
            } catch (...) {
                // stderr still carries the message
            }
        }
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

int run_subcommand(const std::string& subcommand, const std::filesystem::path& config_path,
                   const std::filesystem::path& out_dir, const RunOptions& options)
{
    ExperimentConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return run_subcommand(subcommand, cfg, out_dir, options);
}

} // namespace pdc
