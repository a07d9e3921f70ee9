#include "fsnse/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <vector>

#include "fsnse/config.hpp"
#include "fsnse/snapshot.hpp"

namespace fsnse::cli {

namespace {

namespace fs = std::filesystem;

std::string timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return std::string(buf);
}

// One pass/fail line per property; tracks the suite verdict.
class PropertyLog {
public:
    PropertyLog(std::ostream& out) : out_(out) {}

    void check(const std::string& name, bool ok, double measured, double bound) {
        char buf[192];
        std::snprintf(buf, sizeof buf, "%s %s (measured %.3e, bound %.3e)\n",
                      ok ? "PASS" : "FAIL", name.c_str(), measured, bound);
        out_ << buf;
        all_ok_ = all_ok_ && ok;
    }
    void skip(const std::string& name, const std::string& why) {
        out_ << "SKIP " << name << " (" << why << ")\n";
    }
    bool all_ok() const { return all_ok_; }

private:
    std::ostream& out_;
    bool all_ok_ = true;
};

void verify_identities(PropertyLog& log, std::uint64_t seed) {
    const int n = 8;
    const int trials = 100;

    double leray_idem = 0, commute = 0, lap = 0, curl_bs = 0, divfree = 0, conj = 0;
    double b_null = 0, b_antisym = 0, b_h1 = 0, curl_adv = 0, stokes_pair = 0;
    for (int t = 0; t < trials; ++t) {
        const SpectralField v = gaussian_random_field(n, 2, 2.5, seed, 10 * t, false);
        const SpectralField u = gaussian_random_field(n, 2, 2.5, seed, 10 * t + 1, true);
        const SpectralField w = gaussian_random_field(n, 2, 2.5, seed, 10 * t + 2, true);
        const double vn = l2_norm(v), un = l2_norm(u), wn = l2_norm(w);

        const SpectralField pv = leray_project(v);
        leray_idem = std::max(leray_idem, l2_norm(leray_project(pv) - pv) / vn);
        divfree = std::max(divfree, pv.divergence_defect() / std::max(pv.max_abs(), 1e-300));
        conj = std::max(conj, pv.conjugate_symmetry_defect() / std::max(pv.max_abs(), 1e-300));

        const double alpha = 1.3;
        commute = std::max(commute,
                           l2_norm(leray_project(apply_fractional_stokes(v, alpha)) -
                                   apply_fractional_stokes(leray_project(v), alpha)) / vn);

        // alpha = 2 multiplier against the direct minus-Laplacian scaling
        SpectralField lap_direct = v;
        for (std::size_t i = 0; i < v.mode_count(); ++i) {
            const double k2 = mode_norm2(v.lattice().mode_at(i));
            for (int c = 0; c < 2; ++c) lap_direct.at(i, c) = k2 * v.at(i, c);
        }
        lap = std::max(lap, l2_norm(apply_fractional_stokes(v, 2.0) - lap_direct) / vn);

        const SpectralField theta = curl2d(u);
        curl_bs = std::max(curl_bs, l2_norm(curl2d(biot_savart(theta)) - theta) /
                                        std::max(l2_norm(theta), 1e-300));

        // trilinear identities on divergence-free fields
        const double scale_uvv = un * l2_norm(w) * l2_norm(w);
        b_null = std::max(b_null, std::abs(trilinear_form(u, w, w)) / scale_uvv);
        const SpectralField z = gaussian_random_field(n, 2, 2.5, seed, 10 * t + 3, true);
        b_antisym = std::max(b_antisym, std::abs(trilinear_form(u, w, z) +
                                                 trilinear_form(u, z, w)) /
                                            (un * wn * l2_norm(z)));

        // <B(u), u> in the H^{1,2} pairing vanishes on the 2-torus
        const SpectralField bu = nonlinear_term(u, u, u.lattice());
        double h1pair = 0.0;
        for (std::size_t i = 0; i < u.mode_count(); ++i) {
            const double k2 = mode_norm2(u.lattice().mode_at(i));
            for (int c = 0; c < 2; ++c)
                h1pair += k2 * (bu.at(i, c) * std::conj(u.at(i, c))).real();
        }
        const double h1u = sobolev_norm(u, SobolevIndex(1.0, 2.0));
        b_h1 = std::max(b_h1, std::abs(h1pair) * (2 * M_PI) * (2 * M_PI) / (h1u * h1u * un));

        // curl B(u) = u . grad theta, both with exact convolutions
        const WavenumberLattice full(2 * n);
        const SpectralField curl_b = curl2d(nonlinear_term(u, u, full));
        SpectralField adv(full, 1);
        for (int j = 0; j < 2; ++j) {
            SpectralField uj(u.lattice(), 1), dth = theta;
            for (std::size_t i = 0; i < u.mode_count(); ++i) uj.at(i, 0) = u.at(i, j);
            for (std::size_t i = 0; i < theta.mode_count(); ++i) {
                const Mode k = theta.lattice().mode_at(i);
                dth.at(i, 0) = Complex(0.0, double(k[j])) * theta.at(i, 0);
            }
            adv += dealiased_pointwise_product(uj, dth, full);
        }
        curl_adv = std::max(curl_adv, l2_norm(curl_b - adv) / std::max(l2_norm(adv), 1e-300));

        // <u, A_alpha u>_{H^{1,2}} = |u|^2_{H^{1+alpha/2,2}}
        const SpectralField au = apply_fractional_stokes(u, alpha);
        double pair_h1 = 0.0;
        for (std::size_t i = 0; i < u.mode_count(); ++i) {
            const double k2 = mode_norm2(u.lattice().mode_at(i));
            for (int c = 0; c < 2; ++c)
                pair_h1 += k2 * (au.at(i, c) * std::conj(u.at(i, c))).real();
        }
        pair_h1 *= (2 * M_PI) * (2 * M_PI);
        const double hnorm = sobolev_norm(u, SobolevIndex(1.0 + 0.5 * alpha, 2.0));
        stokes_pair =
            std::max(stokes_pair, std::abs(pair_h1 - hnorm * hnorm) / (hnorm * hnorm));
    }

    log.check("leray_idempotence", leray_idem <= 1e-12, leray_idem, 1e-12);
    log.check("leray_output_divergence_free", divfree <= 1e-12, divfree, 1e-12);
    log.check("leray_output_conjugate_symmetric", conj <= 1e-12, conj, 1e-12);
    log.check("leray_stokes_commutation", commute <= 1e-12, commute, 1e-12);
    log.check("alpha2_equals_minus_laplacian", lap <= 1e-12, lap, 1e-12);
    log.check("curl_biot_savart_identity", curl_bs <= 1e-12, curl_bs, 1e-12);
    log.check("trilinear_null_buvv", b_null <= 1e-10, b_null, 1e-10);
    log.check("trilinear_antisymmetry", b_antisym <= 1e-10, b_antisym, 1e-10);
    log.check("bilinear_h1_pairing_vanishes", b_h1 <= 1e-10, b_h1, 1e-10);
    log.check("curl_nonlinearity_equals_advection", curl_adv <= 1e-12, curl_adv, 1e-12);
    log.check("stokes_pairing_norm_identity", stokes_pair <= 1e-12, stokes_pair, 1e-12);
}

void verify_inequalities(PropertyLog& log, std::uint64_t seed, double alpha) {
    struct Entry {
        EstimateId id;
        double eta;
    };
    const std::vector<Entry> catalog = {
        {EstimateId::B_L2, 0.0},         {EstimateId::B_Hneg, 0.0},
        {EstimateId::Gelfand, 0.0},      {EstimateId::Gelfand, 1.0},
        {EstimateId::B_H1Classical, 0.0}, {EstimateId::TrilinearInterp, 0.0},
    };
    for (const auto& entry : catalog) {
        EstimateParams params;
        params.alpha = alpha;
        params.eta = entry.eta;
        std::string name = estimate_name(entry.id);
        if (entry.id == EstimateId::Gelfand) name += "_eta" + std::to_string(int(entry.eta));
        const std::string bad = estimate_validity_violation(entry.id, params);
        if (!bad.empty()) {
            log.skip(name, bad + "; alpha = " + std::to_string(alpha) + " outside validity");
            continue;
        }
        const RatioReport r4 = sample_inequality_ratio(entry.id, 200, 4, 2.5, seed, params);
        const RatioReport r16 = sample_inequality_ratio(entry.id, 200, 16, 2.5, seed, params);
        const double growth = r16.max_ratio / r4.max_ratio;
        log.check(name + "_ratio_stable_n4_to_n16", growth <= 1.2, growth, 1.2);
    }
}

void verify_coupling(PropertyLog& log, std::uint64_t seed) {
    SimConfig cfg;
    cfg.diss = FractionalDissipation(1.5, 1.0);
    cfg.level = 8;
    cfg.dt = 1e-3;
    cfg.horizon = 0.2;
    cfg.noise.enabled = true;
    cfg.noise.kind = DiffusionKind::Additive;
    cfg.noise.gamma_q = 2.5;
    cfg.noise.seed = seed;
    cfg.initial.kind = InitialKind::TaylorGreen;

    const SpectralField u0 = taylor_green(cfg.level);
    auto same = coupled_pair_run(cfg, u0, u0);
    double dmax = 0.0;
    for (const auto& [t, d] : same) dmax = std::max(dmax, d);
    log.check("coupling_identical_data_zero_distance", dmax <= 1e-13, dmax, 1e-13);

    SpectralField u0p = u0;
    u0p.set_mode_pair({2, 1}, 0, u0p.coeff({2, 1}, 0) + Complex(1e-8, 0.0));
    auto pert = coupled_pair_run(cfg, u0, leray_project(u0p));
    double pmax = 0.0;
    for (const auto& [t, d] : pert) pmax = std::max(pmax, d);
    log.check("coupling_small_perturbation_bounded", pmax <= 1e-4, pmax, 1e-4);

    // A perturbation outside the retained lattice is annihilated by projection.
    SpectralField u0h = u0.embedded(cfg.level + 3);
    u0h.set_mode_pair({cfg.level + 2, 0}, 1, Complex(0.3, 0.1));
    auto killed = coupled_pair_run(cfg, u0, u0h.truncated(cfg.level));
    double kmax = 0.0;
    for (const auto& [t, d] : killed) kmax = std::max(kmax, d);
    log.check("coupling_removed_mode_exact_zero", kmax <= 1e-15, kmax, 1e-15);
}

void verify_convergence(PropertyLog& log, std::uint64_t seed) {
    SimConfig cfg;
    cfg.diss = FractionalDissipation(1.6, 0.05);
    cfg.dt = 2e-3;
    cfg.horizon = 0.25;
    cfg.initial.kind = InitialKind::Random;
    cfg.initial.decay = 2.5;
    cfg.initial.seed = seed;
    cfg.initial.bandwidth = 3;
    cfg.initial.amplitude = 1.0;
    cfg.record_stride = 1000000;
    cfg.level = 16;

    const ConvergenceTable spatial = galerkin_convergence(cfg, {4, 8, 16}, {});
    bool decreasing = spatial.spatial.size() == 2 &&
                      spatial.spatial[0].second > spatial.spatial[1].second &&
                      spatial.spatial[1].second > 0.0;
    log.check("spatial_errors_strictly_decreasing", decreasing,
              spatial.spatial.empty() ? 0.0 : spatial.spatial.back().second, 0.0);

    SimConfig tcfg = cfg;
    tcfg.level = 8;
    const ConvergenceTable temporal =
        galerkin_convergence(tcfg, {}, {4e-3, 2e-3, 1e-3, 5e-4, 2.5e-4});
    const bool order_ok = std::abs(temporal.temporal_order - 1.0) <= 0.15;
    log.check("deterministic_temporal_order_near_1", order_ok, temporal.temporal_order, 1.0);
}

} // namespace

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = parse_config_file(opts.config_path);
        if (opts.seed) cfg.sim.noise.seed = *opts.seed;
        if (opts.snapshots_every) cfg.sim.snapshot_every = *opts.snapshots_every;
        validate(cfg.sim);
    } catch (const std::exception& e) {
        err << "config error: " << e.what() << "\n";
        return 1;
    }

    RunManifest manifest;
    manifest.artifact_version = ARTIFACT_VERSION;
    manifest.seed = cfg.sim.noise.seed;
    manifest.config_echo = render_config(cfg);
    manifest.started_at = timestamp();

    fs::create_directories(opts.out_dir);
    const std::string csv_path = (fs::path(opts.out_dir) / "trajectory.csv").string();

    const fs::path snapdir = fs::path(opts.out_dir) / "snapshots";
    RunResult result;
    std::vector<std::string> snapshot_files;
    RecordHook hook;
    if (cfg.sim.snapshot_every > 0) {
        fs::create_directories(snapdir);
        const int every = cfg.sim.snapshot_every;
        hook = [&, every](const SolverState& st, const DiagnosticsRecord&, std::size_t idx) {
            if (idx % std::size_t(every) != 0) return;
            char name[64];
            if (st.u) {
                std::snprintf(name, sizeof name, "u_%06zu.fsns", idx);
                const std::string p = (snapdir / name).string();
                save_snapshot(*st.u, p);
                snapshot_files.push_back(p);
            }
            if (st.theta) {
                std::snprintf(name, sizeof name, "theta_%06zu.fsns", idx);
                const std::string p = (snapdir / name).string();
                save_snapshot(*st.theta, p);
                snapshot_files.push_back(p);
            }
        };
    }
    try {
        result = run(cfg.sim, 0, hook);
    } catch (const SolverOverflow& e) {
        err << "overflow: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "config error: " << e.what() << "\n";
        return 1;
    }

    {
        std::ofstream csv(csv_path, std::ios::binary);
        csv << csv_header() << "\n";
        for (const auto& r : result.trajectory) csv << csv_line(r) << "\n";
    }
    manifest.outputs.push_back(csv_path);
    for (const auto& p : snapshot_files) manifest.outputs.push_back(p);

    if (result.final_state.stopped) manifest.stopping_time = result.final_state.tau;
    manifest.finished_at = timestamp();

    const std::string manifest_path = (fs::path(opts.out_dir) / "manifest.txt").string();
    std::ofstream mf(manifest_path, std::ios::binary);
    mf << manifest.to_text();

    out << "wrote " << csv_path << " (" << result.trajectory.size() << " records)\n";
    if (result.final_state.stopped)
        out << "stopped at tau = " << result.final_state.tau << " (monitor norm exceeded)\n";
    return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, double alpha, std::ostream& out,
               std::ostream& err) {
    PropertyLog log(out);
    try {
        if (suite == "identities" || suite == "all") verify_identities(log, seed);
        if (suite == "inequalities" || suite == "all") verify_inequalities(log, seed, alpha);
        if (suite == "coupling" || suite == "all") verify_coupling(log, seed);
        if (suite == "convergence" || suite == "all") verify_convergence(log, seed);
        if (suite != "identities" && suite != "inequalities" && suite != "coupling" &&
            suite != "convergence" && suite != "all") {
            err << "unknown suite '" << suite
                << "' (known: identities, inequalities, coupling, convergence, all)\n";
            return 1;
        }
    } catch (const std::exception& e) {
        err << "verification error: " << e.what() << "\n";
        return 3;
    }
    return log.all_ok() ? 0 : 3;
}

int cmd_converge(const RunOptions& opts, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = parse_config_file(opts.config_path);
        if (opts.seed) cfg.sim.noise.seed = *opts.seed;
        validate(cfg.sim);
        if (cfg.study.levels.empty() && cfg.study.dts.empty())
            throw ConfigError("study.levels: a convergence study needs levels and/or dts");
    } catch (const std::exception& e) {
        err << "config error: " << e.what() << "\n";
        return 1;
    }

    fs::create_directories(opts.out_dir);
    try {
        const ConvergenceTable table =
            galerkin_convergence(cfg.sim, cfg.study.levels, cfg.study.dts);
        out << table.to_text();
        std::ofstream tf((fs::path(opts.out_dir) / "convergence.txt").string());
        tf << table.to_text();

        if (cfg.sim.noise.enabled && cfg.study.paths > 0 && !cfg.study.levels.empty()) {
            const MomentReport report = moment_bound_study(
                cfg.sim, cfg.study.paths, cfg.study.p, cfg.study.levels, cfg.study.threads);
            out << report.to_text();
            std::ofstream mf((fs::path(opts.out_dir) / "moments.txt").string());
            mf << report.to_text();
        }
    } catch (const SolverOverflow& e) {
        err << "overflow: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "config error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

int cmd_info(const std::string& config_path, std::ostream& out, std::ostream& err) {
    out << "fsnse " << ARTIFACT_VERSION
        << " - pseudo-spectral fractional stochastic Navier-Stokes on the 2D torus\n";
    if (config_path.empty()) return 0;
    try {
        const RunConfig cfg = parse_config_file(config_path);
        validate(cfg.sim);
        const char* regime = "classical";
        switch (cfg.sim.diss.regime()) {
            case DissipationRegime::Subcritical: regime = "subcritical"; break;
            case DissipationRegime::Critical: regime = "critical"; break;
            case DissipationRegime::Supercritical: regime = "supercritical"; break;
            case DissipationRegime::Classical: regime = "classical"; break;
        }
        out << "alpha = " << cfg.sim.diss.alpha << " (" << regime << " regime), nu = "
            << cfg.sim.diss.nu << "\n";
        out << "level n = " << cfg.sim.level << " ("
            << WavenumberLattice(cfg.sim.level).size() << " modes, square truncation)\n";
        out << "dt = " << cfg.sim.dt << ", T = " << cfg.sim.horizon << ", steps = "
            << cfg.sim.step_count() << "\n";
        out << "monitor: H^{" << cfg.sim.effective_monitor_beta() << ",2}, threshold "
            << cfg.sim.blowup_threshold << "\n";
        if (cfg.sim.diss.alpha * cfg.sim.bkm_q > 4.0)
            out << "gradient-integrability exponent (q=" << cfg.sim.bkm_q
                << "): " << bkm_exponent(cfg.sim.diss.alpha, 2, cfg.sim.bkm_q) << "\n";
        else
            out << "gradient-integrability exponent: gated (needs alpha q > 4)\n";
        if (3.0 * cfg.sim.diss.alpha > 4.0) {
            const auto [te, so] = serrin_exponent(cfg.sim.diss.alpha, 2);
            out << "mixed-integrability exponents: time " << te << ", space order " << so << "\n";
        } else {
            out << "mixed-integrability exponents: gated (needs alpha > 4/3)\n";
        }
    } catch (const std::exception& e) {
        err << "config error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace fsnse::cli
