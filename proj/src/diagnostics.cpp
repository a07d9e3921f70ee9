#include "fsnse/diagnostics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <thread>

#include "fsnse/solver.hpp"

namespace fsnse {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

// Runs fn(i) for i in [0, count) on up to `threads` workers; each item writes
// its own result slot, so the aggregate is independent of scheduling.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    int hw = int(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    int nt = threads > 0 ? threads : hw;
    nt = std::min<int>(nt, int(count));
    if (nt <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<std::size_t> cursor{0};
    for (int t = 0; t < nt; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = cursor.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    for (auto& th : pool) th.join();
}

std::pair<double, double> mean_and_se(const std::vector<double>& xs) {
    const double n = double(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    if (xs.size() < 2) return {mean, 0.0};
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= (n - 1.0);
    return {mean, std::sqrt(var / n)};
}

} // namespace

double bkm_exponent(double alpha, int d, double q) {
    if (!(alpha * q > 2.0 * d))
        throw std::invalid_argument("bkm_exponent: requires alpha*q > 2d (alpha=" +
                                    std::to_string(alpha) + ", d=" + std::to_string(d) +
                                    ", q=" + std::to_string(q) + ")");
    return 1.0 / (1.0 - 2.0 * d / (alpha * q));
}

std::pair<double, double> serrin_exponent(double alpha, int d) {
    if (!(3.0 * alpha - d - 2.0 > 0.0))
        throw std::invalid_argument("serrin_exponent: requires alpha > (d+2)/3 (alpha=" +
                                    std::to_string(alpha) + ", d=" + std::to_string(d) + ")");
    return {4.0 * alpha / (3.0 * alpha - d - 2.0), (d + 2.0 - alpha) / 4.0};
}

DiagnosticsRecord accumulate_record(const DiagnosticsRecord& prev, const SpectralField& u,
                                    double t, bool stopped, const FractionalDissipation& diss,
                                    double bkm_q, double dt, double vv_defect) {
    if (t < prev.t)
        throw std::invalid_argument("accumulate_record: time must be monotone (" +
                                    std::to_string(t) + " < " + std::to_string(prev.t) + ")");
    DiagnosticsRecord r;
    r.t = t;
    const auto [e, ens] = energy_enstrophy(u);
    r.e = e;
    r.enstrophy = ens;
    r.h_alpha2 = sobolev_norm(u, SobolevIndex(0.5 * diss.alpha, 2.0));
    r.h_serrin = sobolev_norm(u, SobolevIndex((2.0 + 2.0 - diss.alpha) / 4.0, 2.0));
    r.grad_lq = grad_lq_norm(u, bkm_q);
    r.stopped = stopped;
    r.vv_defect = vv_defect;

    // Left-endpoint quadrature of the time integrals; the integrand uses the
    // previous record's norms.  Gated exponents leave the accumulator at nan.
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const bool bkm_valid = diss.alpha * bkm_q > 4.0;
    const bool ser_valid = 3.0 * diss.alpha - 4.0 > 0.0;
    if (!bkm_valid)
        r.bkm_acc = nan;
    else if (dt <= 0.0)
        r.bkm_acc = prev.bkm_acc;
    else
        r.bkm_acc = prev.bkm_acc + dt * std::pow(prev.grad_lq, bkm_exponent(diss.alpha, 2, bkm_q));
    if (!ser_valid)
        r.serrin_acc = nan;
    else if (dt <= 0.0)
        r.serrin_acc = prev.serrin_acc;
    else
        r.serrin_acc =
            prev.serrin_acc + dt * std::pow(prev.h_serrin, serrin_exponent(diss.alpha, 2).first);
    return r;
}

std::string csv_header() {
    return "t,e,enstrophy,h_alpha2,h_serrin,grad_lq,bkm_acc,serrin_acc,stopped,vv_defect";
}

std::string csv_line(const DiagnosticsRecord& r) {
    std::ostringstream os;
    os << fmt(r.t) << ',' << fmt(r.e) << ',' << fmt(r.enstrophy) << ',' << fmt(r.h_alpha2) << ','
       << fmt(r.h_serrin) << ',' << fmt(r.grad_lq) << ',' << fmt(r.bkm_acc) << ','
       << fmt(r.serrin_acc) << ',' << (r.stopped ? 1 : 0) << ',' << fmt(r.vv_defect);
    return os.str();
}

std::string MomentReport::to_text() const {
    std::ostringstream os;
    os << "# moment bound study: p=" << p << " paths=" << paths << "\n";
    os << "# n  E_sup_Hp  se  E_dissipation  se\n";
    for (const auto& l : levels) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%4d  %.8e  %.3e  %.8e  %.3e\n", l.n, l.sup_moment,
                      l.sup_moment_se, l.dissipation, l.dissipation_se);
        os << buf;
    }
    os << "# uniformly_bounded_across_levels: " << (uniformly_bounded ? "yes" : "no") << "\n";
    return os.str();
}

MomentReport moment_bound_study(const SimConfig& cfg, int paths, int p,
                                const std::vector<int>& levels, int threads) {
    if (p != 2 && p != 4)
        throw std::invalid_argument("moment_bound_study: p must be 2 or 4, got " +
                                    std::to_string(p));
    if (paths < 1) throw std::invalid_argument("moment_bound_study: paths must be >= 1");
    if (levels.empty()) throw std::invalid_argument("moment_bound_study: empty level list");

    MomentReport report;
    report.p = p;
    report.paths = paths;

    for (int n : levels) {
        SimConfig c = cfg;
        c.level = n;
        validate(c);
        const SobolevIndex h1(1.0, 2.0);
        const SobolevIndex hdiss(1.0 + 0.5 * c.diss.alpha, 2.0);
        std::vector<double> sups(paths), diss(paths);
        parallel_for(std::size_t(paths), threads, [&](std::size_t i) {
            SolverState st;
            st.u = make_initial(c);
            const NoisePath path{c.noise.seed, std::uint64_t(i)};
            std::optional<CovarianceSpectrum> spectrum;
            if (c.noise.enabled) spectrum = c.noise.spectrum(c.level);

            double sup_h1 = sobolev_norm(*st.u, h1);
            double dint = 0.0;
            const std::size_t nsteps = c.step_count();
            for (std::size_t s = 0; s < nsteps && !st.stopped; ++s) {
                const double hd = sobolev_norm(*st.u, hdiss);
                dint += c.dt * hd * hd; // left endpoint
                const SpectralField dw =
                    c.noise.enabled ? wiener_increment(path, c.level, *spectrum, c.dt, s)
                                    : SpectralField::vector(c.level);
                st = step_velocity(st, c, dw);
                sup_h1 = std::max(sup_h1, sobolev_norm(*st.u, h1));
            }
            sups[i] = std::pow(sup_h1, double(p));
            diss[i] = dint;
        });
        auto [ms, ses] = mean_and_se(sups);
        auto [md, sed] = mean_and_se(diss);
        report.levels.push_back({n, ms, ses, md, sed});
    }

    for (std::size_t i = 1; i < report.levels.size(); ++i) {
        const auto& a = report.levels[i - 1];
        const auto& b = report.levels[i];
        const double comb = std::sqrt(a.sup_moment_se * a.sup_moment_se +
                                      b.sup_moment_se * b.sup_moment_se);
        if (b.sup_moment > a.sup_moment + 3.0 * comb) report.uniformly_bounded = false;
    }
    return report;
}

std::string ConvergenceTable::to_text() const {
    std::ostringstream os;
    if (!spatial.empty()) {
        os << "# spatial self-convergence, reference n=" << spatial_reference << "\n";
        os << "# n  |u_n(T)-u_ref(T)|_L2\n";
        for (const auto& [n, err] : spatial) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "%4d  %.8e\n", n, err);
            os << buf;
        }
    }
    if (!temporal.empty()) {
        os << "# temporal self-convergence, reference dt=" << fmt(temporal_reference) << "\n";
        os << "# dt  |u_dt(T)-u_ref(T)|_L2\n";
        for (const auto& [dt, err] : temporal) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "%.6e  %.8e\n", dt, err);
            os << buf;
        }
        os << "# fitted_temporal_order (vs dt - dt_ref): " << fmt(temporal_order) << "\n";
    }
    return os.str();
}

namespace {

// March the velocity form at level n consuming increments aggregated from a
// fine Brownian grid, so every dt in the study sees the same path.
SpectralField march_velocity_common_path(const SimConfig& cfg, double dt, double dt_fine,
                                         std::size_t fine_per_step, std::size_t nsteps) {
    SimConfig c = cfg;
    c.dt = dt;
    SolverState st;
    st.u = make_initial(c);
    const NoisePath path{cfg.noise.seed, 0};
    std::optional<CovarianceSpectrum> spectrum;
    if (cfg.noise.enabled) spectrum = cfg.noise.spectrum(c.level);

    for (std::size_t s = 0; s < nsteps && !st.stopped; ++s) {
        SpectralField dw = SpectralField::vector(c.level);
        if (cfg.noise.enabled)
            for (std::size_t f = 0; f < fine_per_step; ++f)
                dw += wiener_increment(path, c.level, *spectrum, dt_fine, s * fine_per_step + f);
        st = step_velocity(st, c, dw);
    }
    return *st.u;
}

} // namespace

ConvergenceTable galerkin_convergence(const SimConfig& cfg, const std::vector<int>& levels,
                                      const std::vector<double>& dts) {
    ConvergenceTable table;
    if (levels.empty() && dts.empty())
        throw std::invalid_argument("galerkin_convergence: empty level and dt lists");

    if (!levels.empty()) {
        const int n_ref = *std::max_element(levels.begin(), levels.end());
        SimConfig cref = cfg;
        cref.level = n_ref;
        validate(cref);
        const RunResult ref = run(cref);
        const SpectralField& uref = *ref.final_state.u;
        table.spatial_reference = n_ref;
        for (int n : levels) {
            if (n == n_ref) continue;
            SimConfig c = cfg;
            c.level = n;
            validate(c);
            const RunResult rr = run(c);
            table.spatial.emplace_back(n, l2_norm(rr.final_state.u->embedded(n_ref) - uref));
        }
        std::sort(table.spatial.begin(), table.spatial.end());
    }

    if (!dts.empty()) {
        const double dt_fine = *std::min_element(dts.begin(), dts.end());
        for (double dt : dts) {
            const double ratio = dt / dt_fine;
            if (std::abs(ratio - std::llround(ratio)) > 1e-9)
                throw std::invalid_argument(
                    "galerkin_convergence: every dt must be an integer multiple of the smallest "
                    "(got " + std::to_string(dt) + " vs " + std::to_string(dt_fine) + ")");
        }
        const std::size_t fine_total = std::size_t(std::llround(cfg.horizon / dt_fine));
        const SpectralField uref = march_velocity_common_path(
            cfg, dt_fine, dt_fine, 1, fine_total);
        table.temporal_reference = dt_fine;

        std::vector<double> logs_dt, logs_err;
        for (double dt : dts) {
            if (dt == dt_fine) continue;
            const std::size_t mult = std::size_t(std::llround(dt / dt_fine));
            const std::size_t nsteps = fine_total / mult;
            const SpectralField u =
                march_velocity_common_path(cfg, dt, dt_fine, mult, nsteps);
            const double err = l2_norm(u - uref);
            table.temporal.emplace_back(dt, err);
            // Self-convergence against a finite reference behaves like
            // C (dt - dt_ref) at first order; fit on that abscissa.
            if (err > 0.0) {
                logs_dt.push_back(std::log(dt - dt_fine));
                logs_err.push_back(std::log(err));
            }
        }
        std::sort(table.temporal.begin(), table.temporal.end());
        if (logs_dt.size() >= 2) {
            // Least-squares slope.
            double mx = 0, my = 0;
            for (std::size_t i = 0; i < logs_dt.size(); ++i) {
                mx += logs_dt[i];
                my += logs_err[i];
            }
            mx /= double(logs_dt.size());
            my /= double(logs_dt.size());
            double num = 0, den = 0;
            for (std::size_t i = 0; i < logs_dt.size(); ++i) {
                num += (logs_dt[i] - mx) * (logs_err[i] - my);
                den += (logs_dt[i] - mx) * (logs_dt[i] - mx);
            }
            table.temporal_order = den > 0 ? num / den : 0.0;
        } else if (table.temporal.size() >= 1 && logs_dt.empty()) {
            table.temporal_order = 0.0; // exact match at every dt (linear-only dynamics)
        }
    }
    return table;
}

} // namespace fsnse
