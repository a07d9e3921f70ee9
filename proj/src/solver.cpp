#include "fsnse/solver.hpp"

#include <cmath>
#include <fstream>

#include "fsnse/snapshot.hpp"

namespace fsnse {

namespace {

// Advection of a scalar by a velocity field, sum_j u_j d_j theta, with exact
// dealiased products.
SpectralField scalar_advection(const SpectralField& u, const SpectralField& theta,
                               const WavenumberLattice& out) {
    SpectralField adv(out, 1);
    for (int j = 0; j < 2; ++j) {
        SpectralField uj(u.lattice(), 1);
        for (std::size_t i = 0; i < u.mode_count(); ++i) uj.at(i, 0) = u.at(i, j);
        SpectralField dtheta = theta;
        for (std::size_t i = 0; i < theta.mode_count(); ++i) {
            const Mode k = theta.lattice().mode_at(i);
            dtheta.at(i, 0) = Complex(0.0, double(k[j])) * theta.at(i, 0);
        }
        adv += dealiased_pointwise_product(uj, dtheta, out);
    }
    return adv;
}

void check_finite(const SpectralField& f, double t, const char* form) {
    if (!f.all_finite())
        throw SolverOverflow(std::string("numerical overflow in the ") + form +
                             " form at t = " + std::to_string(t) +
                             "; non-finite coefficient detected");
}

double monitor_norm(const SpectralField& u, const SimConfig& cfg) {
    return sobolev_norm(u, SobolevIndex(cfg.effective_monitor_beta(), 2.0));
}

// u(k) <- exp(-nu |k|^alpha dt) [u(k) + dt B(u)(k) + (G(u) dw)(k)]
SpectralField advance_velocity_field(const SpectralField& u, const SimConfig& cfg,
                                     const SpectralField& dw) {
    const double dt = cfg.dt;
    SpectralField rhs = u;
    if (cfg.nonlinearity && dt > 0.0) {
        SpectralField b = nonlinear_term(u, u, u.lattice());
        b *= dt;
        rhs += b;
    }
    if (cfg.noise.enabled && dt > 0.0) rhs += apply_diffusion(cfg.noise.family(), u, dw);
    for (std::size_t i = 0; i < rhs.mode_count(); ++i) {
        const double f = semigroup_factor(rhs.lattice().mode_at(i), cfg.diss, dt);
        rhs.at(i, 0) *= f;
        rhs.at(i, 1) *= f;
    }
    return rhs;
}

// theta(k) <- exp(-z) [theta(k) + (Gtilde dw)(k)] + dt phi1(-z) (u.grad theta)(k),
// z = nu |k|^alpha dt, u = biot_savart(theta).  The phi1 weight is the first
// exponential-integrator quadrature of the advection term.
SpectralField advance_vorticity_field(const SpectralField& theta, const SimConfig& cfg,
                                      const SpectralField& dw) {
    const double dt = cfg.dt;
    SpectralField bracket = theta;
    if (cfg.noise.enabled && dt > 0.0)
        bracket += vorticity_noise(cfg.noise.family(), theta, dw);

    SpectralField adv(theta.lattice(), 1);
    if (cfg.nonlinearity && dt > 0.0)
        adv = scalar_advection(biot_savart(theta), theta, theta.lattice());

    for (std::size_t i = 0; i < bracket.mode_count(); ++i) {
        const Mode k = bracket.lattice().mode_at(i);
        const double z = cfg.diss.nu * std::pow(mode_norm2(k), 0.5 * cfg.diss.alpha) * dt;
        bracket.at(i, 0) = std::exp(-z) * bracket.at(i, 0) + dt * phi1(-z) * adv.at(i, 0);
    }
    return bracket;
}

} // namespace

Formulation formulation_from_string(const std::string& s) {
    if (s == "velocity") return Formulation::Velocity;
    if (s == "vorticity") return Formulation::Vorticity;
    if (s == "both" || s == "both-coupled") return Formulation::Both;
    throw std::invalid_argument("formulation: unknown value '" + s +
                                "' (known: velocity, vorticity, both)");
}

std::string formulation_name(Formulation f) {
    switch (f) {
        case Formulation::Velocity: return "velocity";
        case Formulation::Vorticity: return "vorticity";
        case Formulation::Both: return "both";
    }
    return "?";
}

InitialKind initial_kind_from_string(const std::string& s) {
    if (s == "zero") return InitialKind::Zero;
    if (s == "taylor_green") return InitialKind::TaylorGreen;
    if (s == "shear") return InitialKind::Shear;
    if (s == "random") return InitialKind::Random;
    if (s == "file") return InitialKind::File;
    throw std::invalid_argument("initial.kind: unknown value '" + s +
                                "' (known: zero, taylor_green, shear, random, file)");
}

std::string initial_kind_name(InitialKind k) {
    switch (k) {
        case InitialKind::Zero: return "zero";
        case InitialKind::TaylorGreen: return "taylor_green";
        case InitialKind::Shear: return "shear";
        case InitialKind::Random: return "random";
        case InitialKind::File: return "file";
    }
    return "?";
}

void validate(const SimConfig& cfg) {
    if (!(cfg.dt > 0.0))
        throw std::invalid_argument("grid.dt: time step must be positive, got " +
                                    std::to_string(cfg.dt));
    if (cfg.horizon < 0.0)
        throw std::invalid_argument("grid.T: horizon must be nonnegative, got " +
                                    std::to_string(cfg.horizon));
    if (cfg.horizon > 0.0 && cfg.dt > cfg.horizon)
        throw std::invalid_argument("grid.dt: time step " + std::to_string(cfg.dt) +
                                    " exceeds horizon " + std::to_string(cfg.horizon));
    if (cfg.level < 1)
        throw std::invalid_argument("grid.n: truncation level must be >= 1, got " +
                                    std::to_string(cfg.level));
    const double guard =
        cfg.dt * cfg.diss.nu * std::pow(cfg.level * std::sqrt(2.0), cfg.diss.alpha);
    if (guard > 50.0)
        throw std::invalid_argument(
            "grid.dt: stability guard dt * nu * (n sqrt(2))^alpha = " + std::to_string(guard) +
            " exceeds 50; reduce dt or the level");
    if (!(cfg.blowup_threshold > 0.0))
        throw std::invalid_argument("output.threshold: blow-up threshold must be positive");
    if (cfg.record_stride < 1)
        throw std::invalid_argument("output.record_stride: must be >= 1, got " +
                                    std::to_string(cfg.record_stride));
    if (cfg.snapshot_every < 0)
        throw std::invalid_argument("output.snapshots: must be >= 0");
    if (!(cfg.bkm_q > 1.0))
        throw std::invalid_argument("output.bkm_q: must exceed 1, got " +
                                    std::to_string(cfg.bkm_q));
    if (cfg.noise.enabled) (void)cfg.noise.spectrum(cfg.level); // validates gamma_Q / table
    if (cfg.initial.kind == InitialKind::File && cfg.initial.path.empty())
        throw std::invalid_argument("initial.path: required for initial.kind = file");
}

SpectralField project_initial(const SpectralField& u0, int level) {
    return leray_project(u0.truncated(level));
}

SpectralField taylor_green(int level, double amplitude) {
    // (sin x1 cos x2, -cos x1 sin x2)
    SpectralField u = SpectralField::vector(level);
    const Complex q(0.0, -0.25 * amplitude);
    u.set_mode_pair({1, 1}, 0, q);
    u.set_mode_pair({1, -1}, 0, q);
    u.set_mode_pair({1, 1}, 1, -q);
    u.set_mode_pair({1, -1}, 1, q);
    return u;
}

SpectralField shear_flow(int level, double amplitude) {
    // (0, a cos x1)
    SpectralField u = SpectralField::vector(level);
    u.set_mode_pair({1, 0}, 1, Complex(0.5 * amplitude, 0.0));
    return u;
}

SpectralField make_initial(const SimConfig& cfg) {
    switch (cfg.initial.kind) {
        case InitialKind::Zero: return SpectralField::vector(cfg.level);
        case InitialKind::TaylorGreen:
            return project_initial(taylor_green(cfg.level, cfg.initial.amplitude), cfg.level);
        case InitialKind::Shear:
            return project_initial(shear_flow(cfg.level, cfg.initial.amplitude), cfg.level);
        case InitialKind::Random: {
            const int bw = cfg.initial.bandwidth > 0 ? cfg.initial.bandwidth : cfg.level;
            SpectralField f =
                gaussian_random_field(bw, 2, cfg.initial.decay, cfg.initial.seed, 0, true);
            f *= cfg.initial.amplitude;
            return project_initial(f.level() <= cfg.level ? f.embedded(cfg.level) : f, cfg.level);
        }
        case InitialKind::File: {
            SpectralField f = load_snapshot(cfg.initial.path);
            if (f.components() != 2)
                throw std::invalid_argument("initial.path: snapshot must hold a velocity field");
            return project_initial(f.level() <= cfg.level ? f.embedded(cfg.level) : f, cfg.level);
        }
    }
    throw std::logic_error("make_initial: unreachable");
}

double phi1(double z) {
    if (std::abs(z) < 1e-8) return 1.0 + 0.5 * z;
    return std::expm1(z) / z;
}

SolverState step_velocity(const SolverState& state, const SimConfig& cfg,
                          const SpectralField& dw) {
    if (state.stopped)
        throw std::logic_error("step_velocity: state is stopped at tau = " +
                               std::to_string(state.tau));
    if (!state.u) throw std::invalid_argument("step_velocity: state has no velocity field");
    SolverState next = state;
    next.u = advance_velocity_field(*state.u, cfg, dw);
    next.t = state.t + cfg.dt;
    next.step = state.step + 1;
    check_finite(*next.u, next.t, "velocity");
    if (monitor_norm(*next.u, cfg) > cfg.blowup_threshold) {
        next.stopped = true;
        next.tau = next.t;
    }
    return next;
}

SolverState step_vorticity(const SolverState& state, const SimConfig& cfg,
                           const SpectralField& dw) {
    if (state.stopped)
        throw std::logic_error("step_vorticity: state is stopped at tau = " +
                               std::to_string(state.tau));
    if (!state.theta) throw std::invalid_argument("step_vorticity: state has no vorticity field");
    SolverState next = state;
    next.theta = advance_vorticity_field(*state.theta, cfg, dw);
    next.t = state.t + cfg.dt;
    next.step = state.step + 1;
    check_finite(*next.theta, next.t, "vorticity");
    if (monitor_norm(biot_savart(*next.theta), cfg) > cfg.blowup_threshold) {
        next.stopped = true;
        next.tau = next.t;
    }
    return next;
}

DiagnosticsRecord accumulate(const DiagnosticsRecord& prev, const SolverState& state,
                             const SimConfig& cfg) {
    const SpectralField u = state.u ? *state.u : biot_savart(*state.theta);
    double defect = 0.0;
    if (state.u && state.theta) defect = l2_norm(curl2d(*state.u) - *state.theta);
    const double dt = state.t - prev.t;
    return accumulate_record(prev, u, state.t, state.stopped, cfg.diss, cfg.bkm_q, dt, defect);
}

CovarianceSpectrum NoiseConfig::spectrum(int level) const {
    if (q_table_path.empty()) return CovarianceSpectrum::power_law(gamma_q);
    std::ifstream in(q_table_path);
    if (!in)
        throw std::invalid_argument("noise.q_table: cannot open '" + q_table_path + "'");
    const WavenumberLattice lattice(level);
    std::vector<double> q(lattice.size(), 0.0);
    int k1, k2;
    double val;
    while (in >> k1 >> k2 >> val) {
        const Mode k{k1, k2};
        if (lattice.contains(k)) q[lattice.index_of(k)] = val;
    }
    return CovarianceSpectrum::table(lattice, q);
}

RunResult run(const SimConfig& cfg, std::uint64_t path_id, const RecordHook& hook) {
    validate(cfg);
    RunResult result;

    SolverState state;
    const SpectralField u0 = make_initial(cfg);
    if (cfg.formulation != Formulation::Vorticity) state.u = u0;
    if (cfg.formulation != Formulation::Velocity) state.theta = curl2d(u0);

    const std::size_t nsteps = cfg.step_count();
    if (nsteps == 0) {
        result.final_state = state;
        return result; // empty trajectory
    }

    // The time integrals advance at every solver step (left endpoint); the
    // trajectory keeps one record per stride.
    DiagnosticsRecord record = accumulate(DiagnosticsRecord{}, state, cfg);
    result.trajectory.push_back(record);
    if (hook) hook(state, record, 0);

    const NoisePath path{cfg.noise.seed, path_id};
    std::optional<CovarianceSpectrum> spectrum;
    if (cfg.noise.enabled) spectrum = cfg.noise.spectrum(cfg.level);

    for (std::size_t s = 0; s < nsteps; ++s) {
        if (!state.stopped) {
            const SpectralField dw =
                cfg.noise.enabled ? wiener_increment(path, cfg.level, *spectrum, cfg.dt, s)
                                  : SpectralField::vector(cfg.level);
            if (state.u) state.u = advance_velocity_field(*state.u, cfg, dw);
            if (state.theta) state.theta = advance_vorticity_field(*state.theta, cfg, dw);
            state.t += cfg.dt;
            state.step += 1;

            if (state.u) check_finite(*state.u, state.t, "velocity");
            if (state.theta) check_finite(*state.theta, state.t, "vorticity");
            const double mon = state.u ? monitor_norm(*state.u, cfg)
                                       : monitor_norm(biot_savart(*state.theta), cfg);
            if (mon > cfg.blowup_threshold) {
                state.stopped = true;
                state.tau = state.t;
            }
        } else {
            // Frozen at tau; time still advances in the records.
            state.t += cfg.dt;
            state.step += 1;
        }
        record = accumulate(record, state, cfg);
        if ((s + 1) % std::size_t(cfg.record_stride) == 0 || s + 1 == nsteps) {
            result.trajectory.push_back(record);
            if (hook) hook(state, record, result.trajectory.size() - 1);
        }
    }
    result.final_state = state;
    return result;
}

std::vector<std::pair<double, double>> coupled_pair_run(const SimConfig& cfg,
                                                        const SpectralField& u0_a,
                                                        const SpectralField& u0_b) {
    validate(cfg);
    if (u0_a.level() != u0_b.level())
        throw std::invalid_argument("coupled_pair_run: both data must live at the same level");

    SolverState a, b;
    a.u = project_initial(u0_a, cfg.level);
    b.u = project_initial(u0_b, cfg.level);

    const NoisePath path{cfg.noise.seed, 0};
    std::optional<CovarianceSpectrum> spectrum;
    if (cfg.noise.enabled) spectrum = cfg.noise.spectrum(cfg.level);

    std::vector<std::pair<double, double>> distance;
    distance.emplace_back(0.0, l2_norm(*a.u - *b.u));
    const std::size_t nsteps = cfg.step_count();
    for (std::size_t s = 0; s < nsteps; ++s) {
        const SpectralField dw =
            cfg.noise.enabled ? wiener_increment(path, cfg.level, *spectrum, cfg.dt, s)
                              : SpectralField::vector(cfg.level);
        if (!a.stopped) a = step_velocity(a, cfg, dw);
        if (!b.stopped) b = step_velocity(b, cfg, dw);
        distance.emplace_back(a.t, l2_norm(*a.u - *b.u));
    }
    return distance;
}

} // namespace fsnse
