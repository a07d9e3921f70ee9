#pragma once

// Time integration of the spectral Galerkin system in velocity and vorticity
// forms.  The fractional dissipation is diagonal in Fourier space, so the
// linear part is integrated exactly at any step size; the nonlinearity and
// noise are treated explicitly at the left endpoint (Ito convention).

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsnse/diagnostics.hpp"
#include "fsnse/field.hpp"
#include "fsnse/noise.hpp"
#include "fsnse/ops.hpp"

namespace fsnse {

enum class Formulation { Velocity, Vorticity, Both };

Formulation formulation_from_string(const std::string& s);
std::string formulation_name(Formulation f);

enum class InitialKind { Zero, TaylorGreen, Shear, Random, File };

InitialKind initial_kind_from_string(const std::string& s);
std::string initial_kind_name(InitialKind k);

struct InitialConfig {
    InitialKind kind = InitialKind::TaylorGreen;
    double amplitude = 1.0;
    double decay = 2.5;        // random kind
    std::uint64_t seed = 1;    // random kind
    int bandwidth = 0;         // random kind: level of the generated datum (0 = cfg level)
    std::string path;          // file kind: snapshot path
};

struct NoiseConfig {
    bool enabled = false;
    DiffusionKind kind = DiffusionKind::Additive;
    double sigma = 1.0;
    double r0 = 1.0;
    double gamma_q = 2.5;
    std::string q_table_path; // explicit eigenvalue table; overrides gamma_Q
    std::uint64_t seed = 0;

    DiffusionFamily family() const {
        switch (kind) {
            case DiffusionKind::Additive: return DiffusionFamily::additive();
            case DiffusionKind::LinearMultiplicative:
                return DiffusionFamily::linear_multiplicative(sigma);
            case DiffusionKind::BoundedSaturating:
                return DiffusionFamily::bounded_saturating(sigma, r0);
        }
        throw std::logic_error("NoiseConfig: unreachable");
    }
    // level: the lattice the table is read onto (tables only).
    CovarianceSpectrum spectrum(int level) const;
};

struct SimConfig {
    FractionalDissipation diss{2.0, 1.0};
    int level = 8;
    double dt = 1e-3;
    double horizon = 1.0;
    NoiseConfig noise;
    InitialConfig initial;
    Formulation formulation = Formulation::Velocity;
    bool nonlinearity = true;
    double blowup_threshold = 1e6;
    double monitor_beta = -1.0; // < 0: default (d+2-alpha)/4
    double bkm_q = 4.0;
    int record_stride = 1;
    int snapshot_every = 0; // snapshots every k records; 0 = none

    double effective_monitor_beta() const {
        return monitor_beta >= 0.0 ? monitor_beta : (2.0 + 2.0 - diss.alpha) / 4.0;
    }
    std::size_t step_count() const {
        return static_cast<std::size_t>(std::llround(horizon / dt));
    }
};

// Throws std::invalid_argument naming the offending field.
void validate(const SimConfig& cfg);

// Hard numerical failure, distinct from the modeled stopping event.
struct SolverOverflow : std::runtime_error {
    explicit SolverOverflow(const std::string& what) : std::runtime_error(what) {}
};

struct SolverState {
    double t = 0.0;
    std::uint64_t step = 0;
    std::optional<SpectralField> u;     // velocity form
    std::optional<SpectralField> theta; // vorticity form
    bool stopped = false;
    double tau = -1.0; // stopping time once the monitor norm exceeds the threshold
};

// Truncation to the configured level composed with the Leray projection.
SpectralField project_initial(const SpectralField& u0, int level);

// Builds the configured initial velocity field at the configured level.
SpectralField make_initial(const SimConfig& cfg);

// Analytic data used by the catalog and the tests.
SpectralField taylor_green(int level, double amplitude = 1.0);
SpectralField shear_flow(int level, double amplitude = 1.0);

// One exponential Euler-Maruyama step of the velocity form.  dw may be a
// zero field for deterministic stepping.
SolverState step_velocity(const SolverState& state, const SimConfig& cfg, const SpectralField& dw);

// One step of the vorticity form: the velocity is recovered from theta by
// Biot-Savart each step, the advection term carries the phi1 exponential
// weight, the noise term is the curl of the velocity-side diffusion.
SolverState step_vorticity(const SolverState& state, const SimConfig& cfg,
                           const SpectralField& dw);

// (e^z - 1)/z, the first exponential integrator weight.
double phi1(double z);

struct RunResult {
    std::vector<DiagnosticsRecord> trajectory;
    SolverState final_state;
};

// Called once per emitted record with the record index; used for snapshot
// sinks and probes.
using RecordHook = std::function<void(const SolverState&, const DiagnosticsRecord&, std::size_t)>;

// Fixed-step march to the horizon or to the stopping time; bit-reproducible
// for a fixed (seed, path_id).
RunResult run(const SimConfig& cfg, std::uint64_t path_id = 0, const RecordHook& hook = {});

// Evolves two initial data under one Brownian path; returns (t, |u_a - u_b|_{L2}).
std::vector<std::pair<double, double>> coupled_pair_run(const SimConfig& cfg,
                                                        const SpectralField& u0_a,
                                                        const SpectralField& u0_b);

// Spec-shaped overload: extracts the velocity (recovering it from theta in
// vorticity form) and advances the accumulators.
DiagnosticsRecord accumulate(const DiagnosticsRecord& prev, const SolverState& state,
                             const SimConfig& cfg);

} // namespace fsnse
