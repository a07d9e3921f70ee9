#pragma once

// Controlled quantities along trajectories: energies, the Sobolev norms the
// dynamics is measured in, and the global-existence functionals (gradient
// integrability and mixed time-space integrability) with their validity gates.

#include <cstdint>
#include <string>
#include <vector>

#include "fsnse/ops.hpp"

namespace fsnse {

struct SimConfig; // solver.hpp

struct DiagnosticsRecord {
    double t = 0.0;
    double e = 0.0;        // kinetic energy
    double enstrophy = 0.0; // |grad u|_{L2}^2 = |u|_{H^{1,2}}^2
    double h_alpha2 = 0.0;  // |u|_{H^{alpha/2,2}}
    double h_serrin = 0.0;  // |u|_{H^{(d+2-alpha)/4,2}}
    double grad_lq = 0.0;   // |grad u|_{L^q}
    double bkm_acc = 0.0;   // running integral of grad_lq^p_bkm (nan if gated)
    double serrin_acc = 0.0; // running integral of h_serrin^p_ser (nan if gated)
    bool stopped = false;
    double vv_defect = 0.0; // |curl u - theta|_{L2} in coupled-form runs
};

// 1 / (1 - 2d/(alpha q)); requires alpha q > 2d.
double bkm_exponent(double alpha, int d, double q);

// (4 alpha / (3 alpha - d - 2), (d + 2 - alpha)/4); requires 3 alpha > d + 2.
std::pair<double, double> serrin_exponent(double alpha, int d);

// Left-endpoint advance of the accumulators by one step of length dt; norms
// evaluated on the current velocity field.
DiagnosticsRecord accumulate_record(const DiagnosticsRecord& prev, const SpectralField& u,
                                    double t, bool stopped, const FractionalDissipation& diss,
                                    double bkm_q, double dt, double vv_defect = 0.0);

std::string csv_header();
std::string csv_line(const DiagnosticsRecord& r);

// --- Studies ---------------------------------------------------------------

struct MomentLevelEstimate {
    int n = 0;
    double sup_moment = 0.0; // MC estimate of E sup_t |u|^p_{H^{1,2}}
    double sup_moment_se = 0.0;
    double dissipation = 0.0; // MC estimate of E int |u|^2_{H^{1+alpha/2,2}} dt
    double dissipation_se = 0.0;
};

struct MomentReport {
    int p = 2;
    int paths = 0;
    std::vector<MomentLevelEstimate> levels;
    bool uniformly_bounded = true; // no significant upward trend across levels
    std::string to_text() const;
};

// Monte-Carlo moment-bound study across Galerkin levels.
MomentReport moment_bound_study(const SimConfig& cfg, int paths, int p,
                                const std::vector<int>& levels, int threads = 0);

struct ConvergenceTable {
    std::vector<std::pair<int, double>> spatial;    // (n, |u_n(T) - u_ref(T)|_{L2})
    std::vector<std::pair<double, double>> temporal; // (dt, |u_dt(T) - u_ref(T)|_{L2})
    int spatial_reference = 0;
    double temporal_reference = 0.0;
    double temporal_order = 0.0; // least-squares slope of log err vs log dt
    std::string to_text() const;
};

// Self-convergence study: spatial errors against the largest level in
// `levels`, temporal errors against the smallest dt in `dts` (all dts must be
// integer multiples of it so one Brownian path can drive every resolution).
ConvergenceTable galerkin_convergence(const SimConfig& cfg, const std::vector<int>& levels,
                                      const std::vector<double>& dts);

} // namespace fsnse
