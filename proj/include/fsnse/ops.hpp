#pragma once

// Linear and bilinear operators on the torus: Leray projection, fractional
// Stokes multiplier and its semigroup, curl, Biot-Savart recovery, the
// advection nonlinearity with exact dealiasing, trilinear form, fractional
// Sobolev / L^q norms, and the inequality ratio samplers.

#include <cstdint>
#include <string>
#include <utility>

#include "fsnse/field.hpp"
#include "fsnse/transforms.hpp"

namespace fsnse {

enum class DissipationRegime { Subcritical, Critical, Supercritical, Classical };

// Dissipation exponent alpha in (0,2] and viscosity nu > 0.  The operator
// itself returns the bare multiplier |k|^alpha; nu is applied by the solver.
struct FractionalDissipation {
    double alpha = 2.0;
    double nu = 1.0;

    FractionalDissipation() = default;
    FractionalDissipation(double a, double v) : alpha(a), nu(v) {
        if (!(alpha > 0.0) || alpha > 2.0)
            throw std::invalid_argument("FractionalDissipation: alpha must lie in (0, 2], got " +
                                        std::to_string(a));
        if (!(nu > 0.0))
            throw std::invalid_argument("FractionalDissipation: nu must be positive, got " +
                                        std::to_string(v));
    }

    DissipationRegime regime() const {
        if (alpha == 2.0) return DissipationRegime::Classical;
        if (alpha > 1.0) return DissipationRegime::Subcritical;
        if (alpha == 1.0) return DissipationRegime::Critical;
        return DissipationRegime::Supercritical;
    }
};

struct SobolevIndex {
    double beta = 0.0;
    double q = 2.0; // integrability exponent; > 1, infinity allowed

    SobolevIndex() = default;
    SobolevIndex(double b, double q_) : beta(b), q(q_) {
        if (!(q > 1.0))
            throw std::invalid_argument("SobolevIndex: q must exceed 1, got " + std::to_string(q_));
    }
};

// Per-mode coeff -> (I - k k^T/|k|^2) coeff; removes the gradient part.
SpectralField leray_project(const SpectralField& v);

// coeff(k) -> |k|^alpha coeff(k).  Valid for scalars and vectors alike.
SpectralField apply_fractional_stokes(const SpectralField& u, double alpha);

// General spectral multiplier coeff(k) -> |k|^power coeff(k) (power may be negative).
SpectralField apply_riesz_multiplier(const SpectralField& u, double power);

// exp(-nu |k|^alpha t): the exact integrating factor of the linear part.
double semigroup_factor(Mode k, const FractionalDissipation& diss, double t);

// theta(k) = i k1 u2(k) - i k2 u1(k).
SpectralField curl2d(const SpectralField& u);

// u(k) = (i k2/|k|^2, -i k1/|k|^2) theta(k); velocity from vorticity,
// divergence-free by construction, curl2d(biot_savart(theta)) = theta.
SpectralField biot_savart(const SpectralField& theta);

// B(u, v) = Leray projection of (u.grad) v, exact truncated convolution.
SpectralField nonlinear_term(const SpectralField& u, const SpectralField& v,
                             const WavenumberLattice& out_lattice);

// Same operator in divergence form, Pi sum_j d_j (u_j v); equals
// nonlinear_term when u is divergence-free.  Used as a cross-check.
SpectralField nonlinear_term_divergence_form(const SpectralField& u, const SpectralField& v,
                                             const WavenumberLattice& out_lattice);

// b(u, v, w) = <B(u, v), w> in the L^2 pairing (with the (2pi)^2 factor).
double trilinear_form(const SpectralField& u, const SpectralField& v, const SpectralField& w);

// L^2 norm under the declared Parseval convention: (2pi) sqrt(sum |coeff|^2).
double l2_norm(const SpectralField& f);

// |f|_{H^{beta,q}}.  q = 2 is evaluated exactly in Fourier space; other q by
// synthesizing the |k|^beta-lifted field and applying the trapezoidal L^q
// quadrature on a grid of grid_size points per dimension (default 4n).
// q = infinity uses the grid maximum.
double sobolev_norm(const SpectralField& f, const SobolevIndex& idx, int grid_size = 0);

// |grad u|_{L^q} with the pointwise Frobenius magnitude of the gradient.
double grad_lq_norm(const SpectralField& u, double q, int grid_size = 0);

// (kinetic energy, enstrophy) = (0.5 |u|_{L2}^2, |grad u|_{L2}^2).
std::pair<double, double> energy_enstrophy(const SpectralField& u);

// Random field with independent complex Gaussian coefficients of standard
// deviation |k|^-decay, conjugate symmetry enforced; optionally projected
// divergence-free.  Deterministic in (seed, stream).
SpectralField gaussian_random_field(int n, int components, double decay, std::uint64_t seed,
                                    std::uint64_t stream = 0, bool divergence_free = false);

// --- Inequality ratio samplers -------------------------------------------
//
// The bilinear-term estimates have no numeric constants; the samplers report
// the empirical ratio LHS / (product of RHS norms) over random Gaussian
// ensembles.  Non-explosion of the max ratio as n grows is the test.

enum class EstimateId { B_L2, B_Hneg, Gelfand, B_H1Classical, TrilinearInterp };

EstimateId estimate_from_string(const std::string& name);
std::string estimate_name(EstimateId id);

struct EstimateParams {
    double alpha = 1.5;
    double eta = 1.0; // Gelfand triple offset; used by Gelfand only
};

// Empty string when (alpha, eta) lie in the estimate's validity region for
// dimension d; otherwise a description of the admissible range.
std::string estimate_validity_violation(EstimateId id, const EstimateParams& p, int d = 2);

struct RatioReport {
    std::string estimate;
    int n = 0;
    double decay = 0.0;
    int trials = 0;
    std::uint64_t seed = 0;
    double alpha = 0.0;
    double eta = 0.0;
    double min_ratio = 0.0;
    double median_ratio = 0.0;
    double max_ratio = 0.0;

    std::string to_text() const; // flat one-line record
};

RatioReport sample_inequality_ratio(EstimateId id, int trials, int n, double decay,
                                    std::uint64_t seed, const EstimateParams& params);

} // namespace fsnse
