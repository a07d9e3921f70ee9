#pragma once

// Trace-class Q-Wiener forcing on the divergence-free torus eigenbasis
// e_k = (k_perp/|k|) e^{ik.x}, with Q diagonal in that basis, plus the
// catalog of diffusion families and the vorticity-side noise.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fsnse/field.hpp"
#include "fsnse/ops.hpp"

namespace fsnse {

// Covariance eigenvalues q_k >= 0 per mode, either generated as |k|^-gamma_Q
// or supplied as an explicit table.  Generated spectra require gamma_Q > 2 so
// the trace over the full (infinite) lattice converges; q_{-k} = q_k always.
class CovarianceSpectrum {
public:
    static CovarianceSpectrum power_law(double gamma_q) {
        if (!(gamma_q > 2.0))
            throw std::invalid_argument(
                "CovarianceSpectrum: gamma_Q must exceed 2 for a trace-class covariance in d=2, "
                "got " + std::to_string(gamma_q));
        CovarianceSpectrum s;
        s.gamma_q_ = gamma_q;
        return s;
    }

    // Explicit per-mode table on a level-n lattice, mirror-symmetrized.
    static CovarianceSpectrum table(const WavenumberLattice& lattice,
                                    const std::vector<double>& q);

    double q_at(Mode k) const {
        if (gamma_q_ > 0.0) return std::pow(mode_norm2(k), -0.5 * gamma_q_);
        if (!table_lattice_ || !table_lattice_->contains(k)) return 0.0;
        return table_[table_lattice_->index_of(k)];
    }

    bool is_power_law() const { return gamma_q_ > 0.0; }
    double gamma_q() const { return gamma_q_; }

    // sum of q_k over a level-n lattice.
    double trace(int n) const;

private:
    CovarianceSpectrum() = default;
    double gamma_q_ = 0.0;
    std::vector<double> table_;
    std::shared_ptr<WavenumberLattice> table_lattice_;
};

enum class DiffusionKind { Additive, LinearMultiplicative, BoundedSaturating };

DiffusionKind diffusion_kind_from_string(const std::string& s);
std::string diffusion_kind_name(DiffusionKind k);

// The three families satisfying the Lipschitz / linear-growth contracts with
// explicit constants: additive G(u)w = w (Lipschitz 0, growth 1);
// linear multiplicative G(u)w = Pi(sigma u . w) componentwise (Lipschitz
// sigma); bounded saturating G(u)w = sigma min(1, R0/|u|_L2) w.
struct DiffusionFamily {
    DiffusionKind kind = DiffusionKind::Additive;
    double sigma = 1.0;
    double r0 = 1.0; // saturation radius, bounded_saturating only

    static DiffusionFamily additive() { return {DiffusionKind::Additive, 1.0, 1.0}; }
    static DiffusionFamily linear_multiplicative(double sigma) {
        require_sigma(sigma);
        return {DiffusionKind::LinearMultiplicative, sigma, 1.0};
    }
    static DiffusionFamily bounded_saturating(double sigma, double r0) {
        require_sigma(sigma);
        if (!(r0 > 0.0))
            throw std::invalid_argument("DiffusionFamily: saturation radius must be positive");
        return {DiffusionKind::BoundedSaturating, sigma, r0};
    }

private:
    static void require_sigma(double s) {
        if (!(s >= 0.0)) throw std::invalid_argument("DiffusionFamily: sigma must be >= 0");
    }
};

// Identifies a Brownian path: increments are pure functions of
// (seed, path_id, mode, step), so disjoint increments are independent and any
// evaluation order yields identical results.
struct NoisePath {
    std::uint64_t seed = 0;
    std::uint64_t path_id = 0;
};

// One increment of the truncated Q-Wiener process over a step of length dt:
// sum over lattice modes of sqrt(q_k) dbeta_k e_k, realized with conjugate
// symmetry so the physical increment is real; exactly divergence-free.
SpectralField wiener_increment(const NoisePath& path, int level, const CovarianceSpectrum& spectrum,
                               double dt, std::uint64_t step);

// Applies the diffusion family to a (state, increment) pair.
SpectralField apply_diffusion(const DiffusionFamily& family, const SpectralField& u,
                              const SpectralField& dw);

// Vorticity-side noise: curl of the velocity diffusion evaluated on the
// Biot-Savart recovery of theta.
SpectralField vorticity_noise(const DiffusionFamily& family, const SpectralField& theta,
                              const SpectralField& dw);

} // namespace fsnse
