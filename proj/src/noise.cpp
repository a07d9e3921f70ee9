#include "fsnse/noise.hpp"

#include <cmath>

#include "fsnse/rng.hpp"

namespace fsnse {

CovarianceSpectrum CovarianceSpectrum::table(const WavenumberLattice& lattice,
                                             const std::vector<double>& q) {
    if (q.size() != lattice.size())
        throw std::invalid_argument("CovarianceSpectrum: table size " + std::to_string(q.size()) +
                                    " does not match lattice size " +
                                    std::to_string(lattice.size()));
    CovarianceSpectrum s;
    s.table_lattice_ = std::make_shared<WavenumberLattice>(lattice);
    s.table_.assign(q.size(), 0.0);
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i] < 0.0)
            throw std::invalid_argument("CovarianceSpectrum: eigenvalues must be nonnegative");
        // Mirror-symmetrize: q_{-k} = q_k.
        const std::size_t j = lattice.index_of(negate(lattice.mode_at(i)));
        s.table_[i] = 0.5 * (q[i] + q[j]);
    }
    return s;
}

double CovarianceSpectrum::trace(int n) const {
    const WavenumberLattice lattice(n);
    double t = 0.0;
    for (std::size_t i = 0; i < lattice.size(); ++i) t += q_at(lattice.mode_at(i));
    return t;
}

DiffusionKind diffusion_kind_from_string(const std::string& s) {
    if (s == "additive") return DiffusionKind::Additive;
    if (s == "linear_multiplicative") return DiffusionKind::LinearMultiplicative;
    if (s == "bounded_saturating") return DiffusionKind::BoundedSaturating;
    throw std::invalid_argument("unknown diffusion kind '" + s +
                                "' (known: additive, linear_multiplicative, bounded_saturating)");
}

std::string diffusion_kind_name(DiffusionKind k) {
    switch (k) {
        case DiffusionKind::Additive: return "additive";
        case DiffusionKind::LinearMultiplicative: return "linear_multiplicative";
        case DiffusionKind::BoundedSaturating: return "bounded_saturating";
    }
    return "?";
}

SpectralField wiener_increment(const NoisePath& path, int level, const CovarianceSpectrum& spectrum,
                               double dt, std::uint64_t step) {
    if (dt < 0.0)
        throw std::invalid_argument("wiener_increment: dt must be nonnegative, got " +
                                    std::to_string(dt));
    SpectralField dw(WavenumberLattice(level), 2);
    if (dt == 0.0) return dw;

    for (std::size_t i = 0; i < dw.mode_count(); ++i) {
        const Mode k = dw.lattice().mode_at(i);
        if (!WavenumberLattice::representative(k)) continue;
        const double qk = spectrum.q_at(k);
        if (qk == 0.0) continue;

        // Complex standard Gaussian (E|g|^2 = 1) for the representative; the
        // mirrored mode takes the conjugate, making the increment real.
        const auto [g1, g2] = rng_gaussian_pair(rng_key(path.seed, path.path_id, mode_key(k)), step);
        const Complex amp = Complex(g1, g2) * std::sqrt(0.5 * qk * dt);

        const double kn = mode_norm(k);
        const Mode kp = perp(k);
        dw.set_mode_pair(k, 0, amp * (double(kp[0]) / kn));
        dw.set_mode_pair(k, 1, amp * (double(kp[1]) / kn));
    }
    return dw;
}

SpectralField apply_diffusion(const DiffusionFamily& family, const SpectralField& u,
                              const SpectralField& dw) {
    switch (family.kind) {
        case DiffusionKind::Additive:
            return dw;
        case DiffusionKind::LinearMultiplicative: {
            if (!(u.lattice() == dw.lattice()))
                throw std::invalid_argument("apply_diffusion: state and increment lattices differ");
            SpectralField prod = dealiased_pointwise_product(u, dw, u.lattice());
            prod *= family.sigma;
            return leray_project(prod);
        }
        case DiffusionKind::BoundedSaturating: {
            const double norm = l2_norm(u);
            const double factor = family.sigma * std::min(1.0, family.r0 / std::max(norm, 1e-300));
            SpectralField out = dw;
            out *= factor;
            return out;
        }
    }
    throw std::logic_error("apply_diffusion: unreachable");
}

SpectralField vorticity_noise(const DiffusionFamily& family, const SpectralField& theta,
                              const SpectralField& dw) {
    if (family.kind == DiffusionKind::Additive) return curl2d(dw);
    return curl2d(apply_diffusion(family, biot_savart(theta), dw));
}

} // namespace fsnse
