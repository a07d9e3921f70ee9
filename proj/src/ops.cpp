#include "fsnse/ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "fsnse/rng.hpp"

namespace fsnse {

namespace {

const double TWO_PI = 2.0 * M_PI;

SpectralField component_of(const SpectralField& f, int c) {
    SpectralField out(f.lattice(), 1);
    for (std::size_t i = 0; i < f.mode_count(); ++i) out.at(i, 0) = f.at(i, c);
    return out;
}

// d_j f: coeff(k) -> i k_j coeff(k).
SpectralField derivative(const SpectralField& f, int j) {
    SpectralField out = f;
    for (std::size_t i = 0; i < f.mode_count(); ++i) {
        const Mode k = f.lattice().mode_at(i);
        const Complex ikj(0.0, double(k[j]));
        for (int c = 0; c < f.components(); ++c) out.at(i, c) = ikj * f.at(i, c);
    }
    return out;
}

} // namespace

SpectralField leray_project(const SpectralField& v) {
    if (v.components() != 2)
        throw std::invalid_argument("leray_project: expected a 2-component field, got " +
                                    std::to_string(v.components()) + " components");
    SpectralField out = v;
    for (std::size_t i = 0; i < v.mode_count(); ++i) {
        const Mode k = v.lattice().mode_at(i);
        const double k2 = mode_norm2(k);
        const Complex kdot = double(k[0]) * v.at(i, 0) + double(k[1]) * v.at(i, 1);
        out.at(i, 0) = v.at(i, 0) - kdot * (double(k[0]) / k2);
        out.at(i, 1) = v.at(i, 1) - kdot * (double(k[1]) / k2);
    }
    return out;
}

SpectralField apply_riesz_multiplier(const SpectralField& u, double power) {
    SpectralField out = u;
    for (std::size_t i = 0; i < u.mode_count(); ++i) {
        const double f = std::pow(mode_norm2(u.lattice().mode_at(i)), 0.5 * power);
        for (int c = 0; c < u.components(); ++c) out.at(i, c) = f * u.at(i, c);
    }
    return out;
}

SpectralField apply_fractional_stokes(const SpectralField& u, double alpha) {
    return apply_riesz_multiplier(u, alpha);
}

double semigroup_factor(Mode k, const FractionalDissipation& diss, double t) {
    if (t < 0.0)
        throw std::invalid_argument("semigroup_factor: time must be nonnegative, got " +
                                    std::to_string(t));
    return std::exp(-diss.nu * std::pow(mode_norm2(k), 0.5 * diss.alpha) * t);
}

SpectralField curl2d(const SpectralField& u) {
    if (u.components() != 2)
        throw std::invalid_argument("curl2d: expected a 2-component field, got " +
                                    std::to_string(u.components()) + " components");
    SpectralField out(u.lattice(), 1);
    for (std::size_t i = 0; i < u.mode_count(); ++i) {
        const Mode k = u.lattice().mode_at(i);
        out.at(i, 0) = Complex(0.0, double(k[0])) * u.at(i, 1) -
                       Complex(0.0, double(k[1])) * u.at(i, 0);
    }
    return out;
}

SpectralField biot_savart(const SpectralField& theta) {
    if (theta.components() != 1)
        throw std::invalid_argument("biot_savart: expected a scalar field, got " +
                                    std::to_string(theta.components()) + " components");
    SpectralField out(theta.lattice(), 2);
    for (std::size_t i = 0; i < theta.mode_count(); ++i) {
        const Mode k = theta.lattice().mode_at(i);
        const double k2 = mode_norm2(k);
        out.at(i, 0) = Complex(0.0, double(k[1]) / k2) * theta.at(i, 0);
        out.at(i, 1) = Complex(0.0, -double(k[0]) / k2) * theta.at(i, 0);
    }
    return out;
}

SpectralField nonlinear_term(const SpectralField& u, const SpectralField& v,
                             const WavenumberLattice& out_lattice) {
    if (u.components() != 2 || v.components() != 2)
        throw std::invalid_argument("nonlinear_term: expected 2-component fields");
    SpectralField advect(out_lattice, 2);
    for (int i = 0; i < 2; ++i) {
        SpectralField wi(out_lattice, 1);
        for (int j = 0; j < 2; ++j)
            wi += dealiased_pointwise_product(component_of(u, j),
                                              derivative(component_of(v, i), j), out_lattice);
        for (std::size_t s = 0; s < wi.mode_count(); ++s) advect.at(s, i) = wi.at(s, 0);
    }
    return leray_project(advect);
}

SpectralField nonlinear_term_divergence_form(const SpectralField& u, const SpectralField& v,
                                             const WavenumberLattice& out_lattice) {
    if (u.components() != 2 || v.components() != 2)
        throw std::invalid_argument("nonlinear_term_divergence_form: expected 2-component fields");
    SpectralField result(out_lattice, 2);
    for (int i = 0; i < 2; ++i) {
        SpectralField wi(out_lattice, 1);
        for (int j = 0; j < 2; ++j) {
            SpectralField prod =
                dealiased_pointwise_product(component_of(u, j), component_of(v, i), out_lattice);
            wi += derivative(prod, j);
        }
        for (std::size_t s = 0; s < wi.mode_count(); ++s) result.at(s, i) = wi.at(s, 0);
    }
    return leray_project(result);
}

double trilinear_form(const SpectralField& u, const SpectralField& v, const SpectralField& w) {
    if (!(u.lattice() == v.lattice()) || !(u.lattice() == w.lattice()))
        throw std::invalid_argument("trilinear_form: fields must share a common lattice");
    const SpectralField buv = nonlinear_term(u, v, w.lattice());
    return TWO_PI * TWO_PI * inner_normalized(buv, w);
}

double l2_norm(const SpectralField& f) {
    double s = 0.0;
    for (const auto& z : f.raw()) s += std::norm(z);
    return TWO_PI * std::sqrt(s);
}

double sobolev_norm(const SpectralField& f, const SobolevIndex& idx, int grid_size) {
    if (idx.q == 2.0) {
        double s = 0.0;
        for (std::size_t i = 0; i < f.mode_count(); ++i) {
            const double w = std::pow(mode_norm2(f.lattice().mode_at(i)), idx.beta);
            for (int c = 0; c < f.components(); ++c) s += w * std::norm(f.at(i, c));
        }
        return TWO_PI * std::sqrt(s);
    }

    const int n = f.level();
    const int m = grid_size > 0 ? grid_size : 4 * n;
    if (m < 2 * n + 1)
        throw std::invalid_argument("sobolev_norm: quadrature grid " + std::to_string(m) +
                                    " too small for level " + std::to_string(n) + " (need >= " +
                                    std::to_string(2 * n + 1) + ")");
    const SpectralField lifted = apply_riesz_multiplier(f, idx.beta);
    const PhysicalGrid g = synthesize(lifted, m);

    if (std::isinf(idx.q)) {
        double mx = 0.0;
        for (int j1 = 0; j1 < m; ++j1)
            for (int j2 = 0; j2 < m; ++j2) {
                double p2 = 0.0;
                for (int c = 0; c < f.components(); ++c) p2 += g.at(j1, j2, c) * g.at(j1, j2, c);
                mx = std::max(mx, p2);
            }
        return std::sqrt(mx);
    }

    double s = 0.0;
    for (int j1 = 0; j1 < m; ++j1)
        for (int j2 = 0; j2 < m; ++j2) {
            double p2 = 0.0;
            for (int c = 0; c < f.components(); ++c) p2 += g.at(j1, j2, c) * g.at(j1, j2, c);
            s += std::pow(p2, 0.5 * idx.q);
        }
    return std::pow(s * TWO_PI * TWO_PI / (double(m) * m), 1.0 / idx.q);
}

double grad_lq_norm(const SpectralField& u, double q, int grid_size) {
    if (!(q > 1.0))
        throw std::invalid_argument("grad_lq_norm: q must exceed 1, got " + std::to_string(q));
    const int n = u.level();
    const int m = grid_size > 0 ? grid_size : 4 * n;
    if (m < 2 * n + 1)
        throw std::invalid_argument("grad_lq_norm: quadrature grid " + std::to_string(m) +
                                    " too small for level " + std::to_string(n));

    // Frobenius magnitude of the gradient tensor on the grid.
    std::vector<PhysicalGrid> parts;
    for (int j = 0; j < 2; ++j) parts.push_back(synthesize(derivative(u, j), m));

    double s = 0.0, mx = 0.0;
    for (int j1 = 0; j1 < m; ++j1)
        for (int j2 = 0; j2 < m; ++j2) {
            double p2 = 0.0;
            for (int j = 0; j < 2; ++j)
                for (int c = 0; c < u.components(); ++c)
                    p2 += parts[j].at(j1, j2, c) * parts[j].at(j1, j2, c);
            if (std::isinf(q))
                mx = std::max(mx, p2);
            else
                s += std::pow(p2, 0.5 * q);
        }
    if (std::isinf(q)) return std::sqrt(mx);
    return std::pow(s * TWO_PI * TWO_PI / (double(m) * m), 1.0 / q);
}

std::pair<double, double> energy_enstrophy(const SpectralField& u) {
    double e = 0.0, ens = 0.0;
    for (std::size_t i = 0; i < u.mode_count(); ++i) {
        const double k2 = mode_norm2(u.lattice().mode_at(i));
        for (int c = 0; c < u.components(); ++c) {
            const double a2 = std::norm(u.at(i, c));
            e += a2;
            ens += k2 * a2;
        }
    }
    return {0.5 * TWO_PI * TWO_PI * e, TWO_PI * TWO_PI * ens};
}

SpectralField gaussian_random_field(int n, int components, double decay, std::uint64_t seed,
                                    std::uint64_t stream, bool divergence_free) {
    SpectralField f(WavenumberLattice(n), components);
    for (std::size_t i = 0; i < f.mode_count(); ++i) {
        const Mode k = f.lattice().mode_at(i);
        if (!WavenumberLattice::representative(k)) continue;
        const double sd = std::pow(mode_norm2(k), -0.5 * decay);
        for (int c = 0; c < components; ++c) {
            const auto [g1, g2] = rng_gaussian_pair(rng_key(seed, stream, mode_key(k), std::uint64_t(c)), 0);
            f.set_mode_pair(k, c, Complex(g1, g2) * (sd / std::sqrt(2.0)));
        }
    }
    if (divergence_free && components == 2) return leray_project(f);
    return f;
}

// --- Inequality ratio samplers -------------------------------------------

EstimateId estimate_from_string(const std::string& name) {
    if (name == "B_L2") return EstimateId::B_L2;
    if (name == "B_Hneg") return EstimateId::B_Hneg;
    if (name == "gelfand") return EstimateId::Gelfand;
    if (name == "B_H1_classical") return EstimateId::B_H1Classical;
    if (name == "trilinear_interp") return EstimateId::TrilinearInterp;
    throw std::invalid_argument("unknown estimate id '" + name +
                                "' (known: B_L2, B_Hneg, gelfand, B_H1_classical, "
                                "trilinear_interp)");
}

std::string estimate_name(EstimateId id) {
    switch (id) {
        case EstimateId::B_L2: return "B_L2";
        case EstimateId::B_Hneg: return "B_Hneg";
        case EstimateId::Gelfand: return "gelfand";
        case EstimateId::B_H1Classical: return "B_H1_classical";
        case EstimateId::TrilinearInterp: return "trilinear_interp";
    }
    return "?";
}

std::string estimate_validity_violation(EstimateId id, const EstimateParams& p, int d) {
    const double a = p.alpha;
    switch (id) {
        case EstimateId::B_L2:
            if (!(a > 0.0 && a < 2.0)) return "requires alpha in (0, 2)";
            return "";
        case EstimateId::B_Hneg:
            if (!(a > 0.0 && a <= 2.0)) return "requires alpha in (0, 2]";
            return "";
        case EstimateId::Gelfand: {
            const double eta = p.eta;
            if (eta < 0.0) return "requires eta >= 0";
            if (eta >= 0.5 * d) {
                if (!(a >= 1.0 && a <= 2.0)) return "requires alpha in [1, 2] for eta >= d/2";
                return "";
            }
            const double lo = std::max((d + 2.0 - 2.0 * eta) / 3.0, 2.0 * eta + 2.0 - d);
            if (eta < 0.5 * (d - 1.0)) {
                if (!(a >= lo && a <= 2.0))
                    return "requires alpha in [" + std::to_string(lo) + ", 2] at eta = " +
                           std::to_string(eta);
            } else {
                if (!(a > lo && a <= 2.0))
                    return "requires alpha in (" + std::to_string(lo) + ", 2] at eta = " +
                           std::to_string(eta);
            }
            return "";
        }
        case EstimateId::B_H1Classical:
            return ""; // alpha-independent
        case EstimateId::TrilinearInterp:
            if (!(a >= 0.5 * d && a <= 2.0)) return "requires alpha in [d/2, 2]";
            return "";
    }
    return "";
}

std::string RatioReport::to_text() const {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "estimate=%s n=%d decay=%g trials=%d seed=%llu alpha=%g eta=%g "
                  "min=%.6e median=%.6e max=%.6e",
                  estimate.c_str(), n, decay, trials, (unsigned long long)seed, alpha, eta,
                  min_ratio, median_ratio, max_ratio);
    return std::string(buf);
}

RatioReport sample_inequality_ratio(EstimateId id, int trials, int n, double decay,
                                    std::uint64_t seed, const EstimateParams& params) {
    const std::string bad = estimate_validity_violation(id, params);
    if (!bad.empty())
        throw std::invalid_argument("sample_inequality_ratio(" + estimate_name(id) + "): " + bad);
    if (trials < 1) throw std::invalid_argument("sample_inequality_ratio: trials must be >= 1");

    const double a = params.alpha;
    const double eta = params.eta;
    std::vector<double> ratios;
    ratios.reserve(trials);

    // The exact bilinear term of two level-n fields lives at level 2n; norms
    // of B are taken there so no truncation enters the ratio.
    const WavenumberLattice full(2 * n);

    for (int t = 0; t < trials; ++t) {
        const std::uint64_t su = 4 * std::uint64_t(t), sv = su + 1;
        const SpectralField u = gaussian_random_field(n, 2, decay, seed, su, true);
        const SpectralField v = gaussian_random_field(n, 2, decay, seed, sv, true);

        double lhs = 0.0, rhs = 0.0;
        switch (id) {
            case EstimateId::B_L2: {
                const SpectralField b = nonlinear_term(u, v, full);
                lhs = l2_norm(b);
                rhs = sobolev_norm(u, SobolevIndex(0.5 * 2.0 - 0.5 * a, 2.0)) *
                      sobolev_norm(v, SobolevIndex(1.0 + 0.5 * a, 2.0));
                break;
            }
            case EstimateId::B_Hneg: {
                const SpectralField b = nonlinear_term(u, v, full);
                const double s = (2.0 + 2.0 - a) / 4.0;
                lhs = sobolev_norm(b, SobolevIndex(-0.5 * a, 2.0));
                rhs = sobolev_norm(u, SobolevIndex(s, 2.0)) * sobolev_norm(v, SobolevIndex(s, 2.0));
                break;
            }
            case EstimateId::Gelfand: {
                const SpectralField b = nonlinear_term(u, v, full);
                lhs = sobolev_norm(b, SobolevIndex(eta - 0.5 * a, 2.0));
                rhs = sobolev_norm(u, SobolevIndex(eta + 0.5 * a, 2.0)) *
                      sobolev_norm(v, SobolevIndex(eta + 0.5 * a, 2.0));
                break;
            }
            case EstimateId::B_H1Classical: {
                const SpectralField b = nonlinear_term(u, u, full);
                lhs = sobolev_norm(b, SobolevIndex(-1.0, 2.0));
                rhs = sobolev_norm(u, SobolevIndex(1.0, 2.0)) * l2_norm(u);
                break;
            }
            case EstimateId::TrilinearInterp: {
                // |<B(w), u>| against the interpolation bound; w plays the
                // role of the second sample.
                const SpectralField& w = v;
                lhs = std::abs(trilinear_form(w, w, u));
                rhs = sobolev_norm(u, SobolevIndex(1.0, 2.0)) *
                      std::pow(sobolev_norm(w, SobolevIndex(0.5 * a, 2.0)), 2.0 / a) *
                      std::pow(l2_norm(w), (2.0 * a - 2.0) / a);
                break;
            }
        }
        ratios.push_back(rhs > 0.0 ? lhs / rhs : 0.0);
    }

    std::sort(ratios.begin(), ratios.end());
    RatioReport rep;
    rep.estimate = estimate_name(id);
    rep.n = n;
    rep.decay = decay;
    rep.trials = trials;
    rep.seed = seed;
    rep.alpha = a;
    rep.eta = (id == EstimateId::Gelfand) ? eta : 0.0;
    rep.min_ratio = ratios.front();
    rep.median_ratio = ratios[ratios.size() / 2];
    rep.max_ratio = ratios.back();
    return rep;
}

} // namespace fsnse
