#pragma once

// SpectralField: truncated Fourier coefficients of a zero-mean periodic field
// on the 2D torus, scalar (1 component) or vector (2 components).  Real-valued
// physical fields correspond to conjugate-symmetric coefficients,
// coeff(-k) = conj(coeff(k)); builders here maintain that symmetry.
//
// Coefficient convention: coeff(k) = (2pi)^-2 \int f(x) e^{-ik.x} dx, so
// \int |f|^2 dx = (2pi)^2 \sum_k |coeff(k)|^2.

#include <algorithm>
#include <complex>
#include <vector>

#include "fsnse/lattice.hpp"

namespace fsnse {

using Complex = std::complex<double>;

class SpectralField {
public:
    SpectralField(WavenumberLattice lattice, int components)
        : lattice_(lattice), components_(components),
          coeffs_(lattice.size() * components, Complex(0.0, 0.0)) {
        if (components < 1)
            throw std::invalid_argument("SpectralField: components must be >= 1");
    }

    static SpectralField scalar(int n) { return SpectralField(WavenumberLattice(n), 1); }
    static SpectralField vector(int n) { return SpectralField(WavenumberLattice(n), 2); }

    const WavenumberLattice& lattice() const { return lattice_; }
    int level() const { return lattice_.level(); }
    int components() const { return components_; }
    std::size_t mode_count() const { return lattice_.size(); }

    Complex& at(std::size_t mode_index, int c) { return coeffs_[mode_index * components_ + c]; }
    const Complex& at(std::size_t mode_index, int c) const {
        return coeffs_[mode_index * components_ + c];
    }
    Complex coeff(Mode k, int c = 0) const { return at(lattice_.index_of(k), c); }

    // Sets coeff(k) = v and coeff(-k) = conj(v), keeping the field real.
    void set_mode_pair(Mode k, int c, Complex v) {
        at(lattice_.index_of(k), c) = v;
        at(lattice_.index_of(negate(k)), c) = std::conj(v);
    }

    const std::vector<Complex>& raw() const { return coeffs_; }
    std::vector<Complex>& raw() { return coeffs_; }

    double max_abs() const {
        double m = 0.0;
        for (const auto& z : coeffs_) m = std::max(m, std::abs(z));
        return m;
    }

    // max_k |coeff(-k) - conj(coeff(k))| over modes and components.
    double conjugate_symmetry_defect() const {
        double d = 0.0;
        for (std::size_t i = 0; i < mode_count(); ++i) {
            const std::size_t j = lattice_.index_of(negate(lattice_.mode_at(i)));
            for (int c = 0; c < components_; ++c)
                d = std::max(d, std::abs(at(j, c) - std::conj(at(i, c))));
        }
        return d;
    }

    // max_k |<coeff(k), k>| for vector fields; 0 for scalars.
    double divergence_defect() const {
        if (components_ < 2) return 0.0;
        double d = 0.0;
        for (std::size_t i = 0; i < mode_count(); ++i) {
            const Mode k = lattice_.mode_at(i);
            d = std::max(d, std::abs(double(k[0]) * at(i, 0) + double(k[1]) * at(i, 1)));
        }
        return d;
    }

    SpectralField& operator+=(const SpectralField& o) {
        check_compatible(o);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        return *this;
    }
    SpectralField& operator-=(const SpectralField& o) {
        check_compatible(o);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        return *this;
    }
    SpectralField& operator*=(double s) {
        for (auto& z : coeffs_) z *= s;
        return *this;
    }
    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

    // (2pi)^-2 \int f.g dx = sum_k <f(k), conj(g(k))>, real part.
    friend double inner_normalized(const SpectralField& a, const SpectralField& b) {
        a.check_compatible(b);
        double s = 0.0;
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            s += (a.coeffs_[i] * std::conj(b.coeffs_[i])).real();
        return s;
    }

    bool all_finite() const {
        for (const auto& z : coeffs_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    // Zero-padded (or truncated-by-rejection) copy on a level-m lattice, m >= level.
    SpectralField embedded(int m) const {
        if (m < level())
            throw std::invalid_argument("SpectralField::embedded: target level " +
                                        std::to_string(m) + " below field level " +
                                        std::to_string(level()));
        SpectralField out(WavenumberLattice(m), components_);
        for (std::size_t i = 0; i < mode_count(); ++i) {
            const std::size_t j = out.lattice_.index_of(lattice_.mode_at(i));
            for (int c = 0; c < components_; ++c) out.at(j, c) = at(i, c);
        }
        return out;
    }

    // Truncation to a level-m lattice, dropping modes outside it.
    SpectralField truncated(int m) const {
        SpectralField out(WavenumberLattice(m), components_);
        for (std::size_t j = 0; j < out.mode_count(); ++j) {
            const Mode k = out.lattice_.mode_at(j);
            if (lattice_.contains(k))
                for (int c = 0; c < components_; ++c) out.at(j, c) = coeff(k, c);
        }
        return out;
    }

private:
    void check_compatible(const SpectralField& o) const {
        if (!(lattice_ == o.lattice_) || components_ != o.components_)
            throw std::invalid_argument("SpectralField: incompatible operands (levels " +
                                        std::to_string(level()) + " vs " +
                                        std::to_string(o.level()) + ", components " +
                                        std::to_string(components_) + " vs " +
                                        std::to_string(o.components_) + ")");
    }

    WavenumberLattice lattice_;
    int components_;
    std::vector<Complex> coeffs_;
};

// Real collocation samples at x_j = 2pi j / m, row-major over (j1, j2).
struct PhysicalGrid {
    int m = 0;
    int components = 1;
    std::vector<double> values; // size m*m*components, index (j1*m + j2)*components + c

    double& at(int j1, int j2, int c = 0) { return values[std::size_t(j1 * m + j2) * components + c]; }
    double at(int j1, int j2, int c = 0) const {
        return values[std::size_t(j1 * m + j2) * components + c];
    }
};

} // namespace fsnse
