#pragma once

// Truncated wavenumber lattice on the 2D torus: all integer pairs k with
// 0 < max(|k1|,|k2|) <= n.  The zero mode is structurally excluded, so every
// field living on the lattice has zero space average.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsnse {

using Mode = std::array<int, 2>;

// Stable 64-bit identifier of a mode, independent of any lattice truncation;
// random streams keyed by it agree across Galerkin levels.
inline std::uint64_t mode_key(Mode k) {
    return (std::uint64_t(std::uint32_t(k[0])) << 32) | std::uint64_t(std::uint32_t(k[1]));
}

inline Mode negate(Mode k) { return {-k[0], -k[1]}; }
inline double mode_norm2(Mode k) { return double(k[0]) * k[0] + double(k[1]) * k[1]; }
inline double mode_norm(Mode k) { return std::sqrt(mode_norm2(k)); }
inline Mode perp(Mode k) { return {-k[1], k[0]}; }

class WavenumberLattice {
public:
    explicit WavenumberLattice(int n) : n_(n) {
        if (n < 1)
            throw std::invalid_argument(
                "WavenumberLattice: truncation level must be >= 1, got " + std::to_string(n));
    }

    int level() const { return n_; }
    int side() const { return 2 * n_ + 1; }
    std::size_t size() const { return std::size_t(side()) * side() - 1; }

    bool contains(Mode k) const {
        return (k[0] != 0 || k[1] != 0) && std::abs(k[0]) <= n_ && std::abs(k[1]) <= n_;
    }

    // Position of k in lexicographic (k1,k2) order with (0,0) removed.
    std::size_t index_of(Mode k) const {
        if (!contains(k))
            throw std::out_of_range("WavenumberLattice: mode (" + std::to_string(k[0]) + "," +
                                    std::to_string(k[1]) + ") outside level " + std::to_string(n_));
        const std::size_t lin = std::size_t(k[0] + n_) * side() + std::size_t(k[1] + n_);
        const std::size_t zero = std::size_t(n_) * side() + n_;
        return lin > zero ? lin - 1 : lin;
    }

    Mode mode_at(std::size_t i) const {
        if (i >= size())
            throw std::out_of_range("WavenumberLattice: index " + std::to_string(i) +
                                    " out of range for level " + std::to_string(n_));
        const std::size_t zero = std::size_t(n_) * side() + n_;
        const std::size_t lin = i >= zero ? i + 1 : i;
        return {int(lin / side()) - n_, int(lin % side()) - n_};
    }

    std::vector<Mode> modes() const {
        std::vector<Mode> out;
        out.reserve(size());
        for (std::size_t i = 0; i < size(); ++i) out.push_back(mode_at(i));
        return out;
    }

    // One mode per {k,-k} pair; the mirrored partner carries the conjugate
    // coefficient of any real field.
    static bool representative(Mode k) { return k[0] > 0 || (k[0] == 0 && k[1] > 0); }

    friend bool operator==(const WavenumberLattice& a, const WavenumberLattice& b) {
        return a.n_ == b.n_;
    }

private:
    int n_;
};

} // namespace fsnse
