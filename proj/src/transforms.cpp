#include "fsnse/transforms.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <string>

namespace fsnse {
namespace {

// FFTW planning is not thread-safe; executing a plan on caller-owned buffers
// is.  Plans are cached per (size, direction) and shared by all threads.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache c;
        return c;
    }

    fftw_plan get(int m, int sign) {
        std::lock_guard<std::mutex> lock(mu_);
        auto key = std::make_pair(m, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        // Plan on a scratch buffer; execution uses fftw_execute_dft with
        // caller buffers of identical layout and alignment.
        fftw_complex* buf = fftw_alloc_complex(std::size_t(m) * m);
        fftw_plan p = fftw_plan_dft_2d(m, m, buf, buf, sign, FFTW_ESTIMATE);
        fftw_free(buf);
        plans_[key] = p;
        return p;
    }

private:
    PlanCache() = default;
    std::mutex mu_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

struct FftwBuffer {
    explicit FftwBuffer(std::size_t count) : data(fftw_alloc_complex(count)), n(count) {
        for (std::size_t i = 0; i < count; ++i) data[i][0] = data[i][1] = 0.0;
    }
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    fftw_complex* data;
    std::size_t n;
};

inline int wrap(int k, int m) { return k >= 0 ? k : k + m; }

void require_resolving(int m, int n, const char* op) {
    if (m < 2 * n + 1)
        throw std::invalid_argument(std::string(op) + ": grid size " + std::to_string(m) +
                                    " too small for lattice level " + std::to_string(n) +
                                    " (need >= " + std::to_string(2 * n + 1) + ")");
}

} // namespace

int next_pow2(int v) {
    int m = 1;
    while (m < v) m *= 2;
    return m;
}

int dealias_grid_size(int na, int nb, int no) {
    // No alias image of the product (bandwidth na+nb) may land inside the
    // retained lattice, and the grid must still resolve the output lattice.
    return next_pow2(std::max(na + nb + no + 1, 2 * no + 1));
}

PhysicalGrid synthesize(const SpectralField& field, int grid_size) {
    const int m = grid_size;
    const int n = field.level();
    require_resolving(m, n, "synthesize");

    PhysicalGrid grid;
    grid.m = m;
    grid.components = field.components();
    grid.values.assign(std::size_t(m) * m * field.components(), 0.0);

    FftwBuffer buf(std::size_t(m) * m);
    fftw_plan plan = PlanCache::instance().get(m, FFTW_BACKWARD);

    for (int c = 0; c < field.components(); ++c) {
        for (std::size_t i = 0; i < buf.n; ++i) buf.data[i][0] = buf.data[i][1] = 0.0;
        for (std::size_t i = 0; i < field.mode_count(); ++i) {
            const Mode k = field.lattice().mode_at(i);
            const Complex z = field.at(i, c);
            fftw_complex& slot = buf.data[std::size_t(wrap(k[0], m)) * m + wrap(k[1], m)];
            slot[0] = z.real();
            slot[1] = z.imag();
        }
        fftw_execute_dft(plan, buf.data, buf.data);
        for (int j1 = 0; j1 < m; ++j1)
            for (int j2 = 0; j2 < m; ++j2)
                grid.at(j1, j2, c) = buf.data[std::size_t(j1) * m + j2][0];
    }
    return grid;
}

SpectralField analyze(const PhysicalGrid& grid, const WavenumberLattice& lattice,
                      int components) {
    const int m = grid.m;
    const int n = lattice.level();
    require_resolving(m, n, "analyze");
    const int comps = components < 0 ? grid.components : components;
    if (comps > grid.components)
        throw std::invalid_argument("analyze: requested " + std::to_string(comps) +
                                    " components from a grid with " +
                                    std::to_string(grid.components));

    SpectralField field(lattice, comps);
    FftwBuffer buf(std::size_t(m) * m);
    fftw_plan plan = PlanCache::instance().get(m, FFTW_FORWARD);
    const double scale = 1.0 / (double(m) * m);

    for (int c = 0; c < comps; ++c) {
        for (int j1 = 0; j1 < m; ++j1)
            for (int j2 = 0; j2 < m; ++j2) {
                fftw_complex& slot = buf.data[std::size_t(j1) * m + j2];
                slot[0] = grid.at(j1, j2, c);
                slot[1] = 0.0;
            }
        fftw_execute_dft(plan, buf.data, buf.data);
        for (std::size_t i = 0; i < field.mode_count(); ++i) {
            const Mode k = field.lattice().mode_at(i);
            const fftw_complex& slot = buf.data[std::size_t(wrap(k[0], m)) * m + wrap(k[1], m)];
            field.at(i, c) = Complex(slot[0] * scale, slot[1] * scale);
        }
    }
    return field;
}

SpectralField dealiased_pointwise_product(const SpectralField& a, const SpectralField& b,
                                          const WavenumberLattice& out_lattice) {
    const int no = out_lattice.level();
    if (a.level() > no || b.level() > no)
        throw std::invalid_argument(
            "dealiased_pointwise_product: factor levels (" + std::to_string(a.level()) + ", " +
            std::to_string(b.level()) + ") exceed output level " + std::to_string(no) +
            "; the truncated product would alias");

    int comps_out;
    if (a.components() == b.components())
        comps_out = a.components();
    else if (a.components() == 1 || b.components() == 1)
        comps_out = std::max(a.components(), b.components());
    else
        throw std::invalid_argument("dealiased_pointwise_product: component counts " +
                                    std::to_string(a.components()) + " and " +
                                    std::to_string(b.components()) + " are incompatible");

    const int m = dealias_grid_size(a.level(), b.level(), no);
    const PhysicalGrid ga = synthesize(a, m);
    const PhysicalGrid gb = synthesize(b, m);

    PhysicalGrid gp;
    gp.m = m;
    gp.components = comps_out;
    gp.values.assign(std::size_t(m) * m * comps_out, 0.0);
    for (int j1 = 0; j1 < m; ++j1)
        for (int j2 = 0; j2 < m; ++j2)
            for (int c = 0; c < comps_out; ++c) {
                const double va = ga.at(j1, j2, a.components() == 1 ? 0 : c);
                const double vb = gb.at(j1, j2, b.components() == 1 ? 0 : c);
                gp.at(j1, j2, c) = va * vb;
            }
    return analyze(gp, out_lattice, comps_out);
}

} // namespace fsnse
