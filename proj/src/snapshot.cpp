#include "fsnse/snapshot.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace fsnse {

namespace {

const char MAGIC[4] = {'F', 'S', 'N', 'S'};
const std::uint16_t VERSION = 1;

// The format is little-endian; this code targets little-endian hosts and the
// writers/readers below assume native order matches.
template <typename T>
void write_pod(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T read_pod(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw std::runtime_error("snapshot: truncated stream");
    return v;
}

} // namespace

void save_snapshot(const SpectralField& field, std::ostream& out) {
    out.write(MAGIC, 4);
    write_pod<std::uint16_t>(out, VERSION);
    write_pod<std::uint16_t>(out, 2);
    write_pod<std::uint32_t>(out, std::uint32_t(field.level()));
    write_pod<std::uint16_t>(out, std::uint16_t(field.components()));
    for (std::size_t i = 0; i < field.mode_count(); ++i)
        for (int c = 0; c < field.components(); ++c) {
            write_pod<double>(out, field.at(i, c).real());
            write_pod<double>(out, field.at(i, c).imag());
        }
    if (!out) throw std::runtime_error("snapshot: write failed");
}

void save_snapshot(const SpectralField& field, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("snapshot: cannot open '" + path + "' for writing");
    save_snapshot(field, out);
}

SpectralField load_snapshot(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, MAGIC, 4) != 0)
        throw std::runtime_error("snapshot: bad magic bytes (expected FSNS)");
    const auto version = read_pod<std::uint16_t>(in);
    if (version != VERSION)
        throw std::runtime_error("snapshot: unsupported version " + std::to_string(version));
    const auto dim = read_pod<std::uint16_t>(in);
    if (dim != 2) throw std::runtime_error("snapshot: unsupported dimension " + std::to_string(dim));
    const auto level = read_pod<std::uint32_t>(in);
    const auto components = read_pod<std::uint16_t>(in);

    const WavenumberLattice lattice{int(level)};
    SpectralField field{lattice, int(components)};
    for (std::size_t i = 0; i < field.mode_count(); ++i)
        for (int c = 0; c < components; ++c) {
            const double re = read_pod<double>(in);
            const double im = read_pod<double>(in);
            field.at(i, c) = Complex(re, im);
        }
    return field;
}

SpectralField load_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("snapshot: cannot open '" + path + "'");
    return load_snapshot(in);
}

} // namespace fsnse
