#pragma once

// Binary field snapshot format:
//   magic "FSNS", version u16, dimension u16 (= 2), level u32, components u16,
//   then one (re, im) float64 pair per (mode, component), little-endian,
//   modes in lexicographic (k1, k2) order (the lattice order), components
//   consecutive within a mode.

#include <iosfwd>
#include <string>

#include "fsnse/field.hpp"

namespace fsnse {

void save_snapshot(const SpectralField& field, std::ostream& out);
void save_snapshot(const SpectralField& field, const std::string& path);

SpectralField load_snapshot(std::istream& in);
SpectralField load_snapshot(const std::string& path);

} // namespace fsnse
