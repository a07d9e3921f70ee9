#pragma once

// Transform pair between spectral coefficients and collocation grids, plus the
// dealiased (exact) pointwise product.  Products are computed on a grid large
// enough that no aliased mode falls inside the output lattice, so the retained
// coefficients equal the exact truncated convolution.

#include "fsnse/field.hpp"

namespace fsnse {

// values(x_j) = sum_k coeff(k) e^{ik.x_j}; requires grid_size >= 2n+1.
PhysicalGrid synthesize(const SpectralField& field, int grid_size);

// coeff(k) = m^-2 sum_j values(x_j) e^{-ik.x_j}; the zero mode is discarded.
// Requires grid.m >= 2n+1 for the target lattice.
SpectralField analyze(const PhysicalGrid& grid, const WavenumberLattice& lattice,
                      int components = -1);

// Exact truncated convolution of a and b restricted to out_lattice, computed by
// zero-padded transforms.  Component rule: equal component counts multiply
// componentwise; a scalar factor broadcasts over the other field's components.
// Fields above the output level are rejected (their product cannot be
// represented without aliasing into the retained modes).
SpectralField dealiased_pointwise_product(const SpectralField& a, const SpectralField& b,
                                          const WavenumberLattice& out_lattice);

// Smallest power of two >= v.
int next_pow2(int v);

// Grid size used for an exact product with factors at levels na, nb and output
// level no: a power of two >= na+nb+no+1.
int dealias_grid_size(int na, int nb, int no);

} // namespace fsnse
