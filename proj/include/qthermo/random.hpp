#pragma once

// Seeded sampling helpers. Uniform doubles are produced from the raw
// 64-bit stream so identical seeds give identical results everywhere.

#include <cmath>
#include <cstdint>
#include <random>

#include "qthermo/densemath.hpp"

namespace qthermo {

using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Box-Muller standard normal.
inline double gaussian(Rng& rng) {
  double u1 = uniform01(rng), u2 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

inline Mat ginibre(int dim, Rng& rng) {
  Mat g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = cplx(gaussian(rng), gaussian(rng));
  return g;
}

// Haar-distributed unitary (Ginibre + QR with phase-fixed R diagonal).
inline Mat haar_unitary(int dim, Rng& rng) {
  Mat g = ginibre(dim, rng);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < dim; ++k) {
    cplx d = r(k, k);
    q.col(k) *= (std::abs(d) > 0.0) ? d / std::abs(d) : cplx(1.0, 0.0);
  }
  return q;
}

// Full-rank random density matrix G G^dag / Tr.
inline Mat random_density(int dim, Rng& rng) {
  Mat g = ginibre(dim, rng);
  Mat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

}  // namespace qthermo
