#pragma once

// Dense complex linear algebra for small qubit registers (dimension <= 16).
// Everything here is exact dense arithmetic; no sparsity, no truncation.

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace qthermo {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr int kMaxDim = 16;
inline constexpr double kHermTol = 1e-10;

// Hermitian spectral decomposition with a deterministic eigenvector
// convention: eigenvalues ascending, each column scaled so its
// largest-magnitude component is real and positive.
struct EigenSystem {
  RVec values;   // ascending
  Mat vectors;   // orthonormal columns, values(k) <-> vectors.col(k)
};

void check_finite(const Mat& m, const char* what = "matrix");

// Kronecker product; a's indices are the most significant subsystem.
Mat tensor(const Mat& a, const Mat& b);

// Reduced operator on the kept subsystems (original relative order).
// dims lists subsystem dimensions, most significant first.
Mat partial_trace(const Mat& rho, const std::vector<int>& dims,
                  const std::vector<int>& keep);

EigenSystem eigh(const Mat& h);

// Removes all off-diagonal elements in the given orthonormal basis.
Mat dephase(const Mat& rho, const Mat& basis);

double trace_distance(const Mat& a, const Mat& b);

// Extends a two-qubit unitary to an n-qubit register. q_hi indexes the
// qubit mapped to the more significant bit of u4, q_lo the less
// significant one. Qubit 0 is the most significant register bit.
Mat embed_two_qubit(const Mat& u4, int n_qubits, int q_hi, int q_lo);

Mat pauli_x();
Mat pauli_y();
Mat pauli_z();
Mat identity(int n);

double hermiticity_defect(const Mat& m);

}  // namespace qthermo
