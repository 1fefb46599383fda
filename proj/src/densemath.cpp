#include "qthermo/densemath.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qthermo {

void check_finite(const Mat& m, const char* what) {
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string(what) + " contains NaN or Inf");
  }
}

Mat tensor(const Mat& a, const Mat& b) {
  check_finite(a, "tensor lhs");
  check_finite(b, "tensor rhs");
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat partial_trace(const Mat& rho, const std::vector<int>& dims,
                  const std::vector<int>& keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  long total = 1;
  for (int d : dims) total *= d;
  if (rho.rows() != rho.cols() || rho.rows() != total) {
    throw std::invalid_argument("partial_trace: dims do not match matrix size");
  }
  const int n = static_cast<int>(dims.size());
  std::vector<bool> kept(n, false);
  for (int k : keep) {
    if (k < 0 || k >= n) throw std::invalid_argument("partial_trace: keep index out of range");
    kept[k] = true;
  }
  long dk = 1, dt = 1;
  for (int i = 0; i < n; ++i) (kept[i] ? dk : dt) *= dims[i];

  // strides of each subsystem in the full index (most significant first)
  std::vector<long> stride(n);
  long s = 1;
  for (int i = n - 1; i >= 0; --i) { stride[i] = s; s *= dims[i]; }

  // map (kept-multi-index, traced-multi-index) -> full index
  std::vector<long> kept_sub, traced_sub;
  for (int i = 0; i < n; ++i) (kept[i] ? kept_sub : traced_sub).push_back(i);
  auto unpack = [&](long idx, const std::vector<long>& subs) {
    long full = 0;
    for (auto it = subs.rbegin(); it != subs.rend(); ++it) {
      long d = dims[*it];
      full += (idx % d) * stride[*it];
      idx /= d;
    }
    return full;
  };

  Mat out = Mat::Zero(dk, dk);
  for (long i = 0; i < dk; ++i) {
    long ri = unpack(i, kept_sub);
    for (long j = 0; j < dk; ++j) {
      long rj = unpack(j, kept_sub);
      cplx acc = 0.0;
      for (long t = 0; t < dt; ++t) {
        long rt = unpack(t, traced_sub);
        acc += rho(ri + rt, rj + rt);
      }
      out(i, j) = acc;
    }
  }
  return out;
}

double hermiticity_defect(const Mat& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

EigenSystem eigh(const Mat& h) {
  check_finite(h, "eigh input");
  if (h.rows() != h.cols()) throw std::invalid_argument("eigh: non-square input");
  if (hermiticity_defect(h) >= kHermTol) {
    throw std::invalid_argument("eigh: input not Hermitian within 1e-10");
  }
  Mat sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigh: eigensolver failed to converge");
  }
  EigenSystem es{solver.eigenvalues(), solver.eigenvectors()};
  // fixed phase convention: largest-magnitude component real-positive
  for (Eigen::Index k = 0; k < es.vectors.cols(); ++k) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < es.vectors.rows(); ++i) {
      double a = std::abs(es.vectors(i, k));
      if (a > best + 1e-15) { best = a; imax = i; }
    }
    cplx z = es.vectors(imax, k);
    es.vectors.col(k) *= std::conj(z) / std::abs(z);
  }
  return es;
}

Mat dephase(const Mat& rho, const Mat& basis) {
  check_finite(rho, "dephase state");
  if (basis.rows() != rho.rows() || basis.cols() != rho.rows()) {
    throw std::invalid_argument("dephase: basis must be square and span the space");
  }
  if ((basis.adjoint() * basis - Mat::Identity(basis.cols(), basis.cols()))
          .cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("dephase: basis not orthonormal");
  }
  Mat out = Mat::Zero(rho.rows(), rho.cols());
  for (Eigen::Index k = 0; k < basis.cols(); ++k) {
    Vec v = basis.col(k);
    cplx d = v.dot(rho * v);  // Eigen dot conjugates the lhs
    out += d * (v * v.adjoint());
  }
  return out;
}

double trace_distance(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("trace_distance: dimension mismatch");
  }
  EigenSystem es = eigh(a - b);
  return 0.5 * es.values.cwiseAbs().sum();
}

Mat embed_two_qubit(const Mat& u4, int n_qubits, int q_hi, int q_lo) {
  if (u4.rows() != 4 || u4.cols() != 4) {
    throw std::invalid_argument("embed_two_qubit: expected a 4x4 matrix");
  }
  if (q_hi == q_lo || q_hi < 0 || q_lo < 0 || q_hi >= n_qubits || q_lo >= n_qubits) {
    throw std::invalid_argument("embed_two_qubit: bad qubit indices");
  }
  const long dim = 1L << n_qubits;
  const int sh_hi = n_qubits - 1 - q_hi;
  const int sh_lo = n_qubits - 1 - q_lo;
  Mat out = Mat::Zero(dim, dim);
  for (long col = 0; col < dim; ++col) {
    const int a = static_cast<int>((col >> sh_hi) & 1);
    const int b = static_cast<int>((col >> sh_lo) & 1);
    const long rest = col & ~((1L << sh_hi) | (1L << sh_lo));
    for (int a2 = 0; a2 < 2; ++a2) {
      for (int b2 = 0; b2 < 2; ++b2) {
        long row = rest | (static_cast<long>(a2) << sh_hi) |
                   (static_cast<long>(b2) << sh_lo);
        out(row, col) = u4(a2 * 2 + b2, a * 2 + b);
      }
    }
  }
  return out;
}

Mat pauli_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Mat pauli_y() {
  Mat m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

Mat pauli_z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Mat identity(int n) { return Mat::Identity(n, n); }

}  // namespace qthermo
