#pragma once

// Entropic functionals in natural-log units (nats, k_B = 1).

#include <string>
#include <vector>

#include "qthermo/densemath.hpp"
#include "qthermo/states.hpp"

namespace qthermo {

// Shannon entropy of (p, 1-p).
double binary_entropy(double p);

// -sum lambda ln lambda; eigenvalues below 1e-12 contribute zero.
double vn_entropy(const Mat& rho);
double vn_entropy(const DensityMatrix& rho);

// S_AB - S_B where B is the conditioning subsystem.
double conditional_entropy(const DensityMatrix& rho_ab,
                           const std::string& conditioning);

// I_{A:B} = S_A + S_B - S_AB for a bipartite state.
double mutual_information(const DensityMatrix& rho_ab);

// I_{A:B|C} = S_AC + S_BC - S_C - S_ABC.
double conditional_mutual_information(const DensityMatrix& rho,
                                      const std::string& a,
                                      const std::string& b,
                                      const std::string& c);

// J = S(dephased rho) - S(rho); relative entropy of coherence in `basis`.
double coherence_j(const Mat& rho, const Mat& basis);

}  // namespace qthermo
