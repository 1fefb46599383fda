#include "qthermo/infomeasures.hpp"

#include <cmath>
#include <stdexcept>

namespace qthermo {

namespace {
constexpr double kEigFloor = 1e-12;
}

double binary_entropy(double p) {
  double h = 0.0;
  if (p > kEigFloor) h -= p * std::log(p);
  if (1.0 - p > kEigFloor) h -= (1.0 - p) * std::log(1.0 - p);
  return h;
}

double vn_entropy(const Mat& rho) {
  EigenSystem es = eigh(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    double lam = es.values(i);
    if (lam > kEigFloor) s -= lam * std::log(lam);
  }
  return s;
}

double vn_entropy(const DensityMatrix& rho) { return vn_entropy(rho.rho); }

double conditional_entropy(const DensityMatrix& rho_ab,
                           const std::string& conditioning) {
  double s_ab = vn_entropy(rho_ab);
  double s_b = vn_entropy(rho_ab.reduce({conditioning}));
  return s_ab - s_b;
}

double mutual_information(const DensityMatrix& rho_ab) {
  if (rho_ab.labels.size() != 2) {
    throw std::invalid_argument("mutual_information: expected a bipartite state");
  }
  double s_a = vn_entropy(rho_ab.reduce({rho_ab.labels[0]}));
  double s_b = vn_entropy(rho_ab.reduce({rho_ab.labels[1]}));
  return s_a + s_b - vn_entropy(rho_ab);
}

double conditional_mutual_information(const DensityMatrix& rho,
                                      const std::string& a,
                                      const std::string& b,
                                      const std::string& c) {
  double s_ac = vn_entropy(rho.reduce({a, c}));
  double s_bc = vn_entropy(rho.reduce({b, c}));
  double s_c = vn_entropy(rho.reduce({c}));
  double s_abc = vn_entropy(rho.reduce({a, b, c}));
  return s_ac + s_bc - s_c - s_abc;
}

double coherence_j(const Mat& rho, const Mat& basis) {
  return vn_entropy(dephase(rho, basis)) - vn_entropy(rho);
}

}  // namespace qthermo
