#include "iscsc/linalg.hpp"

#include "iscsc/errors.hpp"

#include <Eigen/Eigenvalues>

namespace iscsc::linalg {

CMat hermitian_part(const CMat& m) { return 0.5 * (m + m.adjoint()); }

double min_eigenvalue(const CMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double min_eigenvalue(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

CMat psd_sqrt(const CMat& m, double tol) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(m));
  Vec ev = es.eigenvalues();
  if (ev.size() > 0 && ev(0) < -tol) {
    throw DomainError("matrix is not PSD (min eigenvalue " + std::to_string(ev(0)) + ")");
  }
  ev = ev.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

CMat project_psd(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(m));
  const Vec ev = es.eigenvalues().cwiseMax(0.0);
  CMat p = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  return hermitian_part(p);
}

double condition_number(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  const Vec& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  const double smin = s(s.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

bool all_finite(const Mat& m) { return m.allFinite(); }

}  // namespace iscsc::linalg
