#include "cusign/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "cusign/errors.hpp"

namespace cusign {

bool is_symmetric(const Mat& s, double tol) {
  if (s.rows() != s.cols()) return false;
  return (s - s.transpose()).cwiseAbs().maxCoeff() <= tol;
}

void require_covariance(const Mat& s, const std::string& what, double tol) {
  if (s.rows() != s.cols()) {
    throw DimensionError(what + ": covariance must be square");
  }
  if (!is_symmetric(s, tol)) {
    throw InvalidArgumentError(what + ": covariance must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(s, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw ConditioningError(what + ": eigendecomposition failed");
  }
  if (es.eigenvalues().minCoeff() < -tol) {
    throw NotPsdError(what + ": covariance has a negative eigenvalue");
  }
}

Mat mat_sqrt_sym(const Mat& s) {
  if (s.rows() != s.cols()) {
    throw DimensionError("mat_sqrt_sym: matrix must be square");
  }
  if (!is_symmetric(s, 1e-9)) {
    throw InvalidArgumentError("mat_sqrt_sym: matrix must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(s);
  if (es.info() != Eigen::Success) {
    throw ConditioningError("mat_sqrt_sym: eigendecomposition failed");
  }
  Vec lam = es.eigenvalues();
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i) < -1e-9) {
      throw NotPsdError("mat_sqrt_sym: matrix is not positive semidefinite");
    }
    lam(i) = std::sqrt(std::max(lam(i), 0.0));
  }
  Mat h = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (h + Mat(h.transpose()));  // re-symmetrize rounding noise
}

Mat chol_factor(const Mat& s) {
  if (s.rows() != s.cols()) {
    throw DimensionError("chol_factor: matrix must be square");
  }
  if (s.isZero(0.0)) {
    return Mat::Zero(s.rows(), s.cols());
  }
  Eigen::LLT<Mat> llt(s);
  if (llt.info() == Eigen::Success) {
    return llt.matrixL();
  }
  // Semidefinite input: retry with diagonal jitter.
  Mat jittered = s + 1e-12 * Mat::Identity(s.rows(), s.cols());
  llt.compute(jittered);
  if (llt.info() == Eigen::Success) {
    return llt.matrixL();
  }
  throw NotPsdError("chol_factor: matrix is not positive semidefinite");
}

Vec draw_noise(const Mat& factor, Rng& rng) {
  Vec w(factor.cols());
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = rng.normal();
  return factor * w;
}

}  // namespace cusign
