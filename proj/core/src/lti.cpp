#include "cusign/lti.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "cusign/errors.hpp"

namespace cusign {

SystemModel SystemModel::create(Mat a, Mat b, Mat c, Mat q, Mat r) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw DimensionError("SystemModel: A must be square");
  if (b.rows() != n) throw DimensionError("SystemModel: B row count must match A");
  if (c.cols() != n) throw DimensionError("SystemModel: C column count must match A");
  const int m = static_cast<int>(b.cols());
  const int s = static_cast<int>(c.rows());
  if (q.rows() != n || q.cols() != n) throw DimensionError("SystemModel: Q must be n x n");
  if (r.rows() != s || r.cols() != s) throw DimensionError("SystemModel: R must be s x s");
  require_covariance(q, "SystemModel Q");
  require_covariance(r, "SystemModel R");

  SystemModel model;
  model.A = std::move(a);
  model.B = std::move(b);
  model.C = std::move(c);
  model.Q = std::move(q);
  model.R = std::move(r);
  model.n = n;
  model.m = m;
  model.s = s;
  model.chol_q = chol_factor(model.Q);
  model.chol_r = chol_factor(model.R);
  return model;
}

EstimatorState solve_steady_state(const SystemModel& model) {
  Eigen::SelfAdjointEigenSolver<Mat> es_r(model.R, Eigen::EigenvaluesOnly);
  if (es_r.info() != Eigen::Success || es_r.eigenvalues().minCoeff() <= 1e-12) {
    throw InvalidArgumentError(
        "solve_steady_state: R must be positive definite (innovation covariance is inverted)");
  }

  const Mat& a = model.A;
  const Mat& c = model.C;
  Mat p = model.Q;
  constexpr double tol = 1e-12;
  constexpr long long cap = 1'000'000;
  bool converged = false;
  for (long long it = 0; it < cap; ++it) {
    const Mat innov = c * p * c.transpose() + model.R;
    Eigen::LLT<Mat> llt(innov);
    if (llt.info() != Eigen::Success) {
      throw ConditioningError("solve_steady_state: innovation covariance is singular");
    }
    const Mat cpat = c * p * a.transpose();
    const Mat next = a * p * a.transpose() + model.Q -
                     cpat.transpose() * llt.solve(cpat);
    const double delta = (next - p).cwiseAbs().maxCoeff();
    p = 0.5 * (next + Mat(next.transpose()));  // keep the iterate symmetric
    if (delta < tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw DivergenceError("solve_steady_state: Riccati iteration did not converge");
  }

  EstimatorState est;
  est.P = p;
  est.Sigma = c * p * c.transpose() + model.R;
  Eigen::LLT<Mat> llt(est.Sigma);
  if (llt.info() != Eigen::Success) {
    throw ConditioningError("solve_steady_state: residual covariance is singular");
  }
  est.SigmaInv = llt.solve(Mat::Identity(model.s, model.s));
  est.SigmaHalf = mat_sqrt_sym(est.Sigma);
  est.L = a * p * c.transpose() * est.SigmaInv;
  est.xhat = Vec::Zero(model.n);
  return est;
}

Vec kf_step(EstimatorState& est, const SystemModel& model, const Vec& u, const Vec& y) {
  if (u.size() != model.m) throw DimensionError("kf_step: input dimension mismatch");
  if (y.size() != model.s) throw DimensionError("kf_step: measurement dimension mismatch");
  if (est.xhat.size() != model.n) throw DimensionError("kf_step: estimate dimension mismatch");
  const Vec r = y - model.C * est.xhat;
  est.xhat = model.A * est.xhat + model.B * u + est.L * r;
  return r;
}

std::pair<Vec, Vec> simulate_step(const SystemModel& model, const Vec& x, const Vec& u,
                                  const Vec& xi, Rng& rng) {
  if (x.size() != model.n) throw DimensionError("simulate_step: state dimension mismatch");
  if (u.size() != model.m) throw DimensionError("simulate_step: input dimension mismatch");
  if (xi.size() != model.s) throw DimensionError("simulate_step: attack dimension mismatch");
  const Vec nu = draw_noise(model.chol_q, rng);
  const Vec eta = draw_noise(model.chol_r, rng);
  Vec x_next = model.A * x + model.B * u + nu;
  Vec y = model.C * x + eta + xi;
  return {std::move(x_next), std::move(y)};
}

}  // namespace cusign
