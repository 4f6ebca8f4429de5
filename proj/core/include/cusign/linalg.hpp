#pragma once

#include <Eigen/Dense>
#include <string>

#include "cusign/rng.hpp"

namespace cusign {

// Row-major dense matrices; vectors are column vectors (Eigen fixes their
// storage order). Dimensions are always carried explicitly by the objects.
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;

bool is_symmetric(const Mat& s, double tol = 1e-9);

// Validates that `s` is square, symmetric, and PSD within `tol` (smallest
// eigenvalue >= -tol). Throws NotPsdError / InvalidArgumentError naming
// `what` in the message.
void require_covariance(const Mat& s, const std::string& what, double tol = 1e-9);

// Symmetric square root by eigendecomposition: H sym, H*H == s within 1e-8.
// Eigenvalues below -1e-9 raise NotPsdError; small negatives clamp to zero.
Mat mat_sqrt_sym(const Mat& s);

// Lower Cholesky-like factor for sampling: an exactly-zero matrix yields a
// zero factor; otherwise LLT, retried once with 1e-12 diagonal jitter for
// semidefinite inputs; failure after jitter raises NotPsdError.
Mat chol_factor(const Mat& s);

// factor * (vector of iid standard normals); the sampling primitive behind
// process and measurement noise.
Vec draw_noise(const Mat& factor, Rng& rng);

}  // namespace cusign
