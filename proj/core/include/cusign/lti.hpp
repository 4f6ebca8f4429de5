#pragma once

#include <utility>

#include "cusign/linalg.hpp"
#include "cusign/rng.hpp"

namespace cusign {

// Discrete LTI plant x' = A x + B u + nu, y = C x + eta (+ attack), with
// nu ~ N(0, Q), eta ~ N(0, R). Construction validates shapes and that Q, R
// are symmetric PSD (within 1e-9); positive-definiteness of R is required
// only when solving for the steady-state filter. Sampling factors of Q and R
// are precomputed once.
struct SystemModel {
  Mat A, B, C, Q, R;
  int n = 0, m = 0, s = 0;
  Mat chol_q, chol_r;

  static SystemModel create(Mat a, Mat b, Mat c, Mat q, Mat r);
};

// Steady-state filter quantities: prediction-error covariance P, constant
// gain L, innovation covariance Sigma with its inverse and symmetric square
// root, and the running estimate.
struct EstimatorState {
  Mat P, L, Sigma, SigmaInv, SigmaHalf;
  Vec xhat;
};

// P solves the fixed point of the Riccati iteration
//   P <- A P A' + Q - A P C' (C P C' + R)^{-1} C P A'
// started from P0 = Q, iterated until the max-abs update is below 1e-12
// (cap 1e6 iterations -> DivergenceError). Requires min eig(R) > 1e-12.
EstimatorState solve_steady_state(const SystemModel& model);

// Residual r = y - C xhat (returned), then xhat <- A xhat + B u + L r.
Vec kf_step(EstimatorState& est, const SystemModel& model, const Vec& u, const Vec& y);

// One plant step: returns (x', y) with x' = A x + B u + nu and
// y = C x + eta + xi. Noise order is fixed (process noise first, then
// measurement noise) so traces are reproducible.
std::pair<Vec, Vec> simulate_step(const SystemModel& model, const Vec& x, const Vec& u,
                                  const Vec& xi, Rng& rng);

}  // namespace cusign
