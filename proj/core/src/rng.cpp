#include "cusign/rng.hpp"

#include <cmath>

#include "cusign/errors.hpp"

namespace cusign {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

double Rng::chi_square(int dof) {
  if (dof < 1) throw InvalidArgumentError("chi_square: dof must be >= 1");
  double acc = 0.0;
  for (int i = 0; i < dof; ++i) {
    const double n = normal();
    acc += n * n;
  }
  return acc;
}

}  // namespace cusign
