#pragma once

// Samplers and log-densities for the laws the kernels are built from. All
// densities are natural logs; Gamma laws use the shape/rate parameterization.

#include "gmh/linalg.hpp"
#include "gmh/rng.hpp"
#include "gmh/types.hpp"

namespace gmh {

/// Draw from N_d(mean, scale * M) where M = chol.lower() chol.lower()^T.
Vector sample_mvnormal(const Vector& mean, const CholFactor& chol, double scale, RngStream& rng);
double mvnormal_logpdf(const Vector& x, const Vector& mean, const CholFactor& chol, double scale);

/// log of a Gamma(shape, rate) draw. Shapes below one use the boost
/// transform G(a) = G(a + 1) U^{1/a}, carried out in log space so tiny shapes
/// do not underflow.
double sample_log_gamma(double shape, double rate, RngStream& rng);
double sample_gamma(double shape, double rate, RngStream& rng);
double gamma_logpdf(double x, double shape, double rate);

/// Beta(a, b) as X / (X + Y) with independent unit-rate Gammas.
double sample_beta(double a, double b, RngStream& rng);

/// (sqrt(lambda) + w_1)^2 + w_2^2 + ... + w_L^2 with standard normal w.
double sample_noncentral_chisq(int dof, double noncentrality, RngStream& rng);

}  // namespace gmh
