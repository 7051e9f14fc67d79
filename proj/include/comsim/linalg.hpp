#pragma once

#include <Eigen/Dense>
#include <vector>

namespace comsim::linalg {

/// Dense, double precision. Topologies here never exceed 8x8.
using RealMatrix = Eigen::MatrixXd;

struct StabilityReport {
    bool is_stable = false;
    /// Set when the margin lies within the tolerance band around zero.
    bool marginal = false;
    std::vector<double> eigen_real_parts;
    /// max Re(lambda) over the spectrum.
    double margin = 0.0;
    double tolerance = 0.0;
};

/// Throws NonFinite if any entry is NaN or Inf.
void require_finite(const RealMatrix& m, const char* what);
void require_square(const RealMatrix& m, const char* what);

[[nodiscard]] bool is_symmetric(const RealMatrix& m, double rel_tol);

/// Stability tolerance: 1e-9 * max(1, max|lambda|).
[[nodiscard]] double stability_tolerance(double max_abs_eigenvalue) noexcept;

/// Spectral stability test. A model is stable iff margin < -tolerance; values
/// inside the band are flagged marginal and reported unstable.
[[nodiscard]] StabilityReport stability(const RealMatrix& a);

/// Solves A V + V A^T = -D by vectorizing into an n^2 x n^2 dense system.
/// The result is symmetrized. Throws SingularSystem when the vectorized
/// operator is numerically singular (marginal stability) or the residual
/// bound cannot be met.
[[nodiscard]] RealMatrix solve_lyapunov(const RealMatrix& a, const RealMatrix& d);

/// ||A V + V A^T + D||_F / ||D||_F (absolute norm when D = 0).
[[nodiscard]] double lyapunov_residual(const RealMatrix& a, const RealMatrix& v, const RealMatrix& d);

/// Reference solution by integrating dV/dt = A V + V A^T + D from V = 0 with
/// classical RK4. The step is halved whenever the trajectory blows up.
/// Stops once ||dV/dt||_F < tol; throws NotConverged past the step budget.
[[nodiscard]] RealMatrix integrate_lyapunov_oracle(const RealMatrix& a, const RealMatrix& d, double dt,
                                                   double tol, long max_steps = 20'000'000);

}  // namespace comsim::linalg
