#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "comsim/linalg.hpp"
#include "comsim/model.hpp"

namespace comsim {

// Quadratures follow X = (o^+ + o)/sqrt(2), Y = i(o^+ - o)/sqrt(2); the vacuum
// variance is 1/2 per quadrature and the Duan threshold is 2.

inline constexpr double kPhysicalitySlack = 1e-9;
inline constexpr double kDiscriminantSlack = 1e-12;

/// Steady-state second moments of quadrature fluctuations, ordered
/// (X_1, Y_1, ..., X_N, Y_N) per the topology's labels. Construction checks
/// symmetry and the uncertainty principle.
class CovarianceMatrix {
public:
    CovarianceMatrix(linalg::RealMatrix v, Topology topology);

    [[nodiscard]] const linalg::RealMatrix& matrix() const noexcept { return v_; }
    [[nodiscard]] const Topology& topology() const noexcept { return topology_; }
    [[nodiscard]] double min_symplectic_eigenvalue() const noexcept { return min_symplectic_; }
    /// Smallest quadrature variance. Squeezed quadratures fall below the
    /// vacuum value 1/2 without violating the uncertainty relation.
    [[nodiscard]] double min_diagonal() const noexcept { return min_diagonal_; }
    [[nodiscard]] bool above_vacuum_floor() const noexcept { return min_diagonal_ >= 0.5 - kPhysicalitySlack; }

private:
    linalg::RealMatrix v_;
    Topology topology_;
    double min_symplectic_ = 0.0;
    double min_diagonal_ = 0.0;
};

struct Bipartition {
    std::string m;
    std::string n;

    [[nodiscard]] std::string name() const { return m + "|" + n; }
};

/// Canonical bipartitions of a topology: every mode pair, the phonon b listed
/// second when present.
[[nodiscard]] std::vector<Bipartition> all_bipartitions(const Topology& topology);

/// 4x4 CM of two modes in (X_m, Y_m, X_n, Y_n) order with its 2x2 blocks.
struct ReducedCM {
    Eigen::Matrix4d v;

    [[nodiscard]] Eigen::Matrix2d block_a() const { return v.topLeftCorner<2, 2>(); }
    [[nodiscard]] Eigen::Matrix2d block_b() const { return v.bottomRightCorner<2, 2>(); }
    [[nodiscard]] Eigen::Matrix2d block_c() const { return v.topRightCorner<2, 2>(); }
};

/// Symplectic spectrum (ascending, one value per mode) of a 2N x 2N CM.
[[nodiscard]] std::vector<double> symplectic_eigenvalues(const linalg::RealMatrix& v);

[[nodiscard]] ReducedCM reduce(const CovarianceMatrix& cm, const Bipartition& bp);

/// Smallest symplectic eigenvalue of the partial transpose, from the
/// determinant invariants.
[[nodiscard]] double min_pt_symplectic_eigenvalue(const ReducedCM& r);

/// max(0, -ln(2 nu^-)).
[[nodiscard]] double log_negativity(const ReducedCM& r);
[[nodiscard]] double log_negativity(const CovarianceMatrix& cm, const Bipartition& bp);

/// (V_XX + V_YY - 1)/2 of the phonon mode.
[[nodiscard]] double phonon_occupation_cm(const CovarianceMatrix& cm);

/// Var(X_m + X_n) + Var(Y_m - Y_n) on the raw quadratures. Below 2 proves
/// inseparability.
[[nodiscard]] double duan_sum(const CovarianceMatrix& cm, const Bipartition& bp);
[[nodiscard]] double duan_sum(const ReducedCM& r);

/// Duan sum minimized over independent local-oscillator phases of the two
/// modes. Only the sum of the two phases matters, so the minimum is closed form.
[[nodiscard]] double duan_sum_optimized(const ReducedCM& r);
[[nodiscard]] double duan_sum_optimized(const CovarianceMatrix& cm, const Bipartition& bp);

/// Solves the Lyapunov equation for a model and wraps the result.
[[nodiscard]] CovarianceMatrix steady_covariance(const LinearModel& model);

}  // namespace comsim
