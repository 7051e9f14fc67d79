#include "comsim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "comsim/error.hpp"

namespace comsim::linalg {

void require_finite(const RealMatrix& m, const char* what) {
    if (!m.allFinite()) throw Error(ErrorCode::NonFinite, std::string(what) + " has NaN/Inf entries");
}

void require_square(const RealMatrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + " must be square and non-empty, got " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()));
    }
}

bool is_symmetric(const RealMatrix& m, double rel_tol) {
    if (m.rows() != m.cols()) return false;
    const double scale = std::max(1e-300, m.cwiseAbs().maxCoeff());
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

double stability_tolerance(double max_abs_eigenvalue) noexcept {
    return 1e-9 * std::max(1.0, max_abs_eigenvalue);
}

StabilityReport stability(const RealMatrix& a) {
    require_square(a, "drift matrix");
    require_finite(a, "drift matrix");

    Eigen::EigenSolver<RealMatrix> solver(a, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::EigenFailure, "eigenvalue iteration did not converge");

    StabilityReport report;
    const auto& ev = solver.eigenvalues();
    double max_abs = 0.0;
    report.margin = -std::numeric_limits<double>::infinity();
    report.eigen_real_parts.reserve(static_cast<std::size_t>(ev.size()));
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        report.eigen_real_parts.push_back(ev[i].real());
        report.margin = std::max(report.margin, ev[i].real());
        max_abs = std::max(max_abs, std::abs(ev[i]));
    }
    std::sort(report.eigen_real_parts.begin(), report.eigen_real_parts.end());
    report.tolerance = stability_tolerance(max_abs);
    report.is_stable = report.margin < -report.tolerance;
    report.marginal = std::abs(report.margin) <= report.tolerance;
    return report;
}

double lyapunov_residual(const RealMatrix& a, const RealMatrix& v, const RealMatrix& d) {
    const RealMatrix r = a * v + v * a.transpose() + d;
    const double dn = d.norm();
    return dn > 0.0 ? r.norm() / dn : r.norm();
}

RealMatrix solve_lyapunov(const RealMatrix& a, const RealMatrix& d) {
    require_square(a, "drift matrix");
    require_square(d, "diffusion matrix");
    if (a.rows() != d.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "drift and diffusion matrices differ in size");
    }
    require_finite(a, "drift matrix");
    require_finite(d, "diffusion matrix");
    if (!is_symmetric(d, 1e-12)) throw Error(ErrorCode::InvalidParameter, "diffusion matrix is not symmetric");

    const Eigen::Index n = a.rows();
    const RealMatrix eye = RealMatrix::Identity(n, n);

    // Column-major vec: vec(A V) = (I (x) A) vec(V), vec(V A^T) = (A (x) I) vec(V).
    RealMatrix op = RealMatrix::Zero(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            op.block(i * n, j * n, n, n) += a(i, j) * eye;
            if (i == j) op.block(i * n, j * n, n, n) += a;
        }
    }
    Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(d.data(), n * n);

    Eigen::PartialPivLU<RealMatrix> lu(op);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-14)) {
        throw Error(ErrorCode::SingularSystem,
                    "vectorized Lyapunov operator is numerically singular (rcond=" + std::to_string(rcond) + ")");
    }
    Eigen::VectorXd x = lu.solve(rhs);
    // One refinement pass keeps the residual well below the bound on stiff spectra.
    x += lu.solve(rhs - op * x);

    RealMatrix v = Eigen::Map<RealMatrix>(x.data(), n, n);
    v = 0.5 * (v + v.transpose()).eval();
    require_finite(v, "Lyapunov solution");

    const double res = lyapunov_residual(a, v, d);
    if (res > 1e-10) {
        throw Error(ErrorCode::SingularSystem, "Lyapunov residual " + std::to_string(res) + " exceeds 1e-10");
    }
    return v;
}

RealMatrix integrate_lyapunov_oracle(const RealMatrix& a, const RealMatrix& d, double dt, double tol,
                                     long max_steps) {
    require_square(a, "drift matrix");
    require_square(d, "diffusion matrix");
    if (a.rows() != d.rows()) throw Error(ErrorCode::DimensionMismatch, "drift and diffusion matrices differ in size");
    if (!(dt > 0.0) || !(tol > 0.0)) throw Error(ErrorCode::InvalidParameter, "dt and tol must be positive");

    const Eigen::Index n = a.rows();
    const RealMatrix at = a.transpose();
    auto rhs = [&](const RealMatrix& v) -> RealMatrix { return a * v + v * at + d; };

    constexpr int max_halvings = 30;
    constexpr double blowup = 1e100;
    long steps = 0;
    for (int halving = 0; halving <= max_halvings; ++halving, dt *= 0.5) {
        RealMatrix v = RealMatrix::Zero(n, n);
        bool diverged = false;
        while (steps < max_steps) {
            const RealMatrix k1 = rhs(v);
            if (k1.norm() < tol) return 0.5 * (v + v.transpose());
            const RealMatrix k2 = rhs(v + 0.5 * dt * k1);
            const RealMatrix k3 = rhs(v + 0.5 * dt * k2);
            const RealMatrix k4 = rhs(v + dt * k3);
            v += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            ++steps;
            if (!v.allFinite() || v.cwiseAbs().maxCoeff() > blowup) {
                diverged = true;
                break;
            }
        }
        if (!diverged) break;
    }
    throw Error(ErrorCode::NotConverged,
                "Lyapunov integration did not reach ||dV/dt|| < tol within " + std::to_string(max_steps) + " steps");
}

}  // namespace comsim::linalg
