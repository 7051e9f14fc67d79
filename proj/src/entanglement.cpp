#include "comsim/entanglement.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "comsim/error.hpp"

namespace comsim {

namespace {

linalg::RealMatrix symplectic_form(Eigen::Index modes) {
    linalg::RealMatrix omega = linalg::RealMatrix::Zero(2 * modes, 2 * modes);
    for (Eigen::Index k = 0; k < modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

}  // namespace

std::vector<double> symplectic_eigenvalues(const linalg::RealMatrix& v) {
    linalg::require_square(v, "covariance matrix");
    if (v.rows() % 2 != 0) throw Error(ErrorCode::DimensionMismatch, "covariance matrix must have even size");
    const Eigen::Index modes = v.rows() / 2;
    // Omega V has eigenvalues +-i nu_k.
    Eigen::EigenSolver<linalg::RealMatrix> solver(symplectic_form(modes) * v, false);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::EigenFailure, "symplectic spectrum did not converge");
    std::vector<double> mags;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) mags.push_back(std::abs(solver.eigenvalues()[i]));
    std::sort(mags.begin(), mags.end());
    std::vector<double> nu;
    for (std::size_t i = 0; i + 1 < mags.size(); i += 2) nu.push_back(0.5 * (mags[i] + mags[i + 1]));
    return nu;
}

CovarianceMatrix::CovarianceMatrix(linalg::RealMatrix v, Topology topology)
    : v_(std::move(v)), topology_(std::move(topology)) {
    linalg::require_square(v_, "covariance matrix");
    linalg::require_finite(v_, "covariance matrix");
    if (v_.rows() != static_cast<Eigen::Index>(2 * topology_.mode_count())) {
        throw Error(ErrorCode::DimensionMismatch, "covariance size does not match topology");
    }
    if (!linalg::is_symmetric(v_, 1e-12)) throw Error(ErrorCode::UnphysicalCM, "covariance matrix is not symmetric");
    min_diagonal_ = v_.diagonal().minCoeff();
    min_symplectic_ = symplectic_eigenvalues(v_).front();
    if (min_symplectic_ < 0.5 - kPhysicalitySlack) {
        throw Error(ErrorCode::UnphysicalCM,
                    "symplectic eigenvalue " + std::to_string(min_symplectic_) + " violates the uncertainty bound");
    }
}

std::vector<Bipartition> all_bipartitions(const Topology& topology) {
    std::vector<Bipartition> out;
    const auto& l = topology.labels;
    for (std::size_t i = 0; i < l.size(); ++i) {
        for (std::size_t j = i + 1; j < l.size(); ++j) {
            if (l[i] == "b") {
                out.push_back({l[j], l[i]});
            } else {
                out.push_back({l[i], l[j]});
            }
        }
    }
    return out;
}

ReducedCM reduce(const CovarianceMatrix& cm, const Bipartition& bp) {
    const std::size_t m = cm.topology().index_of(bp.m);
    const std::size_t n = cm.topology().index_of(bp.n);
    if (m == n) throw Error(ErrorCode::UnknownMode, "bipartition needs two distinct modes");
    const std::array<Eigen::Index, 4> idx{static_cast<Eigen::Index>(2 * m), static_cast<Eigen::Index>(2 * m + 1),
                                          static_cast<Eigen::Index>(2 * n), static_cast<Eigen::Index>(2 * n + 1)};
    ReducedCM r;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) r.v(i, j) = cm.matrix()(idx[i], idx[j]);
    }
    return r;
}

double min_pt_symplectic_eigenvalue(const ReducedCM& r) {
    const double det_v = r.v.determinant();
    const double sigma = r.block_a().determinant() + r.block_b().determinant() - 2.0 * r.block_c().determinant();
    const double scale = std::max(1.0, sigma * sigma);
    if (det_v < -kDiscriminantSlack * scale) throw Error(ErrorCode::UnphysicalCM, "reduced CM has negative determinant");
    double disc = sigma * sigma - 4.0 * std::max(det_v, 0.0);
    if (disc < -kDiscriminantSlack * scale) {
        throw Error(ErrorCode::UnphysicalCM, "negative discriminant in symplectic eigenvalue");
    }
    disc = std::max(disc, 0.0);
    const double arg = 0.5 * (sigma - std::sqrt(disc));
    if (arg < -kDiscriminantSlack * scale) throw Error(ErrorCode::UnphysicalCM, "imaginary symplectic eigenvalue");
    return std::sqrt(std::max(arg, 0.0));
}

double log_negativity(const ReducedCM& r) {
    const double nu = min_pt_symplectic_eigenvalue(r);
    // Round-off below 1/2 on a separable state is not entanglement.
    if (2.0 * nu >= 1.0 - 1e-12) return 0.0;
    if (nu <= 0.0) throw Error(ErrorCode::UnphysicalCM, "vanishing partial-transpose symplectic eigenvalue");
    return -std::log(2.0 * nu);
}

double log_negativity(const CovarianceMatrix& cm, const Bipartition& bp) { return log_negativity(reduce(cm, bp)); }

double phonon_occupation_cm(const CovarianceMatrix& cm) {
    const auto k = static_cast<Eigen::Index>(2 * cm.topology().phonon_index());
    const double n = 0.5 * (cm.matrix()(k, k) + cm.matrix()(k + 1, k + 1) - 1.0);
    return n < 0.0 ? 0.0 : n;
}

double duan_sum(const ReducedCM& r) {
    const auto& v = r.v;
    return v(0, 0) + v(2, 2) + 2.0 * v(0, 2) + v(1, 1) + v(3, 3) - 2.0 * v(1, 3);
}

double duan_sum(const CovarianceMatrix& cm, const Bipartition& bp) { return duan_sum(reduce(cm, bp)); }

double duan_sum_optimized(const ReducedCM& r) {
    const Eigen::Matrix2d c = r.block_c();
    const double local = r.block_a().trace() + r.block_b().trace();
    return local - 2.0 * std::hypot(c(0, 0) - c(1, 1), c(0, 1) + c(1, 0));
}

double duan_sum_optimized(const CovarianceMatrix& cm, const Bipartition& bp) {
    return duan_sum_optimized(reduce(cm, bp));
}

CovarianceMatrix steady_covariance(const LinearModel& model) {
    return CovarianceMatrix(linalg::solve_lyapunov(model.A, model.D), model.topology);
}

}  // namespace comsim
