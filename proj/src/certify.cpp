#include "kgbell/certify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace kgbell {

namespace {

constexpr int kDenseLimit = 1024;

void check_symmetric_dense(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("min_eigenvalue: matrix not square");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("min_eigenvalue: matrix not symmetric");
}

struct LanczosResult {
    double value = 0;  // extreme eigenvalue estimate
    double errbar = 0; // Ritz residual norm |A x - theta x|
};

// largest eigenvalue of the operator `apply` (symmetric PSD-shifted), full
// reorthogonalization, deterministic for a given seed
LanczosResult lanczos_largest(const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& apply,
                              Eigen::Index n, double scale, std::uint64_t seed) {
    const int max_steps = static_cast<int>(std::min<Eigen::Index>(n, 400));
    const double tol = 1e-10;
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 1);
    Eigen::VectorXd v0(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v0[i] = static_cast<double>((rng() >> 11) + 1) * 0x1p-53 - 0.5;
    v0.normalize();

    LanczosResult best;
    for (int cycle = 0; cycle < 6; ++cycle) {
        Eigen::MatrixXd basis(n, max_steps + 1);
        std::vector<double> alpha, beta;
        basis.col(0) = v0;
        Eigen::VectorXd w(n);
        int k = 0;
        bool exhausted = false;
        for (; k < max_steps; ++k) {
            apply(basis.col(k), w);
            const double ak = basis.col(k).dot(w);
            alpha.push_back(ak);
            w -= ak * basis.col(k);
            if (k > 0) w -= beta[k - 1] * basis.col(k - 1);
            // full reorthogonalization, twice
            for (int pass = 0; pass < 2; ++pass)
                w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).transpose() * w);
            const double bk = w.norm();
            if (bk < 1e-13 * std::max(1.0, scale)) {
                exhausted = true; // exact invariant subspace
                break;
            }
            beta.push_back(bk);
            basis.col(k + 1) = w / bk;

            if ((k + 1) % 20 == 0 || k + 1 == max_steps) {
                Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k + 1, k + 1);
                for (int i = 0; i <= k; ++i) t(i, i) = alpha[i];
                for (int i = 0; i < k; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
                const int top = k;
                const double theta = es.eigenvalues()(top);
                const double resid = std::abs(beta[k] * es.eigenvectors()(k, top));
                if (resid <= tol * std::max(1.0, std::abs(theta))) {
                    best.value = theta;
                    best.errbar = resid;
                    return best;
                }
                best.value = theta;
                best.errbar = resid;
                // next cycle restarts from the current best Ritz vector
                v0 = basis.leftCols(k + 1) * es.eigenvectors().col(top);
                v0.normalize();
            }
        }
        if (exhausted) {
            const int steps = k + 1;
            Eigen::MatrixXd t = Eigen::MatrixXd::Zero(steps, steps);
            for (int i = 0; i < steps; ++i) t(i, i) = alpha[i];
            for (int i = 0; i + 1 < steps; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
            best.value = es.eigenvalues()(steps - 1);
            best.errbar = 0;
            return best;
        }
        if (best.errbar <= 1e-6 * std::max(1.0, std::abs(best.value))) return best;
    }
    if (best.errbar <= 1e-4 * std::max(1.0, std::abs(best.value))) return best;
    throw std::runtime_error("min_eigenvalue: Lanczos iteration did not converge");
}

} // namespace

Eigen::MatrixXd symmetric_embedding(const BellInequality& ineq) {
    ineq.validate();
    const int n = ineq.mA + ineq.mB;
    Eigen::MatrixXd mt = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : ineq.coeffs) {
        mt(e.row, ineq.mA + e.col) = e.value / 2.0;
        mt(ineq.mA + e.col, e.row) = e.value / 2.0;
    }
    return mt;
}

Eigen::SparseMatrix<double> symmetric_embedding_sparse(const BellInequality& ineq) {
    ineq.validate();
    const int n = ineq.mA + ineq.mB;
    std::vector<Eigen::Triplet<double>> ts;
    ts.reserve(2 * ineq.coeffs.size());
    for (const auto& e : ineq.coeffs) {
        ts.emplace_back(e.row, ineq.mA + e.col, e.value / 2.0);
        ts.emplace_back(ineq.mA + e.col, e.row, e.value / 2.0);
    }
    Eigen::SparseMatrix<double> mt(n, n);
    mt.setFromTriplets(ts.begin(), ts.end());
    return mt;
}

double min_eigenvalue_symmetric(const Eigen::MatrixXd& a) {
    check_symmetric_dense(a);
    const Eigen::Index n = a.rows();
    if (n <= kDenseLimit) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("min_eigenvalue: dense eigensolver failed");
        return es.eigenvalues()(0);
    }
    // Gershgorin upper bound, then largest eigenvalue of sigma*I - A
    double sigma = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double offdiag = a.row(i).cwiseAbs().sum() - std::abs(a(i, i));
        sigma = std::max(sigma, a(i, i) + offdiag);
    }
    auto apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = sigma * x - a * x; };
    auto res = lanczos_largest(apply, n, std::abs(sigma), 0);
    return sigma - res.value;
}

double min_eigenvalue_symmetric(const Eigen::SparseMatrix<double>& a, std::uint64_t seed) {
    if (a.rows() != a.cols()) throw std::invalid_argument("min_eigenvalue: matrix not square");
    const Eigen::Index n = a.rows();
    if (n <= kDenseLimit) return min_eigenvalue_symmetric(Eigen::MatrixXd(a));
    // row sums of |A| for the Gershgorin bound
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n), abssum = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < a.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it) {
            if (it.row() == it.col())
                diag[it.row()] = it.value();
            else
                abssum[it.row()] += std::abs(it.value());
        }
    const double sigma = (diag + abssum).maxCoeff();
    auto apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = sigma * x - a * x; };
    auto res = lanczos_largest(apply, n, std::abs(sigma) + 1.0, seed);
    return sigma - res.value - res.errbar; // err bar keeps the estimate on the safe side
}

DualCertificate certificate_from_fixed_point(const BellInequality& ineq,
                                             const VectorAssignment& asg) {
    ineq.validate();
    asg.validate(ineq.mA, ineq.mB, 1e-9);
    const int n = ineq.mA + ineq.mB;
    DualCertificate cert;
    cert.label = ineq.label;

    // lambda_i = |(Mt v)_i|: for alice rows that is |sum_j M_ij b_j|/2, the
    // see-saw denominators up to the factor 1/2
    const auto mt = symmetric_embedding_sparse(ineq);
    Eigen::MatrixXd v(n, asg.d);
    for (int i = 0; i < ineq.mA; ++i) v.row(i) = asg.alice[i].transpose();
    for (int j = 0; j < ineq.mB; ++j) v.row(ineq.mA + j) = asg.bob[j].transpose();
    Eigen::MatrixXd img = mt * v;
    cert.lambda = img.rowwise().norm();

    const bool dense = n <= kDenseLimit;
    Eigen::MatrixXd zd;
    Eigen::SparseMatrix<double> zs;
    if (dense) {
        zd = Eigen::MatrixXd(cert.lambda.asDiagonal()) - Eigen::MatrixXd(mt);
        cert.raw_min_eigenvalue = min_eigenvalue_symmetric(zd);
    } else {
        Eigen::SparseMatrix<double> diag(n, n);
        std::vector<Eigen::Triplet<double>> ts;
        ts.reserve(n);
        for (int i = 0; i < n; ++i) ts.emplace_back(i, i, cert.lambda[i]);
        diag.setFromTriplets(ts.begin(), ts.end());
        zs = diag - mt;
        cert.raw_min_eigenvalue = min_eigenvalue_symmetric(zs, 7);
    }
    cert.shift = std::max(0.0, -cert.raw_min_eigenvalue);
    cert.bound = cert.lambda.sum() + n * cert.shift;

    // honest recheck of the shifted matrix
    if (dense) {
        zd.diagonal().array() += cert.shift;
        cert.residual_min_eigenvalue = min_eigenvalue_symmetric(zd);
    } else {
        for (int i = 0; i < n; ++i) zs.coeffRef(i, i) += cert.shift;
        cert.residual_min_eigenvalue = min_eigenvalue_symmetric(zs, 13);
    }
    cert.verified = cert.residual_min_eigenvalue >= -1e-9;
    cert.value_at_point = evaluate(ineq, asg);
    cert.gap = cert.bound - cert.value_at_point;
    return cert;
}

} // namespace kgbell
