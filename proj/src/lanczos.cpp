#include "cftlab/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cftlab/errors.hpp"
#include "cftlab/rng.hpp"

namespace cftlab {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd random_unit_vector(Index dim, std::uint64_t seed) {
    Xoshiro256 rng(seed);
    VectorXd v(dim);
    for (Index i = 0; i < dim; ++i) v[i] = rng.next_double() - 0.5;
    v.normalize();
    return v;
}

struct Workspace {
    MatrixXd basis;  // dim x m_max, current Krylov/Ritz block
    MatrixXd proj;   // projected operator (tridiagonal away from restarts)
    VectorXd work;
    int m = 0;  // active basis columns
};

void orthogonalize(VectorXd& r, const MatrixXd& locked, Index n_locked, const MatrixXd& basis, int m) {
    for (int pass = 0; pass < 2; ++pass) {
        if (n_locked > 0) {
            const auto q = locked.leftCols(n_locked);
            r.noalias() -= q * (q.transpose() * r);
        }
        if (m > 0) {
            const auto v = basis.leftCols(m);
            r.noalias() -= v * (v.transpose() * r);
        }
    }
}

// Appends the normalized vector r to the basis, applies the operator, fills
// the projected column, and returns the residual norm; r becomes the next
// candidate direction (normalized unless the norm underflows).
double lanczos_step(const std::function<void(const double*, double*)>& matvec, Workspace& ws,
                    const MatrixXd& locked, Index n_locked, VectorXd& r, int& matvecs) {
    const int j = ws.m;
    ws.basis.col(j) = r;
    ws.m = j + 1;
    matvec(ws.basis.col(j).data(), ws.work.data());
    ++matvecs;
    for (int i = 0; i <= j; ++i) {
        const double h = ws.basis.col(i).dot(ws.work);
        ws.proj(i, j) = h;
        ws.proj(j, i) = h;
    }
    r = ws.work;
    for (int i = 0; i <= j; ++i) r.noalias() -= ws.proj(i, j) * ws.basis.col(i);
    orthogonalize(r, locked, n_locked, ws.basis, ws.m);
    const double beta = r.norm();
    if (beta > 1e-13) r /= beta;
    return beta;
}

// One eigenpair of the operator restricted orthogonal to `locked`.
bool lowest_deflated(const std::function<void(const double*, double*)>& matvec, Index dim,
                     const MatrixXd& locked, Index n_locked, const LanczosOptions& opts,
                     std::uint64_t seed, double& value, VectorXd& vector, int& matvecs) {
    const int m_max = static_cast<int>(std::min<Index>(opts.max_basis, dim - n_locked));
    if (m_max < 1) throw ArgumentError("Lanczos basis would be empty after deflation");

    Workspace ws;
    ws.basis.resize(dim, m_max);
    ws.proj = MatrixXd::Zero(m_max, m_max);
    ws.work.resize(dim);

    VectorXd r = random_unit_vector(dim, seed);
    orthogonalize(r, locked, n_locked, ws.basis, 0);
    if (r.norm() < 1e-8) throw NumericalError("Lanczos start vector vanished after deflation");
    r.normalize();

    double spectral_scale = 1.0;
    for (int restart = 0; restart <= opts.max_restarts; ++restart) {
        bool exhausted = false;
        while (ws.m < m_max) {
            const double beta = lanczos_step(matvec, ws, locked, n_locked, r, matvecs);
            if (beta <= 1e-13) {
                exhausted = true;
                break;
            }
        }

        Eigen::SelfAdjointEigenSolver<MatrixXd> es(ws.proj.topLeftCorner(ws.m, ws.m));
        if (es.info() != Eigen::Success) throw NumericalError("projected eigensolver failed");
        const VectorXd theta = es.eigenvalues();
        const MatrixXd y = es.eigenvectors();
        spectral_scale = std::max({spectral_scale, std::abs(theta[0]), std::abs(theta[ws.m - 1])});

        VectorXd x = ws.basis.leftCols(ws.m) * y.col(0);
        x.normalize();
        matvec(x.data(), ws.work.data());
        ++matvecs;
        const double rayleigh = x.dot(ws.work);
        ws.work.noalias() -= rayleigh * x;
        if (n_locked > 0) {
            const auto q = locked.leftCols(n_locked);
            ws.work.noalias() -= q * (q.transpose() * ws.work);
        }
        if (ws.work.norm() <= opts.tol * std::max(1.0, spectral_scale)) {
            value = rayleigh;
            vector = x;
            return true;
        }

        if (exhausted) {
            // Krylov space closed without convergence; retry from a fresh vector
            r = random_unit_vector(dim, splitmix64_mix(seed, 0xabcd0000ULL + restart));
            orthogonalize(r, locked, n_locked, ws.basis, 0);
            if (r.norm() < 1e-10) throw NumericalError("deflated subspace exhausted");
            r.normalize();
            ws.m = 0;
            ws.proj.setZero();
            continue;
        }

        // thick restart: lowest Ritz vectors plus the current residual direction
        const int keep = std::max(1, std::min(opts.keep_on_restart, ws.m - 2));
        const MatrixXd kept = ws.basis.leftCols(ws.m) * y.leftCols(keep);
        ws.basis.leftCols(keep) = kept;
        ws.basis.col(keep) = r;
        ws.m = keep + 1;
        ws.proj.setZero();
        for (int i = 0; i < keep; ++i) ws.proj(i, i) = theta[i];
        matvec(ws.basis.col(keep).data(), ws.work.data());
        ++matvecs;
        for (int i = 0; i <= keep; ++i) {
            const double h = ws.basis.col(i).dot(ws.work);
            ws.proj(i, keep) = h;
            ws.proj(keep, i) = h;
        }
        r = ws.work;
        for (int i = 0; i <= keep; ++i) r.noalias() -= ws.proj(i, keep) * ws.basis.col(i);
        orthogonalize(r, locked, n_locked, ws.basis, ws.m);
        const double beta = r.norm();
        if (beta > 1e-13) {
            r /= beta;
        } else {
            r = random_unit_vector(dim, splitmix64_mix(seed, 0xef000000ULL + restart));
            orthogonalize(r, locked, n_locked, ws.basis, ws.m);
            r.normalize();
        }
    }
    return false;
}

}  // namespace

LanczosResult lanczos_lowest(const std::function<void(const double*, double*)>& matvec,
                             Eigen::Index dim, int k, const LanczosOptions& opts) {
    if (k < 1 || static_cast<Index>(k) > dim) throw ArgumentError("lanczos_lowest: bad eigenpair count");
    LanczosResult result;
    result.eigenvalues.resize(k);
    result.eigenvectors.resize(dim, k);
    MatrixXd locked(dim, k);
    for (int j = 0; j < k; ++j) {
        double value = 0.0;
        VectorXd vec;
        const std::uint64_t seed = splitmix64_mix(opts.seed, static_cast<std::uint64_t>(j));
        if (!lowest_deflated(matvec, dim, locked, j, opts, seed, value, vec, result.matvec_count))
            throw NumericalError("Lanczos failed to converge eigenpair " + std::to_string(j) +
                                 " after " + std::to_string(result.matvec_count) + " matvecs");
        locked.col(j) = vec;
        result.eigenvalues[j] = value;
        result.eigenvectors.col(j) = vec;
    }
    // deflated extraction can return near-degenerate levels out of order
    std::vector<int> order(k);
    for (int i = 0; i < k; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return result.eigenvalues[a] < result.eigenvalues[b]; });
    LanczosResult sorted;
    sorted.matvec_count = result.matvec_count;
    sorted.eigenvalues.resize(k);
    sorted.eigenvectors.resize(dim, k);
    for (int i = 0; i < k; ++i) {
        sorted.eigenvalues[i] = result.eigenvalues[order[i]];
        sorted.eigenvectors.col(i) = result.eigenvectors.col(order[i]);
    }
    return sorted;
}

}  // namespace cftlab
