#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

namespace cftlab {

struct LanczosOptions {
    int max_basis = 64;        // Krylov basis cap before a thick restart
    int keep_on_restart = 24;  // Ritz vectors carried across a restart
    int max_restarts = 300;
    double tol = 1e-11;  // residual tolerance relative to spectral scale
    std::uint64_t seed = 0x5eed5eedULL;
};

struct LanczosResult {
    Eigen::VectorXd eigenvalues;  // ascending, k entries
    Eigen::MatrixXd eigenvectors;
    int matvec_count = 0;
};

/// Lowest k eigenpairs of a real symmetric operator given as a matvec.
/// Thick-restart Lanczos with full reorthogonalization; eigenpairs are
/// extracted one at a time with deflation so degenerate levels are resolved.
LanczosResult lanczos_lowest(const std::function<void(const double*, double*)>& matvec,
                             Eigen::Index dim, int k, const LanczosOptions& opts = {});

}  // namespace cftlab
