#pragma once

#include <vector>

#include "cftlab/coherent_info.hpp"
#include "cftlab/dense.hpp"

namespace cftlab {

/// Majorana two-point data M_{jk} = (i/2) Tr(rho [c_j, c_k]) of a fermionic
/// Gaussian state. Mode j owns Majoranas 2j and 2j+1; real antisymmetric.
struct CovarianceMatrix {
    RealMatrix m;
    int modes = 0;

    CovarianceMatrix() = default;
    CovarianceMatrix(RealMatrix matrix, int mode_count);

    /// Antisymmetry is restored exactly; singular values are checked against
    /// the physicality bound 1 + 1e-9.
    void validate() const;
};

/// Real canonical form A = R (blocks [[0, e_k], [-e_k, 0]]) R^T of a real
/// antisymmetric matrix with e_k > 0; R orthogonal.
struct CanonicalForm {
    RealMatrix rotation;          // R
    std::vector<double> energies;  // e_k per block, in block order
};
CanonicalForm antisymmetric_canonical_form(const RealMatrix& a);

/// Covariance of the reference-entangled code state on m chain modes plus one
/// reference mode (appended last). Codewords are the chain ground state and
/// the one-quasiparticle excitation of the lowest mode.
CovarianceMatrix code_covariance(int m);

/// Amplitude damping of strength p on the listed modes:
/// M -> X M X^T + Y with X = sqrt(1-p) on damped Majorana pairs and Y the
/// vacuum block scaled by p.
CovarianceMatrix apply_damping(const CovarianceMatrix& cov, double p, const std::vector<int>& modes);

/// Entropy (nats) of the reduced state on a mode subset from the restricted
/// covariance singular values.
double gaussian_entropy(const CovarianceMatrix& cov, const std::vector<int>& modes);

/// Coherent information of the free-chain code under amplitude damping on all
/// chain modes, computed entirely from covariance restrictions.
CIEstimate gaussian_ci(int m, double p);

}  // namespace cftlab
