#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cftlab/dense.hpp"
#include "cftlab/lanczos.hpp"

namespace cftlab {

/// Critical transverse-field Ising chain with periodic boundary, exposed as a
/// matrix-free matvec over 2^n real amplitudes. Bit n-1-i of a basis index is
/// the z eigenvalue of site i (bit 0 means z = +1).
class TfimHamiltonian {
  public:
    TfimHamiltonian(int n, double g);

    int sites() const { return n_; }
    double field() const { return g_; }
    Eigen::Index dim() const { return Eigen::Index(1) << n_; }

    void matvec(const double* in, double* out) const;
    Vector apply(const Vector& psi) const;

    /// Eigenvalue of prod_i sigma_z for a basis index.
    int basis_parity(Eigen::Index state) const;

  private:
    int n_;
    double g_;
    std::vector<Eigen::Index> flip_masks_;  // one per bond
};

struct SpectrumRecord {
    std::vector<double> energies;  // ascending
    std::vector<PureState> states;
    std::vector<int> parities;      // +-1 per state
    std::vector<bool> degenerate;   // true when another level sits within tolerance
    std::vector<std::string> labels;               // filled by identify_scaling_states
    std::vector<double> assigned_dimensions;       // filled by identify_scaling_states

    int size() const { return static_cast<int>(energies.size()); }
};

TfimHamiltonian build_tfim(int n, double g);

/// k lowest eigenpairs, resolved per parity sector (dense solve for n <= 12,
/// Lanczos above). Deterministic for fixed seed.
SpectrumRecord low_energy_spectrum(const TfimHamiltonian& h, int k,
                                   const LanczosOptions& opts = {});

/// Labels the critical spectrum: I = ground state, sigma = lowest odd-parity,
/// epsilon = second even-parity state. Scaling dimensions come from the
/// affine map E = a + b*Delta anchored on (I, sigma).
SpectrumRecord identify_scaling_states(const SpectrumRecord& spec);

/// Quadratic coefficient matrix A of the antiperiodic Majorana chain,
/// normalized as H = (i/4) c^T A c. Real antisymmetric, 2m x 2m.
RealMatrix build_majorana_chain(int m);

/// Quasiparticle energies of a quadratic coefficient matrix (positive
/// eigenvalues of iA), ascending.
RealVector majorana_single_particle_energies(const RealMatrix& a);

}  // namespace cftlab
