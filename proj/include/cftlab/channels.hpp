#pragma once

#include <vector>

#include "cftlab/dense.hpp"

namespace cftlab {

enum class NoiseKind { dephasing, flagged_dephasing, depolarizing, amplitude_damping };
enum class PauliAxis { x, y, z };

Eigen::Matrix2cd pauli_matrix(PauliAxis axis);
const char* axis_name(PauliAxis axis);
const char* noise_kind_name(NoiseKind kind);

/// Single-site channel: Kraus operators plus the parameters that generated
/// them. For flagged dephasing the kraus list is the flag-discarded form;
/// the flag structure itself lives in flagged_unravel.
struct NoiseSpec {
    NoiseKind kind = NoiseKind::dephasing;
    PauliAxis axis = PauliAxis::z;
    bool has_axis = true;
    double p = 0.0;
    std::vector<Eigen::Matrix2cd> kraus;
    double lindblad_time = 0.0;  // -log(1-p); +inf at p = 1

    /// max |sum K^dag K - I| entry
    double completeness_defect() const;
};

NoiseSpec dephasing(PauliAxis axis, double p);
NoiseSpec flagged_dephasing(PauliAxis axis, double p);
/// Uniform mixture of x, y, z dephasing: weights (1 - 3p/4; p/4 each).
NoiseSpec depolarizing(double p);
/// Damping of one fermionic mode in its occupation basis {|0>, |1>}.
NoiseSpec amplitude_damping_fermionic(double p);

/// Applies the single-site channel to each listed subsystem (which must have
/// dimension 2). For a reference-entangled state with dims {D, 2, ...}, Q
/// site j is subsystem j + 1.
DensityMatrix apply_product_channel(const DensityMatrix& rho, const NoiseSpec& spec,
                                    const std::vector<int>& subsystems);

/// One measurement branch of the flagged channel on a single site.
struct FlaggedOutcome {
    double weight;  // flag probability factor; Born factors multiply downstream
    Eigen::Matrix2cd op;
    int flag;     // 0 = unmeasured, +1 / -1 = projective outcome
};

/// {(1-p, I), (p, P+), (p, P-)} with P+- = (I +- sigma_axis)/2.
std::vector<FlaggedOutcome> flagged_unravel(const NoiseSpec& spec);

}  // namespace cftlab
