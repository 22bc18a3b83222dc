#pragma once

#include <cstdint>
#include <string>

#include "cftlab/channels.hpp"
#include "cftlab/codespace.hpp"
#include "cftlab/dense.hpp"

namespace cftlab {

enum class CIMethod { dense, gram, flag_enum, flag_mc, gaussian };

const char* ci_method_name(CIMethod method);

struct CIEstimate {
    double value = 0.0;      // nats
    double std_error = 0.0;  // 0 for exact methods
    CIMethod method = CIMethod::dense;
    long samples = 0;
    std::uint64_t seed = 0;
};

/// S_Q - S_RQ for a reference-entangled state; subsystem 0 is the reference.
CIEstimate coherent_information(const DensityMatrix& rho_rq, double order = 1.0);

/// Exact coherent information of the code under a product channel on all
/// sites. method: 0 = auto, otherwise force dense or gram.
enum class ExactPath { automatic, dense, gram };
CIEstimate ci_unflagged_exact(const CodeSpace& code, const NoiseSpec& spec, double order = 1.0,
                              ExactPath path = ExactPath::automatic);

/// Exact flagged coherent information by enumerating all 3^n outcome strings.
CIEstimate ci_flagged_exact(const CodeSpace& code, const NoiseSpec& spec);

/// Monte-Carlo trajectory estimate of the flagged coherent information.
/// Reproducible: trajectory t draws from RNG stream (seed, t), and the
/// average is accumulated in trajectory order regardless of thread count.
CIEstimate ci_flagged_mc(const CodeSpace& code, const NoiseSpec& spec, long samples,
                         std::uint64_t seed, unsigned threads = 1);

/// Lower bound 1 - 2 sqrt(max(0, log D - I_c)) on the entanglement fidelity,
/// clamped to [0, 1].
double fidelity_bound(const CIEstimate& estimate, int code_dimension);

}  // namespace cftlab
