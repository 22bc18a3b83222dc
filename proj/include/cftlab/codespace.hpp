#pragma once

#include <string>
#include <vector>

#include "cftlab/dense.hpp"

namespace cftlab {

/// D orthonormal codewords on an n-site qubit register.
struct CodeSpace {
    std::vector<PureState> codewords;
    std::vector<std::string> labels;
    int n = 0;
    int dimension = 0;  // D

    Eigen::Index register_dim() const { return Eigen::Index(1) << n; }
};

/// Builds a code from candidate states. Residual non-orthonormality below
/// 1e-6 is repaired by Gram-Schmidt; anything larger is rejected. Codeword
/// phases are fixed by making the largest-magnitude amplitude real positive.
CodeSpace make_codespace(const std::vector<PureState>& states, const std::vector<std::string>& labels);

/// |psi_RQ> = D^{-1/2} sum_a |a>_R |phi_a>_Q with dims {D, 2, 2, ...}.
PureState max_entangled_state(const CodeSpace& code);

/// P = sum_a |phi_a><phi_a| as a dense operator on the register.
Matrix projector(const CodeSpace& code);

}  // namespace cftlab
