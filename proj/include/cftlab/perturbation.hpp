#pragma once

#include <array>
#include <utility>
#include <vector>

#include "cftlab/channels.hpp"
#include "cftlab/codespace.hpp"

namespace cftlab {

/// Local jump operators of a translation-invariant Lindbladian.
struct JumpSet {
    struct Jump {
        int site;
        Eigen::Matrix2cd op;
    };
    std::vector<Jump> operators;
};

/// One sigma_axis / sqrt(2) jump per site, the normalization under which the
/// leading p log p coefficient needs no extra prefactor.
JumpSet dephasing_jumps(PauliAxis axis, int n);

/// Leading coefficient of the small-p expansion,
/// b = (1/D^2) sum_i [ D Tr(L_i P L_i^dag P) - Tr(L_i P) Tr(L_i^dag P) ],
/// evaluated through D x D code-subspace matrix elements. Always >= 0 up to
/// roundoff; zero iff every P L_i P is proportional to P.
double b_coefficient(const CodeSpace& code, const JumpSet& jumps);

/// Second-order coefficients (b2_1, b2_2, b2_3) with prefactors 1/(4D^4),
/// 1/(4D^3), 1/(8D^2). Restricted to Hermitian jumps with L^2 proportional
/// to the identity (dephasing-type noise).
std::array<double, 3> b2_coefficients(const CodeSpace& code, const JumpSet& jumps);

/// Least-squares fit of ic - log D against {p log p, p}; returns the p log p
/// coefficient. Needs >= 4 points spanning a decade, all p > 0.
double extract_plogp_coefficient(const std::vector<std::pair<double, double>>& curve, int code_dimension);

struct ExponentFit {
    double slope;
    double intercept;
    double residual;  // sum of squared log-residuals
};

/// Ordinary least squares of log |v| against log n over (n, v) pairs.
ExponentFit exponent_fit(const std::vector<std::pair<double, double>>& values);

}  // namespace cftlab
