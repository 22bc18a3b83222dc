#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace cftlab {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Dims = std::vector<Eigen::Index>;

// Index convention for composite registers: dims = {d0, d1, ...} with
// subsystem 0 the slowest (most significant) index, so basis state
// |i0, i1, ..., im> sits at flat index ((i0*d1 + i1)*d2 + ...) + im.
// Property-tested in the unit suite; every module relies on it.

constexpr double kNormTol = 1e-10;
constexpr double kHermitianTol = 1e-10;
constexpr double kTraceTol = 1e-10;
constexpr double kEigClamp = 1e-12;

Eigen::Index dims_product(const Dims& dims);

/// Normalized state vector over a composite register.
struct PureState {
    Vector amplitudes;
    Dims dims;

    PureState() = default;
    PureState(Vector amps, Dims d);

    Eigen::Index dim() const { return amplitudes.size(); }
    void validate() const;
};

/// Hermitian, unit-trace operator over a composite register.
struct DensityMatrix {
    Matrix matrix;
    Dims dims;

    DensityMatrix() = default;
    DensityMatrix(Matrix m, Dims d);

    Eigen::Index dim() const { return matrix.rows(); }
    /// Hermiticity and trace always; positivity (an eigensolve) only when
    /// check_positivity is set.
    void validate(bool check_positivity = false) const;
};

DensityMatrix pure_density(const PureState& psi);

/// Traces out every subsystem not listed in keep; kept dims stay in their
/// original order.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

/// Eigenvalues of a Hermitian matrix, ascending. Dispatches to a real
/// symmetric solve when the imaginary part is negligible.
RealVector hermitian_eigenvalues(const Matrix& m);

/// Entropy in nats from a spectrum; eigenvalues below kEigClamp contribute
/// zero. order == 1 is von Neumann, order > 1 is Renyi.
double spectrum_entropy(const RealVector& eigenvalues, double order);

double entropy(const DensityMatrix& rho, double order = 1.0);

/// Nonzero spectrum of sum_s w_s |v_s><v_s| computed from the s x s Gram
/// matrix. Vectors may be unnormalized but must share dims.
RealVector gram_spectrum(const std::vector<PureState>& vectors, const std::vector<double>& weights);

/// Spectrum of the Gram form G[s,t] = sqrt(w_s w_t) <v_s|v_t> given raw
/// inner products; shared with callers that compute overlaps analytically.
RealVector gram_spectrum_from_overlaps(const Matrix& overlaps, const std::vector<double>& weights);

}  // namespace cftlab
