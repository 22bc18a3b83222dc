#include "cftlab/channels.hpp"

#include <cmath>
#include <limits>

#include "cftlab/errors.hpp"

namespace cftlab {

namespace {

constexpr double kCompletenessTol = 1e-12;
constexpr Eigen::Index kRegisterCeiling = Eigen::Index(1) << 13;

void check_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("channel strength must lie in [0, 1]");
}

double lindblad_time_of(double p) {
    return p < 1.0 ? -std::log1p(-p) : std::numeric_limits<double>::infinity();
}

void validate_completeness(const NoiseSpec& spec) {
    const double defect = spec.completeness_defect();
    if (defect > kCompletenessTol)
        throw NumericalError("Kraus completeness defect " + std::to_string(defect));
}

}  // namespace

Eigen::Matrix2cd pauli_matrix(PauliAxis axis) {
    Eigen::Matrix2cd m;
    switch (axis) {
        case PauliAxis::x:
            m << 0, 1, 1, 0;
            break;
        case PauliAxis::y:
            m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
            break;
        case PauliAxis::z:
            m << 1, 0, 0, -1;
            break;
    }
    return m;
}

const char* axis_name(PauliAxis axis) {
    switch (axis) {
        case PauliAxis::x: return "x";
        case PauliAxis::y: return "y";
        case PauliAxis::z: return "z";
    }
    return "?";
}

const char* noise_kind_name(NoiseKind kind) {
    switch (kind) {
        case NoiseKind::dephasing: return "dephasing";
        case NoiseKind::flagged_dephasing: return "flagged_dephasing";
        case NoiseKind::depolarizing: return "depolarizing";
        case NoiseKind::amplitude_damping: return "amplitude_damping";
    }
    return "?";
}

double NoiseSpec::completeness_defect() const {
    Eigen::Matrix2cd sum = Eigen::Matrix2cd::Zero();
    for (const auto& k : kraus) sum += k.adjoint() * k;
    return (sum - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
}

NoiseSpec dephasing(PauliAxis axis, double p) {
    check_probability(p);
    NoiseSpec spec;
    spec.kind = NoiseKind::dephasing;
    spec.axis = axis;
    spec.p = p;
    spec.lindblad_time = lindblad_time_of(p);
    spec.kraus = {std::sqrt(1.0 - p / 2.0) * Eigen::Matrix2cd::Identity(),
                  std::sqrt(p / 2.0) * pauli_matrix(axis)};
    validate_completeness(spec);
    return spec;
}

NoiseSpec flagged_dephasing(PauliAxis axis, double p) {
    NoiseSpec spec = dephasing(axis, p);
    spec.kind = NoiseKind::flagged_dephasing;
    return spec;
}

NoiseSpec depolarizing(double p) {
    check_probability(p);
    NoiseSpec spec;
    spec.kind = NoiseKind::depolarizing;
    spec.has_axis = false;
    spec.p = p;
    spec.lindblad_time = lindblad_time_of(p);
    spec.kraus = {std::sqrt(1.0 - 0.75 * p) * Eigen::Matrix2cd::Identity(),
                  std::sqrt(p / 4.0) * pauli_matrix(PauliAxis::x),
                  std::sqrt(p / 4.0) * pauli_matrix(PauliAxis::y),
                  std::sqrt(p / 4.0) * pauli_matrix(PauliAxis::z)};
    validate_completeness(spec);
    return spec;
}

NoiseSpec amplitude_damping_fermionic(double p) {
    check_probability(p);
    NoiseSpec spec;
    spec.kind = NoiseKind::amplitude_damping;
    spec.has_axis = false;
    spec.p = p;
    spec.lindblad_time = lindblad_time_of(p);
    Eigen::Matrix2cd lower = Eigen::Matrix2cd::Zero();
    lower(0, 1) = 1.0;  // annihilation in the {|0>, |1>} occupation basis
    Eigen::Matrix2cd keep = Eigen::Matrix2cd::Identity();
    keep(1, 1) = std::sqrt(1.0 - p);
    spec.kraus = {keep, std::sqrt(p) * lower};
    validate_completeness(spec);
    return spec;
}

namespace {

// rho -> (K on subsystem s) rho; rows grouped as (high, i, low)
Matrix kraus_left(const Matrix& rho, const Eigen::Matrix2cd& k, Eigen::Index stride) {
    Matrix out(rho.rows(), rho.cols());
    const Eigen::Index groups = rho.rows() / (2 * stride);
    for (Eigen::Index hi = 0; hi < groups; ++hi)
        for (Eigen::Index lo = 0; lo < stride; ++lo) {
            const Eigen::Index r0 = hi * 2 * stride + lo;
            const Eigen::Index r1 = r0 + stride;
            out.row(r0) = k(0, 0) * rho.row(r0) + k(0, 1) * rho.row(r1);
            out.row(r1) = k(1, 0) * rho.row(r0) + k(1, 1) * rho.row(r1);
        }
    return out;
}

// rho -> rho (K^dag on subsystem s)
Matrix kraus_right(const Matrix& rho, const Eigen::Matrix2cd& k, Eigen::Index stride) {
    Matrix out(rho.rows(), rho.cols());
    const Eigen::Index groups = rho.cols() / (2 * stride);
    for (Eigen::Index hi = 0; hi < groups; ++hi)
        for (Eigen::Index lo = 0; lo < stride; ++lo) {
            const Eigen::Index c0 = hi * 2 * stride + lo;
            const Eigen::Index c1 = c0 + stride;
            out.col(c0) = std::conj(k(0, 0)) * rho.col(c0) + std::conj(k(0, 1)) * rho.col(c1);
            out.col(c1) = std::conj(k(1, 0)) * rho.col(c0) + std::conj(k(1, 1)) * rho.col(c1);
        }
    return out;
}

}  // namespace

DensityMatrix apply_product_channel(const DensityMatrix& rho, const NoiseSpec& spec,
                                    const std::vector<int>& subsystems) {
    if (rho.dim() > kRegisterCeiling)
        throw ResourceError("dense channel application is capped at 2^13 register dimensions");
    const int m = static_cast<int>(rho.dims.size());
    std::vector<Eigen::Index> stride(m, 1);
    for (int s = m - 2; s >= 0; --s) stride[s] = stride[s + 1] * rho.dims[s + 1];

    Matrix current = rho.matrix;
    for (int s : subsystems) {
        if (s < 0 || s >= m) throw ArgumentError("subsystem index out of range");
        if (rho.dims[s] != 2) throw ArgumentError("channel targets must be qubit subsystems");
        Matrix next = Matrix::Zero(current.rows(), current.cols());
        for (const auto& k : spec.kraus)
            next += kraus_right(kraus_left(current, k, stride[s]), k, stride[s]);
        current = std::move(next);
    }
    DensityMatrix out;
    out.matrix = std::move(current);
    out.dims = rho.dims;
    return out;
}

std::vector<FlaggedOutcome> flagged_unravel(const NoiseSpec& spec) {
    if (spec.kind != NoiseKind::flagged_dephasing)
        throw ArgumentError("flagged_unravel needs a flagged_dephasing spec");
    const Eigen::Matrix2cd sigma = pauli_matrix(spec.axis);
    const Eigen::Matrix2cd eye = Eigen::Matrix2cd::Identity();
    return {{1.0 - spec.p, eye, 0},
            {spec.p, (eye + sigma) / 2.0, +1},
            {spec.p, (eye - sigma) / 2.0, -1}};
}

}  // namespace cftlab
