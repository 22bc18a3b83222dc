#include "cftlab/dense.hpp"

#include <cmath>
#include <numeric>

#include "cftlab/errors.hpp"

namespace cftlab {

Eigen::Index dims_product(const Dims& dims) {
    Eigen::Index p = 1;
    for (auto d : dims) {
        if (d < 1) throw ArgumentError("subsystem dimensions must be >= 1");
        p *= d;
    }
    return p;
}

PureState::PureState(Vector amps, Dims d) : amplitudes(std::move(amps)), dims(std::move(d)) {
    validate();
}

void PureState::validate() const {
    if (dims_product(dims) != amplitudes.size())
        throw ArgumentError("amplitude vector length does not match product of dims");
    const double norm = amplitudes.norm();
    if (std::abs(norm - 1.0) > kNormTol)
        throw ArgumentError("state vector is not normalized: |norm - 1| = " + std::to_string(std::abs(norm - 1.0)));
}

DensityMatrix::DensityMatrix(Matrix m, Dims d) : matrix(std::move(m)), dims(std::move(d)) {
    validate();
}

void DensityMatrix::validate(bool check_positivity) const {
    if (matrix.rows() != matrix.cols()) throw ArgumentError("density matrix must be square");
    if (dims_product(dims) != matrix.rows())
        throw ArgumentError("matrix dimension does not match product of dims");
    const double herm_err = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    if (herm_err > kHermitianTol)
        throw NumericalError("density matrix is not Hermitian within tolerance: " + std::to_string(herm_err));
    const double trace_err = std::abs(matrix.trace() - Complex(1.0, 0.0));
    if (trace_err > kTraceTol)
        throw NumericalError("density matrix trace deviates from 1 by " + std::to_string(trace_err));
    if (check_positivity) {
        const RealVector evals = hermitian_eigenvalues(matrix);
        if (evals.minCoeff() < -1e-9)
            throw NumericalError("density matrix has eigenvalue " + std::to_string(evals.minCoeff()));
    }
}

DensityMatrix pure_density(const PureState& psi) {
    DensityMatrix rho;
    rho.matrix = psi.amplitudes * psi.amplitudes.adjoint();
    rho.dims = psi.dims;
    return rho;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    const auto& dims = rho.dims;
    const int m = static_cast<int>(dims.size());
    if (keep.empty()) throw ArgumentError("keep set must be nonempty");
    std::vector<bool> kept(m, false);
    for (int s : keep) {
        if (s < 0 || s >= m) throw ArgumentError("keep index out of range");
        if (kept[s]) throw ArgumentError("duplicate keep index");
        kept[s] = true;
    }

    // keep indices in original subsystem order
    std::vector<int> keep_sorted;
    std::vector<int> traced;
    for (int s = 0; s < m; ++s) (kept[s] ? keep_sorted : traced).push_back(s);

    Dims out_dims;
    for (int s : keep_sorted) out_dims.push_back(dims[s]);
    const Eigen::Index dk = dims_product(out_dims);
    Eigen::Index dt = 1;
    for (int s : traced) dt *= dims[s];

    // strides of each subsystem in the flat index
    std::vector<Eigen::Index> stride(m, 1);
    for (int s = m - 2; s >= 0; --s) stride[s] = stride[s + 1] * dims[s + 1];

    auto flat_offset = [&](const std::vector<int>& subs, Eigen::Index combined) {
        Eigen::Index offset = 0;
        for (int s = static_cast<int>(subs.size()) - 1; s >= 0; --s) {
            const Eigen::Index d = dims[subs[s]];
            offset += (combined % d) * stride[subs[s]];
            combined /= d;
        }
        return offset;
    };

    Matrix out = Matrix::Zero(dk, dk);
    std::vector<Eigen::Index> keep_offsets(dk);
    for (Eigen::Index i = 0; i < dk; ++i) keep_offsets[i] = flat_offset(keep_sorted, i);
    std::vector<Eigen::Index> trace_offsets(dt);
    for (Eigen::Index t = 0; t < dt; ++t) trace_offsets[t] = flat_offset(traced, t);

    for (Eigen::Index i = 0; i < dk; ++i)
        for (Eigen::Index j = 0; j < dk; ++j) {
            Complex acc(0.0, 0.0);
            for (Eigen::Index t = 0; t < dt; ++t)
                acc += rho.matrix(keep_offsets[i] + trace_offsets[t], keep_offsets[j] + trace_offsets[t]);
            out(i, j) = acc;
        }

    DensityMatrix result;
    result.matrix = std::move(out);
    result.dims = std::move(out_dims);
    return result;
}

RealVector hermitian_eigenvalues(const Matrix& m) {
    const double imag_scale = m.imag().cwiseAbs().maxCoeff();
    if (imag_scale < 1e-13) {
        Eigen::SelfAdjointEigenSolver<RealMatrix> solver(m.real(), Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success) throw NumericalError("real symmetric eigensolver failed");
        return solver.eigenvalues();
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed");
    return solver.eigenvalues();
}

double spectrum_entropy(const RealVector& eigenvalues, double order) {
    if (order < 1.0) throw ArgumentError("entropy order must be >= 1");
    if (order == 1.0) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
            const double lam = eigenvalues[i];
            if (lam > kEigClamp) s -= lam * std::log(lam);
        }
        return s;
    }
    double power_sum = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        const double lam = eigenvalues[i];
        if (lam > kEigClamp) power_sum += std::pow(lam, order);
    }
    if (power_sum <= 0.0) throw NumericalError("empty spectrum in Renyi entropy");
    return std::log(power_sum) / (1.0 - order);
}

double entropy(const DensityMatrix& rho, double order) {
    const double herm_err = (rho.matrix - rho.matrix.adjoint()).cwiseAbs().maxCoeff();
    if (herm_err > kHermitianTol)
        throw NumericalError("entropy input is not Hermitian within tolerance");
    return spectrum_entropy(hermitian_eigenvalues(rho.matrix), order);
}

RealVector gram_spectrum_from_overlaps(const Matrix& overlaps, const std::vector<double>& weights) {
    const Eigen::Index s = overlaps.rows();
    if (overlaps.cols() != s) throw ArgumentError("overlap matrix must be square");
    if (static_cast<Eigen::Index>(weights.size()) != s)
        throw ArgumentError("weight count does not match vector count");
    Matrix g(s, s);
    for (Eigen::Index a = 0; a < s; ++a) {
        if (weights[a] < 0.0) throw ArgumentError("weights must be >= 0");
        for (Eigen::Index b = 0; b < s; ++b)
            g(a, b) = std::sqrt(weights[a] * weights[b]) * overlaps(a, b);
    }
    // symmetrize away roundoff before the solve
    g = (g + g.adjoint().eval()) / 2.0;
    return hermitian_eigenvalues(g);
}

RealVector gram_spectrum(const std::vector<PureState>& vectors, const std::vector<double>& weights) {
    if (vectors.empty()) throw ArgumentError("gram_spectrum needs at least one vector");
    if (vectors.size() != weights.size()) throw ArgumentError("weight count does not match vector count");
    const Dims& dims = vectors.front().dims;
    const Eigen::Index s = static_cast<Eigen::Index>(vectors.size());
    Matrix overlaps(s, s);
    for (Eigen::Index a = 0; a < s; ++a) {
        if (vectors[a].dims != dims) throw ArgumentError("gram_spectrum vectors must share dims");
        for (Eigen::Index b = 0; b < s; ++b)
            overlaps(a, b) = vectors[a].amplitudes.dot(vectors[b].amplitudes);
    }
    return gram_spectrum_from_overlaps(overlaps, weights);
}

}  // namespace cftlab
