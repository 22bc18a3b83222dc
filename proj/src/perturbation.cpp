#include "cftlab/perturbation.hpp"

#include <cmath>

#include "cftlab/errors.hpp"

namespace cftlab {

namespace {

// op applied to every codeword; site i has stride 2^(n-1-i)
Matrix apply_jump(const Matrix& phi, const Eigen::Matrix2cd& op, int site, int n) {
    if (site < 0 || site >= n) throw ArgumentError("jump site out of range");
    Matrix out = phi;
    const Eigen::Index stride = Eigen::Index(1) << (n - 1 - site);
    const Eigen::Index dim = out.rows();
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
        Complex* col = out.col(c).data();
        for (Eigen::Index base = 0; base < dim; base += 2 * stride)
            for (Eigen::Index lo = 0; lo < stride; ++lo) {
                const Complex a = col[base + lo];
                const Complex b = col[base + stride + lo];
                col[base + lo] = op(0, 0) * a + op(0, 1) * b;
                col[base + stride + lo] = op(1, 0) * a + op(1, 1) * b;
            }
    }
    return out;
}

Matrix codeword_matrix(const CodeSpace& code) {
    Matrix phi(code.register_dim(), code.dimension);
    for (int a = 0; a < code.dimension; ++a) phi.col(a) = code.codewords[a].amplitudes;
    return phi;
}

}  // namespace

JumpSet dephasing_jumps(PauliAxis axis, int n) {
    JumpSet jumps;
    const Eigen::Matrix2cd op = pauli_matrix(axis) / std::sqrt(2.0);
    for (int i = 0; i < n; ++i) jumps.operators.push_back({i, op});
    return jumps;
}

double b_coefficient(const CodeSpace& code, const JumpSet& jumps) {
    const Matrix phi = codeword_matrix(code);
    const int d = code.dimension;
    double b = 0.0;
    for (const auto& jump : jumps.operators) {
        const Matrix u = apply_jump(phi, jump.op, jump.site, code.n);
        const Matrix m = phi.adjoint() * u;  // m[a,b] = <phi_a| L |phi_b>
        b += d * m.squaredNorm() - std::norm(m.trace());
    }
    return b / (double(d) * d);
}

std::array<double, 3> b2_coefficients(const CodeSpace& code, const JumpSet& jumps) {
    if (code.n > 16) throw ResourceError("b2 evaluation is capped at n = 16");
    if (code.dimension > 4) throw ResourceError("b2 evaluation is capped at D = 4");
    for (const auto& jump : jumps.operators) {
        const Eigen::Matrix2cd sq = jump.op * jump.op;
        const double herm = (jump.op - jump.op.adjoint()).cwiseAbs().maxCoeff();
        const double unit = (sq - sq(0, 0) * Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
        if (herm > 1e-12 || unit > 1e-12)
            throw ArgumentError("b2 supports only Hermitian jumps squaring to the identity");
    }

    const Matrix phi = codeword_matrix(code);
    const int d = code.dimension;
    const std::size_t j_count = jumps.operators.size();

    std::vector<Matrix> applied(j_count);   // L_i |phi_b> columns
    std::vector<Matrix> single(j_count);    // M_i[a,b] = <phi_a| L_i |phi_b>
    for (std::size_t i = 0; i < j_count; ++i) {
        applied[i] = apply_jump(phi, jumps.operators[i].op, jumps.operators[i].site, code.n);
        single[i] = phi.adjoint() * applied[i];
    }

    double b1 = 0.0, b2 = 0.0, b3 = 0.0;
    for (std::size_t i = 0; i < j_count; ++i)
        for (std::size_t j = 0; j < j_count; ++j) {
            const Matrix& mi = single[i];
            const Matrix& mj = single[j];
            // pair elements <phi_a| L_i L_j |phi_b>; for Hermitian jumps these
            // coincide with <L_i phi_a | L_j phi_b>
            const Matrix pair = applied[i].adjoint() * applied[j];

            const Complex tr_mi = mi.trace();
            const Complex tr_mj = mj.trace();
            const Complex tr_pair = pair.trace();

            b1 += (std::pow(d, 3) * (mi * mi.adjoint() * mj * mj.adjoint()).trace() -
                   tr_mi * std::conj(tr_mi) * tr_mj * std::conj(tr_mj))
                      .real();
            b2 += (double(d) * d * (mi * pair * mj.adjoint()).trace() -
                   tr_mi * tr_pair * std::conj(tr_mj))
                      .real();
            b3 += d * pair.squaredNorm() - std::norm(tr_pair);
        }

    const double d4 = std::pow(d, 4);
    return {b1 / (4.0 * d4), b2 / (4.0 * d * d * d), b3 / (8.0 * d * d)};
}

double extract_plogp_coefficient(const std::vector<std::pair<double, double>>& curve, int code_dimension) {
    if (curve.size() < 4) throw ArgumentError("p log p fit needs at least 4 points");
    double p_min = curve.front().first, p_max = curve.front().first;
    for (const auto& [p, ic] : curve) {
        if (!(p > 0.0)) throw ArgumentError("p log p fit requires p > 0: log p is undefined at p = 0");
        p_min = std::min(p_min, p);
        p_max = std::max(p_max, p);
    }
    if (p_max / p_min < 10.0) throw ArgumentError("p log p fit needs at least a decade of p");

    const Eigen::Index rows = static_cast<Eigen::Index>(curve.size());
    RealMatrix design(rows, 2);
    RealVector target(rows);
    const double log_d = std::log(static_cast<double>(code_dimension));
    for (Eigen::Index r = 0; r < rows; ++r) {
        const double p = curve[r].first;
        design(r, 0) = p * std::log(p);
        design(r, 1) = p;
        target[r] = curve[r].second - log_d;
    }
    Eigen::JacobiSVD<RealMatrix> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double cond = svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
    if (!(cond < 1e8)) throw FitError("p log p design matrix condition number " + std::to_string(cond));
    const RealVector coeff = svd.solve(target);
    return coeff[0];
}

ExponentFit exponent_fit(const std::vector<std::pair<double, double>>& values) {
    if (values.size() < 3) throw ArgumentError("exponent fit needs at least 3 sizes");
    int positive = 0, negative = 0;
    for (const auto& [n, v] : values) {
        if (v > 0.0) ++positive;
        else if (v < 0.0) ++negative;
        else throw FitError("exponent fit cannot handle zero values");
    }
    if (positive != 0 && negative != 0) throw FitError("exponent fit values are sign-mixed");

    const Eigen::Index rows = static_cast<Eigen::Index>(values.size());
    RealMatrix design(rows, 2);
    RealVector target(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        design(r, 0) = std::log(values[r].first);
        design(r, 1) = 1.0;
        target[r] = std::log(std::abs(values[r].second));
    }
    const RealVector coeff = design.colPivHouseholderQr().solve(target);
    ExponentFit fit;
    fit.slope = coeff[0];
    fit.intercept = coeff[1];
    fit.residual = (design * coeff - target).squaredNorm();
    return fit;
}

}  // namespace cftlab
