#include "cftlab/gaussian.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "cftlab/errors.hpp"
#include "cftlab/models.hpp"

namespace cftlab {

namespace {

constexpr double kPhysicalityTol = 1e-9;

RealMatrix vacuum_block() {
    RealMatrix b(2, 2);
    b << 0.0, -1.0, 1.0, 0.0;
    return b;
}

double binary_entropy(double x) {
    double s = 0.0;
    if (x > 0.0 && x < 1.0) s = -x * std::log(x) - (1.0 - x) * std::log(1.0 - x);
    return s;
}

}  // namespace

CovarianceMatrix::CovarianceMatrix(RealMatrix matrix, int mode_count) {
    if (matrix.rows() != 2 * mode_count || matrix.cols() != 2 * mode_count)
        throw ArgumentError("covariance matrix must be 2m x 2m");
    m = (matrix - matrix.transpose().eval()) / 2.0;  // antisymmetry exact by storage
    modes = mode_count;
    validate();
}

void CovarianceMatrix::validate() const {
    Eigen::JacobiSVD<RealMatrix> svd(m);
    if (svd.singularValues().size() > 0 && svd.singularValues()(0) > 1.0 + kPhysicalityTol)
        throw NumericalError("covariance singular value " + std::to_string(svd.singularValues()(0)) +
                             " violates physicality");
}

CanonicalForm antisymmetric_canonical_form(const RealMatrix& a) {
    const Eigen::Index dim = a.rows();
    if (a.cols() != dim || dim % 2 != 0) throw ArgumentError("need an even-dimensional square matrix");
    if ((a + a.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw ArgumentError("matrix is not antisymmetric");

    Eigen::RealSchur<RealMatrix> schur(a);
    if (schur.info() != Eigen::Success) throw NumericalError("Schur decomposition failed");
    RealMatrix t = schur.matrixT();
    RealMatrix q = schur.matrixU();

    CanonicalForm form;
    form.rotation = RealMatrix(dim, dim);
    form.energies.reserve(dim / 2);
    for (Eigen::Index b = 0; b < dim; b += 2) {
        double e = t(b, b + 1);
        Eigen::Index c0 = b, c1 = b + 1;
        if (e < 0.0) {
            std::swap(c0, c1);  // flip the block to make the energy positive
            e = -e;
        }
        if (e < 1e-12)
            throw NumericalError("zero mode in canonical form; chain is not gapped");
        form.rotation.col(b) = q.col(c0);
        form.rotation.col(b + 1) = q.col(c1);
        form.energies.push_back(e);
    }
    // Schur form of a normal matrix is block diagonal; verify
    const RealMatrix check = form.rotation.transpose() * a * form.rotation;
    for (Eigen::Index b = 0; b < dim; b += 2) {
        RealMatrix block = check.block(b, 0, 2, dim);
        block.block(0, b, 2, 2).setZero();
        if (block.cwiseAbs().maxCoeff() > 1e-8)
            throw NumericalError("canonical form has off-block residue");
    }
    return form;
}

CovarianceMatrix code_covariance(int m) {
    if (m < 2) throw ArgumentError("code covariance needs at least 2 chain modes");

    const RealMatrix a = build_majorana_chain(m);
    const CanonicalForm form = antisymmetric_canonical_form(a);

    int lowest = 0;
    for (std::size_t k = 1; k < form.energies.size(); ++k)
        if (form.energies[k] < form.energies[lowest]) lowest = static_cast<int>(k);

    // quasimode basis: vacuum everywhere, then the (lowest mode, reference)
    // pair carries the maximally entangled two-mode block
    const int total_modes = m + 1;
    RealMatrix quasi = RealMatrix::Zero(2 * total_modes, 2 * total_modes);
    for (int k = 0; k < m; ++k) quasi.block(2 * k, 2 * k, 2, 2) = vacuum_block();

    const int g1 = 2 * lowest;      // Majorana pair of the excited quasimode
    const int r1 = 2 * m;           // reference Majorana pair
    quasi.block(g1, g1, 2, 2).setZero();
    quasi.block(r1, r1, 2, 2).setZero();
    quasi(g1, r1 + 1) = -1.0;
    quasi(r1 + 1, g1) = 1.0;
    quasi(g1 + 1, r1) = -1.0;
    quasi(r1, g1 + 1) = 1.0;

    RealMatrix rot = RealMatrix::Identity(2 * total_modes, 2 * total_modes);
    rot.topLeftCorner(2 * m, 2 * m) = form.rotation;

    return CovarianceMatrix(rot * quasi * rot.transpose(), total_modes);
}

CovarianceMatrix apply_damping(const CovarianceMatrix& cov, double p, const std::vector<int>& modes) {
    if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("damping strength must lie in [0, 1]");
    RealVector scale = RealVector::Ones(2 * cov.modes);
    RealMatrix offset = RealMatrix::Zero(2 * cov.modes, 2 * cov.modes);
    const double x = std::sqrt(1.0 - p);
    for (int mode : modes) {
        if (mode < 0 || mode >= cov.modes) throw ArgumentError("damped mode index out of range");
        scale[2 * mode] = x;
        scale[2 * mode + 1] = x;
        offset.block(2 * mode, 2 * mode, 2, 2) = p * vacuum_block();
    }
    const RealMatrix damped = scale.asDiagonal() * cov.m * scale.asDiagonal() + offset;
    return CovarianceMatrix(damped, cov.modes);
}

double gaussian_entropy(const CovarianceMatrix& cov, const std::vector<int>& modes) {
    if (modes.empty()) throw ArgumentError("entropy subset must be nonempty");
    std::vector<Eigen::Index> idx;
    for (int mode : modes) {
        if (mode < 0 || mode >= cov.modes) throw ArgumentError("mode index out of range");
        idx.push_back(2 * mode);
        idx.push_back(2 * mode + 1);
    }
    const Eigen::Index k = static_cast<Eigen::Index>(idx.size());
    RealMatrix sub(k, k);
    for (Eigen::Index r = 0; r < k; ++r)
        for (Eigen::Index c = 0; c < k; ++c) sub(r, c) = cov.m(idx[r], idx[c]);

    Eigen::JacobiSVD<RealMatrix> svd(sub);
    double s = 0.0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        double lam = svd.singularValues()(i);
        if (lam > 1.0 + kPhysicalityTol)
            throw NumericalError("restricted covariance singular value exceeds 1");
        lam = std::min(lam, 1.0);
        // each mode pairs two singular values; halve the double count
        s += 0.5 * binary_entropy((1.0 + lam) / 2.0);
    }
    return s;
}

CIEstimate gaussian_ci(int m, double p) {
    if (m < 2 || m > 128) throw ResourceError("gaussian_ci supports 2 <= m <= 128 modes");
    CovarianceMatrix cov = code_covariance(m);
    std::vector<int> chain_modes;
    for (int j = 0; j < m; ++j) chain_modes.push_back(j);
    cov = apply_damping(cov, p, chain_modes);

    std::vector<int> all_modes = chain_modes;
    all_modes.push_back(m);
    const double s_q = gaussian_entropy(cov, chain_modes);
    const double s_rq = gaussian_entropy(cov, all_modes);

    CIEstimate est;
    est.value = s_q - s_rq;
    est.method = CIMethod::gaussian;
    return est;
}

}  // namespace cftlab
