#include "cftlab/coherent_info.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <vector>

#include "cftlab/errors.hpp"
#include "cftlab/parallel.hpp"
#include "cftlab/rng.hpp"

namespace cftlab {

namespace {

constexpr Eigen::Index kDenseCeiling = Eigen::Index(1) << 13;
constexpr int kGramSiteCeiling = 12;
constexpr int kFlagEnumCeiling = 10;
constexpr int kTrajectorySiteCeiling = 20;

// codewords as columns of a (2^n x D) matrix
Matrix codeword_matrix(const CodeSpace& code) {
    Matrix phi(code.register_dim(), code.dimension);
    for (int a = 0; a < code.dimension; ++a) phi.col(a) = code.codewords[a].amplitudes;
    return phi;
}

// applies a single-site 2x2 operator to every column; site i has stride
// 2^(n-1-i) within the bare Q register
void apply_site_op(Matrix& columns, const Eigen::Matrix2cd& op, int site, int n) {
    const Eigen::Index stride = Eigen::Index(1) << (n - 1 - site);
    const Eigen::Index dim = columns.rows();
    const bool diagonal = op(0, 1) == Complex(0, 0) && op(1, 0) == Complex(0, 0);
    for (Eigen::Index c = 0; c < columns.cols(); ++c) {
        Complex* col = columns.col(c).data();
        if (diagonal) {
            for (Eigen::Index base = 0; base < dim; base += 2 * stride)
                for (Eigen::Index lo = 0; lo < stride; ++lo) {
                    col[base + lo] *= op(0, 0);
                    col[base + stride + lo] *= op(1, 1);
                }
        } else {
            for (Eigen::Index base = 0; base < dim; base += 2 * stride)
                for (Eigen::Index lo = 0; lo < stride; ++lo) {
                    const Complex a = col[base + lo];
                    const Complex b = col[base + stride + lo];
                    col[base + lo] = op(0, 0) * a + op(0, 1) * b;
                    col[base + stride + lo] = op(1, 0) * a + op(1, 1) * b;
                }
        }
    }
}

double check_ci_bounds(double value, int d, double order) {
    const double log_d = std::log(static_cast<double>(d));
    if (order == 1.0 && (value < -log_d - 1e-9 || value > log_d + 1e-9))
        throw NumericalError("coherent information " + std::to_string(value) +
                             " violates the [-log D, log D] window");
    return value;
}

// ---- Pauli-string expansion of the product dephasing channel ----
//
// For a single dephasing axis the Kraus strings are K_s = prod_{i in s} sigma_i
// with weight W_s = (1-p/2)^(n-|s|) (p/2)^|s|, and K_s K_t = P_{s xor t} with
// no phase. Everything the gram path needs reduces to the code-subspace
// matrix elements M_T[a,b] = <phi_a| P_T |phi_b> for each site subset T.

struct PauliSubsetData {
    std::vector<Matrix> m_t;       // indexed by subset mask, each D x D
    int n = 0;
    int d = 0;
};

void subset_recursion(const Matrix& phi, Matrix& current, int site, Eigen::Index mask,
                      const Eigen::Matrix2cd& sigma, int n, PauliSubsetData& out) {
    if (site == n) {
        out.m_t[mask] = phi.adjoint() * current;
        return;
    }
    subset_recursion(phi, current, site + 1, mask, sigma, n, out);
    Matrix flipped = current;
    apply_site_op(flipped, sigma, site, n);
    subset_recursion(phi, flipped, site + 1, mask | (Eigen::Index(1) << site), sigma, n, out);
}

PauliSubsetData pauli_subset_elements(const CodeSpace& code, PauliAxis axis) {
    PauliSubsetData data;
    data.n = code.n;
    data.d = code.dimension;
    data.m_t.resize(Eigen::Index(1) << code.n);
    const Matrix phi = codeword_matrix(code);
    Matrix current = phi;
    subset_recursion(phi, current, 0, 0, pauli_matrix(axis), code.n, data);
    return data;
}

std::vector<double> subset_weights(int n, double p) {
    // weight of a Kraus string depends only on how many sites it touches
    std::vector<double> w(n + 1);
    for (int k = 0; k <= n; ++k)
        w[k] = std::pow(1.0 - p / 2.0, n - k) * std::pow(p / 2.0, k);
    return w;
}

CIEstimate ci_gram(const CodeSpace& code, const NoiseSpec& spec, double order) {
    if (code.n > kGramSiteCeiling)
        throw ResourceError("gram path is capped at n = " + std::to_string(kGramSiteCeiling));
    if (spec.kind != NoiseKind::dephasing && spec.kind != NoiseKind::flagged_dephasing)
        throw ArgumentError("gram path expects a single-axis dephasing spec");

    const PauliSubsetData data = pauli_subset_elements(code, spec.axis);
    const int n = data.n;
    const int d = data.d;
    const Eigen::Index n_subsets = Eigen::Index(1) << n;
    const double p = spec.p;

    if (order == 2.0) {
        // bucket the subset sums by |T|; the weight factors depend only on |T|
        std::vector<double> purity_rq_bucket(n + 1, 0.0);
        std::vector<double> purity_q_bucket(n + 1, 0.0);
        for (Eigen::Index t = 0; t < n_subsets; ++t) {
            const int k = std::popcount(static_cast<std::uint64_t>(t));
            const double tr = data.m_t[t].trace().real();
            purity_rq_bucket[k] += (tr / d) * (tr / d);
            purity_q_bucket[k] += data.m_t[t].squaredNorm() / (double(d) * d);
        }
        const double off = 2.0 * (p / 2.0) * (1.0 - p / 2.0);
        const double diag = (1.0 - p / 2.0) * (1.0 - p / 2.0) + (p / 2.0) * (p / 2.0);
        double purity_rq = 0.0, purity_q = 0.0;
        for (int k = 0; k <= n; ++k) {
            const double c = std::pow(off, k) * std::pow(diag, n - k);
            purity_rq += c * purity_rq_bucket[k];
            purity_q += c * purity_q_bucket[k];
        }
        CIEstimate est;
        est.value = std::log(purity_rq) - std::log(purity_q);
        est.method = CIMethod::gram;
        return est;
    }

    // generic order: spectra of rho_RQ and rho_Q from weighted Gram matrices
    const std::vector<double> w = subset_weights(n, p);
    RealMatrix gram_rq(n_subsets, n_subsets);
    for (Eigen::Index s = 0; s < n_subsets; ++s)
        for (Eigen::Index t = 0; t <= s; ++t) {
            const int ks = std::popcount(static_cast<std::uint64_t>(s));
            const int kt = std::popcount(static_cast<std::uint64_t>(t));
            const double overlap = data.m_t[s ^ t].trace().real() / d;
            const double g = std::sqrt(w[ks] * w[kt]) * overlap;
            gram_rq(s, t) = g;
            gram_rq(t, s) = g;
        }
    Eigen::SelfAdjointEigenSolver<RealMatrix> es_rq(gram_rq, Eigen::EigenvaluesOnly);
    if (es_rq.info() != Eigen::Success) throw NumericalError("gram eigensolver failed");
    const double s_rq = spectrum_entropy(es_rq.eigenvalues(), order);

    Matrix gram_q(n_subsets * d, n_subsets * d);
    for (Eigen::Index s = 0; s < n_subsets; ++s)
        for (Eigen::Index t = 0; t < n_subsets; ++t) {
            const int ks = std::popcount(static_cast<std::uint64_t>(s));
            const int kt = std::popcount(static_cast<std::uint64_t>(t));
            const double scale = std::sqrt(w[ks] * w[kt]) / d;
            gram_q.block(s * d, t * d, d, d) = scale * data.m_t[s ^ t];
        }
    const double s_q = spectrum_entropy(hermitian_eigenvalues(gram_q), order);

    CIEstimate est;
    est.value = s_q - s_rq;
    est.method = CIMethod::gram;
    check_ci_bounds(est.value, d, order);
    return est;
}

}  // namespace

const char* ci_method_name(CIMethod method) {
    switch (method) {
        case CIMethod::dense: return "dense";
        case CIMethod::gram: return "gram";
        case CIMethod::flag_enum: return "flag_enum";
        case CIMethod::flag_mc: return "flag_mc";
        case CIMethod::gaussian: return "gaussian";
    }
    return "?";
}

CIEstimate coherent_information(const DensityMatrix& rho_rq, double order) {
    if (rho_rq.dims.size() < 2) throw ArgumentError("state must have a reference and at least one site");
    std::vector<int> keep_q;
    for (int s = 1; s < static_cast<int>(rho_rq.dims.size()); ++s) keep_q.push_back(s);
    const double s_q = entropy(partial_trace(rho_rq, keep_q), order);
    const double s_rq = entropy(rho_rq, order);
    CIEstimate est;
    est.value = s_q - s_rq;
    est.method = CIMethod::dense;
    check_ci_bounds(est.value, static_cast<int>(rho_rq.dims[0]), order);
    return est;
}

CIEstimate ci_unflagged_exact(const CodeSpace& code, const NoiseSpec& spec, double order,
                              ExactPath path) {
    const Eigen::Index full_dim = Eigen::Index(code.dimension) << code.n;
    if (path == ExactPath::automatic)
        path = full_dim <= kDenseCeiling ? ExactPath::dense : ExactPath::gram;

    if (path == ExactPath::dense) {
        if (full_dim > kDenseCeiling)
            throw ResourceError("dense path exceeds the 2^13 register ceiling");
        const PureState psi = max_entangled_state(code);
        DensityMatrix rho = pure_density(psi);
        std::vector<int> sites;
        for (int i = 0; i < code.n; ++i) sites.push_back(i + 1);  // subsystem 0 is R
        rho = apply_product_channel(rho, spec, sites);
        CIEstimate est = coherent_information(rho, order);
        est.method = CIMethod::dense;
        return est;
    }
    return ci_gram(code, spec, order);
}

CIEstimate ci_flagged_exact(const CodeSpace& code, const NoiseSpec& spec) {
    if (spec.kind != NoiseKind::flagged_dephasing)
        throw ArgumentError("ci_flagged_exact needs a flagged_dephasing spec");
    if (code.n > kFlagEnumCeiling)
        throw ResourceError("flagged enumeration is capped at n = " + std::to_string(kFlagEnumCeiling));

    const std::vector<FlaggedOutcome> outcomes = flagged_unravel(spec);
    const Matrix phi = codeword_matrix(code);
    const int n = code.n;
    const int d = code.dimension;

    double weight_sum = 0.0;
    double ci = 0.0;

    // depth-first over outcome strings; codeword columns stay unnormalized so
    // the leaf trace carries the Born probability
    std::vector<Matrix> stack(n + 1);
    stack[0] = phi;
    std::function<void(int, double)> descend = [&](int site, double flag_factor) {
        if (flag_factor == 0.0) return;
        if (site == n) {
            const Matrix& leaf = stack[n];
            const Matrix gram = leaf.adjoint() * leaf;
            const double total = gram.trace().real();
            if (total < 1e-28) return;  // dead branch
            const double weight = flag_factor * total / d;
            const RealVector evals = hermitian_eigenvalues(gram / total);
            ci += weight * spectrum_entropy(evals, 1.0);
            weight_sum += weight;
            return;
        }
        for (const auto& outcome : outcomes) {
            stack[site + 1] = stack[site];
            if (outcome.flag != 0) apply_site_op(stack[site + 1], outcome.op, site, n);
            descend(site + 1, flag_factor * outcome.weight);
        }
    };
    descend(0, 1.0);

    if (std::abs(weight_sum - 1.0) > 1e-10)
        throw NumericalError("flag outcome weights sum to " + std::to_string(weight_sum));

    CIEstimate est;
    est.value = ci;
    est.method = CIMethod::flag_enum;
    long total_strings = 1;
    for (int i = 0; i < n; ++i) total_strings *= 3;
    est.samples = total_strings;
    return est;
}

CIEstimate ci_flagged_mc(const CodeSpace& code, const NoiseSpec& spec, long samples,
                         std::uint64_t seed, unsigned threads) {
    if (spec.kind != NoiseKind::flagged_dephasing)
        throw ArgumentError("ci_flagged_mc needs a flagged_dephasing spec");
    if (code.n > kTrajectorySiteCeiling)
        throw ResourceError("trajectory sampling is capped at n = " + std::to_string(kTrajectorySiteCeiling));
    if (samples < 100) throw ArgumentError("trajectory sampling needs at least 100 samples");

    const Matrix phi = codeword_matrix(code);
    const int n = code.n;
    const int d = code.dimension;
    const double p = spec.p;
    const Eigen::Matrix2cd sigma = pauli_matrix(spec.axis);
    const Eigen::Matrix2cd plus = (Eigen::Matrix2cd::Identity() + sigma) / 2.0;

    std::vector<double> entropy_per_trajectory(samples);

    parallel_for(static_cast<std::size_t>(samples), threads, [&](std::size_t t) {
        Xoshiro256 rng = Xoshiro256::stream(seed, t);
        Matrix state = phi;
        // flag pattern first, then outcomes by conditional Born probabilities
        for (int site = 0; site < n; ++site) {
            if (!rng.bernoulli(p)) continue;
            Matrix projected = state;
            apply_site_op(projected, plus, site, n);
            const double norm_before = state.squaredNorm();
            const double norm_plus = projected.squaredNorm();
            const double q_plus = norm_plus / norm_before;
            if (rng.next_double() < q_plus) {
                state = std::move(projected);
                state /= std::sqrt(q_plus);
            } else {
                state -= projected;
                state /= std::sqrt(std::max(1.0 - q_plus, 1e-300));
            }
        }
        const Matrix gram = state.adjoint() * state;
        const double total = gram.trace().real();
        const RealVector evals = hermitian_eigenvalues(gram / total);
        entropy_per_trajectory[t] = spectrum_entropy(evals, 1.0);
    });

    double mean = 0.0;
    for (long t = 0; t < samples; ++t) mean += entropy_per_trajectory[t];
    mean /= static_cast<double>(samples);
    double var = 0.0;
    for (long t = 0; t < samples; ++t) {
        const double dev = entropy_per_trajectory[t] - mean;
        var += dev * dev;
    }
    var /= static_cast<double>(samples - 1);

    CIEstimate est;
    est.value = mean;
    est.std_error = std::sqrt(var / static_cast<double>(samples));
    est.method = CIMethod::flag_mc;
    est.samples = samples;
    est.seed = seed;
    check_ci_bounds(mean, d, 1.0);
    return est;
}

double fidelity_bound(const CIEstimate& estimate, int code_dimension) {
    const double log_d = std::log(static_cast<double>(code_dimension));
    if (estimate.value > log_d + 1e-6)
        throw ArgumentError("coherent information exceeds log D");
    const double eps = std::max(0.0, log_d - estimate.value);
    const double bound = 1.0 - 2.0 * std::sqrt(eps);
    return std::clamp(bound, 0.0, 1.0);
}

}  // namespace cftlab
