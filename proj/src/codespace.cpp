#include "cftlab/codespace.hpp"

#include <cmath>

#include "cftlab/errors.hpp"

namespace cftlab {

namespace {

constexpr double kRepairableResidual = 1e-6;

void fix_global_phase(Vector& v) {
    Eigen::Index argmax = 0;
    double best = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > best) {
            best = a;
            argmax = i;
        }
    }
    if (best == 0.0) return;
    const Complex phase = v[argmax] / best;
    v /= phase;
}

}  // namespace

CodeSpace make_codespace(const std::vector<PureState>& states, const std::vector<std::string>& labels) {
    const int d = static_cast<int>(states.size());
    if (d < 2) throw ConstructionError("a code needs at least 2 codewords");
    if (!labels.empty() && static_cast<int>(labels.size()) != d)
        throw ConstructionError("label count does not match codeword count");

    const Dims& dims = states.front().dims;
    for (const auto& s : states)
        if (s.dims != dims) throw ConstructionError("codewords must share register dims");
    for (auto dim : dims)
        if (dim != 2) throw ConstructionError("codewords must live on a qubit register");

    double residual = 0.0;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            const Complex overlap = states[a].amplitudes.dot(states[b].amplitudes);
            const double target = (a == b) ? 1.0 : 0.0;
            residual = std::max(residual, std::abs(overlap - target));
        }
    if (residual >= kRepairableResidual)
        throw ConstructionError("codewords are not orthonormal: residual " + std::to_string(residual));

    CodeSpace code;
    code.n = static_cast<int>(dims.size());
    code.dimension = d;
    code.labels = labels.empty() ? std::vector<std::string>(d, "") : labels;

    // modified Gram-Schmidt repair, then phase convention
    std::vector<Vector> vecs;
    vecs.reserve(d);
    for (const auto& s : states) vecs.push_back(s.amplitudes);
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < a; ++b) vecs[a] -= vecs[b].dot(vecs[a]) * vecs[b];
        const double norm = vecs[a].norm();
        if (norm < 0.5) throw ConstructionError("codeword set is rank deficient");
        vecs[a] /= norm;
        fix_global_phase(vecs[a]);
        code.codewords.emplace_back(vecs[a], dims);
    }
    return code;
}

PureState max_entangled_state(const CodeSpace& code) {
    const Eigen::Index q_dim = code.register_dim();
    const int d = code.dimension;
    Vector psi = Vector::Zero(d * q_dim);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (int a = 0; a < d; ++a)
        psi.segment(a * q_dim, q_dim) = scale * code.codewords[a].amplitudes;
    Dims dims;
    dims.push_back(d);
    for (int i = 0; i < code.n; ++i) dims.push_back(2);
    return PureState(std::move(psi), std::move(dims));
}

Matrix projector(const CodeSpace& code) {
    const Eigen::Index q_dim = code.register_dim();
    Matrix p = Matrix::Zero(q_dim, q_dim);
    for (const auto& w : code.codewords) p += w.amplitudes * w.amplitudes.adjoint();
    return p;
}

}  // namespace cftlab
