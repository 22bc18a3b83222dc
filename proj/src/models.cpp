#include "cftlab/models.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "cftlab/errors.hpp"
#include "cftlab/rng.hpp"

namespace cftlab {

namespace {

constexpr int kDenseLimit = 12;        // dense sector solve up to here
constexpr double kDegenTol = 1e-8;     // relative energy window
constexpr double kSigmaDim = 0.125;    // anchor dimension for the labeling fit

int popcount_index(Eigen::Index s) { return std::popcount(static_cast<std::uint64_t>(s)); }

}  // namespace

TfimHamiltonian::TfimHamiltonian(int n, double g) : n_(n), g_(g) {
    if (n < 2 || n > 20) throw ResourceError("TFIM supports 2 <= n <= 20 sites, got " + std::to_string(n));
    if (g <= 0.0) throw ArgumentError("transverse field must be positive");
    flip_masks_.reserve(n);
    for (int i = 0; i < n; ++i) {
        const int j = (i + 1) % n;
        const Eigen::Index mask = (Eigen::Index(1) << (n - 1 - i)) | (Eigen::Index(1) << (n - 1 - j));
        flip_masks_.push_back(mask);
    }
}

int TfimHamiltonian::basis_parity(Eigen::Index state) const {
    return (popcount_index(state) % 2 == 0) ? 1 : -1;
}

void TfimHamiltonian::matvec(const double* in, double* out) const {
    const Eigen::Index d = dim();
    for (Eigen::Index s = 0; s < d; ++s) {
        // diagonal: -g * sum_i z_i, with z = +1 for bit 0
        const double z_sum = static_cast<double>(n_ - 2 * popcount_index(s));
        double acc = -g_ * z_sum * in[s];
        for (const Eigen::Index mask : flip_masks_) acc -= in[s ^ mask];
        out[s] = acc;
    }
}

Vector TfimHamiltonian::apply(const Vector& psi) const {
    if (psi.size() != dim()) throw ArgumentError("state dimension mismatch");
    Vector out(dim());
    const Eigen::Index d = dim();
    for (Eigen::Index s = 0; s < d; ++s) {
        const double z_sum = static_cast<double>(n_ - 2 * popcount_index(s));
        Complex acc = -g_ * z_sum * psi[s];
        for (const Eigen::Index mask : flip_masks_) acc -= psi[s ^ mask];
        out[s] = acc;
    }
    return out;
}

TfimHamiltonian build_tfim(int n, double g) { return TfimHamiltonian(n, g); }

namespace {

struct SectorBasis {
    std::vector<Eigen::Index> states;        // basis indices in this sector
    std::vector<Eigen::Index> position;      // full index -> sector index
};

SectorBasis sector_basis(const TfimHamiltonian& h, int parity) {
    SectorBasis basis;
    const Eigen::Index d = h.dim();
    basis.position.assign(d, -1);
    for (Eigen::Index s = 0; s < d; ++s) {
        if (h.basis_parity(s) == parity) {
            basis.position[s] = static_cast<Eigen::Index>(basis.states.size());
            basis.states.push_back(s);
        }
    }
    return basis;
}

struct SectorEig {
    std::vector<double> energies;
    std::vector<Vector> states;  // embedded in the full register
    int parity;
};

// maps a sector-basis eigenvector back to the full register and fixes the
// overall sign so the largest-magnitude amplitude is positive
Vector embed_sector_vector(const SectorBasis& basis, const Eigen::VectorXd& v, Eigen::Index full_dim) {
    Vector full = Vector::Zero(full_dim);
    Eigen::Index argmax = 0;
    double best = 0.0;
    for (Eigen::Index a = 0; a < v.size(); ++a) {
        if (std::abs(v[a]) > best) {
            best = std::abs(v[a]);
            argmax = a;
        }
    }
    const double sign = v[argmax] >= 0.0 ? 1.0 : -1.0;
    for (Eigen::Index a = 0; a < v.size(); ++a) full[basis.states[a]] = sign * v[a];
    return full;
}

SectorEig solve_sector(const TfimHamiltonian& h, int parity, int k, const LanczosOptions& opts) {
    const SectorBasis basis = sector_basis(h, parity);
    const Eigen::Index sdim = static_cast<Eigen::Index>(basis.states.size());
    const int want = static_cast<int>(std::min<Eigen::Index>(k, sdim));
    SectorEig out;
    out.parity = parity;
    if (want == 0) return out;

    const int n = h.sites();
    const double g = h.field();

    if (n <= kDenseLimit) {
        RealMatrix m = RealMatrix::Zero(sdim, sdim);
        for (Eigen::Index a = 0; a < sdim; ++a) {
            const Eigen::Index s = basis.states[a];
            m(a, a) = -g * static_cast<double>(n - 2 * popcount_index(s));
            for (int i = 0; i < n; ++i) {
                const Eigen::Index t = s ^ ((Eigen::Index(1) << (n - 1 - i)) |
                                            (Eigen::Index(1) << (n - 1 - ((i + 1) % n))));
                m(basis.position[t], a) -= 1.0;
            }
        }
        Eigen::SelfAdjointEigenSolver<RealMatrix> solver(m);
        if (solver.info() != Eigen::Success) throw NumericalError("dense sector eigensolver failed");
        for (int j = 0; j < want; ++j) {
            out.energies.push_back(solver.eigenvalues()[j]);
            out.states.push_back(embed_sector_vector(basis, solver.eigenvectors().col(j), h.dim()));
        }
        return out;
    }

    auto matvec = [&](const double* in, double* outv) {
        for (Eigen::Index a = 0; a < sdim; ++a) {
            const Eigen::Index s = basis.states[a];
            double acc = -g * static_cast<double>(n - 2 * popcount_index(s)) * in[a];
            for (int i = 0; i < n; ++i) {
                const Eigen::Index t = s ^ ((Eigen::Index(1) << (n - 1 - i)) |
                                            (Eigen::Index(1) << (n - 1 - ((i + 1) % n))));
                acc -= in[basis.position[t]];
            }
            outv[a] = acc;
        }
    };

    LanczosOptions sector_opts = opts;
    sector_opts.seed = splitmix64_mix(opts.seed, (std::uint64_t(n) << 8) ^ std::uint64_t(parity == 1 ? 1 : 2));
    const LanczosResult res = lanczos_lowest(matvec, sdim, want, sector_opts);
    for (int j = 0; j < want; ++j) {
        out.energies.push_back(res.eigenvalues[j]);
        out.states.push_back(embed_sector_vector(basis, res.eigenvectors.col(j), h.dim()));
    }
    return out;
}

}  // namespace

SpectrumRecord low_energy_spectrum(const TfimHamiltonian& h, int k, const LanczosOptions& opts) {
    if (k < 1 || k > 8) throw ArgumentError("low_energy_spectrum supports 1 <= k <= 8 states");
    if (Eigen::Index(4) * k > h.dim()) throw ArgumentError("k is not small against the Hilbert space");

    const SectorEig even = solve_sector(h, +1, k, opts);
    const SectorEig odd = solve_sector(h, -1, k, opts);

    struct Entry {
        double energy;
        const Vector* state;
        int parity;
    };
    std::vector<Entry> merged;
    for (std::size_t i = 0; i < even.energies.size(); ++i)
        merged.push_back({even.energies[i], &even.states[i], +1});
    for (std::size_t i = 0; i < odd.energies.size(); ++i)
        merged.push_back({odd.energies[i], &odd.states[i], -1});
    std::stable_sort(merged.begin(), merged.end(),
                     [](const Entry& a, const Entry& b) { return a.energy < b.energy; });
    if (static_cast<int>(merged.size()) > k) merged.resize(k);

    SpectrumRecord rec;
    const Dims qubit_dims(h.sites(), 2);
    for (const auto& e : merged) {
        rec.energies.push_back(e.energy);
        rec.states.emplace_back(*e.state, qubit_dims);
        rec.parities.push_back(e.parity);
    }
    rec.labels.assign(rec.size(), "");
    rec.assigned_dimensions.assign(rec.size(), std::numeric_limits<double>::quiet_NaN());
    rec.degenerate.assign(rec.size(), false);
    const double scale = std::max(1.0, std::abs(rec.energies.front()));
    for (int i = 0; i < rec.size(); ++i)
        for (int j = 0; j < rec.size(); ++j)
            if (i != j && std::abs(rec.energies[i] - rec.energies[j]) <= kDegenTol * scale)
                rec.degenerate[i] = true;
    return rec;
}

SpectrumRecord identify_scaling_states(const SpectrumRecord& spec) {
    if (spec.size() < 3) throw ArgumentError("labeling needs at least 3 states");
    const int n = static_cast<int>(spec.states.front().dims.size());

    if (spec.parities[0] != 1) throw LabelingError("ground state has odd parity; not a critical TFIM spectrum");

    int idx_sigma = -1;
    int idx_epsilon = -1;
    for (int i = 1; i < spec.size(); ++i) {
        if (spec.parities[i] == -1 && idx_sigma < 0) idx_sigma = i;
        if (spec.parities[i] == +1 && idx_epsilon < 0) idx_epsilon = i;
    }
    if (idx_sigma < 0 || idx_epsilon < 0)
        throw LabelingError("spectrum does not contain both parity sectors");

    // degenerate states may only be ordered when parity disambiguates
    auto same_parity_degenerate = [&](int i) {
        if (!spec.degenerate[i]) return false;
        const double scale = std::max(1.0, std::abs(spec.energies.front()));
        for (int j = 0; j < spec.size(); ++j)
            if (j != i && spec.parities[j] == spec.parities[i] &&
                std::abs(spec.energies[j] - spec.energies[i]) <= kDegenTol * scale)
                return true;
        return false;
    };
    for (int i : {0, idx_sigma, idx_epsilon})
        if (same_parity_degenerate(i))
            throw LabelingError("candidate scaling state is degenerate within its parity sector");

    const double e0 = spec.energies[0];
    const double gap_sigma = spec.energies[idx_sigma] - e0;
    const double gap_epsilon = spec.energies[idx_epsilon] - e0;
    if (gap_sigma <= 0.0) throw LabelingError("sigma candidate is not above the ground state");
    const double ratio = gap_epsilon / gap_sigma;
    if (n >= 8 && !(ratio > 6.0 && ratio < 10.0))
        throw LabelingError("gap ratio " + std::to_string(ratio) +
                            " outside (6, 10); spectrum does not look critical");

    SpectrumRecord out = spec;
    const double slope = gap_sigma / kSigmaDim;  // E = a + slope * Delta
    for (int i = 0; i < out.size(); ++i)
        out.assigned_dimensions[i] = (out.energies[i] - e0) / slope;
    out.labels.assign(out.size(), "");
    out.labels[0] = "I";
    out.labels[idx_sigma] = "sigma";
    out.labels[idx_epsilon] = "epsilon";
    out.assigned_dimensions[0] = 0.0;
    out.assigned_dimensions[idx_sigma] = kSigmaDim;
    return out;
}

RealMatrix build_majorana_chain(int m) {
    if (m < 2) throw ArgumentError("Majorana chain needs at least 2 complex modes");
    const int dim = 2 * m;
    RealMatrix a = RealMatrix::Zero(dim, dim);
    for (int j = 0; j + 1 < dim; ++j) {
        a(j, j + 1) = 2.0;
        a(j + 1, j) = -2.0;
    }
    // antiperiodic closure c_{2m+1} = -c_1
    a(dim - 1, 0) = -2.0;
    a(0, dim - 1) = 2.0;
    return a;
}

RealVector majorana_single_particle_energies(const RealMatrix& a) {
    const Eigen::Index dim = a.rows();
    if (a.cols() != dim || dim % 2 != 0) throw ArgumentError("coefficient matrix must be even-dimensional square");
    Matrix ia = Complex(0.0, 1.0) * a.cast<Complex>();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(ia, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("Majorana spectrum solve failed");
    std::vector<double> positive;
    for (Eigen::Index i = 0; i < dim; ++i)
        if (solver.eigenvalues()[i] > 0.0) positive.push_back(solver.eigenvalues()[i]);
    std::sort(positive.begin(), positive.end());
    RealVector out(static_cast<Eigen::Index>(positive.size()));
    for (std::size_t i = 0; i < positive.size(); ++i) out[static_cast<Eigen::Index>(i)] = positive[i];
    return out;
}

}  // namespace cftlab
