// Independent brute-force reference implementations used only by tests.
// These deliberately avoid the library's index machinery: everything is
// explicit multi-index arithmetic or dense Kronecker products.
#pragma once

#include <complex>
#include <vector>

#include "cftlab/dense.hpp"
#include "cftlab/rng.hpp"

namespace oracle {

using cftlab::Complex;
using cftlab::Dims;
using cftlab::Matrix;
using cftlab::Vector;

inline std::vector<Eigen::Index> decode(Eigen::Index flat, const Dims& dims) {
    std::vector<Eigen::Index> digits(dims.size());
    for (int s = static_cast<int>(dims.size()) - 1; s >= 0; --s) {
        digits[s] = flat % dims[s];
        flat /= dims[s];
    }
    return digits;
}

// partial trace by explicit index summation
inline Matrix naive_partial_trace(const Matrix& rho, const Dims& dims, const std::vector<int>& keep) {
    std::vector<bool> kept(dims.size(), false);
    for (int s : keep) kept[s] = true;
    Eigen::Index out_dim = 1;
    for (std::size_t s = 0; s < dims.size(); ++s)
        if (kept[s]) out_dim *= dims[s];

    const Eigen::Index full = rho.rows();
    Matrix out = Matrix::Zero(out_dim, out_dim);
    auto project = [&](const std::vector<Eigen::Index>& digits, bool keep_part) {
        Eigen::Index acc = 0;
        for (std::size_t s = 0; s < dims.size(); ++s)
            if (kept[s] == keep_part) acc = acc * dims[s] + digits[s];
        return acc;
    };
    for (Eigen::Index i = 0; i < full; ++i) {
        const auto di = decode(i, dims);
        for (Eigen::Index j = 0; j < full; ++j) {
            const auto dj = decode(j, dims);
            if (project(di, false) != project(dj, false)) continue;
            out(project(di, true), project(dj, true)) += rho(i, j);
        }
    }
    return out;
}

inline Vector random_state_vector(Eigen::Index dim, std::uint64_t seed) {
    cftlab::Xoshiro256 rng(seed);
    Vector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        v[i] = Complex(rng.next_double() - 0.5, rng.next_double() - 0.5);
    v.normalize();
    return v;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// op acting on one site of an n-qubit register, everything else identity
inline Matrix site_operator(const Matrix& op, int site, int n) {
    Matrix out = Matrix::Identity(1, 1);
    for (int i = 0; i < n; ++i)
        out = kron(out, i == site ? op : Matrix::Identity(2, 2));
    return out;
}

}  // namespace oracle
