#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cftlab/dense.hpp"
#include "cftlab/errors.hpp"
#include "oracles.hpp"

using namespace cftlab;

namespace {

PureState bell_with_reference(int d) {
    // maximally entangled qudit pair |a>|a> / sqrt(d) on dims {d, d}
    Vector v = Vector::Zero(d * d);
    for (int a = 0; a < d; ++a) v[a * d + a] = 1.0 / std::sqrt(double(d));
    return PureState(v, Dims{d, d});
}

}  // namespace

TEST_CASE("state and density invariants are enforced") {
    Vector bad = Vector::Ones(4);
    CHECK_THROWS_AS(PureState(bad, Dims{2, 2}), ArgumentError);
    CHECK_THROWS_AS(PureState(Vector::Ones(3).eval(), Dims{2, 2}), ArgumentError);

    Matrix nonherm = Matrix::Zero(2, 2);
    nonherm(0, 1) = 1.0;
    nonherm(0, 0) = 1.0;
    CHECK_THROWS_AS(DensityMatrix(nonherm, Dims{2}), NumericalError);
}

TEST_CASE("partial trace of a maximally entangled pair is maximally mixed") {
    const PureState psi = bell_with_reference(2);
    const DensityMatrix rho = pure_density(psi);
    const DensityMatrix q = partial_trace(rho, {1});
    CHECK(q.dims == Dims{2});
    CHECK(std::abs(q.matrix(0, 0).real() - 0.5) < 1e-12);
    CHECK(std::abs(q.matrix(1, 1).real() - 0.5) < 1e-12);
    CHECK(std::abs(q.matrix(0, 1)) < 1e-12);
    CHECK(std::abs(q.matrix.trace() - Complex(1.0)) < 1e-12);
}

TEST_CASE("keeping every subsystem returns the identical matrix") {
    const PureState psi(oracle::random_state_vector(8, 11), Dims{2, 2, 2});
    const DensityMatrix rho = pure_density(psi);
    const DensityMatrix same = partial_trace(rho, {0, 1, 2});
    CHECK((same.matrix - rho.matrix).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("partial trace matches the brute-force index-summation oracle") {
    for (std::uint64_t seed : {1, 2, 3}) {
        const Dims dims{2, 2, 2};
        const PureState psi(oracle::random_state_vector(8, seed), dims);
        const DensityMatrix rho = pure_density(psi);
        const DensityMatrix got = partial_trace(rho, {0});
        const Matrix want = oracle::naive_partial_trace(rho.matrix, dims, {0});
        CHECK((got.matrix - want).cwiseAbs().maxCoeff() < 1e-12);
    }
    // mixed subsystem dimensions and a nontrivial keep set
    const Dims dims{3, 2, 2};
    const PureState psi(oracle::random_state_vector(12, 77), dims);
    const DensityMatrix rho = pure_density(psi);
    const DensityMatrix got = partial_trace(rho, {0, 2});
    const Matrix want = oracle::naive_partial_trace(rho.matrix, dims, {0, 2});
    CHECK(got.dims == Dims{3, 2});
    CHECK((got.matrix - want).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(got.matrix.trace() - Complex(1.0)) < 1e-12);
}

TEST_CASE("partial trace rejects bad keep sets") {
    const DensityMatrix rho = pure_density(bell_with_reference(2));
    CHECK_THROWS_AS(partial_trace(rho, {}), ArgumentError);
    CHECK_THROWS_AS(partial_trace(rho, {2}), ArgumentError);
    CHECK_THROWS_AS(partial_trace(rho, {0, 0}), ArgumentError);
}

TEST_CASE("entropy of simple spectra") {
    Matrix mixed = Matrix::Identity(2, 2) / 2.0;
    const DensityMatrix rho(mixed, Dims{2});
    CHECK(entropy(rho, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    const PureState psi(oracle::random_state_vector(8, 5), Dims{2, 2, 2});
    const DensityMatrix pure = pure_density(psi);
    CHECK(std::abs(entropy(pure, 1.0)) < 1e-9);
    CHECK(std::abs(entropy(pure, 2.0)) < 1e-9);
    CHECK(std::abs(entropy(pure, 3.5)) < 1e-9);
}

TEST_CASE("Renyi-2 entropy of the spectrum {0.7, 0.3}") {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 0.7;
    m(1, 1) = 0.3;
    const DensityMatrix rho(m, Dims{2});
    CHECK(entropy(rho, 2.0) == doctest::Approx(-std::log(0.58)).epsilon(1e-12));
}

TEST_CASE("entropy is non-increasing in the Renyi order") {
    Xoshiro256 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 2 + static_cast<int>(rng.next_u64() % 6);
        RealVector spectrum(d);
        double total = 0.0;
        for (int i = 0; i < d; ++i) {
            spectrum[i] = rng.next_double() + 1e-6;
            total += spectrum[i];
        }
        spectrum /= total;
        double previous = spectrum_entropy(spectrum, 1.0);
        for (double order : {1.5, 2.0, 3.0, 5.0, 9.0}) {
            const double s = spectrum_entropy(spectrum, order);
            CHECK(s <= previous + 1e-9);
            previous = s;
        }
    }
}

TEST_CASE("entropy clamps tiny eigenvalues instead of producing NaN") {
    RealVector spectrum(3);
    spectrum << 1.0, -5e-13, 3e-13;
    const double s = spectrum_entropy(spectrum, 1.0);
    CHECK(std::isfinite(s));
    CHECK(s >= -1e-9);
}

TEST_CASE("entropy rejects non-Hermitian input") {
    DensityMatrix rho;
    rho.matrix = Matrix::Identity(2, 2) / 2.0;
    rho.matrix(0, 1) = Complex(0.0, 1e-3);
    rho.dims = Dims{2};
    CHECK_THROWS_AS(entropy(rho, 1.0), NumericalError);
}

TEST_CASE("gram spectrum of trivial ensembles") {
    PureState one(oracle::random_state_vector(4, 3), Dims{2, 2});
    RealVector single = gram_spectrum({one}, {1.0});
    CHECK(single.size() == 1);
    CHECK(single[0] == doctest::Approx(1.0).epsilon(1e-12));

    // two orthonormal vectors with equal weights
    Vector a = Vector::Zero(4), b = Vector::Zero(4);
    a[0] = 1.0;
    b[1] = 1.0;
    const RealVector pair =
        gram_spectrum({PureState(a, Dims{2, 2}), PureState(b, Dims{2, 2})}, {0.5, 0.5});
    CHECK(pair.size() == 2);
    CHECK(pair[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pair[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("gram spectrum equals the dense construction on random ensembles") {
    for (std::uint64_t seed : {10, 20, 30}) {
        const Dims dims{2, 2, 2, 2};
        std::vector<PureState> vectors;
        std::vector<double> weights;
        Matrix dense = Matrix::Zero(16, 16);
        Xoshiro256 rng(seed);
        for (int s = 0; s < 3; ++s) {
            const Vector v = oracle::random_state_vector(16, seed * 100 + s);
            const double w = rng.next_double() + 0.1;
            vectors.emplace_back(v, dims);
            weights.push_back(w);
            dense += w * v * v.adjoint();
        }
        RealVector got = gram_spectrum(vectors, weights);
        RealVector want_full = hermitian_eigenvalues(dense);
        // compare the nonzero tail
        std::vector<double> want(want_full.data(), want_full.data() + want_full.size());
        std::sort(want.rbegin(), want.rend());
        std::vector<double> got_sorted(got.data(), got.data() + got.size());
        std::sort(got_sorted.rbegin(), got_sorted.rend());
        for (std::size_t i = 0; i < got_sorted.size(); ++i)
            CHECK(std::abs(got_sorted[i] - want[i]) < 1e-10);
    }
}

TEST_CASE("gram spectrum rejects mismatched dims") {
    PureState a(oracle::random_state_vector(4, 1), Dims{2, 2});
    PureState b(oracle::random_state_vector(4, 2), Dims{4});
    CHECK_THROWS_AS(gram_spectrum({a, b}, {0.5, 0.5}), ArgumentError);
}

TEST_CASE("index convention: subsystem 0 is the most significant digit") {
    // |1>|0> on dims {2,2} must sit at flat index 2
    Vector v = Vector::Zero(4);
    v[2] = 1.0;
    const DensityMatrix rho = pure_density(PureState(v, Dims{2, 2}));
    const DensityMatrix first = partial_trace(rho, {0});
    const DensityMatrix second = partial_trace(rho, {1});
    CHECK(first.matrix(1, 1).real() == doctest::Approx(1.0));   // subsystem 0 in |1>
    CHECK(second.matrix(0, 0).real() == doctest::Approx(1.0));  // subsystem 1 in |0>
}
