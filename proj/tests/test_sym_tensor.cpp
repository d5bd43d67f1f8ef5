#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>

#include "mlcalc/dense_tensor.hpp"
#include "mlcalc/json_io.hpp"
#include "mlcalc/rng.hpp"
#include "mlcalc/sym_tensor.hpp"

using namespace mlcalc;

namespace {

SymTensor random_tensor(int d, int n, std::uint64_t seed, std::uint64_t stream,
                        bool complex_parts = true) {
    SymTensor t(d, n);
    std::uint64_t draw = 0;
    for (const auto& mi : all_multisets(d, n)) {
        double re = 2.0 * rng::uniform(seed, stream, draw++) - 1.0;
        double im = complex_parts ? 2.0 * rng::uniform(seed, stream, draw++) - 1.0 : 0.0;
        t.set(mi, Cplx(re, im));
    }
    return t;
}

std::vector<Cplx> random_vec(int d, std::uint64_t seed, std::uint64_t stream) {
    std::vector<Cplx> v(d);
    for (int k = 0; k < d; ++k)
        v[k] = Cplx(2.0 * rng::uniform(seed, stream, k) - 1.0, 0.0);
    return v;
}

} // namespace

TEST_CASE("symmetrize on e0 (x) e1") {
    SymTensor t = symmetrize(2, 2, {{{0, 1}, Cplx(1.0, 0.0)}});
    CHECK(t.at({0, 1}) == Cplx(0.5, 0.0));
    CHECK(t.at({0, 0}) == Cplx(0.0, 0.0));
    // pairing against a dense probe recovers the symmetrized average
    DenseTensor d = DenseTensor::from_sym(t);
    CHECK(d[{0, 1}] == Cplx(0.5, 0.0));
    CHECK(d[{1, 0}] == Cplx(0.5, 0.0));
}

TEST_CASE("symmetrize is idempotent") {
    for (int t = 0; t < 10; ++t) {
        SymTensor a = random_tensor(3, 3, 11, t);
        DenseTensor dense = DenseTensor::from_sym(a);
        SymTensor again = dense.symmetrized().to_sym();
        CHECK(approx_equal(a, again, 1e-14));
    }
}

TEST_CASE("symmetrize matches the dense permutation average") {
    for (int t = 0; t < 8; ++t) {
        // raw non-symmetric degree-3 tensor
        DenseTensor raw(2, 3);
        std::vector<std::pair<std::vector<int>, Cplx>> entries;
        std::uint64_t draw = 0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) {
                    double re = 2.0 * rng::uniform(13, t, draw++) - 1.0;
                    double im = 2.0 * rng::uniform(13, t, draw++) - 1.0;
                    Cplx v(re, im);
                    raw[{i, j, k}] = v;
                    entries.push_back({{i, j, k}, v});
                }
        SymTensor fast = symmetrize(2, 3, entries);
        SymTensor slow = raw.symmetrized().to_sym();
        CHECK(approx_equal(fast, slow, 1e-14));
    }
}

TEST_CASE("sym_product unit and square") {
    SymTensor one = SymTensor::scalar(3, 1.0);
    SymTensor b = random_tensor(3, 2, 17, 0);
    CHECK(approx_equal(sym_product(one, b), b, 0.0));

    auto xi = random_vec(3, 17, 1);
    SymTensor v = SymTensor::vector(xi);
    SymTensor sq = sym_product(v, v);
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j)
            CHECK(std::abs(sq.at({i, j}) - xi[i] * xi[j]) < 1e-15);
}

TEST_CASE("sym_product commutes and matches the dense oracle") {
    for (int t = 0; t < 6; ++t) {
        SymTensor a = random_tensor(2, 2, 19, 2 * t);
        SymTensor b = random_tensor(2, 3, 19, 2 * t + 1);
        SymTensor ab = sym_product(a, b);
        SymTensor ba = sym_product(b, a);
        CHECK(approx_equal(ab, ba, 1e-14));
        DenseTensor oracle =
            DenseTensor::from_sym(a).product(DenseTensor::from_sym(b)).symmetrized();
        CHECK(approx_equal(ab, oracle.to_sym(), 1e-13));
    }
}

TEST_CASE("contract: full pairings and trace behaviour") {
    auto xi = random_vec(3, 23, 0);
    auto eta = random_vec(3, 23, 1);
    SymTensor x2 = SymTensor::vector_power(xi, 2);
    SymTensor e2 = SymTensor::vector_power(eta, 2);
    Cplx dot = 0.0;
    for (int k = 0; k < 3; ++k) dot += xi[k] * eta[k];
    CHECK(std::abs(contract(x2, e2).scalar_value() - dot * dot) < 1e-14);

    SymTensor tr = trace_tensor(3);
    for (int k = 0; k < 3; ++k) {
        std::vector<Cplx> ek(3, 0.0);
        ek[k] = 1.0;
        SymTensor out = contract(tr, SymTensor::vector(ek));
        CHECK(approx_equal(out, SymTensor::vector(ek), 0.0));
    }
}

TEST_CASE("contract matches the dense loop oracle on (4,2)") {
    for (int t = 0; t < 5; ++t) {
        SymTensor a = random_tensor(2, 4, 29, t);
        SymTensor b = random_tensor(2, 2, 31, t);
        SymTensor got = contract(a, b);
        DenseTensor oracle =
            DenseTensor::from_sym(a).contract_with(DenseTensor::from_sym(b));
        CHECK(approx_equal(got, oracle.to_sym(), 1e-13));
    }
}

TEST_CASE("contract associativity across sym_product") {
    for (int t = 0; t < 6; ++t) {
        SymTensor a = random_tensor(2, 5, 37, t);
        SymTensor b = random_tensor(2, 2, 38, t);
        SymTensor c = random_tensor(2, 1, 39, t);
        SymTensor lhs = contract(a, sym_product(b, c));
        SymTensor rhs = contract(contract(a, c), b);
        CHECK(approx_equal(lhs, rhs, 1e-12));
    }
}

TEST_CASE("trace tensor") {
    SymTensor t2 = trace_tensor(2);
    CHECK(t2.at({0, 0}) == Cplx(1.0, 0.0));
    CHECK(t2.at({1, 1}) == Cplx(1.0, 0.0));
    CHECK(t2.at({0, 1}) == Cplx(0.0, 0.0));
    SymTensor t1 = trace_tensor(1);
    CHECK(t1.at({0, 0}) == Cplx(1.0, 0.0));
    for (int t = 0; t < 5; ++t) {
        auto xi = random_vec(2, 41, t);
        Cplx want = xi[0] * xi[0] + xi[1] * xi[1];
        CHECK(std::abs(pairing(trace_tensor(2), SymTensor::vector_power(xi, 2)) - want) <
              1e-15);
    }
}

TEST_CASE("bilinear pairing equals the dense Frobenius loop") {
    for (int t = 0; t < 6; ++t) {
        SymTensor a = random_tensor(3, 3, 43, 2 * t);
        SymTensor b = random_tensor(3, 3, 43, 2 * t + 1);
        Cplx got = pairing(a, b);
        Cplx want = DenseTensor::from_sym(a).pair(DenseTensor::from_sym(b));
        CHECK(std::abs(got - want) < 1e-13);
    }
}

TEST_CASE("weighted norms and duality") {
    std::vector<Cplx> e0(3, 0.0), e2(3, 0.0);
    e0[0] = 1.0;
    e2[2] = 1.0;
    CHECK(weighted_norm(SymTensor::vector(e0), WeightProfile{5}) == doctest::Approx(1.0));
    CHECK(weighted_norm(SymTensor::vector(e2), WeightProfile{1}) == doctest::Approx(3.0));

    for (int deg = 1; deg <= 4; ++deg) {
        for (int t = 0; t < 100; ++t) {
            SymTensor a = random_tensor(2, deg, 47, 100 * deg + t);
            SymTensor b = random_tensor(2, deg, 53, 100 * deg + t);
            double lhs = std::abs(pairing(a, b));
            double rhs = weighted_norm(a, WeightProfile{-1}) *
                         weighted_norm(b, WeightProfile{1});
            CHECK(lhs <= rhs * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("json round trip is bit exact") {
    for (int t = 0; t < 10; ++t) {
        SymTensor a = random_tensor(3, 1 + t % 4, 59, t);
        Json j = sym_tensor_to_json(a);
        SymTensor back = sym_tensor_from_json(Json::parse(j.dump()));
        REQUIRE(back.coeffs().size() == a.coeffs().size());
        for (const auto& [k, v] : a.coeffs()) {
            Cplx w = back.at(k);
            double vr = v.real(), vi = v.imag(), wr = w.real(), wi = w.imag();
            CHECK(std::memcmp(&vr, &wr, sizeof(double)) == 0);
            CHECK(std::memcmp(&vi, &wi, sizeof(double)) == 0);
        }
    }
}

TEST_CASE("error paths") {
    SymTensor a(2, 2), b(3, 2), c(2, 3);
    CHECK_THROWS_AS(sym_product(a, b), DimMismatch);
    CHECK_THROWS_AS((void)contract(a, c), DegreeMismatch);
    CHECK_THROWS_AS(SymTensor::from_raw_entries(2, 2, {{{0, 1, 1}, Cplx(1.0)}}),
                    DegreeMismatch);
}
