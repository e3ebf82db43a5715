#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "ttcalc/errors.hpp"
#include "ttcalc/exactlin.hpp"

using namespace ttcalc;

namespace {

const Field Q = Field::rationals();
const Field F5 = Field::prime(5);

SparseMatrix dense(const Field& f, std::vector<std::vector<long long>> rows) {
    std::vector<std::vector<Scalar>> out;
    for (auto& r : rows) {
        out.emplace_back();
        for (auto v : r) out.back().push_back(f.from_int(v));
    }
    return SparseMatrix::from_dense(out);
}

Vector vec(const Field& f, std::vector<long long> values) {
    std::vector<Scalar> s;
    for (auto v : values) s.push_back(f.from_int(v));
    return Vector::from_dense(s);
}

SparseMatrix random_matrix(std::mt19937& rng, const Field& f, std::size_t r, std::size_t c, double density) {
    std::uniform_real_distribution<double> coin(0, 1);
    std::uniform_int_distribution<int> val(1, 4);
    std::vector<Triplet> t;
    for (std::uint32_t i = 0; i < r; ++i)
        for (std::uint32_t j = 0; j < c; ++j)
            if (coin(rng) < density) t.push_back({i, j, f.from_int(val(rng))});
    return SparseMatrix::from_triplets(r, c, std::move(t));
}

}  // namespace

TEST_CASE("scalars are canonical and fields never mix", "[exactlin]") {
    CHECK(Q.parse("4/6") == Q.parse("2/3"));
    CHECK(Q.parse("-2/-4").to_string() == "1/2");
    CHECK(F5.parse("-1").to_string() == "4");
    CHECK(F5.parse("1/2").to_string() == "3");
    CHECK_THROWS_AS(Q.parse("1/0"), ParseError);
    CHECK_THROWS_AS(Q.parse("x"), ParseError);
    CHECK_THROWS_AS(F5.parse("1/5"), ParseError);
    CHECK_THROWS_AS(Field::prime(6), DomainError);
    CHECK_THROWS_AS(Q.one() + F5.one(), std::logic_error);
    CHECK_THROWS_AS(Field::prime(7).one() * F5.one(), std::logic_error);
}

TEST_CASE("rref examples", "[exactlin]") {
    auto empty = rref(SparseMatrix(0, 0));
    CHECK(empty.reduced.rows() == 0);
    CHECK(empty.pivot_columns.empty());

    auto id = rref(SparseMatrix::identity(2, Q));
    CHECK(id.reduced == SparseMatrix::identity(2, Q));
    CHECK(id.pivot_columns == std::vector<std::size_t>{0, 1});

    auto r = rref(dense(Q, {{2, 4}, {1, 2}}));
    CHECK(r.reduced == dense(Q, {{1, 2}, {0, 0}}));
    CHECK(r.pivot_columns == std::vector<std::size_t>{0});
}

TEST_CASE("kernel_basis examples", "[exactlin]") {
    CHECK(kernel_basis(SparseMatrix::identity(3, Q), Q).empty());

    auto k = kernel_basis(SparseMatrix::zero(2, 3), Q);
    REQUIRE(k.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(k[i] == Vector::unit(3, i, Q));

    auto k5 = kernel_basis(dense(F5, {{1, 1}}), F5);
    REQUIRE(k5.size() == 1);
    CHECK(k5[0] == vec(F5, {4, 1}));
}

TEST_CASE("solve examples", "[exactlin]") {
    auto b = vec(Q, {3, -7, 2});
    CHECK(solve(SparseMatrix::identity(3, Q), b) == b);
    CHECK(solve(dense(Q, {{1, 1}}), vec(Q, {2})) == vec(Q, {2, 0}));
    CHECK_FALSE(solve(dense(Q, {{0}}), vec(Q, {1})).has_value());
}

TEST_CASE("subquotient examples", "[exactlin]") {
    auto e1 = Vector::unit(2, 0, Q), e2 = Vector::unit(2, 1, Q);
    auto h = subquotient({e1, e2}, {e1}, 2, Q);
    CHECK(h.dim() == 1);
    CHECK(h.representatives()[0] == e2);
    CHECK(h.project(e2) == Vector::unit(1, 0, Q));
    CHECK(h.project(e1).is_zero());

    CHECK(subquotient({}, {}, 2, Q).dim() == 0);

    auto h3 = subquotient({e1, e1 + e2}, {Q.from_int(2) * e2}, 2, Q);
    CHECK(h3.dim() == 1);

    CHECK_THROWS_AS(subquotient({e1}, {e2}, 2, Q), InvariantError);
}

TEST_CASE("inverse", "[exactlin]") {
    auto m = dense(Q, {{2, 1}, {1, 1}});
    auto inv = inverse(m);
    REQUIRE(inv);
    CHECK(*inv * m == SparseMatrix::identity(2, Q));
    CHECK_FALSE(inverse(dense(Q, {{1, 2}, {2, 4}})).has_value());
}

TEST_CASE("rank-nullity, idempotence and solve over random F_5 matrices", "[exactlin][property]") {
    std::mt19937 rng(20261015);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t r = 1 + rng() % 9, c = 1 + rng() % 9;
        auto m = random_matrix(rng, F5, r, c, 0.4);
        auto red = rref(m);
        auto ker = kernel_basis(red, c, F5);
        CHECK(red.rank() + ker.size() == c);
        for (const auto& v : ker) CHECK(m.apply(v).is_zero());
        CHECK(rref(red.reduced).reduced == red.reduced);
        for (std::size_t k = 1; k < red.pivot_columns.size(); ++k)
            CHECK(red.pivot_columns[k - 1] < red.pivot_columns[k]);

        auto x = random_matrix(rng, F5, c, 1, 0.6).column(0);
        auto rhs = m.apply(x);
        auto sol = solve(m, rhs);
        REQUIRE(sol);
        CHECK(m.apply(*sol) == rhs);
    }
}

TEST_CASE("dense and sparse elimination give the same rref", "[exactlin][property]") {
    std::mt19937 rng(7);
    for (const Field& f : {Q, F5}) {
        for (int trial = 0; trial < 30; ++trial) {
            std::size_t r = 2 + rng() % 30, c = 2 + rng() % 30;
            auto m = random_matrix(rng, f, r, c, 0.15);
            auto a = detail::rref_dense(m, f);
            auto b = detail::rref_sparse(m);
            CHECK(a.pivot_columns == b.pivot_columns);
            CHECK(a.reduced == b.reduced);
        }
    }
    // Large enough to take the sparse path through rref() itself.
    auto big = random_matrix(rng, Q, 80, 90, 0.03);
    CHECK(rref(big).reduced == detail::rref_dense(big, Q).reduced);
}

TEST_CASE("subquotient projection kills exactly the boundaries", "[exactlin][property]") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        // A random complex C2 -> C1 -> C0 via d1 * d2 = 0: take d2 from ker d1.
        std::size_t n1 = 3 + rng() % 6;
        auto d1 = random_matrix(rng, F5, 1 + rng() % 4, n1, 0.5);
        auto ker = kernel_basis(d1, F5);
        std::vector<Vector> cols;
        for (std::size_t k = 0; k < ker.size(); ++k)
            if (rng() % 2) cols.push_back(ker[k] + (k + 1 < ker.size() ? ker[k + 1] : Vector(n1)));
        auto d2 = SparseMatrix::from_columns(n1, cols);
        auto h = homology_at(d2, d1, F5, 1);
        CHECK(h.dim() == ker.size() - rank(d2));
        for (const auto& b : d2.columns()) CHECK(h.project(b).is_zero());
        for (std::size_t k = 0; k < h.dim(); ++k)
            CHECK(h.project(h.representatives()[k]) == Vector::unit(h.dim(), k, F5));
    }
}
