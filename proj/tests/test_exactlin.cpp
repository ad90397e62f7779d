#include "doctest.h"
#include "parakron/errors.hpp"
#include "parakron/matrix.hpp"

#include <random>
#include <set>

using namespace parakron;

namespace {

Matrix random_matrix(Field f, std::size_t r, std::size_t c, std::mt19937& rng, int range = 5)
{
    Matrix m(f, r, c);
    std::uniform_int_distribution<int> d(-range, range);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            m.set(i, j, static_cast<long long>(d(rng)));
    return m;
}

// All vectors of GF(2)^n as bitmasks spanned by the given rows.
std::set<unsigned> span_bits(const Matrix& rows)
{
    std::set<unsigned> out;
    std::size_t k = rows.rows();
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
        unsigned v = 0;
        for (std::size_t i = 0; i < k; ++i)
            if (mask & (1u << i))
                for (std::size_t j = 0; j < rows.cols(); ++j)
                    if (rows.at(i, j).residue())
                        v ^= 1u << j;
        out.insert(v);
    }
    return out;
}

std::size_t log2_size(std::size_t n)
{
    std::size_t d = 0;
    while ((std::size_t(1) << d) < n)
        ++d;
    return d;
}

std::uint64_t gaussian_product(std::size_t n, std::size_t k, std::uint64_t q)
{
    std::uint64_t num = 1, den = 1;
    for (std::size_t i = 0; i < k; ++i) {
        std::uint64_t a = 1, b = 1;
        for (std::size_t t = 0; t < n - i; ++t)
            a *= q;
        for (std::size_t t = 0; t < i + 1; ++t)
            b *= q;
        num *= a - 1;
        den *= b - 1;
    }
    return num / den;
}

} // namespace

TEST_CASE("scalars parse and print in canonical form")
{
    Field q = Field::rationals(), f5 = Field::prime(5);
    CHECK(Scalar::parse("6/8", q).str() == "3/4");
    CHECK(Scalar::parse("-2/-4", q).str() == "1/2");
    CHECK(Scalar::parse("2 mod 5", f5).str() == "2 mod 5");
    CHECK(Scalar::parse("7", f5).str() == "2 mod 5");
    CHECK(Scalar::parse("1/2", f5).str() == "3 mod 5");
    CHECK((Scalar(f5, 3LL) * Scalar(f5, 2LL)).is_one());
    CHECK((Scalar(f5, 3LL) / Scalar(f5, 3LL)).is_one());
    CHECK_THROWS_AS(Scalar::parse("2 mod 7", f5), ValidationError);
    CHECK_THROWS_AS(Field::prime(6), ValidationError);
    CHECK(parse_rational("0.3") == Rational(3, 10));
}

TEST_CASE("rref examples")
{
    Field f2 = Field::prime(2), q = Field::rationals();
    auto r = rref(Matrix::from_ints(f2, {{1, 1}, {1, 1}}));
    CHECK(r.rank == 1);
    CHECK(r.echelon == Matrix::from_ints(f2, {{1, 1}}));

    auto id = rref(Matrix::identity(q, 3));
    CHECK(id.rank == 3);
    CHECK(id.echelon == Matrix::identity(q, 3));

    auto p = rref(Matrix::from_ints(q, {{2, 4}, {1, 2}}));
    CHECK(p.rank == 1);
    CHECK(p.echelon == Matrix::from_ints(q, {{1, 2}}));
}

TEST_CASE("rref is idempotent and rank matches kernel dimension")
{
    std::mt19937 rng(11);
    for (Field f : {Field::prime(2), Field::prime(3), Field::prime(7), Field::rationals()}) {
        for (int trial = 0; trial < 40; ++trial) {
            std::size_t r = 1 + rng() % 5, c = 1 + rng() % 6;
            Matrix m = random_matrix(f, r, c, rng);
            auto e = rref(m);
            auto e2 = rref(e.echelon);
            CHECK(e2.echelon == e.echelon);
            Subspace k = kernel(m);
            CHECK(k.dim() == c - e.rank);
            if (k.dim() > 0)
                CHECK((m * k.basis().transpose()).is_zero());
            CHECK(rref(k.basis()).echelon == k.basis());
        }
    }
}

TEST_CASE("kernel examples")
{
    Field f2 = Field::prime(2), q = Field::rationals();
    CHECK(kernel(Matrix(q, 2, 2)).dim() == 2);
    CHECK(kernel(Matrix::identity(q, 3)).dim() == 0);
    Subspace k = kernel(Matrix::from_ints(f2, {{1, 1}}));
    CHECK(k.dim() == 1);
    CHECK(k.basis() == Matrix::from_ints(f2, {{1, 1}}));
}

TEST_CASE("subspace_ops examples")
{
    Field q = Field::rationals(), f2 = Field::prime(2);
    Subspace e1 = Subspace::span(Matrix::from_ints(q, {{1, 0}}));
    Subspace e2 = Subspace::span(Matrix::from_ints(q, {{0, 1}}));
    auto ops = subspace_ops(e1, e2);
    CHECK(ops.intersection.dim() == 0);
    CHECK(ops.sum.dim() == 2);
    CHECK_FALSE(ops.containment);

    auto same = subspace_ops(e1, e1);
    CHECK(same.intersection == e1);
    CHECK(same.sum == e1);
    CHECK(same.containment);
    CHECK(same.quotient_dim == 0);

    Subspace a = Subspace::span(Matrix::from_ints(f2, {{1, 1}}));
    Subspace b = Subspace::span(Matrix::from_ints(f2, {{1, 0}}));
    auto r = subspace_ops(a, b);
    std::set<unsigned> sa = span_bits(a.basis()), sb = span_bits(b.basis()), inter;
    for (unsigned v : sa)
        if (sb.count(v))
            inter.insert(v);
    CHECK(inter.size() == 1);
    CHECK(r.intersection.dim() == 0);
    CHECK(r.sum.dim() == 2);

    CHECK_THROWS_AS(subspace_ops(e1, Subspace::full(q, 3)), DimensionError);
}

TEST_CASE("subspace_ops agree with brute-force vector sets over GF(2)")
{
    Field f2 = Field::prime(2);
    std::mt19937 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 1 + rng() % 5;
        Subspace a = Subspace::span(random_matrix(f2, rng() % 4, n, rng, 1));
        Subspace b = Subspace::span(random_matrix(f2, rng() % 4, n, rng, 1));
        Subspace c = Subspace::span(random_matrix(f2, rng() % 4, n, rng, 1));
        auto sa = span_bits(a.basis()), sb = span_bits(b.basis());
        std::set<unsigned> inter, sumset;
        for (unsigned v : sa)
            if (sb.count(v))
                inter.insert(v);
        for (unsigned v : sa)
            for (unsigned w : sb)
                sumset.insert(v ^ w);
        auto r = subspace_ops(a, b);
        CHECK(r.intersection.dim() == log2_size(inter.size()));
        CHECK(r.sum.dim() == log2_size(sumset.size()));
        CHECK(span_bits(r.intersection.basis()) == inter);
        CHECK(r.sum.dim() + r.intersection.dim() == a.dim() + b.dim());
        CHECK(r.containment == (inter == sa));
        // modular law: if a ⊆ c then a + (b ∩ c) = (a + b) ∩ c
        Subspace ac = sum(a, c);
        CHECK(sum(a, intersection(b, ac)) == intersection(sum(a, b), ac));
    }
}

TEST_CASE("enumerate_subspaces examples and counts")
{
    Field f2 = Field::prime(2), f3 = Field::prime(3);
    CHECK(enumerate_subspaces(f2, 2).size() == 5);
    auto one = enumerate_subspaces(f3, 1);
    CHECK(one.size() == 2);
    CHECK(one[0].dim() == 0);
    CHECK(one[1].dim() == 1);
    CHECK(enumerate_subspaces(f2, 3, 1).size() == 7);

    for (std::uint32_t p : {2u, 3u}) {
        Field f = Field::prime(p);
        for (std::size_t n = 0; n <= 4; ++n) {
            auto all = enumerate_subspaces(f, n, std::nullopt, 1000000);
            std::uint64_t expect = 0;
            for (std::size_t k = 0; k <= n; ++k)
                expect += gaussian_product(n, k, p);
            CHECK(all.size() == expect);
            std::set<std::vector<std::uint32_t>> seen;
            std::size_t prev_dim = 0;
            for (const auto& s : all) {
                CHECK(s.dim() >= prev_dim);
                prev_dim = s.dim();
                CHECK(rref(s.basis()).echelon == s.basis());
                std::vector<std::uint32_t> key;
                key.push_back(static_cast<std::uint32_t>(s.dim()));
                for (std::size_t i = 0; i < s.dim(); ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        key.push_back(s.basis().at(i, j).residue());
                seen.insert(key);
            }
            CHECK(seen.size() == all.size());
        }
    }
}

TEST_CASE("enumeration over GF(2) matches spans of all vector subsets")
{
    Field f2 = Field::prime(2);
    for (std::size_t n = 1; n <= 3; ++n) {
        std::set<std::set<unsigned>> spans;
        unsigned nvec = 1u << n;
        for (unsigned subset = 0; subset < (1u << nvec); ++subset) {
            std::set<unsigned> s{0};
            for (unsigned v = 0; v < nvec; ++v)
                if (subset & (1u << v)) {
                    std::set<unsigned> t = s;
                    for (unsigned w : s)
                        t.insert(w ^ v);
                    s = t;
                }
            spans.insert(s);
        }
        auto all = enumerate_subspaces(f2, n);
        std::set<std::set<unsigned>> got;
        for (const auto& s : all)
            got.insert(span_bits(s.basis()));
        CHECK(got == spans);
    }
}

TEST_CASE("enumeration budget")
{
    Field f2 = Field::prime(2), f3 = Field::prime(3);
    CHECK_NOTHROW(SubspaceEnumerator(f2, 6));
    CHECK_NOTHROW(SubspaceEnumerator(f3, 5));
    CHECK_THROWS_AS(SubspaceEnumerator(f2, 7), BudgetError);
    CHECK_THROWS_AS(SubspaceEnumerator(f3, 6), BudgetError);
    try {
        SubspaceEnumerator(f2, 7);
    } catch (const BudgetError& e) {
        CHECK(std::string(e.what()).find("29212") != std::string::npos);
    }
}

TEST_CASE("image, preimage and lifting")
{
    Field f3 = Field::prime(3);
    Matrix a = Matrix::from_ints(f3, {{1, 0, 0}, {0, 1, 0}});
    Subspace s = Subspace::span(Matrix::from_ints(f3, {{1, 1, 1}}));
    CHECK(image(a, s) == Subspace::span(Matrix::from_ints(f3, {{1, 1}})));
    Subspace line = Subspace::span(Matrix::from_ints(f3, {{1, 0}}));
    Subspace pre = preimage(a, line);
    CHECK(pre.dim() == 2);
    CHECK(pre.contains(Matrix::from_ints(f3, {{1, 0, 2}})));

    Subspace base = Subspace::span(Matrix::from_ints(f3, {{1, 2, 0}}));
    std::set<std::vector<std::uint32_t>> lifted;
    for (const auto& q : enumerate_subspaces(f3, 2)) {
        Subspace l = lift_from_quotient(base, q);
        CHECK(l.contains(base));
        CHECK(l.dim() == base.dim() + q.dim());
        std::vector<std::uint32_t> key;
        for (std::size_t i = 0; i < l.dim(); ++i)
            for (std::size_t j = 0; j < 3; ++j)
                key.push_back(l.basis().at(i, j).residue());
        key.push_back(static_cast<std::uint32_t>(l.dim()));
        lifted.insert(key);
    }
    CHECK(lifted.size() == 6);
}
