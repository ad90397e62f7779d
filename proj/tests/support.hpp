#pragma once

#include "parakron/ladder.hpp"
#include "parakron/parabolic.hpp"
#include "parakron/subsheaf.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>

namespace testing_support {

using namespace parakron;

inline Subspace span_of(Field f, std::size_t n, const std::vector<std::vector<long long>>& rows)
{
    if (rows.empty())
        return Subspace(f, n);
    return Subspace::span(Matrix::from_ints(f, rows));
}

inline ParabolicWeights weights(std::vector<std::string> a)
{
    std::vector<Rational> q;
    for (const auto& s : a)
        q.push_back(parse_rational(s));
    return ParabolicWeights(q);
}

// {0,0}, divisor y, W_2 spanned by e_1, weights (1/4, 1/2)
inline ParabolicSheafP1 point_flag(Field f)
{
    return make_parabolic(f, SheafP1({0, 0}), ParabolicDivisor(BinaryForm::from_ints(f, {0, 1})),
                          {span_of(f, 2, {{1, 0}})}, weights({"1/4", "1/2"}));
}

// {0,0}, divisor y(x - y), W_2 spanned by e_1 at [1:0] and e_2 at [1:1]
inline ParabolicSheafP1 two_point_flag(Field f)
{
    return make_parabolic(f, SheafP1({0, 0}), ParabolicDivisor(BinaryForm::from_ints(f, {0, 1, -1})),
                          {span_of(f, 4, {{1, -1, 0, 0}, {0, 0, 0, 1}})}, weights({"1/4", "1/2"}));
}

inline FormMatrix column(Field f, const std::vector<std::vector<long long>>& entries)
{
    FormMatrix m;
    for (const auto& c : entries)
        m.push_back({c.empty() ? BinaryForm() : BinaryForm::from_ints(f, c)});
    return m;
}

inline Rational random_weight(std::mt19937& rng)
{
    long long den = 2 + rng() % 11;
    long long num = 1 + rng() % (den - 1);
    return Rational(num) / den;
}

inline BinaryForm random_divisor(std::mt19937& rng, Field f, int delta)
{
    std::vector<Scalar> c;
    for (int i = 0; i < delta; ++i)
        c.push_back(Scalar(f, static_cast<long long>(rng() % f.p)));
    c.push_back(Scalar(f, static_cast<long long>(1 + rng() % (f.p - 1))));
    return BinaryForm(f, c);
}

// Random strict chain of submodules of the jet space, with up to max_ell weights.
inline ParabolicSheafP1 random_parabolic(std::mt19937& rng, Field f, int max_rank = 3, int max_a = 4,
                                         int max_delta = 3, int max_ell = 3)
{
    int r = 1 + rng() % max_rank;
    std::vector<int> a;
    for (int i = 0; i < r; ++i)
        a.push_back(static_cast<int>(rng() % (2 * max_a + 1)) - max_a);
    int delta = 1 + rng() % max_delta;
    ParabolicDivisor d(random_divisor(rng, f, delta));
    JetSpace js(d, r);
    std::size_t n = js.dim();
    std::vector<Subspace> chain{Subspace(f, n)};
    while (chain.back().dim() < n) {
        Matrix v(f, 1, n);
        for (std::size_t j = 0; j < n; ++j)
            v.set(0, j, static_cast<long long>(rng() % f.p));
        Subspace next = js.module_span(Matrix::vstack(chain.back().basis(), v));
        if (next.dim() > chain.back().dim())
            chain.push_back(next);
    }
    // chain: 0 = U_0 < ... < U_m = V; keep V, 0 and a few interior members
    std::vector<Subspace> interior(chain.rbegin() + 1, chain.rend() - 1);
    std::shuffle(interior.begin(), interior.end(), rng);
    int ell = 1 + rng() % max_ell;
    if (static_cast<int>(interior.size()) > ell - 1)
        interior.resize(ell - 1);
    std::sort(interior.begin(), interior.end(),
              [](const Subspace& x, const Subspace& y) { return x.dim() > y.dim(); });
    ell = static_cast<int>(interior.size()) + 1;
    std::set<Rational> ws;
    while (static_cast<int>(ws.size()) < ell)
        ws.insert(random_weight(rng));
    return make_parabolic(f, SheafP1(a), d, interior, ParabolicWeights({ws.begin(), ws.end()}));
}

inline Matrix random_matrix(std::mt19937& rng, Field f, std::size_t r, std::size_t c)
{
    Matrix m(f, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            m.set(i, j, static_cast<long long>(rng() % f.p));
    return m;
}

inline KroneckerModule random_kronecker(std::mt19937& rng, Field f, std::size_t h, std::size_t d1, std::size_t d2)
{
    KroneckerModule k{f, d1, d2, {}};
    for (std::size_t t = 0; t < h; ++t)
        k.alpha.push_back(random_matrix(rng, f, d2, d1));
    return k;
}

// Random subspace of s spanned by up to `count` random combinations of its basis.
inline Subspace random_subspace_of(std::mt19937& rng, const Subspace& s, std::size_t count)
{
    if (s.dim() == 0 || count == 0)
        return Subspace(s.field(), s.ambient());
    return Subspace::span(random_matrix(rng, s.field(), count, s.dim()) * s.basis());
}

// Module of a chain of nested pairs (T_j, B_j) inside a single Kronecker module,
// with rho(T_j tensor H) inside B_j, written in the echelon bases.
inline FilteredKroneckerModule chain_module(const KroneckerModule& k, const std::vector<Subspace>& tops,
                                            const std::vector<Subspace>& bottoms,
                                            std::optional<ParabolicWeights> w = {})
{
    FilteredKroneckerModule m;
    m.field = k.field;
    m.ell = static_cast<int>(tops.size()) - 1;
    m.h = k.alpha.size();
    m.weights = w;
    for (std::size_t j = 0; j < tops.size(); ++j) {
        KroneckerModule level{k.field, tops[j].dim(), bottoms[j].dim(), {}};
        for (const auto& a : k.alpha) {
            if (tops[j].dim() == 0 || bottoms[j].dim() == 0) {
                level.alpha.push_back(Matrix(k.field, bottoms[j].dim(), tops[j].dim()));
                continue;
            }
            level.alpha.push_back(bottoms[j].coordinates(tops[j].basis() * a.transpose()).transpose());
        }
        m.modules.push_back(level);
        if (j == 0)
            continue;
        auto incl = [&](const Subspace& big, const Subspace& small) {
            if (small.dim() == 0 || big.dim() == 0)
                return Matrix(k.field, big.dim(), small.dim());
            return big.coordinates(small.basis()).transpose();
        };
        m.top.push_back(incl(tops[j - 1], tops[j]));
        m.bottom.push_back(incl(bottoms[j - 1], bottoms[j]));
    }
    return m;
}

inline Subspace rho_of(const KroneckerModule& k, const Subspace& u)
{
    Subspace out(k.field, k.d2);
    if (u.dim() == 0)
        return out;
    for (const auto& a : k.alpha)
        out = sum(out, Subspace::span(u.basis() * a.transpose()));
    return out;
}

// Random valid filtered module with levels = ell + 1 and weights 1/(ell+2), 2/(ell+2), ...
inline FilteredKroneckerModule random_filtered(std::mt19937& rng, Field f, std::size_t h, int ell, std::size_t max_d1,
                                               std::size_t max_d2)
{
    std::size_t d1 = rng() % (max_d1 + 1), d2 = rng() % (max_d2 + 1);
    KroneckerModule k = random_kronecker(rng, f, h, d1, d2);
    std::vector<Subspace> tops{Subspace::full(f, d1)}, bottoms{Subspace::full(f, d2)};
    for (int j = 1; j <= ell; ++j) {
        Subspace t = random_subspace_of(rng, tops.back(), rng() % (tops.back().dim() + 1));
        Subspace b = sum(rho_of(k, t), random_subspace_of(rng, bottoms.back(), rng() % 2));
        tops.push_back(t);
        bottoms.push_back(b);
    }
    std::vector<Rational> a;
    for (int i = 1; i <= ell; ++i)
        a.push_back(Rational(i, ell + 2));
    return chain_module(k, tops, bottoms, ParabolicWeights(a));
}

} // namespace testing_support
