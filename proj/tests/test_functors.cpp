#include "doctest.h"
#include "parakron/errors.hpp"
#include "parakron/functors.hpp"
#include "support.hpp"

using namespace parakron;
using namespace testing_support;

namespace {

const Field F2 = Field::prime(2);
const Field F3 = Field::prime(3);
const Field F5 = Field::prime(5);

std::vector<std::vector<int>> splittings(int max_rank, int bound)
{
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int)> walk = [&](int top) {
        if (!cur.empty())
            out.push_back(cur);
        if (static_cast<int>(cur.size()) == max_rank)
            return;
        for (int a = -bound; a <= top; ++a) {
            cur.push_back(a);
            walk(a);
            cur.pop_back();
        }
    };
    walk(bound);
    return out;
}

std::vector<std::size_t> add(std::vector<std::size_t> a, const std::vector<std::size_t>& b)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] += b[i];
    return a;
}

} // namespace

TEST_CASE("phi examples")
{
    auto k = phi(SheafP1({0, 0}), FunctorContext::make(F5, 1, 3));
    CHECK(k.d1 == 4);
    CHECK(k.d2 == 8);
    REQUIRE(k.alpha.size() == 3);
    CHECK(k.alpha[0].rows() == 8);
    CHECK(k.alpha[0].cols() == 4);

    auto one = phi(SheafP1({0}), FunctorContext::make(F5, 0, 1));
    CHECK(one.d1 == 1);
    CHECK(one.d2 == 2);

    CHECK_THROWS_AS(phi(SheafP1({0, -3}), FunctorContext::make(F5, 1, 3)), NotRegularError);
    CHECK_THROWS_AS(FunctorContext::make(F5, 2, 2), ValidationError);
}

TEST_CASE("psi examples")
{
    auto m = psi(point_flag(F5), FunctorContext::make(F5, 1, 3));
    CHECK(m.dims() == std::vector<std::size_t>{4, 8, 3, 7, 2, 6});
    CHECK(*m.weights == point_flag(F5).weights);

    auto line = make_parabolic(F5, SheafP1({2}), ParabolicDivisor(BinaryForm::from_ints(F5, {1, 1})), {},
                               weights({"1/3"}));
    CHECK(psi(line, FunctorContext::make(F5, 0, 2)).dims() == std::vector<std::size_t>{3, 5, 2, 4});

    CHECK_THROWS_AS(psi(two_point_flag(F3), FunctorContext::make(F3, 1, 3)), NotRegularError);
}

TEST_CASE("phi_dual examples")
{
    auto ctx = FunctorContext::make(F5, 1, 3);
    CHECK(phi_dual(phi(SheafP1({0, -1}), ctx), ctx) == SheafP1({0, -1}));
    KroneckerModule zero{F5, 0, 0, std::vector<Matrix>(3, Matrix(F5, 0, 0))};
    CHECK_THROWS_AS(phi_dual(zero, ctx), ValidationError);

    std::mt19937 rng(2);
    int rejected = 0;
    for (int it = 0; it < 10; ++it) {
        auto k = random_kronecker(rng, F5, 3, 4, 3);
        try {
            phi_dual(k, ctx);
        } catch (const ValidationError&) {
            ++rejected;
        }
    }
    CHECK(rejected > 0);
}

TEST_CASE("phi then phi_dual recovers every small splitting")
{
    for (const auto& a : splittings(3, 3)) {
        SheafP1 e(a);
        int n = std::max(0, regularity(e));
        auto ctx = FunctorContext::make(F3, n, n + 2);
        auto k = phi(e, ctx);
        CHECK(phi_dual(k, ctx) == e);
        auto u = unit_check(k, ctx);
        CHECK(u.iso);
    }
}

TEST_CASE("unit check")
{
    auto ctx = FunctorContext::make(F5, 1, 3);
    auto k = phi(SheafP1({1, 0}), ctx);
    auto u = unit_check(k, ctx);
    CHECK(u.iso);
    REQUIRE(u.map.has_value());
    CHECK(is_invertible(*u.map));

    KroneckerModule thin = k;
    thin.d2 = 1;
    for (auto& a : thin.alpha)
        a = a.block(0, 0, 1, thin.d1);
    CHECK_FALSE(unit_check(thin, ctx).iso);

    KroneckerModule flat{F5, 2, 2, std::vector<Matrix>(3, Matrix(F5, 2, 2))};
    auto fu = unit_check(flat, ctx);
    CHECK_FALSE(fu.iso);
    CHECK_FALSE(fu.details.empty());
}

TEST_CASE("twist by minus the divisor")
{
    auto ctx = FunctorContext::make(F5, 2, 4);
    FilteredKroneckerModule m = as_filtered(phi(SheafP1({0, 0}), ctx), ctx.h());
    ParabolicDivisor y(BinaryForm::from_ints(F5, {0, 1}));
    ParabolicDivisor y2(BinaryForm::from_ints(F5, {0, 0, 1}));
    auto once = twist_minus_D(m, y, ctx);
    CHECK(find_ladder_isomorphism(as_filtered(once, ctx.h()), as_filtered(phi(SheafP1({-1, -1}), ctx), ctx.h())));
    auto twice = twist_minus_D(as_filtered(once, ctx.h()), y, ctx);
    auto both = twist_minus_D(m, y2, ctx);
    CHECK(twice.d1 == both.d1);
    CHECK(twice.d2 == both.d2);
    CHECK(find_ladder_isomorphism(as_filtered(twice, ctx.h()), as_filtered(both, ctx.h())));
    CHECK_THROWS_AS(ParabolicDivisor(BinaryForm::from_ints(F5, {1})), ValidationError);
}

TEST_CASE("psi_dual examples")
{
    auto ctx = FunctorContext::make(F5, 1, 3);
    CHECK(psi_dual(psi(point_flag(F5), ctx), ctx) == point_flag(F5));
    auto c3 = FunctorContext::make(F3, 2, 4);
    CHECK(psi_dual(psi(two_point_flag(F3), c3), c3) == two_point_flag(F3));

    auto m = psi(point_flag(F5), ctx);
    auto bad = m;
    bad.top[0] = Matrix(F5, bad.top[0].rows(), bad.top[0].cols());
    CHECK_THROWS_AS(psi_dual(bad, ctx), NotInSubcategoryError);

    auto no_weights = m;
    no_weights.weights.reset();
    CHECK_THROWS_AS(psi_dual(no_weights, ctx), PreconditionError);
}

TEST_CASE("psi_dual inverts psi on random structures")
{
    std::mt19937 rng(31);
    for (int it = 0; it < 40; ++it) {
        auto ps = random_parabolic(rng, F3, 2, 2, 2, 2);
        int n = std::max(0, step_regularity(ps));
        auto ctx = FunctorContext::make(F3, n, n + 2);
        auto m = psi(ps, ctx);
        for (const auto& k : m.modules)
            CHECK(unit_check(k, ctx).iso);
        CHECK(psi_dual(m, ctx) == ps);
    }
}

TEST_CASE("type dimensions")
{
    auto ctx = FunctorContext::make(F5, 1, 3);
    auto tp = type_of(point_flag(F5));
    CHECK(tp.P == RatPoly::linear(2, 2));
    auto td = type_to_dims(tp, ctx);
    CHECK(td.dims == std::vector<std::size_t>{4, 8, 3, 7, 2, 6});
    CHECK(td.theta.pair(td.dims) == 0);

    auto line = make_parabolic(F5, SheafP1({2}), ParabolicDivisor(BinaryForm::from_ints(F5, {1, 2, 1})),
                               {span_of(F5, 2, {{1, 1}})}, weights({"1/3", "1/2"}));
    auto ld = type_to_dims(type_of(line), FunctorContext::make(F5, 0, 2));
    CHECK(ld.dims == std::vector<std::size_t>{3, 5, 2, 4, 1, 3});

    auto broken = tp;
    std::swap(broken.Pi[0], broken.Pi[1]);
    CHECK_THROWS_AS(type_to_dims(broken, ctx), ValidationError);

    std::mt19937 rng(7);
    for (int it = 0; it < 30; ++it) {
        auto ps = random_parabolic(rng, F3, 3, 3, 3, 3);
        int n = std::max(0, step_regularity(ps));
        auto c = FunctorContext::make(F3, n, n + 2);
        CHECK(type_to_dims(type_of(ps), c).dims == psi(ps, c).dims());
    }
}

TEST_CASE("psi is exact on sub and quotient structures")
{
    auto ps = point_flag(F5);
    auto ctx = FunctorContext::make(F5, 1, 3);
    for (const auto& col : {column(F5, {{1}, {0}}), column(F5, {{1}, {1}}), column(F5, {{0}, {1}})}) {
        Subbundle sub{SheafP1({0}), col};
        auto s = induced_structure(ps, sub);
        auto q = quotient_structure(ps, sub);
        CHECK(add(psi_expanded(s, ps.weights, ctx).dims(), psi_expanded(q, ps.weights, ctx).dims()) ==
              psi(ps, ctx).dims());
    }
}

TEST_CASE("threshold conditions")
{
    auto w = weights({"1/4", "1/2"});
    auto family = all_structures(F2, SheafP1({0, 0}), ParabolicDivisor(BinaryForm::from_ints(F2, {0, 1})), w);
    CHECK(family.size() == 3);
    auto tp = type_of(family.front());

    auto ctx = threshold_context(family);
    CHECK(ctx.n == 1);
    auto rep = thresholds_check(family, tp, ctx);
    CHECK(rep.ok());
    for (const auto& c : rep.checks)
        CHECK((c.status == "pass" || c.status == "assumed"));

    auto low = thresholds_check(family, tp, FunctorContext::make(F2, 0, 1));
    CHECK_FALSE(low.ok());
    CHECK(low.checks.front().name == "n_regular");
    CHECK(low.checks.front().status == "fail");

    auto empty = thresholds_check({}, tp, ctx);
    CHECK(empty.ok());
    CHECK_FALSE(empty.warnings.empty());
}

TEST_CASE("preservation examples")
{
    auto est = verify_preservation(point_flag(F5), FunctorContext::make(F5, 1, 3));
    CHECK_FALSE(est.sheaf_semistable);
    CHECK_FALSE(est.module_semistable);
    CHECK(est.agree());
    CHECK(est.sheaf_witness_mu == Rational(1, 2));
    CHECK(est.psi_of_witness_mu == Slope::of(Rational(3, 8), 1));
    CHECK(est.module_mu == Slope::of(Rational(11, 32), 1));

    auto ess = verify_preservation(two_point_flag(F3), FunctorContext::make(F3, 2, 7), PreservationOptions{1u << 20});
    CHECK(ess.sheaf_semistable);
    CHECK_FALSE(ess.sheaf_stable);
    CHECK(ess.module_semistable);
    CHECK_FALSE(ess.module_stable);
    CHECK(ess.gr_checked);
    CHECK(ess.gr_match);
    CHECK(ess.module_factors == 2);

    auto line = make_parabolic(F5, SheafP1({2}), ParabolicDivisor(BinaryForm::from_ints(F5, {1, 1})), {},
                               weights({"1/3"}));
    auto lr = verify_preservation(line, threshold_context({line}));
    CHECK(lr.sheaf_stable);
    CHECK(lr.module_stable);
    CHECK(lr.agree());
}
