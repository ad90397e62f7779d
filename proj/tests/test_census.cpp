#include "doctest.h"
#include "parakron/census.hpp"
#include "parakron/errors.hpp"
#include "parakron/io.hpp"
#include "support.hpp"

using namespace parakron;
using namespace testing_support;

namespace {

const Field F2 = Field::prime(2);
const Field F3 = Field::prime(3);
const Field F5 = Field::prime(5);
const std::uint64_t big = 1u << 20;

} // namespace

TEST_CASE("json round trips")
{
    auto ps = point_flag(F5);
    CHECK(parabolic_from_json(to_json(ps)) == ps);
    auto tp = two_point_flag(F3);
    CHECK(parabolic_from_json(Json::parse(to_json(tp).dump())) == tp);

    Json interior = to_json(ps);
    interior["flag"] = Json::array({interior["flag"][1]});
    CHECK(parabolic_from_json(interior) == ps);

    auto m = psi(ps, FunctorContext::make(F5, 1, 3));
    CHECK(filtered_from_json(to_json(m)) == m);

    std::mt19937 rng(5);
    for (int it = 0; it < 30; ++it) {
        auto r = random_parabolic(rng, F3, 3, 3, 3, 3);
        CHECK(parabolic_from_json(Json::parse(to_json(r).dump())) == r);
        auto fm = random_filtered(rng, F2, 2, 2, 3, 3);
        CHECK(filtered_from_json(Json::parse(to_json(fm).dump())) == fm);
    }

    KroneckerModule k{F5, 2, 1, {Matrix::from_ints(F5, {{1, 2}})}};
    Json bare = to_json(k);
    bare["field"] = "F5";
    auto wrapped = filtered_from_json(bare);
    CHECK(wrapped.modules[0].d1 == 2);
    CHECK(wrapped.h == 1);
}

TEST_CASE("json rejects malformed input")
{
    Json j = to_json(point_flag(F5));
    j.erase("divisor");
    CHECK_THROWS_AS(parabolic_from_json(j), ValidationError);

    Json bad_flag = to_json(point_flag(F5));
    bad_flag["flag"] = Json::array({bad_flag["flag"][1], bad_flag["flag"][1], bad_flag["flag"][1]});
    CHECK_THROWS_AS(parabolic_from_json(bad_flag), ValidationError);

    Json m = to_json(psi(point_flag(F5), FunctorContext::make(F5, 1, 3)));
    m["top_inclusions"][0].erase(0);
    CHECK_THROWS_AS(filtered_from_json(m), DimensionError);

    CHECK(scalar_text(Scalar(F5, 7LL)) == "2");
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(std::string(schema_text()).find("Filtered Kronecker module") != std::string::npos);
}

TEST_CASE("census examples")
{
    auto w = weights({"1/2"});
    auto r = census(F2, {2, 1, 1, 1}, w, CensusOptions{2, big});
    CHECK(r.enumerated == slice_size(F2, {2, 1, 1, 1}, 2));
    CHECK(r.enumerated == 16);
    CHECK(r.semistable == 6);
    CHECK(r.classes.size() == 3);
    CHECK(r.class_of.size() == r.semistable);

    auto zero = census(F2, {2, 0, 1, 0}, w, CensusOptions{2, big});
    CHECK(zero.semistable == 0);
    CHECK(zero.classes.empty());

    CHECK_THROWS_AS(census(F2, {2, 1, 1, 1, 1, 1}, weights({"1/4", "1/2"}), CensusOptions{2, 10}), BudgetError);
    CHECK_THROWS_AS(census(F2, {1, 1, 2, 1}, w, CensusOptions{2, big}), DimensionError);
    CHECK_THROWS_AS(census(F2, {2, 1, 1, 1}, weights({"1/4", "1/2"}), CensusOptions{2, big}), DimensionError);
}

TEST_CASE("census classes partition by S-equivalence")
{
    for (const auto& dims : {std::vector<std::size_t>{2, 1, 1, 1}, std::vector<std::size_t>{1, 2, 1, 1}}) {
        auto r = census(F2, dims, weights({"1/2"}), CensusOptions{2, big});
        std::size_t total = 0;
        for (const auto& c : r.classes)
            total += c.size;
        CHECK(total == r.semistable);
        for (std::size_t i = 0; i < r.classes.size(); ++i) {
            CHECK(s_equivalent(r.classes[i].representative, r.classes[i].representative, big));
            for (std::size_t j = i + 1; j < r.classes.size(); ++j) {
                CHECK(r.classes[i].fingerprint != r.classes[j].fingerprint);
                CHECK_FALSE(s_equivalent(r.classes[i].representative, r.classes[j].representative, big));
            }
        }
    }
}

TEST_CASE("census determinism")
{
    auto w = weights({"1/2"});
    std::vector<std::size_t> dims{2, 1, 1, 1};
    auto a = census(F2, dims, w, CensusOptions{2, big, std::nullopt, 3});
    auto b = census(F2, dims, w, CensusOptions{2, big, std::nullopt, 8});
    CHECK(a.class_of == b.class_of);

    auto s1 = census(F2, dims, w, CensusOptions{2, big, 8, 11});
    auto s2 = census(F2, dims, w, CensusOptions{2, big, 8, 11});
    CHECK(s1.sampled);
    CHECK(s1.enumerated == 8);
    CHECK(s1.class_of == s2.class_of);
    CHECK(to_json(s1.classes.front().representative).dump() == to_json(s2.classes.front().representative).dump());
    CHECK(s1.classes.size() <= a.classes.size());
}

TEST_CASE("census of Psi images matches the sheaf side")
{
    auto w = weights({"1/4", "1/2"});
    auto family = all_structures(F2, SheafP1({0, 0}), ParabolicDivisor(BinaryForm::from_ints(F2, {0, 1})), w, big);
    REQUIRE(family.size() == 3);
    auto ctx = threshold_context(family, 40, big);
    std::vector<FilteredKroneckerModule> mods;
    std::vector<ParabolicSheafP1> semistable;
    for (const auto& ps : family) {
        mods.push_back(psi(ps, ctx));
        if (par_semistable_oracle(ps, big).semistable)
            semistable.push_back(ps);
    }
    auto c = census_of(mods, big);
    auto sc = sheaf_classes(semistable, big);
    std::size_t count = sc.empty() ? 0 : *std::max_element(sc.begin(), sc.end()) + 1;
    CHECK(c.semistable == semistable.size());
    CHECK(c.classes.size() == count);
}
