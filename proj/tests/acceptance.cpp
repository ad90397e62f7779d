#include "parakron/census.hpp"
#include "parakron/errors.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

using namespace parakron;
using namespace testing_support;

namespace {

const Field F2 = Field::prime(2);
const Field F3 = Field::prime(3);
const Field F5 = Field::prime(5);
const std::uint64_t big = 1u << 22;

struct Outcome
{
    bool pass = true;
    std::string detail;
};

class Clock
{
  public:
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double s)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f s", s);
    return buf;
}

RatPoly chi_from_sections(const ParabolicSheafP1& ps, int i)
{
    int k = regularity(ps.sheaf) + ps.delta() + 1;
    long long a = sections_of_step(ps, i, k).dim();
    long long b = sections_of_step(ps, i, k + 1).dim();
    return RatPoly::linear(b - a, Rational(a) - Rational(b - a) * k);
}

RatPoly integral_form(const ParabolicSheafP1& ps)
{
    RatPoly s;
    for (int i = 1; i <= ps.ell() + 1; ++i)
        s += chi_from_sections(ps, i) * ps.weights.eps(i);
    return s;
}

Outcome hilbert_identity()
{
    Clock clock;
    std::mt19937 rng(2024);
    const Field fields[] = {F2, F3, F5, Field::prime(7)};
    int bad = 0, n = 0;
    for (; n < 240; ++n) {
        auto ps = random_parabolic(rng, fields[n % 4], 3, 4, 3, 3);
        auto ph = par_hilbert(ps);
        bool ok = ph.value == integral_form(ps);
        for (const auto& v : ph.variants)
            ok = ok && v == ph.value;
        bad += !ok;
    }
    double t = clock.seconds();
    return {bad == 0 && t <= 5, std::to_string(n - bad) + "/" + std::to_string(n) + " agree in " + fmt(t)};
}

Outcome worked_example()
{
    auto ps = point_flag(F5);
    auto ctx = FunctorContext::make(F5, 1, 3);
    std::vector<std::string> failed;
    auto need = [&](bool ok, const char* what) {
        if (!ok)
            failed.push_back(what);
    };

    auto ph = par_hilbert(ps);
    RatPoly expected = RatPoly::linear(2, Rational(3, 4));
    need(ph.variants.front() == expected && integral_form(ps) == expected, "pH");

    auto pd = par_degree_slope(ps);
    need(pd.par_deg == Rational(3, 4) && ph.value.coeff(0) == Rational(3, 4), "par_deg");
    auto oracle = par_semistable_oracle(ps, big);
    need(pd.par_mu == Rational(3, 8) && oracle.par_mu == Rational(3, 8) && ph.value.coeff(0) / ps.rank() == pd.par_mu,
         "par_mu");

    auto m = psi(ps, ctx);
    auto td = type_to_dims(type_of(ps), ctx);
    std::vector<std::size_t> dims{4, 8, 3, 7, 2, 6};
    need(m.dims() == dims && td.dims == dims, "dimension vector");

    Slope target = Slope::of(Rational(11, 32), 1);
    need(mu(m) == target && mu(ps.weights.eps_all(), td.dims) == target, "mu");

    // sheaf enumeration: Psi of the maximal destabilizing subsheaf
    bool sheaf_side = false;
    if (oracle.witness) {
        auto sub = psi_expanded(oracle.witness->induced, ps.weights, ctx);
        sheaf_side = theta(m.weights->eps_all(), m.dims(), sub.dims()) == 1;
    }
    // module enumeration over every subrepresentation
    auto ex = is_theta_semistable(m, StabilityOptions{StabilityMode::exhaustive, big, false});
    bool module_side = ex.witness && theta(m, *ex.witness) == 1 && td.theta.pair(ex.witness->dims()) == 1;
    need(sheaf_side && module_side, "theta");

    std::string detail = "pH 2k + 3/4, par_deg 3/4, par_mu 3/8, dims (4,3,2;8,7,6), mu 11/32, theta +1";
    if (!failed.empty()) {
        detail = "mismatch:";
        for (const auto& f : failed)
            detail += " " + f;
    }
    return {failed.empty(), detail};
}

struct Group
{
    std::string label;
    std::vector<ParabolicSheafP1> members;
    FunctorContext ctx;
};

// All flags of length two on {0,0} and {1,0} over one divisor of each shape, grouped by type.
std::vector<Group> corpus()
{
    auto w = weights({"1/4", "1/2"});
    std::vector<Group> out;
    for (int p : {2, 3}) {
        Field f = Field::prime(p);
        std::vector<std::vector<long long>> divisors = {
            {0, 1}, {0, 1, -1}, {0, 0, 1}, p == 2 ? std::vector<long long>{1, 1, 1} : std::vector<long long>{1, 0, 1}};
        for (const auto& sp : {std::vector<int>{0, 0}, std::vector<int>{1, 0}})
            for (std::size_t di = 0; di < divisors.size(); ++di) {
                ParabolicDivisor d(BinaryForm::from_ints(f, divisors[di]));
                std::map<std::string, std::vector<ParabolicSheafP1>> by_type;
                for (auto& ps : all_structures(f, SheafP1(sp), d, w, big)) {
                    std::string key;
                    for (const auto& q : type_of(ps).Pi)
                        key += q.str() + ";";
                    by_type[key].push_back(ps);
                }
                for (auto& [key, members] : by_type) {
                    std::ostringstream label;
                    label << f.name() << " " << SheafP1(sp).str() << " divisor " << di << " type " << key;
                    auto ctx = threshold_context(members, 40, big);
                    out.push_back(Group{label.str(), std::move(members), ctx});
                }
            }
    }
    return out;
}

Outcome preservation(const std::vector<Group>& groups)
{
    Clock clock;
    std::size_t total = 0, agree = 0, semistable = 0;
    std::string first_bad;
    for (const auto& g : groups)
        for (const auto& ps : g.members) {
            auto r = verify_preservation(ps, g.ctx, PreservationOptions{big, false, false});
            ++total;
            semistable += r.sheaf_semistable;
            if (r.semistable_agree())
                ++agree;
            else if (first_bad.empty())
                first_bad = g.label;
        }
    double t = clock.seconds();
    std::string detail = std::to_string(agree) + "/" + std::to_string(total) + " agree (" +
                         std::to_string(semistable) + " semistable) in " + fmt(t);
    if (!first_bad.empty())
        detail += ", first disagreement in " + first_bad;
    return {agree == total && t <= 600, detail};
}

Slope max_slope(const FilteredKroneckerModule& m, bool tight_only)
{
    Slope best = Slope::of(0, 0);
    for (const auto& s : enumerate_subreps(m, big)) {
        if (s.is_zero() || (tight_only && !is_tight(m, s)))
            continue;
        best = std::max(best, mu(m, s));
    }
    return best;
}

std::vector<FilteredKroneckerModule> small_modules(std::uint32_t seed, std::size_t count)
{
    std::mt19937 rng(seed);
    std::vector<FilteredKroneckerModule> out;
    while (out.size() < count) {
        auto m = random_filtered(rng, F2, 1 + rng() % 3, 1 + rng() % 2, 3, 3);
        if (m.total_dim() <= 6)
            out.push_back(m);
    }
    return out;
}

Outcome tight_sufficiency()
{
    auto mods = small_modules(9, 400);
    std::size_t ok = 0;
    for (const auto& m : mods)
        ok += max_slope(m, false) == max_slope(m, true);
    return {ok == mods.size(), std::to_string(ok) + "/" + std::to_string(mods.size()) + " modules match"};
}

int sign_of(const Rational& q)
{
    return q > 0 ? 1 : (q < 0 ? -1 : 0);
}

Outcome theta_bridge()
{
    auto mods = small_modules(10, 300);
    std::size_t subs = 0, bad = 0;
    const Rational scales[] = {Rational(1, 3), Rational(2), Rational(7), Rational(101, 10)};
    for (const auto& m : mods) {
        auto eps = m.weights->eps_all();
        auto d = m.dims();
        Slope total = mu(m);
        for (const auto& s : enumerate_subreps(m, big)) {
            auto sd = s.dims();
            if (sd[1] == 0 || total.infinite)
                continue;
            ++subs;
            Rational th = theta(eps, d, sd);
            bool ok = th == Rational(d[1]) * sd[1] * (mu(m, s).value - total.value);
            for (const auto& c : scales) {
                std::vector<Rational> e2;
                for (const auto& e : eps)
                    e2.push_back(e * c);
                ok = ok && sign_of(theta(e2, d, sd)) == sign_of(th);
            }
            bad += !ok;
        }
    }
    return {bad == 0 && subs > 0, std::to_string(subs - bad) + "/" + std::to_string(subs) + " subrepresentations"};
}

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

Outcome round_trips()
{
    std::size_t split_ok = 0, split_n = 0, par_ok = 0, par_n = 0;
    for (const auto& a : splittings(3, 3)) {
        SheafP1 e(a);
        int n = std::max(0, regularity(e));
        auto ctx = FunctorContext::make(F3, n, n + 2);
        auto k = phi(e, ctx);
        ++split_n;
        split_ok += phi_dual(k, ctx) == e && unit_check(k, ctx).iso;
    }
    std::mt19937 rng(31);
    const Field fields[] = {F2, F3, F5};
    for (int it = 0; it < 120; ++it) {
        auto ps = random_parabolic(rng, fields[it % 3], 2, 2, 2, 2);
        int n = std::max(0, step_regularity(ps));
        auto ctx = FunctorContext::make(ps.field, n, n + 2);
        auto m = psi(ps, ctx);
        bool ok = true;
        for (const auto& k : m.modules)
            ok = ok && unit_check(k, ctx).iso;
        ++par_n;
        par_ok += ok && psi_dual(m, ctx) == ps;
    }
    return {split_ok == split_n && par_ok == par_n && par_n >= 100,
            "splittings " + std::to_string(split_ok) + "/" + std::to_string(split_n) + ", parabolic " +
                std::to_string(par_ok) + "/" + std::to_string(par_n)};
}

Outcome gr_compatibility(const std::vector<Group>& groups)
{
    Clock clock;
    std::size_t checked = 0, matched = 0;
    auto run = [&](const ParabolicSheafP1& ps, const FunctorContext& ctx) {
        auto r = verify_preservation(ps, ctx, PreservationOptions{big, true, true});
        if (!r.gr_checked)
            return;
        ++checked;
        matched += r.gr_match && r.agree();
    };
    run(two_point_flag(F3), FunctorContext::make(F3, 2, 7));
    for (const auto& g : groups)
        for (const auto& ps : g.members) {
            auto o = par_semistable_oracle(ps, big);
            if (o.semistable && !o.stable)
                run(ps, g.ctx);
        }
    return {checked > 1 && matched == checked,
            std::to_string(matched) + "/" + std::to_string(checked) + " strictly semistable instances in " +
                fmt(clock.seconds())};
}

std::vector<std::string> fingerprints(const CensusResult& r)
{
    std::vector<std::string> out;
    for (const auto& c : r.classes)
        out.push_back(c.fingerprint + ":" + std::to_string(c.size));
    return out;
}

Outcome census_coherence(const std::vector<Group>& groups)
{
    Clock clock;
    std::size_t compared = 0, equal = 0;
    for (const auto& g : groups) {
        if (g.members.front().sheaf.splitting() != std::vector<int>{0, 0})
            continue;
        std::vector<FilteredKroneckerModule> mods;
        std::vector<ParabolicSheafP1> semistable;
        for (const auto& ps : g.members) {
            mods.push_back(psi(ps, g.ctx));
            if (par_semistable_oracle(ps, big).semistable)
                semistable.push_back(ps);
        }
        auto c = census_of(mods, big);
        auto sc = sheaf_classes(semistable, big);
        std::size_t sheaf_count = sc.empty() ? 0 : *std::max_element(sc.begin(), sc.end()) + 1;
        ++compared;
        equal += sheaf_count == c.classes.size() && c.semistable == semistable.size();
    }

    bool deterministic = true;
    for (const auto& dims : {std::vector<std::size_t>{2, 1, 1, 1}, std::vector<std::size_t>{1, 2, 1, 1}}) {
        auto w = weights({"1/2"});
        auto a = census(F2, dims, w, CensusOptions{2, big, std::nullopt, 1});
        auto b = census(F2, dims, w, CensusOptions{2, big, std::nullopt, 99});
        deterministic = deterministic && fingerprints(a) == fingerprints(b) && a.class_of == b.class_of &&
                        a.semistable == b.semistable;
    }
    return {equal == compared && compared > 0 && deterministic,
            std::to_string(equal) + "/" + std::to_string(compared) + " groups agree, exhaustive census " +
                (deterministic ? "deterministic" : "NOT deterministic") + " across seeds, " + fmt(clock.seconds())};
}

} // namespace

int main()
{
    int failures = 0;
    auto report = [&](int n, const char* name, const std::function<Outcome()>& run) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("criterion %d %s: %s [exact] %s\n", n, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
    };
    report(1, "parabolic Hilbert identity", hilbert_identity);
    report(2, "worked example", worked_example);
    std::vector<Group> groups;
    report(3, "preservation on the flag corpus", [&] {
        groups = corpus();
        return preservation(groups);
    });
    report(4, "tight subobjects suffice", tight_sufficiency);
    report(5, "theta and slope bridge", theta_bridge);
    report(6, "adjunction round trips", round_trips);
    report(7, "graded objects", [&] { return gr_compatibility(groups); });
    report(8, "census coherence", [&] { return census_coherence(groups); });
    return failures == 0 ? 0 : 1;
}
