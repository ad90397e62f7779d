#include "parakron/census.hpp"
#include "parakron/errors.hpp"
#include "parakron/io.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace parakron {

namespace {

struct Slice
{
    Field field;
    std::vector<std::size_t> dims;
    std::size_t h = 0;
    int levels = 0;
    std::vector<std::pair<std::size_t, std::size_t>> free; // (row, col) of alpha left unconstrained

    std::size_t top(int j) const { return dims[2 * j]; }
    std::size_t bottom(int j) const { return dims[2 * j + 1]; }
};

Slice make_slice(Field f, const std::vector<std::size_t>& dims, std::size_t h)
{
    if (!f.finite())
        throw PreconditionError("census needs a finite field");
    if (dims.size() < 4 || dims.size() % 2)
        throw DimensionError("dimension vector needs d11, d12, d21, d22, ... with at least two levels");
    if (h == 0)
        throw DimensionError("multiplicity space must be nonzero");
    Slice s{f, dims, h, static_cast<int>(dims.size() / 2), {}};
    for (int j = 1; j < s.levels; ++j)
        if (s.top(j) > s.top(j - 1) || s.bottom(j) > s.bottom(j - 1))
            throw DimensionError("dimensions must not increase along the chain");
    for (std::size_t r = 0; r < s.bottom(0); ++r)
        for (std::size_t c = 0; c < s.top(0); ++c) {
            bool forced = false;
            for (int j = 1; j < s.levels; ++j)
                forced = forced || (c < s.top(j) && r >= s.bottom(j));
            if (!forced)
                s.free.emplace_back(r, c);
        }
    return s;
}

Matrix standard_inclusion(Field f, std::size_t big, std::size_t small)
{
    Matrix m(f, big, small);
    for (std::size_t i = 0; i < small; ++i)
        m.set(i, i, 1LL);
    return m;
}

FilteredKroneckerModule build(const Slice& s, const ParabolicWeights& w, const std::vector<std::uint32_t>& vals)
{
    std::vector<Matrix> alpha(s.h, Matrix(s.field, s.bottom(0), s.top(0)));
    std::size_t k = 0;
    for (std::size_t t = 0; t < s.h; ++t)
        for (const auto& [r, c] : s.free)
            alpha[t].set(r, c, static_cast<long long>(vals[k++]));
    FilteredKroneckerModule m;
    m.field = s.field;
    m.ell = s.levels - 1;
    m.h = s.h;
    m.weights = w;
    for (int j = 0; j < s.levels; ++j) {
        KroneckerModule level{s.field, s.top(j), s.bottom(j), {}};
        for (const auto& a : alpha)
            level.alpha.push_back(a.block(0, 0, s.bottom(j), s.top(j)));
        m.modules.push_back(level);
        if (j > 0) {
            m.top.push_back(standard_inclusion(s.field, s.top(j - 1), s.top(j)));
            m.bottom.push_back(standard_inclusion(s.field, s.bottom(j - 1), s.bottom(j)));
        }
    }
    return m;
}

std::string fingerprint_of(const std::vector<FilteredKroneckerModule>& factors)
{
    std::vector<std::string> parts;
    for (const auto& f : factors)
        parts.push_back(to_json(f).dump());
    std::sort(parts.begin(), parts.end());
    std::string all;
    for (const auto& p : parts)
        all += p;
    return fnv1a_hex(all);
}

class Partition
{
  public:
    explicit Partition(std::uint64_t budget) : budget_(budget) {}

    std::size_t add(const FilteredKroneckerModule& m, CensusResult& out)
    {
        JordanHolder jh = jordan_holder(m, budget_);
        for (std::size_t i = 0; i < out.classes.size(); ++i) {
            CensusClass& c = out.classes[i];
            if (c.representative.dims() != m.dims() || c.representative.weights != m.weights)
                continue;
            if (match_factors(c.factors, jh.factors)) {
                ++c.size;
                return i;
            }
        }
        out.classes.push_back(CensusClass{m, jh.factors, 1, fingerprint_of(jh.factors)});
        return out.classes.size() - 1;
    }

  private:
    std::uint64_t budget_;
};

} // namespace

std::uint64_t slice_size(Field f, const std::vector<std::size_t>& dims, std::size_t h)
{
    Slice s = make_slice(f, dims, h);
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < s.free.size() * h; ++i)
        total = saturating_mul(total, f.p);
    return total;
}

CensusResult census(Field f, const std::vector<std::size_t>& dims, const ParabolicWeights& w, const CensusOptions& opt)
{
    Slice s = make_slice(f, dims, opt.h);
    if (w.ell() != s.levels - 1)
        throw DimensionError("weights must have one value per level but the last");
    CensusResult out{f, dims, w, opt.h, opt.samples.has_value(), opt.seed, 0, 0, {}, {}};
    std::size_t unknowns = s.free.size() * opt.h;
    std::uint64_t total = slice_size(f, dims, opt.h);
    Partition part(opt.budget);
    StabilityOptions so{StabilityMode::tight, opt.budget, true};
    auto visit = [&](const std::vector<std::uint32_t>& vals) {
        FilteredKroneckerModule m = build(s, w, vals);
        ++out.enumerated;
        if (!is_theta_semistable(m, so).semistable)
            return;
        ++out.semistable;
        out.class_of.push_back(part.add(m, out));
    };
    if (!opt.samples) {
        if (total > opt.budget)
            throw BudgetError("census slice has " + std::to_string(total) + " modules, budget " +
                              std::to_string(opt.budget));
        std::vector<std::uint32_t> vals(unknowns, 0);
        for (;;) {
            visit(vals);
            std::size_t i = unknowns;
            while (i > 0 && ++vals[i - 1] == f.p)
                vals[--i] = 0;
            if (i == 0)
                break;
        }
        return out;
    }
    if (*opt.samples > opt.budget)
        throw BudgetError("sample count exceeds the budget");
    // Distinct draws; the sampled set is then visited in slice order.
    std::mt19937_64 rng(opt.seed);
    std::set<std::vector<std::uint32_t>> drawn;
    std::uint64_t want = std::min<std::uint64_t>(*opt.samples, total);
    while (drawn.size() < want) {
        std::vector<std::uint32_t> vals(unknowns);
        for (auto& v : vals)
            v = static_cast<std::uint32_t>(rng() % f.p);
        drawn.insert(vals);
    }
    for (const auto& vals : drawn)
        visit(vals);
    return out;
}

CensusResult census_of(const std::vector<FilteredKroneckerModule>& modules, std::uint64_t budget)
{
    CensusResult out;
    if (!modules.empty()) {
        out.field = modules.front().field;
        out.dims = modules.front().dims();
        if (modules.front().weights)
            out.weights = *modules.front().weights;
        out.h = modules.front().h;
    }
    Partition part(budget);
    StabilityOptions so{StabilityMode::tight, budget, true};
    for (const auto& m : modules) {
        ++out.enumerated;
        if (!is_theta_semistable(m, so).semistable)
            continue;
        ++out.semistable;
        out.class_of.push_back(part.add(m, out));
    }
    return out;
}

std::vector<std::size_t> sheaf_classes(const std::vector<ParabolicSheafP1>& semistable, std::uint64_t budget)
{
    std::vector<std::vector<ParabolicSheafP1>> reps;
    std::vector<std::size_t> out;
    auto same = [&](const std::vector<ParabolicSheafP1>& a, const std::vector<ParabolicSheafP1>& b) {
        if (a.size() != b.size())
            return false;
        std::vector<bool> used(b.size(), false);
        for (const auto& x : a) {
            bool found = false;
            for (std::size_t i = 0; i < b.size() && !found; ++i)
                if (!used[i] && x.rank() == b[i].rank() && isomorphic(x, b[i], budget))
                    used[i] = found = true;
            if (!found)
                return false;
        }
        return true;
    };
    for (const auto& ps : semistable) {
        std::vector<ParabolicSheafP1> gr = par_gr(ps, false, budget);
        std::size_t k = 0;
        while (k < reps.size() && !same(reps[k], gr))
            ++k;
        if (k == reps.size())
            reps.push_back(gr);
        out.push_back(k);
    }
    return out;
}

} // namespace parakron
