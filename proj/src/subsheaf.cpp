#include "parakron/subsheaf.hpp"
#include "parakron/errors.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>

namespace parakron {

FormMatrix zero_form_matrix(Field f, const std::vector<int>& src, const std::vector<int>& tgt)
{
    FormMatrix m(tgt.size(), std::vector<BinaryForm>(src.size()));
    for (std::size_t i = 0; i < tgt.size(); ++i)
        for (std::size_t j = 0; j < src.size(); ++j)
            if (tgt[i] >= src[j])
                m[i][j] = BinaryForm(f, tgt[i] - src[j]);
    return m;
}

static bool live(const BinaryForm& g)
{
    return g.degree() >= 0 && !g.is_zero();
}

FormMatrix compose(const FormMatrix& a, const FormMatrix& b)
{
    std::size_t n = a.size(), mid = b.size(), m = mid ? b[0].size() : 0;
    FormMatrix out(n, std::vector<BinaryForm>(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t t = 0; t < mid; ++t) {
                if (!live(a[i][t]) || !live(b[t][j]))
                    continue;
                BinaryForm p = a[i][t] * b[t][j];
                out[i][j] = out[i][j].degree() < 0 ? p : out[i][j] + p;
            }
    return out;
}

void check_form_matrix(const FormMatrix& m, const std::vector<int>& src, const std::vector<int>& tgt)
{
    if (m.size() != tgt.size())
        throw DimensionError("map has " + std::to_string(m.size()) + " rows, expected " + std::to_string(tgt.size()));
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i].size() != src.size())
            throw DimensionError("map row " + std::to_string(i) + " has " + std::to_string(m[i].size()) +
                                 " entries, expected " + std::to_string(src.size()));
        for (std::size_t j = 0; j < src.size(); ++j) {
            int d = tgt[i] - src[j];
            const BinaryForm& g = m[i][j];
            if (d < 0 ? live(g) : (g.degree() >= 0 && g.degree() != d))
                throw DimensionError("map entry (" + std::to_string(i) + "," + std::to_string(j) +
                                     ") should have degree " + std::to_string(d));
        }
    }
}

std::vector<int> twist_offsets(const std::vector<int>& twists, int k)
{
    std::vector<int> off{0};
    for (int t : twists)
        off.push_back(off.back() + forms_dim(t + k));
    return off;
}

Matrix sections_map(Field f, const std::vector<int>& src, const std::vector<int>& tgt, const FormMatrix& m, int k)
{
    auto so = twist_offsets(src, k), to = twist_offsets(tgt, k);
    Matrix out(f, to.back(), so.back());
    for (std::size_t i = 0; i < tgt.size(); ++i)
        for (std::size_t j = 0; j < src.size(); ++j) {
            if (src[j] + k < 0 || !live(m[i][j]))
                continue;
            out.set_block(to[i], so[j], form_multiplication(m[i][j], src[j] + k));
        }
    return out;
}

std::vector<BinaryForm> section_to_forms(Field f, const std::vector<int>& twists, int k, const Matrix& row)
{
    auto off = twist_offsets(twists, k);
    std::vector<BinaryForm> out(twists.size());
    for (std::size_t i = 0; i < twists.size(); ++i) {
        int d = twists[i] + k;
        if (d < 0)
            continue;
        std::vector<Scalar> c;
        for (int t = 0; t <= d; ++t)
            c.push_back(row.at(0, off[i] + t));
        out[i] = BinaryForm(f, c);
    }
    return out;
}

static Matrix diag_multiplication(Field f, const std::vector<int>& twists, int k, const BinaryForm& g)
{
    FormMatrix m = zero_form_matrix(f, twists, twists);
    for (std::size_t i = 0; i < twists.size(); ++i)
        m[i][i] = g;
    std::vector<int> shifted = twists;
    for (int& t : shifted)
        t += g.degree();
    auto so = twist_offsets(twists, k), to = twist_offsets(shifted, k);
    Matrix out(f, to.back(), so.back());
    for (std::size_t i = 0; i < twists.size(); ++i)
        if (twists[i] + k >= 0)
            out.set_block(to[i], so[i], form_multiplication(g, twists[i] + k));
    return out;
}

std::vector<Generator> free_basis(Field f, const std::vector<int>& twists,
                                  const std::function<Subspace(int)>& sections, int rank, int k_lo, int k_hi)
{
    std::vector<Generator> gens;
    if (rank == 0)
        return gens;
    for (int k = k_lo; k <= k_hi; ++k) {
        Subspace s = sections(k);
        if (s.dim() == 0)
            continue;
        Matrix prior(f, 0, s.ambient());
        for (const auto& g : gens)
            for (const auto& mono : monomial_basis(f, k - g.k))
                prior.append_rows((diag_multiplication(f, twists, g.k, mono) * g.section.transpose()).transpose());
        Subspace p = Subspace::span(prior);
        if (!s.contains(p))
            throw InvariantFailure("generated sections leave the subsheaf");
        for (std::size_t t = 0; t < s.dim(); ++t) {
            Matrix b = s.basis().row(t);
            if (p.contains(b))
                continue;
            gens.push_back({k, b});
            p = sum(p, Subspace::span(b));
            if (static_cast<int>(gens.size()) == rank)
                return gens;
        }
    }
    throw InvariantFailure("found " + std::to_string(gens.size()) + " generators of a free module of rank " +
                           std::to_string(rank));
}

static std::vector<std::size_t> first_subset(std::size_t k)
{
    std::vector<std::size_t> s(k);
    for (std::size_t i = 0; i < k; ++i)
        s[i] = i;
    return s;
}

static bool next_subset(std::vector<std::size_t>& s, std::size_t n)
{
    std::size_t k = s.size();
    for (std::size_t i = k; i-- > 0;)
        if (s[i] < n - k + i) {
            ++s[i];
            for (std::size_t j = i + 1; j < k; ++j)
                s[j] = s[j - 1] + 1;
            return true;
        }
    return false;
}

void validate_subbundle(Field f, const SheafP1& e, const Subbundle& sub)
{
    std::size_t r = e.rank(), s = sub.source.rank();
    if (s > r)
        throw DimensionError("subsheaf rank " + std::to_string(s) + " exceeds rank " + std::to_string(r));
    check_form_matrix(sub.map, sub.source.splitting(), e.splitting());
    for (const auto& row : sub.map)
        for (const auto& g : row)
            if (g.degree() >= 0 && g.field() != f)
                throw ValidationError("map entry over the wrong field");
    std::vector<BinaryForm> minors;
    auto rows = first_subset(s);
    do {
        FormMatrix m;
        for (std::size_t i : rows)
            m.push_back(sub.map[i]);
        BinaryForm d = form_determinant(m);
        if (live(d))
            minors.push_back(d);
    } while (next_subset(rows, r));
    if (minors.empty())
        throw SaturationError("map of sheaves is not injective");
    if (have_common_zero(minors))
        throw SaturationError("subsheaf is not saturated: the quotient has torsion");
}

Subbundle identity_subbundle(Field f, const SheafP1& e)
{
    Subbundle s{e, zero_form_matrix(f, e.splitting(), e.splitting())};
    for (int i = 0; i < e.rank(); ++i)
        s.map[i][i] = BinaryForm::monomial(f, 0, 0);
    return s;
}

static std::vector<int> negated(const std::vector<int>& v)
{
    std::vector<int> out;
    for (int t : v)
        out.push_back(-t);
    return out;
}

static FormMatrix transposed(const FormMatrix& m)
{
    std::size_t n = m.size(), c = n ? m[0].size() : 0;
    FormMatrix t(c, std::vector<BinaryForm>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < c; ++j)
            t[j][i] = m[i][j];
    return t;
}

QuotientBundle quotient_bundle(Field f, const SheafP1& e, const Subbundle& sub)
{
    validate_subbundle(f, e, sub);
    int r = e.rank(), s = sub.source.rank(), q = r - s;
    if (q == 0)
        throw ValidationError("quotient by the whole sheaf is zero");
    std::vector<int> ed = negated(e.splitting()), fd = negated(sub.source.splitting());
    FormMatrix gt = transposed(sub.map);
    auto sections = [&](int c) { return kernel(sections_map(f, ed, fd, gt, c)); };
    int deg_q = e.degree() - sub.source.degree();
    int lo = e.min_twist(), hi = deg_q - (q - 1) * e.min_twist();
    auto gens = free_basis(f, ed, sections, q, lo, hi);
    std::reverse(gens.begin(), gens.end());
    QuotientBundle out;
    std::vector<int> c;
    for (const auto& g : gens) {
        c.push_back(g.k);
        out.map.push_back(section_to_forms(f, ed, g.k, g.section));
    }
    out.target = SheafP1(c);
    if (out.target.degree() != deg_q)
        throw InvariantFailure("quotient splitting has the wrong degree");
    return out;
}

Subbundle kernel_subbundle(Field f, const SheafP1& e, const std::vector<BinaryForm>& phi, int c)
{
    int r = e.rank(), s = r - 1;
    if (static_cast<int>(phi.size()) != r)
        throw DimensionError("surjection needs one form per summand");
    FormMatrix row{phi};
    check_form_matrix(row, e.splitting(), {c});
    std::vector<BinaryForm> nz;
    for (const auto& g : phi)
        if (live(g))
            nz.push_back(g);
    if (nz.empty() || have_common_zero(nz))
        throw SaturationError("map to O(" + std::to_string(c) + ") is not surjective");
    if (s == 0)
        throw ValidationError("kernel of a surjection from a line bundle is zero");
    auto sections = [&](int k) { return kernel(sections_map(f, e.splitting(), {c}, row, k)); };
    int deg_f = e.degree() - c;
    int lo = -e.max_twist(), hi = -(deg_f - (s - 1) * e.max_twist());
    auto gens = free_basis(f, e.splitting(), sections, s, lo, hi);
    Subbundle out;
    std::vector<int> b;
    out.map.assign(r, {});
    for (const auto& g : gens) {
        b.push_back(-g.k);
        auto col = section_to_forms(f, e.splitting(), g.k, g.section);
        for (int i = 0; i < r; ++i)
            out.map[i].push_back(col[i]);
    }
    out.source = SheafP1(b);
    if (out.source.degree() != deg_f)
        throw InvariantFailure("kernel splitting has the wrong degree");
    return out;
}

ParabolicSheafP1 collapse_levels(Field f, const SheafP1& e, const ParabolicDivisor& d,
                                 const std::vector<Subspace>& levels, const ParabolicWeights& w)
{
    std::size_t n = levels.size();
    if (n != static_cast<std::size_t>(w.ell()) + 1)
        throw InvariantFailure("level count does not match the weights");
    ParabolicSheafP1 ps{f, e, d, {}, {}};
    std::vector<Rational> alphas;
    for (std::size_t i = 0; i < n; ++i) {
        bool last_of_run = i + 1 == n || levels[i + 1] != levels[i];
        if (!last_of_run)
            continue;
        ps.flag.push_back(levels[i]);
        if (i + 1 < n)
            alphas.push_back(w.alpha(static_cast<int>(i) + 1));
    }
    if (alphas.empty())
        throw InvariantFailure("induced structure has no steps");
    ps.weights = ParabolicWeights(alphas);
    ps.validate();
    return ps;
}

ParabolicSheafP1 induced_structure(const ParabolicSheafP1& ps, const Subbundle& sub)
{
    validate_subbundle(ps.field, ps.sheaf, sub);
    Matrix j = ps.jets().jet_of_map(sub.map);
    if (!full_column_rank(j))
        throw InvariantFailure("saturated subsheaf has a degenerate fibre on the divisor");
    std::vector<Subspace> levels;
    for (const auto& w : ps.flag)
        levels.push_back(preimage(j, w));
    return collapse_levels(ps.field, sub.source, ps.divisor, levels, ps.weights);
}

ParabolicSheafP1 quotient_structure(const ParabolicSheafP1& ps, const Subbundle& sub, QuotientBundle* q_out)
{
    QuotientBundle qb = quotient_bundle(ps.field, ps.sheaf, sub);
    Matrix p = ps.jets().jet_of_map(qb.map);
    std::vector<Subspace> levels;
    for (const auto& w : ps.flag)
        levels.push_back(image(p, w));
    if (q_out)
        *q_out = qb;
    return collapse_levels(ps.field, qb.target, ps.divisor, levels, ps.weights);
}

// ---- oracle ----

namespace {

std::uint64_t projective_count(std::size_t n, std::uint64_t q)
{
    if (n == 0)
        return 0;
    std::uint64_t s = 0, p = 1;
    for (std::size_t i = 0; i < n; ++i) {
        s = saturating_add(s, p);
        p = saturating_mul(p, q);
    }
    return s;
}

// Nonzero vectors whose first nonzero entry is 1, by leading position and then odometer.
class ProjectiveEnumerator
{
  public:
    ProjectiveEnumerator(Field f, std::size_t n) : f_(f), n_(n), v_(n, 0) {}

    bool next(std::vector<std::uint32_t>& out)
    {
        if (n_ == 0)
            return false;
        if (!started_) {
            started_ = true;
            lead_ = 0;
            std::fill(v_.begin(), v_.end(), 0);
            v_[0] = 1;
        } else {
            std::size_t i = n_;
            while (i-- > lead_ + 1) {
                if (++v_[i] < f_.p)
                    break;
                v_[i] = 0;
            }
            if (i == lead_) {
                if (++lead_ == n_)
                    return false;
                std::fill(v_.begin(), v_.end(), 0);
                v_[lead_] = 1;
            }
        }
        out = v_;
        return true;
    }

  private:
    Field f_;
    std::size_t n_;
    std::vector<std::uint32_t> v_;
    std::size_t lead_ = 0;
    bool started_ = false;
};

std::vector<BinaryForm> forms_from(Field f, const std::vector<int>& degrees, const std::vector<std::uint32_t>& v)
{
    std::vector<BinaryForm> out(degrees.size());
    std::size_t pos = 0;
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        if (degrees[i] < 0)
            continue;
        std::vector<Scalar> c;
        for (int t = 0; t <= degrees[i]; ++t)
            c.push_back(Scalar::residue(f, v[pos++]));
        out[i] = BinaryForm(f, c);
    }
    return out;
}

std::size_t coeff_count(const std::vector<int>& degrees)
{
    std::size_t n = 0;
    for (int d : degrees)
        n += forms_dim(d);
    return n;
}

BigInt ceil_q(const Rational& q)
{
    return -floor(-q);
}

struct Plan
{
    std::vector<int> line_degrees;  // d, descending
    std::vector<int> kernel_twists; // c, ascending (so kernel degree descending)
    std::uint64_t total = 0;
};

Plan plan_for(const ParabolicSheafP1& ps, const Rational& pm)
{
    Plan plan;
    const SheafP1& e = ps.sheaf;
    int r = e.rank();
    if (r == 1)
        return plan;
    std::uint64_t q = ps.field.p;
    int d_lo = static_cast<int>(ceil_q(pm - 1));
    for (int d = e.max_twist(); d >= d_lo; --d) {
        std::vector<int> deg;
        for (int a : e.splitting())
            deg.push_back(a - d);
        plan.line_degrees.push_back(d);
        plan.total = saturating_add(plan.total, projective_count(coeff_count(deg), q));
    }
    if (r == 3) {
        int c_hi = static_cast<int>(floor(Rational(e.degree()) - Rational(r - 1) * (pm - 1)));
        for (int c = e.min_twist(); c <= c_hi; ++c) {
            std::vector<int> deg;
            for (int a : e.splitting())
                deg.push_back(c - a);
            plan.kernel_twists.push_back(c);
            plan.total = saturating_add(plan.total, projective_count(coeff_count(deg), q));
        }
    }
    return plan;
}

void check_oracle_input(const ParabolicSheafP1& ps)
{
    if (!ps.field.finite())
        throw PreconditionError("semistability oracle needs a finite field");
    if (ps.rank() > 3)
        throw PreconditionError("semistability oracle handles rank at most 3, got " + std::to_string(ps.rank()));
}

Rational slope_from_levels(const ParabolicSheafP1& ps, int deg, int rank, const std::vector<std::size_t>& dims)
{
    Rational s = 0;
    int full = rank * ps.delta();
    for (int i = 1; i <= ps.ell() + 1; ++i)
        s += ps.weights.eps(i) * Rational(deg - (full - static_cast<int>(dims[i - 1])) + rank);
    return s / rank;
}

} // namespace

std::uint64_t oracle_candidate_count(const ParabolicSheafP1& ps)
{
    check_oracle_input(ps);
    return plan_for(ps, par_degree_slope(ps).par_mu).total;
}

void for_each_oracle_candidate(const ParabolicSheafP1& ps, const std::function<bool(const OracleCandidate&)>& fn,
                               std::uint64_t budget)
{
    check_oracle_input(ps);
    ps.validate();
    Plan plan = plan_for(ps, par_degree_slope(ps).par_mu);
    if (plan.total > budget)
        throw BudgetError("semistability oracle would test " + std::to_string(plan.total) +
                          " candidate subsheaves, budget " + std::to_string(budget));
    const SheafP1& e = ps.sheaf;
    Field f = ps.field;
    JetSpace js = ps.jets();
    int r = e.rank();

    std::vector<std::uint32_t> v;
    for (int d : plan.line_degrees) {
        std::vector<int> deg;
        for (int a : e.splitting())
            deg.push_back(a - d);
        ProjectiveEnumerator en(f, coeff_count(deg));
        while (en.next(v)) {
            auto g = forms_from(f, deg, v);
            std::vector<BinaryForm> nz;
            for (const auto& h : g)
                if (live(h))
                    nz.push_back(h);
            if (have_common_zero(nz))
                continue;
            FormMatrix col;
            for (const auto& h : g)
                col.push_back({h});
            Matrix j = js.jet_of_map(col);
            std::vector<std::size_t> dims;
            for (const auto& w : ps.flag)
                dims.push_back(preimage(j, w).dim());
            OracleCandidate c{1, d, slope_from_levels(ps, d, 1, dims),
                              [col, d] { return Subbundle{SheafP1({d}), col}; }};
            if (!fn(c))
                return;
        }
    }
    for (int c : plan.kernel_twists) {
        std::vector<int> deg;
        for (int a : e.splitting())
            deg.push_back(c - a);
        ProjectiveEnumerator en(f, coeff_count(deg));
        while (en.next(v)) {
            auto phi = forms_from(f, deg, v);
            std::vector<BinaryForm> nz;
            for (const auto& h : phi)
                if (live(h))
                    nz.push_back(h);
            if (have_common_zero(nz))
                continue;
            Subspace jk = kernel(js.jet_of_map(FormMatrix{phi}));
            std::vector<std::size_t> dims;
            for (const auto& w : ps.flag)
                dims.push_back(intersection(jk, w).dim());
            OracleCandidate cand{r - 1, e.degree() - c, slope_from_levels(ps, e.degree() - c, r - 1, dims),
                                 [f, e, phi, c] { return kernel_subbundle(f, e, phi, c); }};
            if (!fn(cand))
                return;
        }
    }
}

OracleResult par_semistable_oracle(const ParabolicSheafP1& ps, std::uint64_t budget)
{
    OracleResult res;
    res.par_mu = par_degree_slope(ps).par_mu;
    std::optional<Rational> best;
    std::function<Subbundle()> best_sub, eq_sub, eq_last;
    int eq_rank = 0;
    for_each_oracle_candidate(
        ps,
        [&](const OracleCandidate& c) {
            ++res.candidates;
            if (c.par_mu > res.par_mu) {
                res.semistable = res.stable = false;
                if (!best || c.par_mu > *best) {
                    best = c.par_mu;
                    best_sub = c.make;
                }
            } else if (c.par_mu == res.par_mu) {
                res.stable = false;
                if (!eq_sub) {
                    eq_sub = c.make;
                    eq_rank = c.rank;
                }
                if (c.rank == eq_rank)
                    eq_last = c.make;
            }
            return true;
        },
        budget);

    auto materialize = [&](const std::function<Subbundle()>& make) {
        Destabilizer dz{make(), {}, {}};
        dz.induced = induced_structure(ps, dz.sub);
        dz.par_mu = par_degree_slope(dz.induced).par_mu;
        return dz;
    };
    if (best_sub) {
        res.witness = materialize(best_sub);
        if (res.witness->par_mu != *best)
            throw InvariantFailure("destabilizing slope changed when rebuilt");
    }
    if (eq_sub) {
        res.equal_slope = materialize(eq_sub);
        res.equal_slope_last = materialize(eq_last);
        if (res.equal_slope->par_mu != res.par_mu || res.equal_slope_last->par_mu != res.par_mu)
            throw InvariantFailure("equal-slope subsheaf changed slope when rebuilt");
    }
    return res;
}

std::vector<ParabolicSheafP1> par_gr(const ParabolicSheafP1& ps, bool reverse, std::uint64_t budget)
{
    OracleResult res = par_semistable_oracle(ps, budget);
    if (!res.semistable)
        throw PreconditionError("not parabolic semistable: subsheaf " + res.witness->induced.sheaf.str() +
                                " has parabolic slope " + to_string(res.witness->par_mu) + " > " +
                                to_string(res.par_mu));
    if (res.stable)
        return {ps};
    const Destabilizer& dz = reverse ? *res.equal_slope_last : *res.equal_slope;
    ParabolicSheafP1 q = quotient_structure(ps, dz.sub);
    std::vector<ParabolicSheafP1> out{dz.induced};
    auto rest = par_gr(q, reverse, budget);
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

// ---- morphisms ----

Matrix flatten(const FormMatrix& m)
{
    std::vector<Scalar> v;
    Field f;
    bool have_field = false;
    for (const auto& row : m)
        for (const auto& g : row)
            if (g.degree() >= 0) {
                if (!have_field) {
                    f = g.field();
                    have_field = true;
                }
                for (const auto& c : g.coeffs())
                    v.push_back(c);
            }
    return Matrix::from_scalars(f, 1, v.size(), v);
}

FormMatrix unflatten(Field f, const std::vector<int>& src, const std::vector<int>& tgt, const Matrix& row)
{
    FormMatrix m = zero_form_matrix(f, src, tgt);
    std::size_t pos = 0;
    for (auto& r : m)
        for (auto& g : r) {
            if (g.degree() < 0)
                continue;
            std::vector<Scalar> c;
            for (int t = 0; t <= g.degree(); ++t)
                c.push_back(row.at(0, pos++));
            g = BinaryForm(f, c);
        }
    return m;
}

std::vector<FormMatrix> parabolic_homs(const ParabolicSheafP1& a, const ParabolicSheafP1& b)
{
    if (a.field != b.field || !a.divisor.same_divisor(b.divisor))
        throw ValidationError("parabolic morphisms need a common field and divisor");
    Field f = a.field;
    const auto& src = a.sheaf.splitting();
    const auto& tgt = b.sheaf.splitting();
    FormMatrix z = zero_form_matrix(f, src, tgt);
    std::size_t n = flatten(z).cols();
    // conditions jet(h)(W_i(a)) inside W_j(b) on each interval of the common refinement
    std::set<Rational> cuts{Rational(0), Rational(1)};
    for (const auto& x : a.weights.alphas())
        cuts.insert(x);
    for (const auto& x : b.weights.alphas())
        cuts.insert(x);
    std::vector<std::pair<int, int>> pairs;
    for (auto it = cuts.begin(); std::next(it) != cuts.end(); ++it) {
        Rational mid = (*it + *std::next(it)) / 2;
        std::pair<int, int> pr{filtration_at(a.weights, mid).index, filtration_at(b.weights, mid).index};
        if (pairs.empty() || pairs.back() != pr)
            pairs.push_back(pr);
    }
    JetSpace ja = a.jets();
    std::vector<Matrix> jets_of_basis;
    for (std::size_t t = 0; t < n; ++t) {
        Matrix e(f, 1, n);
        e.set(0, t, 1LL);
        jets_of_basis.push_back(ja.jet_of_map(unflatten(f, src, tgt, e)));
    }
    Matrix constraints(f, 0, n);
    for (auto [i, j] : pairs) {
        const Subspace& wa = a.flag[i - 1];
        const Subspace& wb = b.flag[j - 1];
        if (wa.dim() == 0 || wb.dim() == wb.ambient())
            continue;
        Matrix ann = wb.annihilator();
        Matrix bt = wa.basis().transpose();
        std::size_t rows = ann.rows() * bt.cols();
        Matrix block(f, rows, n);
        for (std::size_t t = 0; t < n; ++t) {
            Matrix c = ann * jets_of_basis[t] * bt;
            for (std::size_t u = 0; u < c.rows(); ++u)
                for (std::size_t v = 0; v < c.cols(); ++v)
                    if (!c.zero_at(u, v))
                        block.set(u * c.cols() + v, t, c.at(u, v));
        }
        constraints.append_rows(block);
    }
    Subspace k = kernel(constraints);
    std::vector<FormMatrix> out;
    for (std::size_t t = 0; t < k.dim(); ++t)
        out.push_back(unflatten(f, src, tgt, k.basis().row(t)));
    return out;
}

// Value of a degree-zero-determinant map at the point [1:0], as a scalar matrix.
static Matrix leading_values(Field f, const FormMatrix& m)
{
    std::size_t n = m.size();
    Matrix out(f, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (live(m[i][j]))
                out.set(i, j, m[i][j].coeff(0));
    return out;
}

std::optional<FormMatrix> find_isomorphism(const ParabolicSheafP1& a, const ParabolicSheafP1& b,
                                           std::uint64_t budget)
{
    if (a.field != b.field || a.sheaf != b.sheaf || a.weights != b.weights || !a.divisor.same_divisor(b.divisor))
        return std::nullopt;
    for (std::size_t i = 0; i < a.flag.size(); ++i)
        if (a.flag[i].dim() != b.flag[i].dim())
            return std::nullopt;
    Field f = a.field;
    auto homs = parabolic_homs(a, b);
    std::size_t h = homs.size();
    std::size_t r = a.rank();
    if (h == 0)
        return std::nullopt;
    // det of a map between equal split sheaves is a constant, read off at [1:0]
    std::vector<Matrix> lv;
    for (const auto& m : homs)
        lv.push_back(leading_values(f, m));
    auto combine = [&](const std::vector<Scalar>& c) {
        Matrix s(f, r, r);
        for (std::size_t t = 0; t < h; ++t)
            if (!c[t].is_zero())
                s = s + lv[t].scaled(c[t]);
        return s;
    };
    auto build = [&](const std::vector<Scalar>& c) {
        Matrix row(f, 1, flatten(homs[0]).cols());
        for (std::size_t t = 0; t < h; ++t)
            if (!c[t].is_zero())
                row = row + flatten(homs[t]).scaled(c[t]);
        return unflatten(f, a.sheaf.splitting(), b.sheaf.splitting(), row);
    };
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<long long> dist(0, f.finite() ? f.p - 1 : 1000);
    std::vector<Scalar> c(h, Scalar::zero(f));
    for (int trial = 0; trial < 64; ++trial) {
        for (auto& x : c)
            x = Scalar(f, dist(rng));
        if (rank(combine(c)) == r)
            return build(c);
    }
    if (!f.finite())
        return std::nullopt;
    std::uint64_t total = 1;
    for (std::size_t t = 0; t < h; ++t)
        total = saturating_mul(total, f.p);
    const std::uint64_t limit = std::max<std::uint64_t>(budget, 1u << 20);
    if (total > limit)
        throw BudgetError("isomorphism search over " + std::to_string(total) + " morphisms exceeds " +
                          std::to_string(limit));
    ProjectiveEnumerator en(f, h);
    std::vector<std::uint32_t> v;
    while (en.next(v)) {
        for (std::size_t t = 0; t < h; ++t)
            c[t] = Scalar::residue(f, v[t]);
        if (rank(combine(c)) == r)
            return build(c);
    }
    return std::nullopt;
}

bool isomorphic(const ParabolicSheafP1& a, const ParabolicSheafP1& b, std::uint64_t budget)
{
    return find_isomorphism(a, b, budget).has_value();
}

} // namespace parakron
