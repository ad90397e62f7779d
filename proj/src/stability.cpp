#include "parakron/stability.hpp"

#include "parakron/errors.hpp"

#include <algorithm>

namespace parakron {

Slope Slope::of(const Rational& num, const Rational& den)
{
    Slope s;
    if (den == 0) {
        s.infinite = num > 0;
        s.value = 0;
    } else {
        s.value = num / den;
    }
    return s;
}

std::string Slope::str() const
{
    return infinite ? "inf" : to_string(value);
}

bool Slope::operator<(const Slope& o) const
{
    if (infinite)
        return false;
    if (o.infinite)
        return true;
    return value < o.value;
}

Slope mu(const std::vector<Rational>& eps, const std::vector<std::size_t>& dims)
{
    if (dims.size() != 2 * eps.size())
        throw DimensionError("slope: dimension vector does not match the weights");
    Rational num = 0;
    for (std::size_t j = 0; j < eps.size(); ++j)
        num += eps[j] * static_cast<long long>(dims[2 * j]);
    return Slope::of(num, Rational(static_cast<long long>(dims[1])));
}

namespace {

const ParabolicWeights& weights_of(const FilteredKroneckerModule& m)
{
    if (!m.weights)
        throw PreconditionError("module carries no weights");
    return *m.weights;
}

} // namespace

Slope mu(const FilteredKroneckerModule& m)
{
    return mu(weights_of(m).eps_all(), m.dims());
}

Slope mu(const FilteredKroneckerModule& m, const SubRepresentation& s)
{
    return mu(weights_of(m).eps_all(), s.dims());
}

Rational ThetaWeights::pair(const std::vector<std::size_t>& dims) const
{
    if (dims.size() != values.size())
        throw DimensionError("theta pairing: length mismatch");
    Rational s = 0;
    for (std::size_t i = 0; i < dims.size(); ++i)
        s += values[i] * static_cast<long long>(dims[i]);
    return s;
}

ThetaWeights theta_weights(const ParabolicWeights& w, const std::vector<std::size_t>& ambient)
{
    std::vector<Rational> eps = w.eps_all();
    if (ambient.size() != 2 * eps.size())
        throw DimensionError("theta weights: dimension vector does not match the weights");
    ThetaWeights t;
    t.values.assign(ambient.size(), Rational(0));
    Rational top = 0;
    for (std::size_t j = 0; j < eps.size(); ++j) {
        t.values[2 * j] = eps[j] * static_cast<long long>(ambient[1]);
        top += eps[j] * static_cast<long long>(ambient[2 * j]);
    }
    t.values[1] = -top;
    return t;
}

Rational theta(const std::vector<Rational>& eps, const std::vector<std::size_t>& ambient,
               const std::vector<std::size_t>& sub)
{
    Rational a = 0, b = 0;
    for (std::size_t j = 0; j < eps.size(); ++j) {
        a += eps[j] * static_cast<long long>(sub[2 * j]);
        b += eps[j] * static_cast<long long>(ambient[2 * j]);
    }
    return a * static_cast<long long>(ambient[1]) - b * static_cast<long long>(sub[1]);
}

Rational theta(const FilteredKroneckerModule& m, const SubRepresentation& s)
{
    return theta(weights_of(m).eps_all(), m.dims(), s.dims());
}

std::optional<DegenerateWitness> find_degenerate(const FilteredKroneckerModule& m)
{
    for (int j = 0; j <= m.ell; ++j) {
        Subspace k = rho_preimage(m, j, Subspace(m.field, m.bottom_dim(j)));
        if (k.dim() > 0)
            return DegenerateWitness{j, k.basis().row(0)};
    }
    return std::nullopt;
}

namespace {

// inclusions M_{j1} -> M_{11}
std::vector<Matrix> top_composites(const FilteredKroneckerModule& m)
{
    std::vector<Matrix> c;
    c.push_back(Matrix::identity(m.field, m.top_dim(0)));
    for (int j = 1; j <= m.ell; ++j)
        c.push_back(c.back() * m.top[j - 1]);
    return c;
}

SubRepresentation closure_from_top(const FilteredKroneckerModule& m, const std::vector<Matrix>& comp,
                                   const Subspace& u)
{
    SubRepresentation t = zero_subrep(m);
    Subspace b12 = rho_image(m, 0, u);
    Subspace t11 = rho_preimage(m, 0, b12);
    for (int j = 0; j <= m.ell; ++j) {
        t.top[j] = j == 0 ? t11 : preimage(comp[j], t11);
        t.bottom[j] = j == 0 ? b12 : rho_image(m, j, t.top[j]);
    }
    return t;
}

// Only the dimensions of the tight closure; avoids building the bottoms.
struct TightDims
{
    std::vector<std::size_t> dims;
    Subspace t11;
};

TightDims closure_dims(const FilteredKroneckerModule& m, const std::vector<Matrix>& comp, const Subspace& u)
{
    TightDims d;
    d.dims.assign(2 * (m.ell + 1), 0);
    Subspace b12 = rho_image(m, 0, u);
    d.t11 = rho_preimage(m, 0, b12);
    d.dims[0] = d.t11.dim();
    d.dims[1] = b12.dim();
    Matrix ann = d.t11.dim() == d.t11.ambient() ? Matrix(m.field, 0, m.top_dim(0)) : d.t11.annihilator();
    for (int j = 1; j <= m.ell; ++j)
        d.dims[2 * j] = m.top_dim(j) - (ann.rows() ? rank(ann * comp[j]) : 0);
    return d;
}

void require_usable(const FilteredKroneckerModule& m)
{
    weights_of(m);
    LadderReport rep = validate(m);
    if (!rep.valid)
        throw PreconditionError("stability needs a valid filtered module: " +
                                (rep.failures.empty() ? std::string("invalid") : rep.failures.front()));
    if (!m.field.finite())
        throw PreconditionError("stability decisions need a finite field");
}

bool tops_zero(const FilteredKroneckerModule& m)
{
    for (int j = 0; j <= m.ell; ++j)
        if (m.top_dim(j) > 0)
            return false;
    return true;
}

StabilityResult run_tight(const FilteredKroneckerModule& m, const StabilityOptions& opt)
{
    StabilityResult r;
    r.mu = mu(m);
    r.max_mu = Slope{};
    if (tops_zero(m)) {
        r.stable = m.total_dim() == 1;
        return r;
    }
    if (auto dg = find_degenerate(m)) {
        Seeds seeds;
        seeds.top.assign(m.ell + 1, Matrix(m.field, 0, 0));
        seeds.top[dg->level] = dg->vector;
        r.semistable = r.stable = false;
        r.degenerate = true;
        r.witness = generated_subrep(m, seeds);
        r.witness_mu = mu(m, *r.witness);
        r.max_mu = r.witness_mu;
        return r;
    }
    std::vector<Matrix> comp = top_composites(m);
    std::vector<std::size_t> full = m.dims();
    std::optional<Subspace> worst, equal;
    SubspaceEnumerator en(m.field, m.top_dim(0), std::nullopt, opt.budget);
    Subspace u;
    bool first = true;
    while (en.next(u)) {
        if (u.dim() == 0)
            continue;
        ++r.examined;
        TightDims td = closure_dims(m, comp, u);
        Slope s = mu(weights_of(m).eps_all(), td.dims);
        if (first || s > r.max_mu) {
            first = false;
            r.max_mu = s;
        }
        if (s > r.mu) {
            if (!worst || s > r.witness_mu) {
                worst = td.t11;
                r.witness_mu = s;
            }
            r.semistable = r.stable = false;
            if (opt.early_exit)
                break;
        } else if (s == r.mu && r.stable && !equal) {
            bool whole = td.dims[1] == full[1];
            for (int j = 0; whole && j <= m.ell; ++j)
                whole = td.dims[2 * j] == full[2 * j];
            if (whole) {
                SubRepresentation t = closure_from_top(m, comp, td.t11);
                whole = is_whole(m, t);
            }
            if (!whole) {
                equal = td.t11;
                r.stable = false;
            }
        }
    }
    if (worst) {
        r.witness = closure_from_top(m, comp, *worst);
    } else if (equal) {
        r.witness = closure_from_top(m, comp, *equal);
        r.witness_mu = r.mu;
    }
    return r;
}

// The top vertices alone, with their inclusions.
FilteredKroneckerModule top_chain(const FilteredKroneckerModule& m)
{
    FilteredKroneckerModule t = m;
    for (auto& k : t.modules) {
        k.d2 = 0;
        for (auto& a : k.alpha)
            a = Matrix(m.field, 0, k.d1);
    }
    for (auto& b : t.bottom)
        b = Matrix(m.field, 0, 0);
    return t;
}

// With tops present, every subrep contains the one generated by its tops, which has the
// same numerator and the smallest denominator; those are the only ones visited.
StabilityResult run_exhaustive(const FilteredKroneckerModule& m, const StabilityOptions& opt)
{
    StabilityResult r;
    r.mu = mu(m);
    r.stable = m.total_dim() > 0;
    std::vector<Rational> eps = weights_of(m).eps_all();
    bool first = true;
    auto consider = [&](const SubRepresentation& s) {
        if (s.is_zero())
            return true;
        std::vector<std::size_t> d = s.dims();
        bool top_nonzero = false;
        for (int j = 0; j <= m.ell; ++j)
            top_nonzero = top_nonzero || d[2 * j] > 0;
        if (is_whole(m, s) && !(top_nonzero && d[1] == 0))
            return true;
        ++r.examined;
        Slope sl = mu(eps, d);
        if (first || sl > r.max_mu) {
            first = false;
            r.max_mu = sl;
        }
        bool degenerate = top_nonzero && d[1] == 0;
        if (degenerate || sl > r.mu) {
            if (r.semistable || (!r.degenerate && (degenerate || sl > r.witness_mu))) {
                r.witness = s;
                r.witness_mu = sl;
            }
            r.degenerate = r.degenerate || degenerate;
            r.semistable = r.stable = false;
            return !opt.early_exit;
        }
        if (sl == r.mu && r.stable) {
            r.stable = false;
            r.witness = s;
            r.witness_mu = sl;
        }
        return true;
    };
    if (tops_zero(m)) {
        for_each_subrep(m, consider, opt.budget);
        return r;
    }
    for_each_subrep(
        top_chain(m),
        [&](const SubRepresentation& t) {
            Seeds seeds;
            for (const auto& u : t.top)
                seeds.top.push_back(u.basis());
            return consider(generated_subrep(m, seeds));
        },
        opt.budget);
    return r;
}

} // namespace

SubRepresentation tight_closure(const FilteredKroneckerModule& m, const SubRepresentation& s)
{
    if (!is_subrep(m, s))
        throw ValidationError("tight_closure: not a subrepresentation");
    return closure_from_top(m, top_composites(m), s.top[0]);
}

bool is_tight(const FilteredKroneckerModule& m, const SubRepresentation& s)
{
    return tight_closure(m, s) == s;
}

StabilityResult is_theta_semistable(const FilteredKroneckerModule& m, const StabilityOptions& opt)
{
    require_usable(m);
    if (opt.mode == StabilityMode::tight)
        return run_tight(m, opt);
    if (opt.mode == StabilityMode::exhaustive)
        return run_exhaustive(m, opt);
    StabilityResult t = run_tight(m, opt);
    StabilityResult e = run_exhaustive(m, opt);
    if (t.semistable != e.semistable || t.stable != e.stable)
        throw InvariantFailure("tight and exhaustive stability verdicts disagree");
    if (!opt.early_exit && !t.degenerate && std::max(t.max_mu, t.mu) != std::max(e.max_mu, e.mu))
        throw InvariantFailure("tight and exhaustive maximal slopes disagree: " + t.max_mu.str() + " vs " +
                               e.max_mu.str());
    t.examined += e.examined;
    return t;
}

std::optional<SubRepresentation> minimal_equal_slope(const FilteredKroneckerModule& m, std::uint64_t budget)
{
    require_usable(m);
    Slope target = mu(m);
    std::vector<Matrix> comp = top_composites(m);
    std::optional<SubRepresentation> best;
    SubspaceEnumerator en(m.field, m.top_dim(0), std::nullopt, budget);
    Subspace u;
    while (en.next(u)) {
        if (u.dim() == 0)
            continue;
        TightDims td = closure_dims(m, comp, u);
        if (mu(weights_of(m).eps_all(), td.dims) != target)
            continue;
        SubRepresentation t = closure_from_top(m, comp, td.t11);
        if (is_whole(m, t))
            continue;
        if (!best || t < *best)
            best = t;
    }
    return best;
}

JordanHolder jordan_holder(const FilteredKroneckerModule& m, std::uint64_t budget)
{
    StabilityOptions opt;
    opt.budget = budget;
    opt.early_exit = true;
    StabilityResult st = is_theta_semistable(m, opt);
    if (!st.semistable)
        throw PreconditionError("Jordan-Holder filtration needs a semistable module (destabilizing slope " +
                                st.witness_mu.str() + " > " + st.mu.str() + ")");
    JordanHolder jh;
    jh.filtration.push_back(zero_subrep(m));
    FilteredKroneckerModule cur = m;
    // projections from m onto the current quotient, per vertex
    std::vector<Matrix> pt, pb;
    for (int j = 0; j <= m.ell; ++j) {
        pt.push_back(Matrix::identity(m.field, m.top_dim(j)));
        pb.push_back(Matrix::identity(m.field, m.bottom_dim(j)));
    }
    while (true) {
        std::optional<SubRepresentation> s = cur.total_dim() > 0 ? minimal_equal_slope(cur, budget) : std::nullopt;
        if (!s) {
            jh.factors.push_back(cur);
            jh.filtration.push_back(full_subrep(m));
            break;
        }
        jh.factors.push_back(restrict_to(cur, *s));
        SubRepresentation lifted = zero_subrep(m);
        for (int j = 0; j <= m.ell; ++j) {
            lifted.top[j] = preimage(pt[j], s->top[j]);
            lifted.bottom[j] = preimage(pb[j], s->bottom[j]);
        }
        jh.filtration.push_back(lifted);
        LadderQuotient q = quotient(cur, *s);
        if (!q.injective)
            throw InvariantFailure("Jordan-Holder quotient left the filtered category");
        for (int j = 0; j <= m.ell; ++j) {
            pt[j] = q.top_proj[j] * pt[j];
            pb[j] = q.bottom_proj[j] * pb[j];
        }
        cur = q.module;
    }
    return jh;
}

bool schur_match(const FilteredKroneckerModule& a, const FilteredKroneckerModule& b)
{
    if (a.dims() != b.dims())
        return false;
    return hom_space(a, b).dim > 0;
}

bool match_factors(const std::vector<FilteredKroneckerModule>& a, const std::vector<FilteredKroneckerModule>& b)
{
    if (a.size() != b.size())
        return false;
    // bipartite matching by augmenting paths
    std::size_t n = a.size();
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            adj[i][j] = schur_match(a[i], b[j]);
    std::vector<int> owner(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<bool> seen(n, false);
        std::function<bool(std::size_t)> augment = [&](std::size_t x) {
            for (std::size_t y = 0; y < n; ++y) {
                if (!adj[x][y] || seen[y])
                    continue;
                seen[y] = true;
                if (owner[y] < 0 || augment(static_cast<std::size_t>(owner[y]))) {
                    owner[y] = static_cast<int>(x);
                    return true;
                }
            }
            return false;
        };
        if (!augment(i))
            return false;
    }
    return true;
}

bool s_equivalent(const FilteredKroneckerModule& a, const FilteredKroneckerModule& b, std::uint64_t budget)
{
    if (a.dims() != b.dims())
        throw PreconditionError("S-equivalence needs equal dimension vectors");
    if (a.weights != b.weights)
        throw PreconditionError("S-equivalence needs equal weights");
    return match_factors(jordan_holder(a, budget).factors, jordan_holder(b, budget).factors);
}

} // namespace parakron
