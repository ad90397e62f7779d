#include "parakron/functors.hpp"

#include "parakron/errors.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace parakron {

namespace {

Matrix restricted(const Matrix& a, const Subspace& src, const Subspace& tgt)
{
    if (src.dim() == 0 || tgt.dim() == 0)
        return Matrix(a.field(), tgt.dim(), src.dim());
    Matrix imgs = (a * src.basis().transpose()).transpose();
    return tgt.coordinates(imgs).transpose();
}

Subspace sections_in(const JetSpace& js, const SheafP1& e, const Subspace& w, int k)
{
    Matrix j = js.jet_matrix(e, k);
    if (w.dim() == w.ambient())
        return Subspace::full(js.field(), j.cols());
    return kernel(w.annihilator() * j);
}

std::string level_name(std::size_t i)
{
    return "F_" + std::to_string(i + 1);
}

} // namespace

FunctorContext FunctorContext::make(Field f, int n, int m)
{
    if (m <= n)
        throw ValidationError("functor context needs m > n, got n=" + std::to_string(n) + ", m=" + std::to_string(m));
    return FunctorContext{f, n, m, monomial_basis(f, m - n)};
}

FunctorContext default_context(const std::vector<ParabolicSheafP1>& corpus)
{
    if (corpus.empty())
        throw ValidationError("default context needs a nonempty corpus");
    int n = step_regularity(corpus.front());
    for (const auto& ps : corpus)
        n = std::max(n, step_regularity(ps));
    return FunctorContext::make(corpus.front().field, n, n + 2);
}

FunctorContext threshold_context(const std::vector<ParabolicSheafP1>& corpus, int max_gap, std::uint64_t budget)
{
    FunctorContext base = default_context(corpus);
    ParabolicType tp = type_of(corpus.front());
    for (int m = base.m; m <= base.n + max_gap; ++m) {
        FunctorContext ctx = FunctorContext::make(base.field, base.n, m);
        if (thresholds_check(corpus, tp, ctx, budget).ok())
            return ctx;
    }
    throw BudgetError("no m <= n + " + std::to_string(max_gap) + " satisfies the threshold conditions");
}

KroneckerModule phi(const SheafP1& e, const FunctorContext& ctx)
{
    MultMap mm = mult_map(ctx.field, e, ctx.n, ctx.m);
    KroneckerModule k;
    k.field = ctx.field;
    k.d1 = static_cast<std::size_t>(h0(e, ctx.n));
    k.d2 = static_cast<std::size_t>(h0(e, ctx.m));
    k.alpha = std::move(mm.alpha);
    return k;
}

PsiData psi_chain(const SheafP1& e, const ParabolicDivisor& d, const std::vector<Subspace>& levels,
                  const ParabolicWeights& w, const FunctorContext& ctx)
{
    if (levels.size() != static_cast<std::size_t>(w.ell()) + 1)
        throw DimensionError("chain has " + std::to_string(levels.size()) + " steps, weights need " +
                             std::to_string(w.ell() + 1));
    JetSpace js(d, e.rank());
    MultMap mm = mult_map(ctx.field, e, ctx.n, ctx.m);
    PsiData out;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const Subspace& wi = levels[i];
        // H^1(F(n-1)) = 0 exactly when h0(F(n-1)) reaches the Euler characteristic
        int deg = e.degree() - static_cast<int>(wi.ambient() - wi.dim());
        long long chi = static_cast<long long>(e.rank()) * ctx.n + deg;
        long long have = static_cast<long long>(sections_in(js, e, wi, ctx.n - 1).dim());
        if (have != chi)
            throw NotRegularError("step " + level_name(i) + " is not " + std::to_string(ctx.n) + "-regular (" + std::to_string(have) + " vs " + std::to_string(chi) + ")");
        out.top.push_back(sections_in(js, e, wi, ctx.n));
        out.bottom.push_back(sections_in(js, e, wi, ctx.m));
    }
    FilteredKroneckerModule& m = out.module;
    m.field = ctx.field;
    m.ell = w.ell();
    m.h = ctx.h();
    m.weights = w;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        KroneckerModule k;
        k.field = ctx.field;
        k.d1 = out.top[i].dim();
        k.d2 = out.bottom[i].dim();
        for (const Matrix& a : mm.alpha)
            k.alpha.push_back(restricted(a, out.top[i], out.bottom[i]));
        m.modules.push_back(std::move(k));
    }
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
        m.top.push_back(restricted(Matrix::identity(ctx.field, out.top[i].ambient()), out.top[i + 1], out.top[i]));
        m.bottom.push_back(
            restricted(Matrix::identity(ctx.field, out.bottom[i].ambient()), out.bottom[i + 1], out.bottom[i]));
    }
    return out;
}

PsiData psi_tracked(const ParabolicSheafP1& ps, const FunctorContext& ctx)
{
    if (ps.field != ctx.field)
        throw ValidationError("sheaf and functor context live over different fields");
    return psi_chain(ps.sheaf, ps.divisor, ps.flag, ps.weights, ctx);
}

FilteredKroneckerModule psi(const ParabolicSheafP1& ps, const FunctorContext& ctx)
{
    return psi_tracked(ps, ctx).module;
}

FilteredKroneckerModule psi_expanded(const ParabolicSheafP1& ps, const ParabolicWeights& original,
                                     const FunctorContext& ctx)
{
    std::vector<Subspace> levels;
    int lp = ps.ell();
    for (int i = 1; i <= original.ell() + 1; ++i) {
        int k = 1;
        while (k <= lp && ps.weights.alpha(k) < original.alpha(i))
            ++k;
        levels.push_back(ps.flag[k - 1]);
    }
    return psi_chain(ps.sheaf, ps.divisor, levels, original, ctx).module;
}

GradedPresentation presentation(const KroneckerModule& k, const FunctorContext& ctx)
{
    k.validate(ctx.h());
    GradedPresentation p;
    p.field = ctx.field;
    std::size_t h = ctx.h();
    p.source_twists.assign(k.d1 * h, -ctx.m);
    p.target_twists.assign(k.d1, -ctx.n);
    p.target_twists.insert(p.target_twists.end(), k.d2, -ctx.m);
    BinaryForm zero_h(ctx.field, ctx.m - ctx.n);
    p.entries.assign(k.d1 + k.d2, std::vector<BinaryForm>(k.d1 * h));
    for (std::size_t a = 0; a < k.d1; ++a)
        for (std::size_t t = 0; t < h; ++t) {
            std::size_t col = a * h + t;
            for (std::size_t r = 0; r < k.d1; ++r)
                p.entries[r][col] = r == a ? ctx.h_basis[t] : zero_h;
            for (std::size_t b = 0; b < k.d2; ++b)
                p.entries[k.d1 + b][col] = BinaryForm(ctx.field, {-k.alpha[t].at(b, a)});
        }
    return p;
}

SheafP1 phi_dual(const KroneckerModule& k, const FunctorContext& ctx)
{
    if (k.d1 + k.d2 == 0)
        throw NotLocallyFreeError("zero module: the associated sheaf is zero");
    return recover_splitting(presentation(k, ctx));
}

UnitCheck unit_check(const KroneckerModule& k, const FunctorContext& ctx)
{
    UnitCheck u;
    SheafP1 e;
    try {
        e = phi_dual(k, ctx);
    } catch (const ValidationError& err) {
        u.details = std::string("no locally free sheaf: ") + err.what();
        return u;
    }
    u.sheaf = e;
    if (!is_regular(e, ctx.n)) {
        u.details = "recovered sheaf " + e.str() + " is not " + std::to_string(ctx.n) + "-regular";
        return u;
    }
    KroneckerModule back = phi(e, ctx);
    if (back.d1 != k.d1 || back.d2 != k.d2) {
        u.details = "dimensions (" + std::to_string(k.d1) + "," + std::to_string(k.d2) + ") differ from h0 of " +
                    e.str() + ": (" + std::to_string(back.d1) + "," + std::to_string(back.d2) + ")";
        return u;
    }
    if (back == k) {
        LadderMorphism id;
        id.top = {Matrix::identity(ctx.field, k.d1), Matrix(ctx.field, 0, 0)};
        id.bottom = {Matrix::identity(ctx.field, k.d2), Matrix(ctx.field, 0, 0)};
        u.map = id;
    } else {
        u.map = find_ladder_isomorphism(as_filtered(k, ctx.h()), as_filtered(back, ctx.h()));
    }
    u.iso = u.map.has_value();
    u.details = u.iso ? "isomorphic to Phi(" + e.str() + ")" : "no isomorphism onto Phi(" + e.str() + ")";
    return u;
}

KroneckerModule twist_minus_D(const FilteredKroneckerModule& m, const ParabolicDivisor& d, const FunctorContext& ctx)
{
    UnitCheck u = unit_check(m.modules.at(0), ctx);
    if (!u.iso)
        throw NotInSubcategoryError("top module is not in the regular image: " + u.details);
    return phi(u.sheaf->twisted(-d.degree()), ctx);
}

ParabolicSheafP1 psi_dual(const FilteredKroneckerModule& m, const FunctorContext& ctx)
{
    if (!m.weights)
        throw PreconditionError("psi_dual needs a module with weights");
    LadderReport rep = validate(m);
    if (!rep.valid)
        throw NotInSubcategoryError("not a filtered module: " + rep.failures.front());
    if (m.field != ctx.field || m.h != ctx.h())
        throw NotInSubcategoryError("module does not match the functor context");
    UnitCheck u = unit_check(m.modules[0], ctx);
    if (!u.iso)
        throw NotInSubcategoryError("top level: " + u.details);
    const SheafP1& e = *u.sheaf;
    Field f = ctx.field;
    // section subspaces of each level inside H^0(E(n))
    std::vector<Subspace> secs;
    Matrix c = u.map->top[0];
    for (int j = 0; j <= m.ell; ++j) {
        if (j > 0)
            c = c * m.top[j - 1];
        secs.push_back(column_space(c));
    }
    for (int j = 0; j <= m.ell; ++j) {
        UnitCheck uj = unit_check(m.modules[j], ctx);
        if (!uj.iso)
            throw NotInSubcategoryError("level " + std::to_string(j + 1) + ": " + uj.details);
    }
    // the last level is E(-D)(n): its sections share exactly the divisor equation
    UPoly g;
    const Subspace& last = secs.back();
    for (std::size_t r = 0; r < last.dim(); ++r)
        for (const BinaryForm& form : section_to_forms(f, e.splitting(), ctx.n, last.basis().row(r)))
            if (form.degree() >= 0 && !form.is_zero()) {
                UPoly a = form.dehomogenize();
                trim(a);
                g = g.empty() ? poly_gcd(a, a) : poly_gcd(g, a);
            }
    int delta = poly_degree(g);
    if (g.empty() || delta < 1)
        throw NotInSubcategoryError("last level does not determine a divisor");
    std::vector<Scalar> coeffs(g.begin(), g.end());
    ParabolicDivisor d(BinaryForm(f, coeffs));
    if (static_cast<int>(last.dim()) != h0(e, ctx.n - delta))
        throw NotInSubcategoryError("last level is not E(-D): dimension " + std::to_string(last.dim()) +
                                    " instead of " + std::to_string(h0(e, ctx.n - delta)));
    JetSpace js(d, e.rank());
    Matrix jets = js.jet_matrix(e, ctx.n);
    std::vector<Subspace> interior;
    for (int j = 1; j < m.ell; ++j)
        interior.push_back(secs[j].dim() ? js.module_span(secs[j].basis() * jets.transpose())
                                         : Subspace(f, js.dim()));
    ParabolicSheafP1 ps;
    try {
        ps = make_parabolic(f, e, d, interior, *m.weights);
    } catch (const ValidationError& err) {
        throw NotInSubcategoryError(std::string("recovered flag is not a parabolic structure: ") + err.what());
    }
    FilteredKroneckerModule back;
    try {
        back = psi(ps, ctx);
    } catch (const NotRegularError& err) {
        throw NotInSubcategoryError(std::string("recovered structure: ") + err.what());
    }
    if (back.dims() != m.dims())
        throw NotInSubcategoryError("sections of the recovered steps do not match the module levels");
    if (!(back == m) && !find_ladder_isomorphism(back, m))
        throw NotInSubcategoryError("module is not isomorphic to Psi of the recovered structure");
    return ps;
}

SubsheafFromModule subsheaf_of(const ParabolicSheafP1& ps, const PsiData& data, const SubRepresentation& s,
                               const FunctorContext& ctx)
{
    SubsheafFromModule out;
    const Subspace& amb = data.top[0];
    out.sections = s.top[0].dim() ? Subspace::span(s.top[0].basis() * amb.basis()) : Subspace(ctx.field, amb.ambient());
    if (out.sections.dim() == 0)
        return out;
    // h0 of the generated subsheaf for large twists is linear; read rank and degree off it
    auto generated = [&](int k) {
        Matrix rows(ctx.field, 0, static_cast<std::size_t>(h0(ps.sheaf, k)));
        for (const BinaryForm& g : monomial_basis(ctx.field, k - ctx.n)) {
            Matrix mm = multiplication_matrix(ctx.field, ps.sheaf, ctx.n, g);
            rows.append_rows(out.sections.basis() * mm.transpose());
        }
        return static_cast<long long>(rank(rows));
    };
    int k0 = ctx.m + 2 * static_cast<int>(out.sections.dim()) + 2;
    long long a = generated(k0), b = generated(k0 + 1), c = generated(k0 + 2);
    if (b - a != c - b)
        throw InvariantFailure("generated subsheaf has not reached its Hilbert polynomial");
    out.rank = static_cast<int>(b - a);
    out.degree = static_cast<int>(a - static_cast<long long>(out.rank) * (k0 + 1));
    return out;
}

TypeDims type_to_dims(const ParabolicType& tp, const FunctorContext& ctx)
{
    int l = tp.weights.ell();
    if (static_cast<int>(tp.Pi.size()) != l)
        throw ValidationError("type has " + std::to_string(tp.Pi.size()) + " quotient polynomials for " +
                              std::to_string(l) + " weights");
    if (tp.P.degree() != 1 || tp.P.coeff(1) <= 0)
        throw ValidationError("Hilbert polynomial of a bundle on the line must be linear with positive rank");
    Rational prev = 0;
    for (int i = 0; i < l; ++i) {
        if (tp.Pi[i].degree() > 0)
            throw ValidationError("quotient polynomial P_" + std::to_string(i + 1) + " is not constant");
        Rational v = tp.Pi[i].coeff(0);
        if (v <= prev)
            throw ValidationError("quotient lengths must increase strictly");
        prev = v;
    }
    TypeDims out;
    auto at = [](const RatPoly& p, int k) {
        Rational v = p(Rational(k));
        if (v < 0 || denominator(v) != 1)
            throw ValidationError("type evaluates to a non-dimension");
        return static_cast<std::size_t>(numerator(v));
    };
    out.dims.push_back(at(tp.P, ctx.n));
    out.dims.push_back(at(tp.P, ctx.m));
    for (int i = 0; i < l; ++i) {
        out.dims.push_back(at(tp.P - tp.Pi[i], ctx.n));
        out.dims.push_back(at(tp.P - tp.Pi[i], ctx.m));
    }
    out.theta = theta_weights(tp.weights, out.dims);
    return out;
}

bool ThresholdReport::ok() const
{
    for (const auto& c : checks)
        if (c.status == "fail")
            return false;
    return true;
}

namespace {

int sign(const Rational& x)
{
    return x > 0 ? 1 : (x < 0 ? -1 : 0);
}

// h0 of the kernel of H^0(F(n)) tensor O(-n) -> F at twist k
long long evaluation_kernel_h0(const ParabolicSheafP1& ps, const Subspace& sec_n, int n, int k)
{
    if (sec_n.dim() == 0)
        return 0;
    Field f = ps.field;
    std::size_t total = 0;
    Matrix big(f, 0, static_cast<std::size_t>(h0(ps.sheaf, k)));
    for (const BinaryForm& g : monomial_basis(f, k - n)) {
        big.append_rows(sec_n.basis() * multiplication_matrix(f, ps.sheaf, n, g).transpose());
        total += sec_n.dim();
    }
    return static_cast<long long>(total) - static_cast<long long>(rank(big));
}

// Images of V' tensor O(-n) -> E have rank r' <= r and summands in [-n, a_max]; for such E'
// the tuple c_j = h0(F_j(E')(n)) starts at P_{E'}(n), does not increase, never exceeds
// P_j(n) and loses at most r' delta in total. Returns the first mismatch, if any.
std::optional<std::string> image_tuples_agree(const ParabolicSheafP1& ps, const FunctorContext& ctx, std::size_t& tuples)
{
    int r = ps.rank(), delta = ps.delta(), l = ps.ell();
    RatPoly pE = hilbert_polynomial(ps.sheaf);
    std::vector<Rational> eps = ps.weights.eps_all();
    std::vector<long long> pj;
    Rational pHn = 0;
    for (int j = 1; j <= l + 1; ++j) {
        pj.push_back(static_cast<long long>(sections_of_step(ps, j, ctx.n).dim()));
        pHn += eps[j - 1] * pj.back();
    }
    for (int rr = 1; rr <= r; ++rr)
        for (int d = -ctx.n * rr; d <= ps.sheaf.max_twist() * rr; ++d) {
            long long first = static_cast<long long>(rr) * (ctx.n + 1) + d;
            if (first > pj[0])
                continue;
            RatPoly pF = RatPoly::linear(rr, d + rr);
            RatPoly rhs = pF * pHn;
            Rational rhs_m = rhs(Rational(ctx.m));
            long long lo = std::max(0LL, first - static_cast<long long>(rr) * delta);
            std::set<Rational> seen;
            std::optional<std::string> bad;
            std::function<void(int, long long, const Rational&)> walk = [&](int j, long long prev, const Rational& acc) {
                if (bad)
                    return;
                if (j == l + 1) {
                    if (!seen.insert(acc).second)
                        return;
                    ++tuples;
                    RatPoly lhs = pE * acc;
                    if (lhs.compare(rhs) != sign(lhs(Rational(ctx.m)) - rhs_m))
                        bad = "image rank " + std::to_string(rr) + ", degree " + std::to_string(d) +
                              ": polynomial and value comparisons differ at m = " + std::to_string(ctx.m);
                    return;
                }
                for (long long c = lo; c <= std::min(prev, pj[j]); ++c)
                    walk(j + 1, c, acc + eps[j] * c);
            };
            walk(1, first, eps[0] * first);
            if (bad)
                return bad;
        }
    return std::nullopt;
}

} // namespace

ThresholdReport thresholds_check(const std::vector<ParabolicSheafP1>& family, const ParabolicType& tp,
                                 const FunctorContext& ctx, std::uint64_t budget)
{
    ThresholdReport rep;
    if (family.empty()) {
        rep.warnings.push_back("empty family: every condition holds vacuously");
        for (const char* c : {"n_regular", "slope_bound", "twist_gap", "m_regular", "polynomial_comparison"})
            rep.checks.push_back({c, std::string(c) == "slope_bound" ? "assumed" : "vacuous", "empty family"});
        return rep;
    }
    for (std::size_t i = 0; i < family.size(); ++i)
        if (!(type_of(family[i]) == tp))
            throw ValidationError("family member " + std::to_string(i) + " has a different parabolic type");

    ThresholdCheck reg_check{"n_regular", "pass", ""};
    for (std::size_t i = 0; i < family.size() && reg_check.status == "pass"; ++i) {
        int reg = step_regularity(family[i]);
        if (reg > ctx.n) {
            reg_check.status = "fail";
            reg_check.detail = "member " + std::to_string(i) + " has a step of regularity " + std::to_string(reg) + " > n = " +
                        std::to_string(ctx.n);
        }
    }
    if (reg_check.status == "pass")
        reg_check.detail = "every step of all " + std::to_string(family.size()) + " members is n-regular";
    rep.checks.push_back(reg_check);

    rep.checks.push_back({"slope_bound", "assumed", "existence statement; not checkable on a finite corpus"});
    rep.checks.push_back({"twist_gap", ctx.m > ctx.n ? "pass" : "fail",
                          "O(" + std::to_string(ctx.m - ctx.n) + ") is " + (ctx.m > ctx.n ? "" : "not ") + "regular"});

    ThresholdCheck kernel_check{"m_regular", "pass", ""};
    ThresholdCheck tuple_check{"polynomial_comparison", "pass", ""};
    std::size_t kernels = 0, subsheaves = 0, tuples = 0;
    bool regular_ok = rep.checks[0].status == "pass";
    for (std::size_t i = 0; i < family.size() && regular_ok; ++i) {
        const ParabolicSheafP1& ps = family[i];
        int r = ps.rank();
        for (int j = 1; j <= ps.ell() + 1 && kernel_check.status == "pass"; ++j) {
            Subspace sec = sections_of_step(ps, j, ctx.n);
            long long nsec = static_cast<long long>(sec.dim());
            long long rk = nsec - r;
            long long deg = -static_cast<long long>(ctx.n) * nsec - step_degree(ps, j);
            long long chi = rk * ctx.m + deg; // chi(K(m-1))
            long long have = evaluation_kernel_h0(ps, sec, ctx.n, ctx.m - 1);
            ++kernels;
            if (have != chi) {
                kernel_check.status = "fail";
                kernel_check.detail = "member " + std::to_string(i) + ": kernel of evaluation on F_" + std::to_string(j) +
                            " is not m-regular";
            }
        }
        Rational pm = par_degree_slope(ps).par_mu;
        RatPoly pE = hilbert_polynomial(ps.sheaf);
        std::vector<Rational> eps = ps.weights.eps_all();
        Rational pHn = 0;
        for (int j = 1; j <= ps.ell() + 1; ++j)
            pHn += eps[j - 1] * static_cast<long long>(sections_of_step(ps, j, ctx.n).dim());
        if (tuple_check.status == "pass")
            if (auto bad = image_tuples_agree(ps, ctx, tuples)) {
                tuple_check.status = "fail";
                tuple_check.detail = "member " + std::to_string(i) + ", " + *bad;
            }
        std::vector<Subspace> steps;
        for (int j = 1; j <= ps.ell() + 1; ++j)
            steps.push_back(sections_of_step(ps, j, ctx.n));
        for_each_oracle_candidate(
            ps,
            [&](const OracleCandidate& cand) {
                if (cand.par_mu < pm)
                    return true;
                Subbundle sub = cand.make();
                ++subsheaves;
                if (kernel_check.status == "pass" && regularity(sub.source) > ctx.m) {
                    kernel_check.status = "fail";
                    kernel_check.detail = "member " + std::to_string(i) + ": subsheaf " + sub.source.str() + " is not m-regular";
                }
                Matrix sm = sections_map(ps.field, sub.source.splitting(), ps.sheaf.splitting(), sub.map, ctx.n);
                Rational s = 0;
                for (int j = 1; j <= ps.ell() + 1; ++j)
                    s += eps[j - 1] * static_cast<long long>(preimage(sm, steps[j - 1]).dim());
                RatPoly pF = hilbert_polynomial(sub.source);
                RatPoly lhs = pE * s, rhs = pF * pHn;
                int poly = lhs.compare(rhs);
                int val = sign(lhs(Rational(ctx.m)) - rhs(Rational(ctx.m)));
                ++tuples;
                if (poly != val && tuple_check.status == "pass") {
                    tuple_check.status = "fail";
                    tuple_check.detail = "member " + std::to_string(i) + ", subsheaf " + sub.source.str() +
                                ": polynomial and value comparisons differ";
                }
                return true;
            },
            budget);
    }
    if (!regular_ok) {
        kernel_check = {"m_regular", "vacuous", "skipped: n-regularity failed"};
        tuple_check = {"polynomial_comparison", "vacuous", "skipped: n-regularity failed"};
    } else {
        if (kernel_check.status == "pass")
            kernel_check.detail = std::to_string(kernels) + " evaluation kernels and " + std::to_string(subsheaves) +
                        " subsheaves of slope at least the member's are m-regular (verified on corpus)";
        if (tuple_check.status == "pass")
            tuple_check.detail = std::to_string(tuples) +
                        " coefficient tuples for image sheaves and subsheaves agree (verified on corpus)";
    }
    rep.checks.push_back(kernel_check);
    rep.checks.push_back(tuple_check);
    return rep;
}

PreservationReport verify_preservation(const ParabolicSheafP1& ps, const FunctorContext& ctx,
                                       const PreservationOptions& opt)
{
    PreservationReport rep;
    OracleResult sh = par_semistable_oracle(ps, opt.budget);
    rep.par_mu = sh.par_mu;
    rep.sheaf_semistable = sh.semistable;
    rep.sheaf_stable = sh.stable;
    PsiData data = psi_tracked(ps, ctx);
    const FilteredKroneckerModule& m = data.module;
    StabilityOptions so;
    so.budget = opt.budget;
    so.early_exit = !opt.compare_stable;
    StabilityResult st = is_theta_semistable(m, so);
    rep.module_mu = st.mu;
    rep.module_semistable = st.semistable;
    rep.module_stable = st.stable;
    if (!opt.compare_stable)
        rep.module_stable = rep.sheaf_stable;
    if (sh.witness) {
        rep.sheaf_witness_mu = sh.witness->par_mu;
        FilteredKroneckerModule pw = psi_expanded(sh.witness->induced, ps.weights, ctx);
        rep.psi_of_witness_mu = mu(ps.weights.eps_all(), pw.dims());
    }
    if (!st.semistable)
        rep.module_witness_mu = st.witness_mu;
    if (opt.check_gr && rep.sheaf_semistable && rep.module_semistable && !rep.sheaf_stable) {
        rep.gr_checked = true;
        std::vector<ParabolicSheafP1> gr = par_gr(ps, false, opt.budget);
        std::vector<FilteredKroneckerModule> expanded;
        for (const auto& g : gr)
            expanded.push_back(psi_expanded(g, ps.weights, ctx));
        JordanHolder jh = jordan_holder(m, opt.budget);
        rep.sheaf_factors = gr.size();
        rep.module_factors = jh.factors.size();
        rep.gr_match = match_factors(jh.factors, expanded);
    }
    return rep;
}

} // namespace parakron
