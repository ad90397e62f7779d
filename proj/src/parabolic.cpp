#include "parakron/parabolic.hpp"
#include "parakron/errors.hpp"

#include <functional>
#include <string>

namespace parakron {

ParabolicWeights::ParabolicWeights(std::vector<Rational> alphas) : a_(std::move(alphas))
{
    if (a_.empty())
        throw ValidationError("weights: at least one weight is required");
    Rational prev = 0;
    for (const auto& a : a_) {
        if (a <= prev)
            throw ValidationError("weights must satisfy 0 < alpha_1 < ... < alpha_l < 1, got " + to_string(a) +
                                  " after " + to_string(prev));
        prev = a;
    }
    if (prev >= 1)
        throw ValidationError("weights must be smaller than 1, got " + to_string(prev));
}

Rational ParabolicWeights::alpha(int i) const
{
    if (i <= 0)
        return 0;
    if (i > ell())
        return 1;
    return a_[i - 1];
}

Rational ParabolicWeights::eps(int i) const
{
    return alpha(i) - alpha(i - 1);
}

std::vector<Rational> ParabolicWeights::eps_all() const
{
    std::vector<Rational> e;
    for (int i = 1; i <= ell() + 1; ++i)
        e.push_back(eps(i));
    return e;
}

ParabolicDivisor::ParabolicDivisor(BinaryForm f) : f_(std::move(f))
{
    if (f_.degree() < 1)
        throw ValidationError("divisor: form must have degree at least 1");
    if (f_.at_infinity().is_zero())
        throw ValidationError("divisor must avoid [0:1]: the coefficient of y^" + std::to_string(f_.degree()) +
                              " vanishes");
    aff_ = f_.dehomogenize();
}

bool ParabolicDivisor::same_divisor(const ParabolicDivisor& o) const
{
    return f_.field() == o.f_.field() && f_.degree() == o.f_.degree() && f_.normalized() == o.f_.normalized();
}

JetSpace::JetSpace(const ParabolicDivisor& d, int rank) : d_(d), r_(rank) {}

std::vector<Scalar> JetSpace::reduce(const UPoly& u) const
{
    UPoly m = poly_mod(u, d_.affine());
    m.resize(delta(), Scalar::zero(field()));
    return m;
}

Matrix JetSpace::multiplication(const UPoly& u) const
{
    int dl = delta();
    Matrix m(field(), dl, dl);
    UPoly cur = reduce(u);
    UPoly y{Scalar::zero(field()), Scalar::one(field())};
    for (int t = 0; t < dl; ++t) {
        for (int s = 0; s < dl; ++s)
            m.set(s, t, cur[s]);
        cur = reduce(poly_mul(cur, y));
    }
    return m;
}

Matrix JetSpace::jet_of_map(const std::vector<std::vector<BinaryForm>>& g) const
{
    int dl = delta();
    std::size_t rows = g.size(), cols = rows ? g[0].size() : 0;
    Matrix m(field(), rows * dl, cols * dl);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            if (g[i][j].degree() < 0 || g[i][j].is_zero())
                continue;
            m.set_block(i * dl, j * dl, multiplication(g[i][j].dehomogenize()));
        }
    return m;
}

Matrix JetSpace::y_action() const
{
    std::vector<std::vector<BinaryForm>> g(r_, std::vector<BinaryForm>(r_));
    for (int i = 0; i < r_; ++i)
        g[i][i] = BinaryForm::monomial(field(), 1, 1);
    return jet_of_map(g);
}

Matrix JetSpace::jet_matrix(const SheafP1& e, int k) const
{
    int dl = delta();
    std::vector<int> off = section_offsets(e, k);
    Matrix m(field(), dim(), h0(e, k));
    UPoly mono;
    for (int i = 0; i < e.rank(); ++i) {
        int d = e.splitting()[i] + k;
        for (int t = 0; t <= d; ++t) {
            mono.assign(t + 1, Scalar::zero(field()));
            mono[t] = Scalar::one(field());
            std::vector<Scalar> j = reduce(mono);
            for (int s = 0; s < dl; ++s)
                if (!j[s].is_zero())
                    m.set(i * dl + s, off[i] + t, j[s]);
        }
    }
    return m;
}

bool JetSpace::is_submodule(const Subspace& w) const
{
    if (w.dim() == 0)
        return true;
    return w.contains(w.basis() * y_action().transpose());
}

Subspace JetSpace::module_span(const Matrix& rows) const
{
    Matrix yt = y_action().transpose();
    Subspace s = Subspace::span(rows);
    for (;;) {
        if (s.dim() == 0)
            return s;
        Subspace t = sum(s, Subspace::span(s.basis() * yt));
        if (t.dim() == s.dim())
            return s;
        s = t;
    }
}

void ParabolicSheafP1::validate() const
{
    if (divisor.field() != field)
        throw ValidationError("divisor is defined over " + divisor.field().name() + ", expected " + field.name());
    int l = ell();
    if (l < 1)
        throw ValidationError("parabolic structure needs at least one weight");
    if (static_cast<int>(flag.size()) != l + 1)
        throw DimensionError("flag must have " + std::to_string(l + 1) + " steps, got " +
                             std::to_string(flag.size()));
    JetSpace js = jets();
    for (std::size_t i = 0; i < flag.size(); ++i) {
        if (flag[i].ambient() != js.dim() || flag[i].field() != field)
            throw DimensionError("flag step " + std::to_string(i + 1) + " does not live in the jet space of dimension " +
                                 std::to_string(js.dim()));
        if (!js.is_submodule(flag[i]))
            throw ValidationError("flag step " + std::to_string(i + 1) +
                                  " is not stable under multiplication by functions on the divisor");
    }
    if (flag.front().dim() != js.dim())
        throw ValidationError("first flag step must be the whole jet space");
    if (flag.back().dim() != 0)
        throw ValidationError("last flag step must be zero");
    for (std::size_t i = 0; i + 1 < flag.size(); ++i)
        if (flag[i + 1].dim() >= flag[i].dim() || !flag[i].contains(flag[i + 1]))
            throw ValidationError("flag must be strictly decreasing at step " + std::to_string(i + 2));
}

bool ParabolicSheafP1::operator==(const ParabolicSheafP1& o) const
{
    return field == o.field && sheaf == o.sheaf && divisor.same_divisor(o.divisor) && flag == o.flag &&
           weights == o.weights;
}

ParabolicSheafP1 make_parabolic(Field f, const SheafP1& e, const ParabolicDivisor& d,
                                const std::vector<Subspace>& interior, const ParabolicWeights& w)
{
    ParabolicSheafP1 ps{f, e, d, {}, w};
    std::size_t n = static_cast<std::size_t>(e.rank()) * d.degree();
    ps.flag.push_back(Subspace::full(f, n));
    for (const auto& s : interior)
        ps.flag.push_back(s);
    ps.flag.push_back(Subspace(f, n));
    ps.validate();
    return ps;
}

std::vector<ParabolicSheafP1> all_structures(Field f, const SheafP1& e, const ParabolicDivisor& d,
                                             const ParabolicWeights& w, std::uint64_t budget)
{
    JetSpace js(d, e.rank());
    std::vector<Subspace> proper;
    for (const auto& s : enumerate_subspaces(f, js.dim(), std::nullopt, budget))
        if (s.dim() > 0 && s.dim() < js.dim() && js.is_submodule(s))
            proper.push_back(s);
    std::vector<ParabolicSheafP1> out;
    std::vector<Subspace> chain;
    chain.reserve(static_cast<std::size_t>(w.ell()));
    std::function<void(const Subspace*)> extend = [&](const Subspace* above) {
        if (static_cast<int>(chain.size()) == w.ell() - 1) {
            if (out.size() >= budget)
                throw BudgetError("more than " + std::to_string(budget) + " parabolic structures");
            out.push_back(make_parabolic(f, e, d, chain, w));
            return;
        }
        for (const auto& s : proper)
            if (!above || (s.dim() < above->dim() && above->contains(s))) {
                chain.push_back(s);
                extend(&chain.back());
                chain.pop_back();
            }
    };
    extend(nullptr);
    return out;
}

ParabolicSheafP1 twist(const ParabolicSheafP1& ps, int k)
{
    ParabolicSheafP1 out = ps;
    out.sheaf = ps.sheaf.twisted(k);
    return out;
}

static void check_step(const ParabolicSheafP1& ps, int i)
{
    if (i < 1 || i > ps.ell() + 1)
        throw ValidationError("flag step index " + std::to_string(i) + " outside 1.." + std::to_string(ps.ell() + 1));
}

Subspace sections_of_step(const ParabolicSheafP1& ps, int i, int k)
{
    check_step(ps, i);
    std::size_t n = h0(ps.sheaf, k);
    const Subspace& w = ps.flag[i - 1];
    if (w.dim() == w.ambient())
        return Subspace::full(ps.field, n);
    Matrix j = ps.jets().jet_matrix(ps.sheaf, k);
    return kernel(w.annihilator() * j);
}

int step_degree(const ParabolicSheafP1& ps, int i)
{
    check_step(ps, i);
    int codim = static_cast<int>(ps.flag[i - 1].ambient() - ps.flag[i - 1].dim());
    return ps.sheaf.degree() - codim;
}

RatPoly step_hilbert(const ParabolicSheafP1& ps, int i)
{
    int r = ps.rank();
    return RatPoly::linear(r, step_degree(ps, i) + r);
}

SheafP1 step_splitting(const ParabolicSheafP1& ps, int i)
{
    check_step(ps, i);
    // E(-D) in F_i in E bounds the summands between min a - delta and max a.
    int hi = ps.sheaf.max_twist(), lo = ps.sheaf.min_twist() - ps.delta();
    auto count_at_least = [&](int b) {
        // number of summands of degree >= b
        int k = -b;
        return static_cast<int>(sections_of_step(ps, i, k).dim()) -
               static_cast<int>(sections_of_step(ps, i, k - 1).dim());
    };
    std::vector<int> out;
    int above = 0;
    for (int b = hi; b >= lo; --b) {
        int c = count_at_least(b);
        for (int t = above; t < c; ++t)
            out.push_back(b);
        above = c;
    }
    if (static_cast<int>(out.size()) != ps.rank())
        throw InvariantFailure("step splitting recovered rank " + std::to_string(out.size()) + ", expected " +
                               std::to_string(ps.rank()));
    SheafP1 f(out);
    if (f.degree() != step_degree(ps, i))
        throw InvariantFailure("step splitting has degree " + std::to_string(f.degree()) + ", expected " +
                               std::to_string(step_degree(ps, i)));
    return f;
}

int step_regularity(const ParabolicSheafP1& ps)
{
    int reg = regularity(ps.sheaf);
    for (int i = 2; i <= ps.ell() + 1; ++i)
        reg = std::max(reg, regularity(step_splitting(ps, i)));
    return reg;
}

FiltrationIndex filtration_at(const ParabolicWeights& w, const Rational& alpha)
{
    BigInt fl = floor(alpha);
    Rational frac = alpha - Rational(fl);
    if (frac == 0)
        return {1, fl};
    for (int i = 1; i <= w.ell() + 1; ++i)
        if (frac <= w.alpha(i))
            return {i, fl};
    throw InvariantFailure("fractional part outside (0, 1)");
}

FiltrationIndex filtration_at(const ParabolicSheafP1& ps, const Rational& alpha)
{
    return filtration_at(ps.weights, alpha);
}

RatPoly chi_at(const ParabolicSheafP1& ps, const Rational& alpha)
{
    FiltrationIndex fi = filtration_at(ps, alpha);
    RatPoly p = step_hilbert(ps, fi.index);
    Rational shift = Rational(fi.twist) * ps.rank() * ps.delta();
    return p - RatPoly::constant(shift);
}

ParHilbert par_hilbert(const ParabolicSheafP1& ps)
{
    int l = ps.ell();
    const ParabolicWeights& w = ps.weights;
    std::vector<RatPoly> PF(l + 2);
    for (int i = 1; i <= l + 1; ++i)
        PF[i] = step_hilbert(ps, i);
    RatPoly PE = PF[1], PED = PF[l + 1];
    auto G = [&](int i) { return PF[i] - PF[i + 1]; };

    std::vector<RatPoly> v;
    RatPoly e1 = PED;
    for (int i = 1; i <= l; ++i)
        e1 += G(i) * w.alpha(i);
    v.push_back(e1);

    RatPoly e2 = PF[l + 1] * w.alpha(l + 1);
    for (int i = 1; i <= l; ++i)
        e2 += (PF[i] - PF[i + 1]) * w.alpha(i);
    v.push_back(e2);

    RatPoly e3 = PF[1] * w.alpha(1);
    for (int i = 2; i <= l + 1; ++i)
        e3 += PF[i] * w.eps(i);
    v.push_back(e3);

    RatPoly e4 = PE * w.alpha(l + 1);
    for (int i = 2; i <= l + 1; ++i)
        e4 += (PF[i] - PE) * w.eps(i);
    v.push_back(e4);

    RatPoly e5 = PE;
    for (int i = 2; i <= l + 1; ++i)
        e5 = e5 - (PE - PF[i]) * w.eps(i);
    v.push_back(e5);

    ParabolicType ty = type_of(ps);
    RatPoly e6 = ty.P;
    for (int i = 2; i <= l + 1; ++i)
        e6 = e6 - ty.Pi[i - 2] * w.eps(i);
    v.push_back(e6);

    // Integral over [0, 1] of chi(E_alpha), sampled once per interval of constancy.
    RatPoly integral;
    for (int i = 1; i <= l + 1; ++i) {
        Rational mid = (w.alpha(i - 1) + w.alpha(i)) / 2;
        integral += chi_at(ps, mid) * w.eps(i);
    }
    v.push_back(integral);

    for (std::size_t t = 1; t < v.size(); ++t)
        if (v[t] != v[0])
            throw InvariantFailure("parabolic Hilbert polynomial expressions disagree: " + v[0].str() + " vs " +
                                   v[t].str() + " (variant " + std::to_string(t + 1) + ")");
    return {v[0], v};
}

ParDegree par_degree_slope(const ParabolicSheafP1& ps)
{
    int l = ps.ell();
    int r = ps.rank();
    // a-coefficient form: degree part of chi(E(-D)) plus weighted lengths of the graded pieces
    Rational deg = step_hilbert(ps, l + 1).coeff(0);
    for (int i = 1; i <= l; ++i)
        deg += ps.weights.alpha(i) * Rational(static_cast<long long>(ps.flag[i - 1].dim() - ps.flag[i].dim()));
    // integral of the slope of E_alpha
    Rational mu = 0;
    for (int i = 1; i <= l + 1; ++i) {
        Rational mid = (ps.weights.alpha(i - 1) + ps.weights.alpha(i)) / 2;
        mu += ps.weights.eps(i) * chi_at(ps, mid).coeff(0) / r;
    }
    if (mu * r != deg)
        throw InvariantFailure("parabolic degree " + to_string(deg) + " disagrees with integrated slope " +
                               to_string(mu));
    Rational ph = par_hilbert(ps).value.coeff(0);
    if (ph != deg)
        throw InvariantFailure("parabolic degree disagrees with the parabolic Hilbert polynomial");
    return {deg, mu};
}

ParabolicType type_of(const ParabolicSheafP1& ps)
{
    ParabolicType t;
    t.P = step_hilbert(ps, 1);
    for (int i = 2; i <= ps.ell() + 1; ++i)
        t.Pi.push_back(t.P - step_hilbert(ps, i));
    t.weights = ps.weights;
    return t;
}

} // namespace parakron
