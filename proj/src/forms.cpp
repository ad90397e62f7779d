#include "parakron/forms.hpp"
#include "parakron/errors.hpp"

#include <optional>

namespace parakron {

BinaryForm::BinaryForm(Field f, int degree) : f_(f), deg_(degree)
{
    if (degree < 0)
        throw ValidationError("binary form of negative degree");
    c_.assign(degree + 1, Scalar::zero(f));
}

BinaryForm::BinaryForm(Field f, std::vector<Scalar> coeffs) : f_(f), deg_(static_cast<int>(coeffs.size()) - 1), c_(std::move(coeffs))
{
    if (c_.empty())
        throw ValidationError("binary form needs at least one coefficient");
    for (const auto& s : c_)
        if (s.field() != f)
            throw ValidationError("binary form coefficient from another field");
}

BinaryForm BinaryForm::monomial(Field f, int degree, int ypow)
{
    BinaryForm g(f, degree);
    g.c_[ypow] = Scalar::one(f);
    return g;
}

BinaryForm BinaryForm::from_ints(Field f, const std::vector<long long>& c)
{
    std::vector<Scalar> s;
    for (long long v : c)
        s.emplace_back(f, v);
    return BinaryForm(f, std::move(s));
}

bool BinaryForm::is_zero() const
{
    for (const auto& s : c_)
        if (!s.is_zero())
            return false;
    return true;
}

BinaryForm BinaryForm::operator*(const BinaryForm& o) const
{
    BinaryForm r(f_, deg_ + o.deg_);
    for (int i = 0; i <= deg_; ++i) {
        if (c_[i].is_zero())
            continue;
        for (int j = 0; j <= o.deg_; ++j)
            if (!o.c_[j].is_zero())
                r.c_[i + j] += c_[i] * o.c_[j];
    }
    return r;
}

BinaryForm BinaryForm::operator+(const BinaryForm& o) const
{
    if (deg_ != o.deg_)
        throw ValidationError("adding binary forms of different degrees");
    BinaryForm r = *this;
    for (int i = 0; i <= deg_; ++i)
        r.c_[i] += o.c_[i];
    return r;
}

BinaryForm BinaryForm::operator-(const BinaryForm& o) const
{
    return *this + o.scaled(Scalar(f_, -1LL));
}

BinaryForm BinaryForm::scaled(const Scalar& s) const
{
    BinaryForm r = *this;
    for (auto& c : r.c_)
        c *= s;
    return r;
}

bool BinaryForm::operator==(const BinaryForm& o) const
{
    return f_ == o.f_ && deg_ == o.deg_ && c_ == o.c_;
}

std::vector<Scalar> BinaryForm::dehomogenize() const
{
    UPoly p = c_;
    trim(p);
    return p;
}

BinaryForm BinaryForm::normalized() const
{
    for (const auto& s : c_)
        if (!s.is_zero())
            return scaled(s.inverse());
    return *this;
}

void trim(UPoly& a)
{
    while (!a.empty() && a.back().is_zero())
        a.pop_back();
}

int poly_degree(const UPoly& a)
{
    UPoly b = a;
    trim(b);
    return static_cast<int>(b.size()) - 1;
}

UPoly poly_mul(const UPoly& a, const UPoly& b)
{
    if (a.empty() || b.empty())
        return {};
    Field f = a[0].field();
    UPoly r(a.size() + b.size() - 1, Scalar::zero(f));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

UPoly poly_mod(const UPoly& a, const UPoly& m)
{
    UPoly mm = m;
    trim(mm);
    if (mm.empty())
        throw std::domain_error("polynomial division by zero");
    UPoly r = a;
    trim(r);
    Scalar lead_inv = mm.back().inverse();
    while (r.size() >= mm.size()) {
        Scalar c = r.back() * lead_inv;
        std::size_t shift = r.size() - mm.size();
        for (std::size_t i = 0; i < mm.size(); ++i)
            r[shift + i] -= c * mm[i];
        trim(r);
    }
    return r;
}

UPoly poly_gcd(UPoly a, UPoly b)
{
    trim(a);
    trim(b);
    while (!b.empty()) {
        UPoly r = poly_mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (a.empty())
        return a;
    Scalar inv = a.back().inverse();
    for (auto& c : a)
        c *= inv;
    return a;
}

bool have_common_zero(const std::vector<BinaryForm>& forms)
{
    bool all_zero_at_inf = true;
    UPoly g;
    for (const auto& f : forms) {
        if (f.degree() < 0)
            continue;
        if (!f.at_infinity().is_zero())
            all_zero_at_inf = false;
        g = poly_gcd(g, f.dehomogenize());
    }
    if (all_zero_at_inf)
        return true;
    return g.empty() || g.size() > 1;
}

BinaryForm form_determinant(const std::vector<std::vector<BinaryForm>>& m)
{
    std::size_t n = m.size();
    if (n == 0)
        throw ValidationError("determinant of an empty matrix");
    if (n == 1)
        return m[0][0];
    std::optional<BinaryForm> acc;
    for (std::size_t j = 0; j < n; ++j) {
        if (m[0][j].degree() < 0 || m[0][j].is_zero())
            continue;
        std::vector<std::vector<BinaryForm>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<BinaryForm> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j)
                    row.push_back(m[i][k]);
            minor.push_back(std::move(row));
        }
        BinaryForm d = form_determinant(minor);
        if (d.degree() < 0)
            continue;
        BinaryForm term = m[0][j] * d;
        if (j % 2 == 1)
            term = term.scaled(Scalar(term.field(), -1LL));
        acc = acc ? *acc + term : term;
    }
    return acc ? *acc : BinaryForm();
}

} // namespace parakron
