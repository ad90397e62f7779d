#include "parakron/field.hpp"
#include "parakron/errors.hpp"

#include <cctype>

namespace parakron {

namespace {

std::string trim(const std::string& s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

BigInt parse_int(const std::string& raw)
{
    std::string s = trim(raw);
    if (s.empty())
        throw ValidationError("empty integer literal");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size())
        throw ValidationError("malformed integer: " + raw);
    for (std::size_t j = i; j < s.size(); ++j)
        if (!std::isdigit(static_cast<unsigned char>(s[j])))
            throw ValidationError("malformed integer: " + raw);
    BigInt v(s.substr(i));
    return s[0] == '-' ? BigInt(-v) : v;
}

std::uint32_t reduce(const BigInt& v, std::uint32_t p)
{
    BigInt r = v % p;
    if (r < 0)
        r += p;
    return static_cast<std::uint32_t>(r);
}

} // namespace

Rational parse_rational(const std::string& raw)
{
    std::string s = trim(raw);
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        BigInt num = parse_int(s.substr(0, slash));
        BigInt den = parse_int(s.substr(slash + 1));
        if (den == 0)
            throw ValidationError("zero denominator: " + raw);
        if (den < 0) {
            num = -num;
            den = -den;
        }
        return Rational(num, den);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string frac = s.substr(dot + 1);
        std::string whole = s.substr(0, dot);
        bool neg = !whole.empty() && whole[0] == '-';
        if (whole.empty() || whole == "-" || whole == "+")
            whole += "0";
        BigInt w = parse_int(whole);
        if (frac.empty())
            return Rational(w);
        BigInt f = parse_int(frac);
        if (f < 0)
            throw ValidationError("malformed decimal: " + raw);
        BigInt scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i)
            scale *= 10;
        Rational q(w);
        Rational fr(f, scale);
        return neg ? q - fr : q + fr;
    }
    return Rational(parse_int(s));
}

std::string to_string(const Rational& q)
{
    const BigInt& n = boost::multiprecision::numerator(q);
    const BigInt& d = boost::multiprecision::denominator(q);
    if (d == 1)
        return n.str();
    return n.str() + "/" + d.str();
}

BigInt floor(const Rational& q)
{
    BigInt n = boost::multiprecision::numerator(q);
    BigInt d = boost::multiprecision::denominator(q);
    BigInt f = n / d;
    if (n < 0 && f * d != n)
        f -= 1;
    return f;
}

bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

Field Field::prime(std::uint32_t p)
{
    if (!is_prime(p) || p >= (1u << 31))
        throw ValidationError("field characteristic must be a prime below 2^31, got " +
                              std::to_string(p));
    return Field{p};
}

Field Field::parse(const std::string& raw)
{
    std::string s = trim(raw);
    if (s == "Q" || s == "QQ" || s == "rationals")
        return rationals();
    std::string digits;
    if (s.rfind("GF(", 0) == 0 && s.back() == ')')
        digits = s.substr(3, s.size() - 4);
    else if (!s.empty() && (s[0] == 'F' || s[0] == 'p'))
        digits = s.substr(1);
    else
        digits = s;
    if (digits.empty() || digits.size() > 9)
        throw ValidationError("unrecognized field: " + raw);
    for (char c : digits)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw ValidationError("unrecognized field: " + raw);
    return prime(static_cast<std::uint32_t>(std::stoul(digits)));
}

std::string Field::name() const
{
    return finite() ? "F" + std::to_string(p) : "Q";
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p)
{
    std::int64_t t = 0, nt = 1, r = p, nr = a % p;
    while (nr != 0) {
        std::int64_t q = r / nr;
        std::int64_t tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1)
        throw std::domain_error("division by zero in GF(" + std::to_string(p) + ")");
    if (t < 0)
        t += p;
    return static_cast<std::uint32_t>(t);
}

Scalar::Scalar(Field f, long long v) : f_(f)
{
    if (f.finite()) {
        long long r = v % static_cast<long long>(f.p);
        if (r < 0)
            r += f.p;
        r_ = static_cast<std::uint32_t>(r);
    } else {
        q_ = v;
    }
}

Scalar::Scalar(Field f, const Rational& q) : f_(f)
{
    if (f.finite()) {
        std::uint32_t n = reduce(boost::multiprecision::numerator(q), f.p);
        std::uint32_t d = reduce(boost::multiprecision::denominator(q), f.p);
        if (d == 0)
            throw ValidationError("denominator " + to_string(q) + " not invertible in " + f.name());
        r_ = static_cast<std::uint32_t>(static_cast<std::uint64_t>(n) * inv_mod(d, f.p) % f.p);
    } else {
        q_ = q;
    }
}

Scalar Scalar::residue(Field f, std::uint32_t r)
{
    Scalar s;
    s.f_ = f;
    s.r_ = r % f.p;
    return s;
}

Scalar Scalar::parse(const std::string& raw, Field f)
{
    std::string s = trim(raw);
    auto pos = s.find("mod");
    if (pos != std::string::npos) {
        BigInt v = parse_int(s.substr(0, pos));
        BigInt p = parse_int(s.substr(pos + 3));
        if (!f.finite() || p != f.p)
            throw ValidationError("scalar '" + raw + "' does not belong to " + f.name());
        return residue(f, reduce(v, f.p));
    }
    return Scalar(f, parse_rational(s));
}

bool Scalar::is_zero() const
{
    return f_.finite() ? r_ == 0 : q_ == 0;
}

bool Scalar::is_one() const
{
    return f_.finite() ? r_ == 1 : q_ == 1;
}

void Scalar::check(const Scalar& o) const
{
    if (f_ != o.f_)
        throw ValidationError("mixed fields: " + f_.name() + " and " + o.f_.name());
}

Scalar Scalar::operator+(const Scalar& o) const
{
    check(o);
    Scalar s;
    s.f_ = f_;
    if (f_.finite())
        s.r_ = static_cast<std::uint32_t>((static_cast<std::uint64_t>(r_) + o.r_) % f_.p);
    else
        s.q_ = q_ + o.q_;
    return s;
}

Scalar Scalar::operator-(const Scalar& o) const
{
    check(o);
    Scalar s;
    s.f_ = f_;
    if (f_.finite())
        s.r_ = static_cast<std::uint32_t>((static_cast<std::uint64_t>(r_) + f_.p - o.r_) % f_.p);
    else
        s.q_ = q_ - o.q_;
    return s;
}

Scalar Scalar::operator*(const Scalar& o) const
{
    check(o);
    Scalar s;
    s.f_ = f_;
    if (f_.finite())
        s.r_ = static_cast<std::uint32_t>(static_cast<std::uint64_t>(r_) * o.r_ % f_.p);
    else
        s.q_ = q_ * o.q_;
    return s;
}

Scalar Scalar::inverse() const
{
    if (is_zero())
        throw std::domain_error("division by zero");
    Scalar s;
    s.f_ = f_;
    if (f_.finite())
        s.r_ = inv_mod(r_, f_.p);
    else
        s.q_ = 1 / q_;
    return s;
}

Scalar Scalar::operator/(const Scalar& o) const
{
    check(o);
    return *this * o.inverse();
}

Scalar Scalar::operator-() const
{
    return Scalar::zero(f_) - *this;
}

bool Scalar::operator==(const Scalar& o) const
{
    if (f_ != o.f_)
        return false;
    return f_.finite() ? r_ == o.r_ : q_ == o.q_;
}

std::string Scalar::str() const
{
    if (f_.finite())
        return std::to_string(r_) + " mod " + std::to_string(f_.p);
    return to_string(q_);
}

} // namespace parakron
