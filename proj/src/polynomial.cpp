#include "parakron/polynomial.hpp"

#include <algorithm>

namespace parakron {

RatPoly::RatPoly(std::vector<Rational> c) : c_(std::move(c))
{
    trim();
}

RatPoly RatPoly::linear(const Rational& lead, const Rational& constant)
{
    return RatPoly({constant, lead});
}

RatPoly RatPoly::constant(const Rational& c)
{
    return RatPoly({c});
}

void RatPoly::trim()
{
    while (!c_.empty() && c_.back() == 0)
        c_.pop_back();
}

Rational RatPoly::coeff(int i) const
{
    return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : Rational(0);
}

Rational RatPoly::operator()(const Rational& k) const
{
    Rational v = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
        v = v * k + *it;
    return v;
}

RatPoly RatPoly::operator+(const RatPoly& o) const
{
    std::vector<Rational> c(std::max(c_.size(), o.c_.size()), Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i)
        c[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i)
        c[i] += o.c_[i];
    return RatPoly(std::move(c));
}

RatPoly RatPoly::operator-(const RatPoly& o) const
{
    return *this + o * Rational(-1);
}

RatPoly RatPoly::operator*(const Rational& s) const
{
    std::vector<Rational> c = c_;
    for (auto& v : c)
        v *= s;
    return RatPoly(std::move(c));
}

int RatPoly::compare(const RatPoly& o) const
{
    int top = std::max(degree(), o.degree());
    for (int i = top; i >= 0; --i) {
        Rational a = coeff(i), b = o.coeff(i);
        if (a != b)
            return a < b ? -1 : 1;
    }
    return 0;
}

std::string RatPoly::str() const
{
    if (c_.empty())
        return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
        Rational c = c_[i];
        if (c == 0)
            continue;
        bool neg = c < 0;
        Rational a = neg ? Rational(-c) : c;
        if (out.empty())
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        std::string mono = i == 0 ? "" : (i == 1 ? "k" : "k^" + std::to_string(i));
        if (i == 0 || a != 1)
            out += to_string(a);
        out += mono;
    }
    return out;
}

} // namespace parakron
