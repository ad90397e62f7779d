#pragma once

#include "parakron/field.hpp"

#include <string>
#include <vector>

namespace parakron {

// Polynomial in the twist variable k with rational coefficients, low degree first.
class RatPoly
{
  public:
    RatPoly() = default;
    explicit RatPoly(std::vector<Rational> c);
    static RatPoly linear(const Rational& lead, const Rational& constant);
    static RatPoly constant(const Rational& c);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    Rational coeff(int i) const;
    Rational operator()(const Rational& k) const;

    RatPoly operator+(const RatPoly& o) const;
    RatPoly operator-(const RatPoly& o) const;
    RatPoly operator*(const Rational& s) const;
    RatPoly& operator+=(const RatPoly& o) { return *this = *this + o; }
    bool operator==(const RatPoly& o) const { return c_ == o.c_; }
    bool operator!=(const RatPoly& o) const { return c_ != o.c_; }

    // -1, 0, 1 for lexicographic comparison from the leading coefficient down
    int compare(const RatPoly& o) const;
    std::string str() const; // "2k + 3/4"

  private:
    void trim();
    std::vector<Rational> c_;
};

} // namespace parakron
