#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace parakron {

using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                              boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                            boost::multiprecision::et_off>;

Rational parse_rational(const std::string& s);
std::string to_string(const Rational& q);
BigInt floor(const Rational& q);

// GF(p) for p > 0, the rationals for p == 0.
struct Field
{
    std::uint32_t p = 0;

    static Field rationals() { return Field{0}; }
    static Field prime(std::uint32_t p);
    static Field parse(const std::string& s); // "Q", "F5", "GF(5)"

    bool finite() const { return p != 0; }
    std::string name() const;
    bool operator==(const Field& o) const { return p == o.p; }
    bool operator!=(const Field& o) const { return p != o.p; }
};

bool is_prime(std::uint64_t n);

class Scalar
{
  public:
    Scalar() = default;
    Scalar(Field f, long long v);
    Scalar(Field f, const Rational& q);

    static Scalar zero(Field f) { return Scalar(f, 0LL); }
    static Scalar one(Field f) { return Scalar(f, 1LL); }
    static Scalar residue(Field f, std::uint32_t r);
    // Accepts "3/4", "-2", "2 mod 5". Plain integers and fractions are
    // reduced into a finite field when one is requested.
    static Scalar parse(const std::string& s, Field f);

    Field field() const { return f_; }
    bool is_zero() const;
    bool is_one() const;
    std::uint32_t residue() const { return r_; }
    const Rational& rational() const { return q_; }

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar inverse() const;

    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    std::string str() const;

  private:
    void check(const Scalar& o) const;

    Field f_;
    std::uint32_t r_ = 0;
    Rational q_;
};

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p);

} // namespace parakron
