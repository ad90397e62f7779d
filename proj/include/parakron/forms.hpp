#pragma once

#include "parakron/field.hpp"

#include <vector>

namespace parakron {

// Homogeneous form in x, y; coefficient of x^{degree-i} y^i at index i.
class BinaryForm
{
  public:
    BinaryForm() = default; // placeholder for an entry of negative degree
    BinaryForm(Field f, int degree); // zero form of the given degree
    BinaryForm(Field f, std::vector<Scalar> coeffs);

    static BinaryForm monomial(Field f, int degree, int ypow);
    static BinaryForm from_ints(Field f, const std::vector<long long>& c);

    Field field() const { return f_; }
    int degree() const { return deg_; }
    const std::vector<Scalar>& coeffs() const { return c_; }
    const Scalar& coeff(int i) const { return c_[i]; }
    bool is_zero() const;

    BinaryForm operator*(const BinaryForm& o) const;
    BinaryForm operator+(const BinaryForm& o) const;
    BinaryForm operator-(const BinaryForm& o) const;
    BinaryForm scaled(const Scalar& s) const;
    bool operator==(const BinaryForm& o) const;
    bool operator!=(const BinaryForm& o) const { return !(*this == o); }

    // value at [0:1], i.e. the coefficient of y^degree
    const Scalar& at_infinity() const { return c_.back(); }
    // f(1, y) as a polynomial in y, low degree first
    std::vector<Scalar> dehomogenize() const;
    // scale so that the first nonzero coefficient is 1
    BinaryForm normalized() const;

  private:
    Field f_;
    int deg_ = -1;
    std::vector<Scalar> c_;
};

// Univariate polynomials in y, low degree first, trimmed of trailing zeros.
using UPoly = std::vector<Scalar>;

void trim(UPoly& a);
UPoly poly_mul(const UPoly& a, const UPoly& b);
UPoly poly_mod(const UPoly& a, const UPoly& m);
UPoly poly_gcd(UPoly a, UPoly b); // monic, empty for gcd(0,0)
int poly_degree(const UPoly& a);

// Binary forms have a common zero on P^1 when their dehomogenizations
// share a root or they all vanish at [0:1].
bool have_common_zero(const std::vector<BinaryForm>& forms);

// Determinant of a square matrix of forms. A default-constructed form
// (degree -1) stands for an entry forced to vanish by degree.
BinaryForm form_determinant(const std::vector<std::vector<BinaryForm>>& m);

} // namespace parakron
