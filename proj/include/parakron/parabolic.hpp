#pragma once

#include "parakron/forms.hpp"
#include "parakron/matrix.hpp"
#include "parakron/polynomial.hpp"
#include "parakron/sheaf.hpp"

#include <vector>

namespace parakron {

// 0 < alpha_1 < ... < alpha_l < 1, with alpha_0 = 0 and alpha_{l+1} = 1 implied.
class ParabolicWeights
{
  public:
    ParabolicWeights() = default;
    explicit ParabolicWeights(std::vector<Rational> alphas);

    int ell() const { return static_cast<int>(a_.size()); }
    const std::vector<Rational>& alphas() const { return a_; }
    Rational alpha(int i) const; // i in 0..ell+1
    Rational eps(int i) const;   // i in 1..ell+1
    std::vector<Rational> eps_all() const;
    bool operator==(const ParabolicWeights& o) const { return a_ == o.a_; }
    bool operator!=(const ParabolicWeights& o) const { return a_ != o.a_; }

  private:
    std::vector<Rational> a_;
};

class ParabolicDivisor
{
  public:
    ParabolicDivisor() = default;
    explicit ParabolicDivisor(BinaryForm f);

    const BinaryForm& form() const { return f_; }
    int degree() const { return f_.degree(); }
    Field field() const { return f_.field(); }
    // f(1, y), of exact degree delta
    const UPoly& affine() const { return aff_; }
    bool same_divisor(const ParabolicDivisor& o) const; // forms proportional

  private:
    BinaryForm f_;
    UPoly aff_;
};

// V = (k[y]/f(1,y))^r with basis 1, y, ..., y^{delta-1} per summand.
class JetSpace
{
  public:
    JetSpace(const ParabolicDivisor& d, int rank);

    Field field() const { return d_.field(); }
    int rank() const { return r_; }
    int delta() const { return d_.degree(); }
    std::size_t dim() const { return static_cast<std::size_t>(r_) * d_.degree(); }

    std::vector<Scalar> reduce(const UPoly& u) const;
    // multiplication by u on one copy of k[y]/f, delta x delta
    Matrix multiplication(const UPoly& u) const;
    // O_D-linear map of split modules given by a matrix of forms
    Matrix jet_of_map(const std::vector<std::vector<BinaryForm>>& g) const;
    Matrix y_action() const;
    // jets of H^0(E(k)) in the basis above; sections are dehomogenized at x = 1
    Matrix jet_matrix(const SheafP1& e, int k) const;
    bool is_submodule(const Subspace& w) const;
    Subspace module_span(const Matrix& rows) const;

  private:
    ParabolicDivisor d_;
    int r_;
};

struct ParabolicSheafP1
{
    Field field;
    SheafP1 sheaf;
    ParabolicDivisor divisor;
    std::vector<Subspace> flag; // W_1 = V, ..., W_{l+1} = 0
    ParabolicWeights weights;

    int ell() const { return weights.ell(); }
    int rank() const { return sheaf.rank(); }
    int delta() const { return divisor.degree(); }
    JetSpace jets() const { return JetSpace(divisor, sheaf.rank()); }
    void validate() const;
    bool operator==(const ParabolicSheafP1& o) const;
};

// Builds the full chain from the interior steps W_2, ..., W_l and validates.
ParabolicSheafP1 make_parabolic(Field f, const SheafP1& e, const ParabolicDivisor& d,
                                const std::vector<Subspace>& interior, const ParabolicWeights& w);

// Every strict chain of proper nonzero submodules of the jet space of the right length.
std::vector<ParabolicSheafP1> all_structures(Field f, const SheafP1& e, const ParabolicDivisor& d,
                                             const ParabolicWeights& w, std::uint64_t budget = default_budget());

ParabolicSheafP1 twist(const ParabolicSheafP1& ps, int k);

Subspace sections_of_step(const ParabolicSheafP1& ps, int i, int k);
int step_degree(const ParabolicSheafP1& ps, int i);
RatPoly step_hilbert(const ParabolicSheafP1& ps, int i);
SheafP1 step_splitting(const ParabolicSheafP1& ps, int i);
int step_regularity(const ParabolicSheafP1& ps);

struct ParHilbert
{
    RatPoly value;
    std::vector<RatPoly> variants; // the displayed chain of expressions, then the integral
};
ParHilbert par_hilbert(const ParabolicSheafP1& ps);

struct ParDegree
{
    Rational par_deg, par_mu;
};
ParDegree par_degree_slope(const ParabolicSheafP1& ps);

struct FiltrationIndex
{
    int index = 1;
    BigInt twist = 0;
    bool operator==(const FiltrationIndex& o) const { return index == o.index && twist == o.twist; }
};
FiltrationIndex filtration_at(const ParabolicWeights& w, const Rational& alpha);
FiltrationIndex filtration_at(const ParabolicSheafP1& ps, const Rational& alpha);
// Hilbert polynomial of E_alpha.
RatPoly chi_at(const ParabolicSheafP1& ps, const Rational& alpha);

struct ParabolicType
{
    RatPoly P;
    std::vector<RatPoly> Pi; // P_i = Hilbert polynomial of E/F_{i+1}, i = 1..l
    ParabolicWeights weights;
    bool operator==(const ParabolicType& o) const { return P == o.P && Pi == o.Pi && weights == o.weights; }
};
ParabolicType type_of(const ParabolicSheafP1& ps);

} // namespace parakron
