#pragma once

#include "parakron/forms.hpp"
#include "parakron/matrix.hpp"
#include "parakron/polynomial.hpp"

#include <string>
#include <vector>

namespace parakron {

// E = O(a_1) + ... + O(a_r) on P^1, a_1 >= ... >= a_r.
class SheafP1
{
  public:
    SheafP1() = default;
    explicit SheafP1(std::vector<int> splitting); // sorted on construction

    const std::vector<int>& splitting() const { return a_; }
    int rank() const { return static_cast<int>(a_.size()); }
    int degree() const;
    int max_twist() const { return a_.front(); }
    int min_twist() const { return a_.back(); }
    SheafP1 twisted(int k) const;
    std::string str() const; // "O(1)+O(0)"
    bool operator==(const SheafP1& o) const { return a_ == o.a_; }
    bool operator!=(const SheafP1& o) const { return a_ != o.a_; }

  private:
    std::vector<int> a_;
};

inline int forms_dim(int d) { return d < 0 ? 0 : d + 1; }

int h0(const SheafP1& e, int k);
RatPoly hilbert_polynomial(const SheafP1& e);
int regularity(const SheafP1& e);
bool is_regular(const SheafP1& e, int n);

// Offset of each summand's block inside H^0(E(k)).
std::vector<int> section_offsets(const SheafP1& e, int k);

// Multiplication by g: S_d -> S_{d + deg g} in monomial bases.
Matrix form_multiplication(const BinaryForm& g, int d);
// Multiplication by g on every summand: H^0(E(k)) -> H^0(E(k + deg g)).
Matrix multiplication_matrix(Field f, const SheafP1& e, int k, const BinaryForm& g);

struct MultMap
{
    std::vector<BinaryForm> h_basis;
    std::vector<Matrix> alpha;
};

std::vector<BinaryForm> monomial_basis(Field f, int degree);
MultMap mult_map(Field f, const SheafP1& e, int n, int m);

// Map of split graded free modules  sum_j S(b_j) -> sum_i S(a_i); entry (i, j)
// is a form of degree a_i - b_j, or a placeholder when that degree is negative.
struct GradedPresentation
{
    Field field;
    std::vector<int> source_twists;
    std::vector<int> target_twists;
    std::vector<std::vector<BinaryForm>> entries; // [target][source]

    void validate() const;
};

// Degree-t component of the map, from sum_j S_{t+b_j} to sum_i S_{t+a_i}.
Matrix graded_piece(const GradedPresentation& p, int t);
std::size_t cokernel_dim(const GradedPresentation& p, int t);

// Removes pairs of generators and relations joined by a unit entry.
GradedPresentation minimize(const GradedPresentation& p);

struct SaturatedPiece
{
    std::size_t dim = 0;
    int level = 0;
};

// Dimension of Hom((x^l, y^l), N)_k for the cokernel N.
std::size_t pairing_dim(const GradedPresentation& p, int k, int l);
// Dimension of the part of N_k killed by x^l and y^l.
std::size_t torsion_dim(const GradedPresentation& p, int k, int l);
int default_level(const GradedPresentation& p);
SaturatedPiece saturated_piece(const GradedPresentation& p, int k, int level, int doublings = 6);

SheafP1 recover_splitting(const GradedPresentation& p);

} // namespace parakron
