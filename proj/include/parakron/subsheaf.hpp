#pragma once

#include "parakron/parabolic.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace parakron {

// Map of split sheaves sum_j O(src_j) -> sum_i O(tgt_i); entry [i][j] has degree
// tgt_i - src_j, or is a placeholder when that is negative.
using FormMatrix = std::vector<std::vector<BinaryForm>>;

FormMatrix zero_form_matrix(Field f, const std::vector<int>& src, const std::vector<int>& tgt);
FormMatrix compose(const FormMatrix& a, const FormMatrix& b); // a * b
void check_form_matrix(const FormMatrix& m, const std::vector<int>& src, const std::vector<int>& tgt);

// Induced map H^0(src(k)) -> H^0(tgt(k)).
Matrix sections_map(Field f, const std::vector<int>& src, const std::vector<int>& tgt, const FormMatrix& m, int k);
std::vector<int> twist_offsets(const std::vector<int>& twists, int k);

// Reads a section vector of H^0(sum O(twists)(k)) as a column of forms.
std::vector<BinaryForm> section_to_forms(Field f, const std::vector<int>& twists, int k, const Matrix& row);

struct Generator
{
    int k;          // the generator is a section of the k-th twist
    Matrix section; // one row
};

// Minimal homogeneous generators of a graded free submodule of sum_k H^0(O(twists)(k)),
// scanning k upward from k_lo until `rank` generators are found.
std::vector<Generator> free_basis(Field f, const std::vector<int>& twists,
                                  const std::function<Subspace(int)>& sections, int rank, int k_lo, int k_hi);

// Saturated subsheaf F -> E.
struct Subbundle
{
    SheafP1 source;
    FormMatrix map; // [rank E][rank F]
};

void validate_subbundle(Field f, const SheafP1& e, const Subbundle& sub);
Subbundle identity_subbundle(Field f, const SheafP1& e);

// Quotient E -> Q of a saturated subsheaf; Q is split again.
struct QuotientBundle
{
    SheafP1 target;
    FormMatrix map; // [rank Q][rank E]
};

QuotientBundle quotient_bundle(Field f, const SheafP1& e, const Subbundle& sub);
// Kernel of a surjection E -> O(c) given by a row of forms.
Subbundle kernel_subbundle(Field f, const SheafP1& e, const std::vector<BinaryForm>& phi, int c);

// Drops repeated consecutive steps, keeping the largest index of each run.
ParabolicSheafP1 collapse_levels(Field f, const SheafP1& e, const ParabolicDivisor& d,
                                 const std::vector<Subspace>& levels, const ParabolicWeights& w);

ParabolicSheafP1 induced_structure(const ParabolicSheafP1& ps, const Subbundle& sub);
ParabolicSheafP1 quotient_structure(const ParabolicSheafP1& ps, const Subbundle& sub,
                                    QuotientBundle* q_out = nullptr);

struct Destabilizer
{
    Subbundle sub;
    ParabolicSheafP1 induced;
    Rational par_mu;
};

struct OracleResult
{
    bool semistable = true, stable = true;
    Rational par_mu;                         // of the input
    std::optional<Destabilizer> witness;     // first subsheaf of maximal slope when not semistable
    std::optional<Destabilizer> equal_slope; // first proper subsheaf of equal slope of minimal rank
    std::optional<Destabilizer> equal_slope_last;
    std::uint64_t candidates = 0;
};

struct OracleCandidate
{
    int rank = 0;
    int degree = 0;
    Rational par_mu; // of the induced structure
    std::function<Subbundle()> make;
};

// Candidates are ordered by rank, then by degree (largest first), then by the
// odometer order of the normalized coefficient vector.
std::uint64_t oracle_candidate_count(const ParabolicSheafP1& ps);
// fn returns false to stop.
void for_each_oracle_candidate(const ParabolicSheafP1& ps, const std::function<bool(const OracleCandidate&)>& fn,
                               std::uint64_t budget = default_budget());
OracleResult par_semistable_oracle(const ParabolicSheafP1& ps, std::uint64_t budget = default_budget());

std::vector<ParabolicSheafP1> par_gr(const ParabolicSheafP1& ps, bool reverse = false,
                                     std::uint64_t budget = default_budget());

// Parabolic morphisms E -> E' (maps with f(E_alpha) in E'_alpha), as a basis.
std::vector<FormMatrix> parabolic_homs(const ParabolicSheafP1& a, const ParabolicSheafP1& b);
std::optional<FormMatrix> find_isomorphism(const ParabolicSheafP1& a, const ParabolicSheafP1& b,
                                           std::uint64_t budget = default_budget());
bool isomorphic(const ParabolicSheafP1& a, const ParabolicSheafP1& b, std::uint64_t budget = default_budget());

// Coefficient vector of a form matrix over its monomial bases, row-major.
Matrix flatten(const FormMatrix& m);
FormMatrix unflatten(Field f, const std::vector<int>& src, const std::vector<int>& tgt, const Matrix& row);

} // namespace parakron
