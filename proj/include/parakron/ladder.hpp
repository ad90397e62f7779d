#pragma once

#include "parakron/matrix.hpp"
#include "parakron/parabolic.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace parakron {

// alpha[h] : M_1 -> M_2 for the h-th basis element of the multiplicity space.
struct KroneckerModule
{
    Field field;
    std::size_t d1 = 0, d2 = 0;
    std::vector<Matrix> alpha;

    void validate(std::size_t h) const;
    bool operator==(const KroneckerModule& o) const;
};

// Vertices j_1, j_2 for j = 1..l+1 (stored 0-based). top[j] : M_{(j+1)1} -> M_{j1},
// bottom[j] : M_{(j+1)2} -> M_{j2}.
struct FilteredKroneckerModule
{
    Field field;
    int ell = 1;
    std::size_t h = 0;
    std::vector<KroneckerModule> modules;
    std::vector<Matrix> top, bottom;
    std::optional<ParabolicWeights> weights;

    std::size_t top_dim(int j) const { return modules[j].d1; }
    std::size_t bottom_dim(int j) const { return modules[j].d2; }
    std::size_t total_dim() const;
    std::vector<std::size_t> dims() const; // d_11, d_12, d_21, d_22, ...
    void check_shapes() const;
    bool operator==(const FilteredKroneckerModule& o) const;
};

struct LadderReport
{
    bool valid = true;
    bool injective = true;
    std::vector<std::string> failures;
};

LadderReport validate(const FilteredKroneckerModule& m);

struct SubRepresentation
{
    std::vector<Subspace> top, bottom; // 0-based, one per level

    std::size_t total_dim() const;
    std::vector<std::size_t> dims() const;
    bool is_zero() const { return total_dim() == 0; }
    bool operator==(const SubRepresentation& o) const { return top == o.top && bottom == o.bottom; }
    bool operator<(const SubRepresentation& o) const;
};

SubRepresentation zero_subrep(const FilteredKroneckerModule& m);
SubRepresentation full_subrep(const FilteredKroneckerModule& m);
bool is_subrep(const FilteredKroneckerModule& m, const SubRepresentation& s);
bool is_whole(const FilteredKroneckerModule& m, const SubRepresentation& s);

// rho_j(U tensor H) as a subspace of M_{j2}.
Subspace rho_image(const FilteredKroneckerModule& m, int j, const Subspace& u);
// {v : rho_j(v tensor H) inside W}
Subspace rho_preimage(const FilteredKroneckerModule& m, int j, const Subspace& w);

// Seeds given as rows per vertex; missing or empty entries mean no seed.
struct Seeds
{
    std::vector<Matrix> top, bottom;
};
SubRepresentation generated_subrep(const FilteredKroneckerModule& m, const Seeds& seeds);

// Calls fn for every subrepresentation; fn returns false to stop early. Returns the number visited.
// The budget bounds the number of partial assignments explored.
std::uint64_t for_each_subrep(const FilteredKroneckerModule& m, const std::function<bool(const SubRepresentation&)>& fn,
                              std::uint64_t budget = default_budget());
std::vector<SubRepresentation> enumerate_subreps(const FilteredKroneckerModule& m,
                                                 std::uint64_t budget = default_budget());

// Morphism given by one matrix per vertex.
struct LadderMorphism
{
    std::vector<Matrix> top, bottom;
};

struct HomSpace
{
    std::size_t dim = 0;
    std::vector<LadderMorphism> basis;
};

// Morphisms commuting with every arrow. With weights on both sides and different weights,
// the parabolic condition f(N_i) in M_{j+1} whenever beta_i > alpha_j is imposed as well.
HomSpace hom_space(const FilteredKroneckerModule& a, const FilteredKroneckerModule& b);

bool is_invertible(const LadderMorphism& f);
// Random combinations of a hom basis first, then every projective point when that fits the budget.
std::optional<LadderMorphism> find_ladder_isomorphism(const FilteredKroneckerModule& a,
                                                      const FilteredKroneckerModule& b,
                                                      std::uint64_t budget = default_budget());
// A single Kronecker module as a two-level chain with a zero second level.
FilteredKroneckerModule as_filtered(const KroneckerModule& k, std::size_t h);

struct LadderQuotient
{
    FilteredKroneckerModule module;
    bool injective = true;
    std::vector<Matrix> top_proj, bottom_proj; // rows pick the complement coordinates
};
LadderQuotient quotient(const FilteredKroneckerModule& m, const SubRepresentation& s);

// Submodule as a standalone module in the echelon bases of its components.
FilteredKroneckerModule restrict_to(const FilteredKroneckerModule& m, const SubRepresentation& s);
FilteredKroneckerModule direct_sum(const FilteredKroneckerModule& a, const FilteredKroneckerModule& b);

} // namespace parakron
