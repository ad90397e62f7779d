#pragma once

#include "parakron/ladder.hpp"

#include <optional>
#include <string>
#include <vector>

namespace parakron {

// A value in [0, +inf].
struct Slope
{
    Rational value;
    bool infinite = false;

    static Slope of(const Rational& num, const Rational& den);
    std::string str() const;
    bool operator==(const Slope& o) const { return infinite == o.infinite && (infinite || value == o.value); }
    bool operator!=(const Slope& o) const { return !(*this == o); }
    bool operator<(const Slope& o) const;
    bool operator>(const Slope& o) const { return o < *this; }
    bool operator<=(const Slope& o) const { return !(o < *this); }
    bool operator>=(const Slope& o) const { return !(*this < o); }
};

// Dimension vectors are ordered d_11, d_12, d_21, d_22, ...
Slope mu(const std::vector<Rational>& eps, const std::vector<std::size_t>& dims);
Slope mu(const FilteredKroneckerModule& m);
Slope mu(const FilteredKroneckerModule& m, const SubRepresentation& s);

struct ThetaWeights
{
    std::vector<Rational> values; // one per vertex, same order as dimension vectors

    Rational pair(const std::vector<std::size_t>& dims) const;
};

ThetaWeights theta_weights(const ParabolicWeights& w, const std::vector<std::size_t>& ambient);
Rational theta(const std::vector<Rational>& eps, const std::vector<std::size_t>& ambient,
               const std::vector<std::size_t>& sub);
Rational theta(const FilteredKroneckerModule& m, const SubRepresentation& s);

struct DegenerateWitness
{
    int level = 0; // 0-based
    Matrix vector; // one row
};
std::optional<DegenerateWitness> find_degenerate(const FilteredKroneckerModule& m);

SubRepresentation tight_closure(const FilteredKroneckerModule& m, const SubRepresentation& s);
bool is_tight(const FilteredKroneckerModule& m, const SubRepresentation& s);

enum class StabilityMode
{
    tight,
    exhaustive,
    both
};

struct StabilityResult
{
    bool semistable = true;
    bool stable = true; // over the base field
    Slope mu;
    bool degenerate = false;
    std::optional<SubRepresentation> witness; // destabilizing, or equal-slope proper when only stability fails
    Slope witness_mu;
    Slope max_mu; // largest slope of a nonzero proper subobject seen (meaningful without early exit)
    std::uint64_t examined = 0;
};

struct StabilityOptions
{
    StabilityMode mode = StabilityMode::tight;
    std::uint64_t budget = default_budget();
    bool early_exit = false;
};

StabilityResult is_theta_semistable(const FilteredKroneckerModule& m, const StabilityOptions& opt = {});

struct JordanHolder
{
    std::vector<SubRepresentation> filtration; // 0 = F_0 < F_1 < ... < F_k = M
    std::vector<FilteredKroneckerModule> factors;
};

// Smallest proper nonzero subobject with the slope of m (m semistable), by total dimension then echelon data.
std::optional<SubRepresentation> minimal_equal_slope(const FilteredKroneckerModule& m,
                                                     std::uint64_t budget = default_budget());
JordanHolder jordan_holder(const FilteredKroneckerModule& m, std::uint64_t budget = default_budget());

// Nonzero morphism between stable objects of equal slope is an isomorphism.
bool schur_match(const FilteredKroneckerModule& a, const FilteredKroneckerModule& b);
bool match_factors(const std::vector<FilteredKroneckerModule>& a, const std::vector<FilteredKroneckerModule>& b);
bool s_equivalent(const FilteredKroneckerModule& a, const FilteredKroneckerModule& b,
                  std::uint64_t budget = default_budget());

} // namespace parakron
