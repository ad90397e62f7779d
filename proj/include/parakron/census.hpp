#pragma once

#include "parakron/functors.hpp"

#include <optional>
#include <string>
#include <vector>

namespace parakron {

struct CensusClass
{
    FilteredKroneckerModule representative;
    std::vector<FilteredKroneckerModule> factors; // Jordan-Holder factors of the representative
    std::size_t size = 0;
    std::string fingerprint;
};

struct CensusResult
{
    Field field;
    std::vector<std::size_t> dims;
    ParabolicWeights weights;
    std::size_t h = 0;
    bool sampled = false;
    std::uint64_t seed = 0;
    std::uint64_t enumerated = 0, semistable = 0;
    std::vector<CensusClass> classes;
    std::vector<std::size_t> class_of; // per semistable module, in enumeration order
};

struct CensusOptions
{
    std::size_t h = 2;
    std::uint64_t budget = default_budget();
    std::optional<std::uint64_t> samples; // seeded sampling instead of the full slice
    std::uint64_t seed = 0;
};

// Modules whose inclusions are the standard coordinate embeddings; every filtered module
// with the given dimension vector is isomorphic to one of them.
std::uint64_t slice_size(Field f, const std::vector<std::size_t>& dims, std::size_t h);
CensusResult census(Field f, const std::vector<std::size_t>& dims, const ParabolicWeights& w,
                    const CensusOptions& opt = {});
// Partition of already constructed modules (for instance Psi images) into S-equivalence classes.
CensusResult census_of(const std::vector<FilteredKroneckerModule>& modules, std::uint64_t budget = default_budget());

// Classes of semistable parabolic sheaves under isomorphism of their graded objects.
std::vector<std::size_t> sheaf_classes(const std::vector<ParabolicSheafP1>& semistable,
                                       std::uint64_t budget = default_budget());

} // namespace parakron
