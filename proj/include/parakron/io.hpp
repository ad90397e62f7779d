#pragma once

#include "parakron/functors.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace parakron {

// Ordered keys keep reports byte-identical across runs.
using Json = nlohmann::ordered_json;

// Residues print as plain integers, rationals as "p/q".
std::string scalar_text(const Scalar& s);

Json to_json(const Matrix& m);
// Shape comes from the surrounding structure so that empty matrices stay typed.
Matrix matrix_from_json(const Json& j, Field f, std::size_t rows, std::size_t cols, const std::string& what);

Json to_json(const Subspace& s);
Json to_json(const BinaryForm& g);
Json to_json(const ParabolicWeights& w);
ParabolicWeights weights_from_json(const Json& j);

Json to_json(const SheafP1& e);
// {"splitting": [...]} or a bare array
SheafP1 sheaf_from_json(const Json& j);

// "flag" lists either the interior steps W_2..W_l or the whole chain W_1..W_{l+1}.
Json to_json(const ParabolicSheafP1& ps);
ParabolicSheafP1 parabolic_from_json(const Json& j, std::optional<Field> field = {});

Json to_json(const KroneckerModule& k);
KroneckerModule kronecker_from_json(const Json& j, Field f);

Json to_json(const FilteredKroneckerModule& m);
FilteredKroneckerModule filtered_from_json(const Json& j, std::optional<Field> field = {});

Json to_json(const SubRepresentation& s);
Json to_json(const Slope& s);
Json to_json(const Rational& q);
Json to_json(const ThresholdReport& r);
Json to_json(const FunctorContext& ctx);

std::string fnv1a_hex(const std::string& bytes);

// Human-readable description of the file formats.
const char* schema_text();

} // namespace parakron
