#pragma once

#include "parakron/stability.hpp"
#include "parakron/subsheaf.hpp"

#include <optional>
#include <string>
#include <vector>

namespace parakron {

// T = O(-n) + O(-m); H = H^0(O(m - n)) in the monomial basis x^{m-n}, ..., y^{m-n}.
struct FunctorContext
{
    Field field;
    int n = 0, m = 1;
    std::vector<BinaryForm> h_basis;

    static FunctorContext make(Field f, int n, int m);
    std::size_t h() const { return h_basis.size(); }
};

// n = largest step regularity over the corpus, m = n + 2.
FunctorContext default_context(const std::vector<ParabolicSheafP1>& corpus);

struct ThresholdReport;
// n as above, m the smallest value from n + 2 on for which every checked condition holds.
// The corpus must share one parabolic type.
FunctorContext threshold_context(const std::vector<ParabolicSheafP1>& corpus, int max_gap = 40,
                                 std::uint64_t budget = default_budget());

KroneckerModule phi(const SheafP1& e, const FunctorContext& ctx);

// Module of a chain of jet subspaces (repeated steps allowed), with the section
// spaces M_{i1} in H^0(E(n)) and M_{i2} in H^0(E(m)) kept alongside.
struct PsiData
{
    FilteredKroneckerModule module;
    std::vector<Subspace> top, bottom;
};

PsiData psi_chain(const SheafP1& e, const ParabolicDivisor& d, const std::vector<Subspace>& levels,
                  const ParabolicWeights& w, const FunctorContext& ctx);
PsiData psi_tracked(const ParabolicSheafP1& ps, const FunctorContext& ctx);
FilteredKroneckerModule psi(const ParabolicSheafP1& ps, const FunctorContext& ctx);
// A structure with collapsed levels, re-indexed by the finer weights it came from.
FilteredKroneckerModule psi_expanded(const ParabolicSheafP1& ps, const ParabolicWeights& original,
                                     const FunctorContext& ctx);

GradedPresentation presentation(const KroneckerModule& k, const FunctorContext& ctx);
SheafP1 phi_dual(const KroneckerModule& k, const FunctorContext& ctx);

struct UnitCheck
{
    bool iso = false;
    std::string details;
    std::optional<SheafP1> sheaf;
    std::optional<LadderMorphism> map; // M -> Phi(Phi^dual(M)) on the single level
};
UnitCheck unit_check(const KroneckerModule& k, const FunctorContext& ctx);

KroneckerModule twist_minus_D(const FilteredKroneckerModule& m, const ParabolicDivisor& d, const FunctorContext& ctx);

ParabolicSheafP1 psi_dual(const FilteredKroneckerModule& m, const FunctorContext& ctx);

// E'_j = image of M'_{j1} tensor O(-n) -> E, read off as the jet-level data of the first one.
struct SubsheafFromModule
{
    Subspace sections; // M'_{11} inside H^0(E(n))
    int rank = 0;
    int degree = 0;
};
SubsheafFromModule subsheaf_of(const ParabolicSheafP1& ps, const PsiData& data, const SubRepresentation& s,
                               const FunctorContext& ctx);

struct TypeDims
{
    std::vector<std::size_t> dims;
    ThetaWeights theta;
};
TypeDims type_to_dims(const ParabolicType& tp, const FunctorContext& ctx);

struct ThresholdCheck
{
    std::string name;
    std::string status; // pass, fail, assumed, vacuous
    std::string detail;
};

struct ThresholdReport
{
    std::vector<ThresholdCheck> checks;
    std::vector<std::string> warnings;
    bool ok() const;
};
ThresholdReport thresholds_check(const std::vector<ParabolicSheafP1>& family, const ParabolicType& tp,
                                 const FunctorContext& ctx, std::uint64_t budget = default_budget());

struct PreservationReport
{
    Rational par_mu;
    Slope module_mu;
    bool sheaf_semistable = false, sheaf_stable = false;
    bool module_semistable = false, module_stable = false;
    std::optional<Rational> sheaf_witness_mu;
    std::optional<Slope> module_witness_mu;
    std::optional<Slope> psi_of_witness_mu; // slope of Psi of the sheaf-side witness
    bool gr_checked = false, gr_match = true;
    std::size_t sheaf_factors = 0, module_factors = 0;
    bool semistable_agree() const { return sheaf_semistable == module_semistable; }
    bool agree() const { return semistable_agree() && sheaf_stable == module_stable && gr_match; }
};

struct PreservationOptions
{
    std::uint64_t budget = default_budget();
    bool compare_stable = true;
    bool check_gr = true;
};

PreservationReport verify_preservation(const ParabolicSheafP1& ps, const FunctorContext& ctx,
                                       const PreservationOptions& opt = {});

} // namespace parakron
