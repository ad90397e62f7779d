#include "parakron/io.hpp"
#include "parakron/errors.hpp"

#include <cstdio>

namespace parakron {

namespace {

std::string text_of(const Json& j, const std::string& what)
{
    if (j.is_string())
        return j.get<std::string>();
    if (j.is_number_integer())
        return std::to_string(j.get<long long>());
    throw ValidationError(what + ": expected a string scalar");
}

const Json& member(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        throw ValidationError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

std::size_t count_of(const Json& j, const char* key)
{
    const Json& v = member(j, key);
    long long n = v.is_string() ? std::stoll(v.get<std::string>()) : v.get<long long>();
    if (n < 0)
        throw ValidationError(std::string("negative \"") + key + "\"");
    return static_cast<std::size_t>(n);
}

Field field_of(const Json& j, std::optional<Field> field)
{
    if (field)
        return *field;
    return Field::parse(text_of(member(j, "field"), "field"));
}

} // namespace

std::string scalar_text(const Scalar& s)
{
    return s.field().finite() ? std::to_string(s.residue()) : to_string(s.rational());
}

Json to_json(const Matrix& m)
{
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(scalar_text(m.at(i, j)));
        rows.push_back(row);
    }
    return rows;
}

Matrix matrix_from_json(const Json& j, Field f, std::size_t rows, std::size_t cols, const std::string& what)
{
    if (!j.is_array() || j.size() != rows)
        throw DimensionError(what + ": expected " + std::to_string(rows) + " rows");
    Matrix m(f, rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw DimensionError(what + ": row " + std::to_string(i) + " needs " + std::to_string(cols) + " entries");
        for (std::size_t c = 0; c < cols; ++c)
            m.set(i, c, Scalar::parse(text_of(j[i][c], what), f));
    }
    return m;
}

Json to_json(const Subspace& s)
{
    return to_json(s.basis());
}

Json to_json(const BinaryForm& g)
{
    Json c = Json::array();
    for (const auto& s : g.coeffs())
        c.push_back(scalar_text(s));
    return Json{{"coeffs", c}};
}

Json to_json(const ParabolicWeights& w)
{
    Json a = Json::array();
    for (const auto& q : w.alphas())
        a.push_back(to_string(q));
    return a;
}

ParabolicWeights weights_from_json(const Json& j)
{
    if (!j.is_array())
        throw ValidationError("weights: expected an array of rationals");
    std::vector<Rational> a;
    for (const auto& x : j)
        a.push_back(parse_rational(text_of(x, "weights")));
    return ParabolicWeights(a);
}

Json to_json(const SheafP1& e)
{
    return Json{{"splitting", e.splitting()}};
}

SheafP1 sheaf_from_json(const Json& j)
{
    const Json& a = j.is_array() ? j : member(j, "splitting");
    if (!a.is_array() || a.empty())
        throw ValidationError("splitting: expected a nonempty array of integers");
    std::vector<int> s;
    for (const auto& x : a)
        s.push_back(static_cast<int>(std::stol(text_of(x, "splitting"))));
    return SheafP1(s);
}

Json to_json(const ParabolicSheafP1& ps)
{
    Json flag = Json::array();
    for (const auto& w : ps.flag)
        flag.push_back(to_json(w));
    return Json{{"field", ps.field.name()},
                {"splitting", ps.sheaf.splitting()},
                {"divisor", to_json(ps.divisor.form())},
                {"flag", flag},
                {"weights", to_json(ps.weights)}};
}

ParabolicSheafP1 parabolic_from_json(const Json& j, std::optional<Field> field)
{
    Field f = field_of(j, field);
    SheafP1 e = sheaf_from_json(member(j, "splitting"));
    std::vector<Scalar> c;
    for (const auto& x : member(member(j, "divisor"), "coeffs"))
        c.push_back(Scalar::parse(text_of(x, "divisor"), f));
    ParabolicDivisor d{BinaryForm(f, c)};
    ParabolicWeights w = weights_from_json(member(j, "weights"));
    std::size_t n = static_cast<std::size_t>(e.rank()) * d.degree();
    const Json& flag = member(j, "flag");
    if (!flag.is_array())
        throw ValidationError("flag: expected an array of matrices");
    std::vector<Subspace> steps;
    for (const auto& s : flag) {
        if (!s.is_array())
            throw ValidationError("flag: expected an array of matrices");
        steps.push_back(s.empty() ? Subspace(f, n)
                                  : Subspace::span(matrix_from_json(s, f, s.size(), n, "flag step")));
    }
    int l = w.ell();
    if (static_cast<int>(steps.size()) == l + 1) {
        if (steps.front().dim() != n || steps.back().dim() != 0)
            throw ValidationError("flag: a full chain must start at V and end at 0");
        steps = std::vector<Subspace>(steps.begin() + 1, steps.end() - 1);
    } else if (static_cast<int>(steps.size()) != l - 1) {
        throw ValidationError("flag: " + std::to_string(steps.size()) + " steps do not fit " + std::to_string(l) +
                              " weights");
    }
    return make_parabolic(f, e, d, steps, w);
}

Json to_json(const KroneckerModule& k)
{
    Json alpha = Json::array();
    for (const auto& a : k.alpha)
        alpha.push_back(to_json(a));
    return Json{{"d1", k.d1}, {"d2", k.d2}, {"alpha", alpha}};
}

KroneckerModule kronecker_from_json(const Json& j, Field f)
{
    KroneckerModule k{f, count_of(j, "d1"), count_of(j, "d2"), {}};
    const Json& alpha = member(j, "alpha");
    if (!alpha.is_array() || alpha.empty())
        throw ValidationError("alpha: expected one matrix per basis element of H");
    for (const auto& a : alpha)
        k.alpha.push_back(matrix_from_json(a, f, k.d2, k.d1, "alpha"));
    return k;
}

Json to_json(const FilteredKroneckerModule& m)
{
    Json mods = Json::array(), top = Json::array(), bottom = Json::array();
    for (const auto& k : m.modules)
        mods.push_back(to_json(k));
    for (const auto& t : m.top)
        top.push_back(to_json(t));
    for (const auto& b : m.bottom)
        bottom.push_back(to_json(b));
    Json out{{"field", m.field.name()}, {"ell", m.ell},           {"h", m.h},
             {"modules", mods},         {"top_inclusions", top}, {"bottom_inclusions", bottom}};
    if (m.weights)
        out["weights"] = to_json(*m.weights);
    return out;
}

FilteredKroneckerModule filtered_from_json(const Json& j, std::optional<Field> field)
{
    FilteredKroneckerModule m;
    m.field = field_of(j, field);
    if (!j.contains("modules")) {
        KroneckerModule k = kronecker_from_json(j, m.field);
        m = as_filtered(k, k.alpha.size());
        if (j.contains("weights"))
            m.weights = weights_from_json(j.at("weights"));
        return m;
    }
    m.ell = static_cast<int>(count_of(j, "ell"));
    m.h = count_of(j, "h");
    const Json& mods = member(j, "modules");
    if (!mods.is_array() || static_cast<int>(mods.size()) != m.ell + 1)
        throw DimensionError("modules: expected ell + 1 levels");
    for (const auto& k : mods) {
        m.modules.push_back(kronecker_from_json(k, m.field));
        if (m.modules.back().alpha.size() != m.h)
            throw DimensionError("alpha: expected h matrices per level");
    }
    const Json& top = member(j, "top_inclusions");
    const Json& bottom = member(j, "bottom_inclusions");
    if (!top.is_array() || !bottom.is_array() || static_cast<int>(top.size()) != m.ell ||
        static_cast<int>(bottom.size()) != m.ell)
        throw DimensionError("inclusions: expected ell matrices on each row");
    for (int i = 0; i < m.ell; ++i) {
        m.top.push_back(matrix_from_json(top[i], m.field, m.top_dim(i), m.top_dim(i + 1), "top inclusion"));
        m.bottom.push_back(
            matrix_from_json(bottom[i], m.field, m.bottom_dim(i), m.bottom_dim(i + 1), "bottom inclusion"));
    }
    if (j.contains("weights")) {
        m.weights = weights_from_json(j.at("weights"));
        if (m.weights->ell() != m.ell)
            throw DimensionError("weights: expected ell values");
    }
    m.check_shapes();
    return m;
}

Json to_json(const SubRepresentation& s)
{
    Json top = Json::array(), bottom = Json::array(), dims = Json::array();
    for (const auto& u : s.top)
        top.push_back(to_json(u));
    for (const auto& u : s.bottom)
        bottom.push_back(to_json(u));
    for (auto d : s.dims())
        dims.push_back(d);
    return Json{{"dims", dims}, {"top", top}, {"bottom", bottom}};
}

Json to_json(const Slope& s)
{
    return s.str();
}

Json to_json(const Rational& q)
{
    return to_string(q);
}

Json to_json(const ThresholdReport& r)
{
    Json checks = Json::array();
    for (const auto& c : r.checks)
        checks.push_back(Json{{"name", c.name}, {"status", c.status}, {"detail", c.detail}});
    return Json{{"ok", r.ok()}, {"checks", checks}, {"warnings", r.warnings}};
}

Json to_json(const FunctorContext& ctx)
{
    return Json{{"field", ctx.field.name()}, {"n", ctx.n}, {"m", ctx.m}, {"h", ctx.h()}};
}

std::string fnv1a_hex(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

const char* schema_text()
{
    return R"(All scalars are JSON strings: residues "0".."p-1" over Fp, "p/q" over Q.
A matrix is an array of rows, each row an array of scalars.

Parabolic sheaf:
  {"field": "F5", "splitting": ["0","0"], "divisor": {"coeffs": ["0","1"]},
   "flag": [matrix, ...], "weights": ["1/4","1/2"]}
  divisor coeffs: coefficient of x^(d-i) y^i at index i
  flag: echelon bases in the jet basis y^0..y^(d-1) per summand, either the
        interior steps W_2..W_l or the whole chain W_1..W_(l+1)

Kronecker module:
  {"field": "F5", "d1": "4", "d2": "8", "alpha": [matrix (d2 x d1), ...]}

Filtered Kronecker module:
  {"field": "F5", "ell": 2, "h": 3,
   "modules": [Kronecker module, ...],          ell + 1 levels
   "top_inclusions": [matrix, ...],             level j+1 -> level j, d_j1 x d_(j+1)1
   "bottom_inclusions": [matrix, ...],          d_j2 x d_(j+1)2
   "weights": ["1/4","1/2"]}                    optional
  dimension vectors are ordered d11, d12, d21, d22, ...

Corpus: {"members": [parabolic sheaf, ...]}, a bare array, or a single sheaf.
)";
}

} // namespace parakron
