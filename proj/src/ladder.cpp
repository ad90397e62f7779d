#include "parakron/ladder.hpp"

#include "parakron/errors.hpp"

#include <algorithm>
#include <limits>
#include <random>

namespace parakron {

namespace {

std::string shape(const Matrix& m)
{
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void expect_shape(const Matrix& m, std::size_t r, std::size_t c, const std::string& what)
{
    if (m.rows() != r || m.cols() != c)
        throw DimensionError(what + " has shape " + shape(m) + ", expected " + std::to_string(r) + "x" +
                             std::to_string(c));
}

Matrix projection(const Subspace& s)
{
    // rows indexed by free columns of s; v -> reduced coordinates
    std::vector<std::size_t> fc = s.free_columns();
    Matrix red = s.reduce(Matrix::identity(s.field(), s.ambient()));
    return red.select_cols(fc).transpose();
}

Matrix inclusion_of_complement(const Subspace& s)
{
    std::vector<std::size_t> fc = s.free_columns();
    Matrix m(s.field(), s.ambient(), fc.size());
    for (std::size_t t = 0; t < fc.size(); ++t)
        m.set(fc[t], t, 1LL);
    return m;
}

// Matrix of a restricted to subspaces (echelon bases) src -> tgt.
Matrix restricted_map(const Matrix& a, const Subspace& src, const Subspace& tgt)
{
    if (src.dim() == 0 || tgt.dim() == 0)
        return Matrix(a.field(), tgt.dim(), src.dim());
    Matrix imgs = (a * src.basis().transpose()).transpose();
    return tgt.coordinates(imgs).transpose();
}

Matrix block_diag(const Matrix& a, const Matrix& b)
{
    Matrix m(a.field(), a.rows() + b.rows(), a.cols() + b.cols());
    m.set_block(0, 0, a);
    m.set_block(a.rows(), a.cols(), b);
    return m;
}

// Linear system over the entries of per-vertex unknown matrices.
class HomSystem
{
  public:
    HomSystem(Field f) : f_(f) {}

    std::size_t add_unknown(std::size_t rows, std::size_t cols)
    {
        std::size_t off = n_;
        blocks_.push_back({off, rows, cols});
        n_ += rows * cols;
        return blocks_.size() - 1;
    }

    // X a = b Y, X and Y unknown blocks (either may be absent)
    void commute(std::size_t x, const Matrix& a, const Matrix& b, std::size_t y)
    {
        const Block& bx = blocks_[x];
        const Block& by = blocks_[y];
        std::size_t rows = bx.rows, cols = a.cols();
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) {
                std::vector<std::pair<std::size_t, Scalar>> eq;
                for (std::size_t k = 0; k < bx.cols; ++k)
                    if (!a.zero_at(k, c))
                        eq.push_back({bx.off + r * bx.cols + k, a.at(k, c)});
                for (std::size_t k = 0; k < by.rows; ++k)
                    if (!b.zero_at(r, k))
                        eq.push_back({by.off + k * by.cols + c, -b.at(r, k)});
                push(eq);
            }
    }

    // c X a = 0
    void annihilate(const Matrix& c, std::size_t x, const Matrix& a)
    {
        const Block& bx = blocks_[x];
        for (std::size_t r = 0; r < c.rows(); ++r)
            for (std::size_t s = 0; s < a.cols(); ++s) {
                std::vector<std::pair<std::size_t, Scalar>> eq;
                for (std::size_t i = 0; i < bx.rows; ++i) {
                    if (c.zero_at(r, i))
                        continue;
                    for (std::size_t k = 0; k < bx.cols; ++k)
                        if (!a.zero_at(k, s))
                            eq.push_back({bx.off + i * bx.cols + k, c.at(r, i) * a.at(k, s)});
                }
                push(eq);
            }
    }

    Subspace solve() const
    {
        Matrix m(f_, eqs_.size(), n_);
        for (std::size_t i = 0; i < eqs_.size(); ++i)
            for (const auto& [col, v] : eqs_[i])
                m.add_to(i, col, v);
        return kernel(m);
    }

    Matrix extract(const Matrix& sol, std::size_t row, std::size_t block) const
    {
        const Block& b = blocks_[block];
        Matrix m(f_, b.rows, b.cols);
        for (std::size_t i = 0; i < b.rows; ++i)
            for (std::size_t j = 0; j < b.cols; ++j)
                m.set(i, j, sol.at(row, b.off + i * b.cols + j));
        return m;
    }

  private:
    struct Block
    {
        std::size_t off, rows, cols;
    };

    void push(std::vector<std::pair<std::size_t, Scalar>>& eq)
    {
        if (!eq.empty())
            eqs_.push_back(std::move(eq));
    }

    Field f_;
    std::size_t n_ = 0;
    std::vector<Block> blocks_;
    std::vector<std::vector<std::pair<std::size_t, Scalar>>> eqs_;
};

// composite inclusion M_{j1} -> M_{11} (or bottom)
Matrix composite(const FilteredKroneckerModule& m, int j, bool top)
{
    std::size_t d = top ? m.top_dim(j) : m.bottom_dim(j);
    Matrix c = Matrix::identity(m.field, d);
    for (int i = j - 1; i >= 0; --i)
        c = (top ? m.top[i] : m.bottom[i]) * c;
    return c;
}

} // namespace

void KroneckerModule::validate(std::size_t h) const
{
    if (alpha.size() != h)
        throw DimensionError("Kronecker module has " + std::to_string(alpha.size()) + " arrow matrices, expected " +
                             std::to_string(h));
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        expect_shape(alpha[i], d2, d1, "alpha[" + std::to_string(i) + "]");
        if (alpha[i].field() != field)
            throw ValidationError("alpha matrices over mixed fields");
    }
}

bool KroneckerModule::operator==(const KroneckerModule& o) const
{
    return field == o.field && d1 == o.d1 && d2 == o.d2 && alpha == o.alpha;
}

std::size_t FilteredKroneckerModule::total_dim() const
{
    std::size_t s = 0;
    for (const auto& k : modules)
        s += k.d1 + k.d2;
    return s;
}

std::vector<std::size_t> FilteredKroneckerModule::dims() const
{
    std::vector<std::size_t> d;
    for (const auto& k : modules) {
        d.push_back(k.d1);
        d.push_back(k.d2);
    }
    return d;
}

void FilteredKroneckerModule::check_shapes() const
{
    if (ell < 1)
        throw ValidationError("filtered module needs ell >= 1");
    std::size_t levels = static_cast<std::size_t>(ell) + 1;
    if (modules.size() != levels)
        throw DimensionError("expected " + std::to_string(levels) + " Kronecker modules, got " +
                             std::to_string(modules.size()));
    if (top.size() != levels - 1 || bottom.size() != levels - 1)
        throw DimensionError("expected " + std::to_string(levels - 1) + " inclusions per row");
    for (const auto& k : modules) {
        if (k.field != field)
            throw ValidationError("modules over mixed fields");
        k.validate(h);
    }
    for (std::size_t j = 0; j + 1 < levels; ++j) {
        expect_shape(top[j], modules[j].d1, modules[j + 1].d1, "top inclusion " + std::to_string(j + 1));
        expect_shape(bottom[j], modules[j].d2, modules[j + 1].d2, "bottom inclusion " + std::to_string(j + 1));
    }
    if (weights && weights->ell() != ell)
        throw ValidationError("weights have length " + std::to_string(weights->ell()) + ", expected " +
                              std::to_string(ell));
}

bool FilteredKroneckerModule::operator==(const FilteredKroneckerModule& o) const
{
    return field == o.field && ell == o.ell && h == o.h && modules == o.modules && top == o.top &&
           bottom == o.bottom && weights == o.weights;
}

LadderReport validate(const FilteredKroneckerModule& m)
{
    LadderReport rep;
    try {
        m.check_shapes();
    } catch (const ValidationError& e) {
        rep.valid = false;
        rep.injective = false;
        rep.failures.push_back(e.what());
        return rep;
    }
    for (int j = 0; j < m.ell; ++j) {
        if (!full_column_rank(m.top[j])) {
            rep.injective = false;
            rep.failures.push_back("top inclusion " + std::to_string(j + 1) + " not injective");
        }
        if (!full_column_rank(m.bottom[j])) {
            rep.injective = false;
            rep.failures.push_back("bottom inclusion " + std::to_string(j + 1) + " not injective");
        }
        for (std::size_t t = 0; t < m.h; ++t)
            if (m.bottom[j] * m.modules[j + 1].alpha[t] != m.modules[j].alpha[t] * m.top[j]) {
                rep.valid = false;
                rep.failures.push_back("square (j=" + std::to_string(j + 1) + ", h=" + std::to_string(t) +
                                       ") does not commute");
            }
    }
    if (!rep.injective)
        rep.valid = false;
    return rep;
}

std::size_t SubRepresentation::total_dim() const
{
    std::size_t s = 0;
    for (std::size_t j = 0; j < top.size(); ++j)
        s += top[j].dim() + bottom[j].dim();
    return s;
}

std::vector<std::size_t> SubRepresentation::dims() const
{
    std::vector<std::size_t> d;
    for (std::size_t j = 0; j < top.size(); ++j) {
        d.push_back(top[j].dim());
        d.push_back(bottom[j].dim());
    }
    return d;
}

bool SubRepresentation::operator<(const SubRepresentation& o) const
{
    if (total_dim() != o.total_dim())
        return total_dim() < o.total_dim();
    if (dims() != o.dims())
        return dims() < o.dims();
    for (std::size_t j = 0; j < top.size(); ++j) {
        if (top[j] != o.top[j])
            return top[j] < o.top[j];
        if (bottom[j] != o.bottom[j])
            return bottom[j] < o.bottom[j];
    }
    return false;
}

SubRepresentation zero_subrep(const FilteredKroneckerModule& m)
{
    SubRepresentation s;
    for (const auto& k : m.modules) {
        s.top.emplace_back(m.field, k.d1);
        s.bottom.emplace_back(m.field, k.d2);
    }
    return s;
}

SubRepresentation full_subrep(const FilteredKroneckerModule& m)
{
    SubRepresentation s;
    for (const auto& k : m.modules) {
        s.top.push_back(Subspace::full(m.field, k.d1));
        s.bottom.push_back(Subspace::full(m.field, k.d2));
    }
    return s;
}

Subspace rho_image(const FilteredKroneckerModule& m, int j, const Subspace& u)
{
    const KroneckerModule& k = m.modules[j];
    if (u.dim() == 0 || k.d2 == 0)
        return Subspace(m.field, k.d2);
    Matrix rows(m.field, 0, k.d2);
    for (const Matrix& a : k.alpha)
        rows.append_rows(u.basis() * a.transpose());
    return Subspace::span(rows);
}

Subspace rho_preimage(const FilteredKroneckerModule& m, int j, const Subspace& w)
{
    const KroneckerModule& k = m.modules[j];
    if (w.dim() == w.ambient())
        return Subspace::full(m.field, k.d1);
    Matrix ann = w.annihilator();
    Matrix eqs(m.field, 0, k.d1);
    for (const Matrix& a : k.alpha)
        eqs.append_rows(ann * a);
    return kernel(eqs);
}

bool is_subrep(const FilteredKroneckerModule& m, const SubRepresentation& s)
{
    std::size_t levels = m.modules.size();
    if (s.top.size() != levels || s.bottom.size() != levels)
        return false;
    for (std::size_t j = 0; j < levels; ++j) {
        if (s.top[j].ambient() != m.top_dim(j) || s.bottom[j].ambient() != m.bottom_dim(j))
            return false;
        if (!s.bottom[j].contains(rho_image(m, static_cast<int>(j), s.top[j])))
            return false;
        if (j + 1 < levels) {
            if (!s.top[j].contains(image(m.top[j], s.top[j + 1])))
                return false;
            if (!s.bottom[j].contains(image(m.bottom[j], s.bottom[j + 1])))
                return false;
        }
    }
    return true;
}

bool is_whole(const FilteredKroneckerModule& m, const SubRepresentation& s)
{
    for (std::size_t j = 0; j < m.modules.size(); ++j)
        if (s.top[j].dim() != m.top_dim(j) || s.bottom[j].dim() != m.bottom_dim(j))
            return false;
    return true;
}

SubRepresentation generated_subrep(const FilteredKroneckerModule& m, const Seeds& seeds)
{
    int levels = m.ell + 1;
    auto seed = [&](const std::vector<Matrix>& v, int j, std::size_t dim) {
        if (static_cast<std::size_t>(j) < v.size() && v[j].rows() > 0) {
            if (v[j].cols() != dim)
                throw DimensionError("seed vectors at level " + std::to_string(j + 1) + " have wrong length");
            return Subspace::span(v[j]);
        }
        return Subspace(m.field, dim);
    };
    SubRepresentation s = zero_subrep(m);
    for (int j = levels - 1; j >= 0; --j) {
        s.top[j] = seed(seeds.top, j, m.top_dim(j));
        if (j + 1 < levels)
            s.top[j] = sum(s.top[j], image(m.top[j], s.top[j + 1]));
    }
    for (int j = levels - 1; j >= 0; --j) {
        s.bottom[j] = sum(seed(seeds.bottom, j, m.bottom_dim(j)), rho_image(m, j, s.top[j]));
        if (j + 1 < levels)
            s.bottom[j] = sum(s.bottom[j], image(m.bottom[j], s.bottom[j + 1]));
    }
    return s;
}

std::uint64_t for_each_subrep(const FilteredKroneckerModule& m, const std::function<bool(const SubRepresentation&)>& fn,
                              std::uint64_t budget)
{
    if (!m.field.finite())
        throw PreconditionError("subrepresentation enumeration needs a finite field");
    m.check_shapes();
    int levels = m.ell + 1;
    SubRepresentation cur = zero_subrep(m);
    std::uint64_t visited = 0, yielded = 0;
    bool stop = false;

    // vertices in topological order: tops from the deepest level up, then bottoms likewise
    std::function<void(int)> step = [&](int v) {
        if (stop)
            return;
        if (v == 2 * levels) {
            ++yielded;
            if (!fn(cur))
                stop = true;
            return;
        }
        bool is_top = v < levels;
        int j = levels - 1 - (is_top ? v : v - levels);
        Subspace req;
        if (is_top) {
            req = Subspace(m.field, m.top_dim(j));
            if (j + 1 < levels)
                req = image(m.top[j], cur.top[j + 1]);
        } else {
            req = rho_image(m, j, cur.top[j]);
            if (j + 1 < levels)
                req = sum(req, image(m.bottom[j], cur.bottom[j + 1]));
        }
        std::size_t qdim = req.ambient() - req.dim();
        SubspaceEnumerator en(m.field, qdim, std::nullopt, std::numeric_limits<std::uint64_t>::max());
        Subspace q;
        while (!stop && en.next(q)) {
            if (++visited > budget)
                throw BudgetError("subrepresentation enumeration exceeded budget " + std::to_string(budget));
            (is_top ? cur.top[j] : cur.bottom[j]) = lift_from_quotient(req, q);
            step(v + 1);
        }
    };
    step(0);
    return yielded;
}

std::vector<SubRepresentation> enumerate_subreps(const FilteredKroneckerModule& m, std::uint64_t budget)
{
    std::vector<SubRepresentation> out;
    for_each_subrep(
        m,
        [&](const SubRepresentation& s) {
            out.push_back(s);
            return true;
        },
        budget);
    return out;
}

HomSpace hom_space(const FilteredKroneckerModule& a, const FilteredKroneckerModule& b)
{
    a.check_shapes();
    b.check_shapes();
    if (a.ell != b.ell || a.h != b.h || a.field != b.field)
        throw DimensionError("hom_space: modules differ in ell, h or field");
    int levels = a.ell + 1;
    HomSystem sys(a.field);
    std::vector<std::size_t> xt, xb;
    for (int j = 0; j < levels; ++j) {
        xt.push_back(sys.add_unknown(b.top_dim(j), a.top_dim(j)));
        xb.push_back(sys.add_unknown(b.bottom_dim(j), a.bottom_dim(j)));
    }
    for (int j = 0; j < levels; ++j) {
        for (std::size_t t = 0; t < a.h; ++t)
            sys.commute(xb[j], a.modules[j].alpha[t], b.modules[j].alpha[t], xt[j]);
        if (j + 1 < levels) {
            sys.commute(xt[j], a.top[j], b.top[j], xt[j + 1]);
            sys.commute(xb[j], a.bottom[j], b.bottom[j], xb[j + 1]);
        }
    }
    if (a.weights && b.weights && *a.weights != *b.weights) {
        // source level i lands in target level j+1 whenever beta_i > alpha_j
        for (int i = 1; i <= levels; ++i)
            for (int j = 1; j + 1 <= levels; ++j) {
                if (!(a.weights->alpha(i) > b.weights->alpha(j)))
                    continue;
                for (bool top : {true, false}) {
                    Subspace tgt = column_space(composite(b, j, top));
                    if (tgt.dim() == tgt.ambient())
                        continue;
                    sys.annihilate(tgt.annihilator(), top ? xt[0] : xb[0], composite(a, i - 1, top));
                }
            }
    }
    Subspace sol = sys.solve();
    HomSpace hs;
    hs.dim = sol.dim();
    for (std::size_t r = 0; r < sol.dim(); ++r) {
        LadderMorphism f;
        for (int j = 0; j < levels; ++j) {
            f.top.push_back(sys.extract(sol.basis(), r, xt[j]));
            f.bottom.push_back(sys.extract(sol.basis(), r, xb[j]));
        }
        hs.basis.push_back(std::move(f));
    }
    return hs;
}

bool is_invertible(const LadderMorphism& f)
{
    for (const auto* v : {&f.top, &f.bottom})
        for (const Matrix& x : *v)
            if (x.rows() != x.cols() || rank(x) != x.rows())
                return false;
    return true;
}

std::optional<LadderMorphism> find_ladder_isomorphism(const FilteredKroneckerModule& a,
                                                      const FilteredKroneckerModule& b, std::uint64_t budget)
{
    if (a.dims() != b.dims() || a.ell != b.ell || a.h != b.h || a.field != b.field)
        return std::nullopt;
    HomSpace hs = hom_space(a, b);
    auto combine = [&](const std::vector<Scalar>& c) {
        LadderMorphism f;
        for (int j = 0; j <= a.ell; ++j) {
            f.top.emplace_back(a.field, b.top_dim(j), a.top_dim(j));
            f.bottom.emplace_back(a.field, b.bottom_dim(j), a.bottom_dim(j));
        }
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (c[k].is_zero())
                continue;
            for (int j = 0; j <= a.ell; ++j) {
                f.top[j] = f.top[j] + hs.basis[k].top[j].scaled(c[k]);
                f.bottom[j] = f.bottom[j] + hs.basis[k].bottom[j].scaled(c[k]);
            }
        }
        return f;
    };
    std::vector<Scalar> c(hs.dim, Scalar::zero(a.field));
    if (hs.dim == 0) {
        LadderMorphism z = combine(c);
        return is_invertible(z) ? std::optional<LadderMorphism>(z) : std::nullopt;
    }
    std::mt19937_64 rng(0x5eed);
    for (int attempt = 0; attempt < 64; ++attempt) {
        for (auto& x : c) {
            long long v = a.field.finite() ? static_cast<long long>(rng() % a.field.p)
                                           : static_cast<long long>(rng() % 21) - 10;
            x = Scalar(a.field, v);
        }
        LadderMorphism f = combine(c);
        if (is_invertible(f))
            return f;
    }
    if (!a.field.finite())
        return std::nullopt;
    std::uint64_t total = 1;
    for (std::size_t k = 0; k < hs.dim; ++k)
        total = saturating_mul(total, a.field.p);
    if (total > std::max<std::uint64_t>(budget, 1u << 20))
        throw BudgetError("isomorphism search over " + std::to_string(total) + " morphisms exceeds budget");
    std::vector<std::uint32_t> v(hs.dim, 0);
    for (std::uint64_t t = 1; t < total; ++t) {
        for (std::size_t k = hs.dim; k > 0; --k) {
            if (++v[k - 1] < a.field.p)
                break;
            v[k - 1] = 0;
        }
        for (std::size_t k = 0; k < hs.dim; ++k)
            c[k] = Scalar::residue(a.field, v[k]);
        LadderMorphism f = combine(c);
        if (is_invertible(f))
            return f;
    }
    return std::nullopt;
}

FilteredKroneckerModule as_filtered(const KroneckerModule& k, std::size_t h)
{
    FilteredKroneckerModule m;
    m.field = k.field;
    m.ell = 1;
    m.h = h;
    m.modules.push_back(k);
    KroneckerModule z;
    z.field = k.field;
    z.alpha.assign(h, Matrix(k.field, 0, 0));
    m.modules.push_back(z);
    m.top.emplace_back(k.field, k.d1, 0);
    m.bottom.emplace_back(k.field, k.d2, 0);
    return m;
}

LadderQuotient quotient(const FilteredKroneckerModule& m, const SubRepresentation& s)
{
    if (!is_subrep(m, s))
        throw ValidationError("quotient: not a subrepresentation");
    int levels = m.ell + 1;
    LadderQuotient q;
    FilteredKroneckerModule& out = q.module;
    out.field = m.field;
    out.ell = m.ell;
    out.h = m.h;
    out.weights = m.weights;
    std::vector<Matrix> top_inc, bottom_inc;
    for (int j = 0; j < levels; ++j) {
        q.top_proj.push_back(projection(s.top[j]));
        q.bottom_proj.push_back(projection(s.bottom[j]));
        top_inc.push_back(inclusion_of_complement(s.top[j]));
        bottom_inc.push_back(inclusion_of_complement(s.bottom[j]));
    }
    for (int j = 0; j < levels; ++j) {
        KroneckerModule k;
        k.field = m.field;
        k.d1 = q.top_proj[j].rows();
        k.d2 = q.bottom_proj[j].rows();
        for (const Matrix& a : m.modules[j].alpha)
            k.alpha.push_back(q.bottom_proj[j] * a * top_inc[j]);
        out.modules.push_back(std::move(k));
    }
    for (int j = 0; j + 1 < levels; ++j) {
        out.top.push_back(q.top_proj[j] * m.top[j] * top_inc[j + 1]);
        out.bottom.push_back(q.bottom_proj[j] * m.bottom[j] * bottom_inc[j + 1]);
        q.injective = q.injective && full_column_rank(out.top.back()) && full_column_rank(out.bottom.back());
    }
    return q;
}

FilteredKroneckerModule restrict_to(const FilteredKroneckerModule& m, const SubRepresentation& s)
{
    if (!is_subrep(m, s))
        throw ValidationError("restrict_to: not a subrepresentation");
    int levels = m.ell + 1;
    FilteredKroneckerModule out;
    out.field = m.field;
    out.ell = m.ell;
    out.h = m.h;
    out.weights = m.weights;
    for (int j = 0; j < levels; ++j) {
        KroneckerModule k;
        k.field = m.field;
        k.d1 = s.top[j].dim();
        k.d2 = s.bottom[j].dim();
        for (const Matrix& a : m.modules[j].alpha)
            k.alpha.push_back(restricted_map(a, s.top[j], s.bottom[j]));
        out.modules.push_back(std::move(k));
    }
    for (int j = 0; j + 1 < levels; ++j) {
        out.top.push_back(restricted_map(m.top[j], s.top[j + 1], s.top[j]));
        out.bottom.push_back(restricted_map(m.bottom[j], s.bottom[j + 1], s.bottom[j]));
    }
    return out;
}

FilteredKroneckerModule direct_sum(const FilteredKroneckerModule& a, const FilteredKroneckerModule& b)
{
    if (a.ell != b.ell || a.h != b.h || a.field != b.field)
        throw DimensionError("direct_sum: modules differ in ell, h or field");
    FilteredKroneckerModule out;
    out.field = a.field;
    out.ell = a.ell;
    out.h = a.h;
    if (a.weights == b.weights)
        out.weights = a.weights;
    for (int j = 0; j <= a.ell; ++j) {
        KroneckerModule k;
        k.field = a.field;
        k.d1 = a.modules[j].d1 + b.modules[j].d1;
        k.d2 = a.modules[j].d2 + b.modules[j].d2;
        for (std::size_t t = 0; t < a.h; ++t)
            k.alpha.push_back(block_diag(a.modules[j].alpha[t], b.modules[j].alpha[t]));
        out.modules.push_back(std::move(k));
    }
    for (int j = 0; j < a.ell; ++j) {
        out.top.push_back(block_diag(a.top[j], b.top[j]));
        out.bottom.push_back(block_diag(a.bottom[j], b.bottom[j]));
    }
    return out;
}

} // namespace parakron
