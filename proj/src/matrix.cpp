#include "parakron/matrix.hpp"
#include "parakron/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace parakron {

Matrix::Matrix(Field f, std::size_t rows, std::size_t cols) : f_(f), rows_(rows), cols_(cols)
{
    if (f.finite())
        fp_.assign(rows * cols, 0);
    else
        q_.assign(rows * cols, Rational(0));
}

Matrix Matrix::identity(Field f, std::size_t n)
{
    Matrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.set(i, i, 1LL);
    return m;
}

Matrix Matrix::from_ints(Field f, const std::vector<std::vector<long long>>& rows)
{
    std::size_t c = rows.empty() ? 0 : rows[0].size();
    Matrix m(f, rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != c)
            throw DimensionError("ragged matrix literal");
        for (std::size_t j = 0; j < c; ++j)
            m.set(i, j, rows[i][j]);
    }
    return m;
}

Matrix Matrix::from_scalars(Field f, std::size_t rows, std::size_t cols,
                            const std::vector<Scalar>& entries)
{
    if (entries.size() != rows * cols)
        throw DimensionError("matrix entry count does not match its shape");
    Matrix m(f, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m.set(i, j, entries[i * cols + j]);
    return m;
}

Matrix Matrix::vstack(const Matrix& a, const Matrix& b)
{
    if (a.rows_ == 0 && a.cols_ == 0)
        return b;
    if (b.rows_ == 0 && b.cols_ == 0)
        return a;
    if (a.cols_ != b.cols_ || a.f_ != b.f_)
        throw DimensionError("vstack: shape mismatch");
    Matrix m = a;
    m.append_rows(b);
    return m;
}

Matrix Matrix::hstack(const Matrix& a, const Matrix& b)
{
    if (a.rows_ != b.rows_ || a.f_ != b.f_)
        throw DimensionError("hstack: shape mismatch");
    Matrix m(a.f_, a.rows_, a.cols_ + b.cols_);
    m.set_block(0, 0, a);
    m.set_block(0, a.cols_, b);
    return m;
}

Scalar Matrix::at(std::size_t i, std::size_t j) const
{
    if (f_.finite())
        return Scalar::residue(f_, fp_[i * cols_ + j]);
    return Scalar(f_, q_[i * cols_ + j]);
}

void Matrix::set(std::size_t i, std::size_t j, const Scalar& v)
{
    if (v.field() != f_)
        throw ValidationError("matrix entry from " + v.field().name() + " in a matrix over " +
                              f_.name());
    if (f_.finite())
        fp_[i * cols_ + j] = v.residue();
    else
        q_[i * cols_ + j] = v.rational();
}

void Matrix::set(std::size_t i, std::size_t j, long long v)
{
    set(i, j, Scalar(f_, v));
}

void Matrix::add_to(std::size_t i, std::size_t j, const Scalar& v)
{
    set(i, j, at(i, j) + v);
}

bool Matrix::zero_at(std::size_t i, std::size_t j) const
{
    return f_.finite() ? fp_[i * cols_ + j] == 0 : q_[i * cols_ + j] == 0;
}

Matrix Matrix::operator*(const Matrix& o) const
{
    if (cols_ != o.rows_ || f_ != o.f_)
        throw DimensionError("matrix product: shape mismatch " + std::to_string(rows_) + "x" +
                             std::to_string(cols_) + " * " + std::to_string(o.rows_) + "x" +
                             std::to_string(o.cols_));
    Matrix m(f_, rows_, o.cols_);
    if (f_.finite()) {
        const std::uint64_t p = f_.p;
        std::vector<std::uint64_t> acc(o.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            std::fill(acc.begin(), acc.end(), 0);
            const std::uint32_t* a = fp_row(i);
            for (std::size_t k = 0; k < cols_; ++k) {
                if (a[k] == 0)
                    continue;
                const std::uint32_t* b = o.fp_row(k);
                for (std::size_t j = 0; j < o.cols_; ++j)
                    acc[j] = (acc[j] + static_cast<std::uint64_t>(a[k]) * b[j]) % p;
            }
            std::uint32_t* r = m.fp_row(i);
            for (std::size_t j = 0; j < o.cols_; ++j)
                r[j] = static_cast<std::uint32_t>(acc[j]);
        }
    } else {
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Rational& a = q_[i * cols_ + k];
                if (a == 0)
                    continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    if (o.q_[k * o.cols_ + j] != 0)
                        m.q_[i * o.cols_ + j] += a * o.q_[k * o.cols_ + j];
            }
    }
    return m;
}

Matrix Matrix::operator+(const Matrix& o) const
{
    if (rows_ != o.rows_ || cols_ != o.cols_ || f_ != o.f_)
        throw DimensionError("matrix sum: shape mismatch");
    Matrix m = *this;
    for (std::size_t i = 0; i < rows_ * cols_; ++i) {
        if (f_.finite())
            m.fp_[i] = static_cast<std::uint32_t>((static_cast<std::uint64_t>(fp_[i]) + o.fp_[i]) % f_.p);
        else
            m.q_[i] += o.q_[i];
    }
    return m;
}

Matrix Matrix::operator-(const Matrix& o) const
{
    return *this + o.scaled(Scalar(f_, -1LL));
}

Matrix Matrix::scaled(const Scalar& c) const
{
    Matrix m = *this;
    for (std::size_t i = 0; i < rows_ * cols_; ++i) {
        if (f_.finite())
            m.fp_[i] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(fp_[i]) * c.residue() % f_.p);
        else
            m.q_[i] *= c.rational();
    }
    return m;
}

Matrix Matrix::transpose() const
{
    Matrix m(f_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) {
            if (f_.finite())
                m.fp_[j * rows_ + i] = fp_[i * cols_ + j];
            else
                m.q_[j * rows_ + i] = q_[i * cols_ + j];
        }
    return m;
}

Matrix Matrix::row(std::size_t i) const
{
    return block(i, 0, 1, cols_);
}

Matrix Matrix::select_rows(const std::vector<std::size_t>& idx) const
{
    Matrix m(f_, idx.size(), cols_);
    for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t j = 0; j < cols_; ++j) {
            if (f_.finite())
                m.fp_[r * cols_ + j] = fp_[idx[r] * cols_ + j];
            else
                m.q_[r * cols_ + j] = q_[idx[r] * cols_ + j];
        }
    return m;
}

Matrix Matrix::select_cols(const std::vector<std::size_t>& idx) const
{
    Matrix m(f_, rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t c = 0; c < idx.size(); ++c) {
            if (f_.finite())
                m.fp_[i * idx.size() + c] = fp_[i * cols_ + idx[c]];
            else
                m.q_[i * idx.size() + c] = q_[i * cols_ + idx[c]];
        }
    return m;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const
{
    Matrix m(f_, nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) {
            if (f_.finite())
                m.fp_[i * nc + j] = fp_[(r0 + i) * cols_ + c0 + j];
            else
                m.q_[i * nc + j] = q_[(r0 + i) * cols_ + c0 + j];
        }
    return m;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b)
{
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_ || b.f_ != f_)
        throw DimensionError("set_block: out of range");
    for (std::size_t i = 0; i < b.rows_; ++i)
        for (std::size_t j = 0; j < b.cols_; ++j) {
            if (f_.finite())
                fp_[(r0 + i) * cols_ + c0 + j] = b.fp_[i * b.cols_ + j];
            else
                q_[(r0 + i) * cols_ + c0 + j] = b.q_[i * b.cols_ + j];
        }
}

void Matrix::append_rows(const Matrix& b)
{
    if (b.rows_ == 0)
        return;
    if (rows_ == 0 && cols_ == 0) {
        *this = b;
        return;
    }
    if (b.cols_ != cols_ || b.f_ != f_)
        throw DimensionError("append_rows: shape mismatch");
    if (f_.finite())
        fp_.insert(fp_.end(), b.fp_.begin(), b.fp_.end());
    else
        q_.insert(q_.end(), b.q_.begin(), b.q_.end());
    rows_ += b.rows_;
}

bool Matrix::is_zero() const
{
    if (f_.finite())
        return std::all_of(fp_.begin(), fp_.end(), [](std::uint32_t v) { return v == 0; });
    return std::all_of(q_.begin(), q_.end(), [](const Rational& v) { return v == 0; });
}

bool Matrix::operator==(const Matrix& o) const
{
    return f_ == o.f_ && rows_ == o.rows_ && cols_ == o.cols_ && fp_ == o.fp_ && q_ == o.q_;
}

namespace {

std::vector<std::size_t> eliminate_fp(std::uint32_t* a, std::size_t rows, std::size_t cols,
                                      std::uint32_t p)
{
    std::vector<std::size_t> piv;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t s = r;
        while (s < rows && a[s * cols + c] == 0)
            ++s;
        if (s == rows)
            continue;
        if (s != r)
            std::swap_ranges(a + s * cols, a + s * cols + cols, a + r * cols);
        std::uint32_t* pr = a + r * cols;
        std::uint64_t inv = inv_mod(pr[c], p);
        if (inv != 1)
            for (std::size_t j = c; j < cols; ++j)
                pr[j] = static_cast<std::uint32_t>(pr[j] * inv % p);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r)
                continue;
            std::uint32_t* row = a + i * cols;
            std::uint64_t f = row[c];
            if (f == 0)
                continue;
            std::uint64_t g = p - f;
            for (std::size_t j = c; j < cols; ++j)
                if (pr[j] != 0)
                    row[j] = static_cast<std::uint32_t>((row[j] + g * pr[j]) % p);
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

std::vector<std::size_t> eliminate_q(Rational* a, std::size_t rows, std::size_t cols)
{
    std::vector<std::size_t> piv;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t s = r;
        while (s < rows && a[s * cols + c] == 0)
            ++s;
        if (s == rows)
            continue;
        if (s != r)
            for (std::size_t j = 0; j < cols; ++j)
                std::swap(a[s * cols + j], a[r * cols + j]);
        Rational* pr = a + r * cols;
        Rational inv = 1 / pr[c];
        for (std::size_t j = c; j < cols; ++j)
            if (pr[j] != 0)
                pr[j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r)
                continue;
            Rational* row = a + i * cols;
            if (row[c] == 0)
                continue;
            Rational f = row[c];
            for (std::size_t j = c; j < cols; ++j)
                if (pr[j] != 0)
                    row[j] -= f * pr[j];
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

std::vector<std::size_t> eliminate(Matrix& m)
{
    if (m.rows() == 0 || m.cols() == 0)
        return {};
    if (m.field().finite())
        return eliminate_fp(m.fp_row(0), m.rows(), m.cols(), m.field().p);
    return eliminate_q(m.q_row(0), m.rows(), m.cols());
}

} // namespace

RrefResult rref(const Matrix& m)
{
    Matrix a = m;
    RrefResult res;
    res.pivots = eliminate(a);
    res.rank = res.pivots.size();
    res.echelon = a.block(0, 0, res.rank, m.cols());
    return res;
}

std::size_t rank(const Matrix& m)
{
    Matrix a = m;
    return eliminate(a).size();
}

bool full_column_rank(const Matrix& m)
{
    return rank(m) == m.cols();
}

Subspace kernel(const Matrix& m)
{
    Field f = m.field();
    std::size_t n = m.cols();
    RrefResult r = rref(m);
    std::vector<bool> is_piv(n, false);
    for (std::size_t c : r.pivots)
        is_piv[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < n; ++c)
        if (!is_piv[c])
            free_cols.push_back(c);
    Matrix k(f, free_cols.size(), n);
    for (std::size_t t = 0; t < free_cols.size(); ++t) {
        std::size_t fc = free_cols[t];
        k.set(t, fc, 1LL);
        for (std::size_t i = 0; i < r.rank; ++i)
            if (!r.echelon.zero_at(i, fc))
                k.set(t, r.pivots[i], -r.echelon.at(i, fc));
    }
    return Subspace::span(k);
}

Subspace::Subspace(Field f, std::size_t ambient) : ambient_(ambient), basis_(f, 0, ambient) {}

Subspace Subspace::span(const Matrix& rows)
{
    RrefResult r = rref(rows);
    Subspace s;
    s.ambient_ = rows.cols();
    s.basis_ = std::move(r.echelon);
    s.pivots_ = std::move(r.pivots);
    return s;
}

Subspace Subspace::full(Field f, std::size_t ambient)
{
    return span(Matrix::identity(f, ambient));
}

Subspace Subspace::from_echelon(Matrix echelon, std::vector<std::size_t> pivots)
{
    Subspace s;
    s.ambient_ = echelon.cols();
    s.basis_ = std::move(echelon);
    s.pivots_ = std::move(pivots);
    return s;
}

Matrix Subspace::reduce(const Matrix& rows) const
{
    if (rows.cols() != ambient_)
        throw DimensionError("vector length does not match the ambient dimension");
    Matrix out = rows;
    Field f = field();
    for (std::size_t i = 0; i < out.rows(); ++i)
        for (std::size_t k = 0; k < pivots_.size(); ++k) {
            std::size_t pc = pivots_[k];
            if (out.zero_at(i, pc))
                continue;
            if (f.finite()) {
                std::uint64_t p = f.p;
                std::uint64_t c = p - out.fp_row(i)[pc];
                const std::uint32_t* b = basis_.fp_row(k);
                std::uint32_t* o = out.fp_row(i);
                for (std::size_t j = pc; j < ambient_; ++j)
                    if (b[j])
                        o[j] = static_cast<std::uint32_t>((o[j] + c * b[j]) % p);
            } else {
                Rational c = out.q_row(i)[pc];
                const Rational* b = basis_.q_row(k);
                Rational* o = out.q_row(i);
                for (std::size_t j = pc; j < ambient_; ++j)
                    if (b[j] != 0)
                        o[j] -= c * b[j];
            }
        }
    return out;
}

bool Subspace::contains(const Matrix& rows) const
{
    return reduce(rows).is_zero();
}

bool Subspace::contains(const Subspace& o) const
{
    if (o.ambient_ != ambient_)
        throw DimensionError("subspace containment: ambient mismatch");
    return o.dim() <= dim() && contains(o.basis_);
}

Matrix Subspace::coordinates(const Matrix& rows) const
{
    Matrix c = rows.select_cols(pivots_);
    return c;
}

Matrix Subspace::annihilator() const
{
    if (dim() == 0)
        return Matrix::identity(field(), ambient_);
    return kernel(basis_).basis();
}

std::vector<std::size_t> Subspace::free_columns() const
{
    std::vector<bool> used(ambient_, false);
    for (std::size_t c : pivots_)
        used[c] = true;
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < ambient_; ++c)
        if (!used[c])
            out.push_back(c);
    return out;
}

bool Subspace::operator==(const Subspace& o) const
{
    return ambient_ == o.ambient_ && pivots_ == o.pivots_ && basis_ == o.basis_;
}

bool Subspace::operator<(const Subspace& o) const
{
    if (dim() != o.dim())
        return dim() < o.dim();
    if (pivots_ != o.pivots_)
        return pivots_ < o.pivots_;
    for (std::size_t i = 0; i < basis_.rows(); ++i)
        for (std::size_t j = 0; j < ambient_; ++j) {
            Scalar a = basis_.at(i, j), b = o.basis_.at(i, j);
            if (a == b)
                continue;
            if (field().finite())
                return a.residue() < b.residue();
            return a.rational() < b.rational();
        }
    return false;
}

Subspace sum(const Subspace& a, const Subspace& b)
{
    if (a.ambient() != b.ambient())
        throw DimensionError("subspace sum: ambient mismatch");
    return Subspace::span(Matrix::vstack(a.basis(), b.basis()));
}

Subspace intersection(const Subspace& a, const Subspace& b)
{
    if (a.ambient() != b.ambient())
        throw DimensionError("subspace intersection: ambient mismatch");
    if (a.dim() == 0 || b.dim() == 0)
        return Subspace(a.field(), a.ambient());
    if (a.dim() == a.ambient())
        return b;
    if (b.dim() == b.ambient())
        return a;
    return kernel(Matrix::vstack(a.annihilator(), b.annihilator()));
}

SubspaceOps subspace_ops(const Subspace& a, const Subspace& b)
{
    SubspaceOps r;
    r.sum = sum(a, b);
    r.intersection = intersection(a, b);
    r.containment = r.intersection == a;
    r.quotient_dim = r.sum.dim() - b.dim();
    return r;
}

Subspace image(const Matrix& a, const Subspace& s)
{
    if (a.cols() != s.ambient())
        throw DimensionError("image: map and subspace do not match");
    if (s.dim() == 0)
        return Subspace(a.field(), a.rows());
    return Subspace::span(s.basis() * a.transpose());
}

Subspace preimage(const Matrix& a, const Subspace& s)
{
    if (a.rows() != s.ambient())
        throw DimensionError("preimage: map and subspace do not match");
    if (s.dim() == s.ambient())
        return Subspace::full(a.field(), a.cols());
    return kernel(s.annihilator() * a);
}

Subspace column_space(const Matrix& a)
{
    return Subspace::span(a.transpose());
}

Subspace lift_from_quotient(const Subspace& base, const Subspace& in_quotient)
{
    std::vector<std::size_t> fc = base.free_columns();
    if (in_quotient.ambient() != fc.size())
        throw DimensionError("lift_from_quotient: quotient dimension mismatch");
    Matrix lifted(base.field(), in_quotient.dim(), base.ambient());
    for (std::size_t i = 0; i < in_quotient.dim(); ++i)
        for (std::size_t t = 0; t < fc.size(); ++t)
            lifted.set(i, fc[t], in_quotient.basis().at(i, t));
    return Subspace::span(Matrix::vstack(base.basis(), lifted));
}

std::uint64_t default_budget()
{
    if (const char* env = std::getenv("PARAKRON_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return v;
    }
    return 3000;
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b)
{
    return a > UINT64_MAX - b ? UINT64_MAX : a + b;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b)
{
    if (a == 0 || b == 0)
        return 0;
    return a > UINT64_MAX / b ? UINT64_MAX : a * b;
}

std::uint64_t gaussian_binomial(std::size_t n, std::size_t k, std::uint64_t q)
{
    if (k > n)
        return 0;
    // Pascal-type recurrence [n,k] = [n-1,k-1] + q^k [n-1,k].
    std::vector<std::vector<std::uint64_t>> t(n + 1, std::vector<std::uint64_t>(n + 1, 0));
    for (std::size_t i = 0; i <= n; ++i) {
        t[i][0] = 1;
        std::uint64_t qk = 1;
        for (std::size_t j = 1; j <= i; ++j) {
            qk = saturating_mul(qk, q);
            t[i][j] = saturating_add(t[i - 1][j - 1], saturating_mul(qk, j <= i - 1 ? t[i - 1][j] : 0));
        }
    }
    return t[n][k];
}

std::uint64_t subspace_count(std::size_t n, std::uint64_t q, std::optional<std::size_t> dim)
{
    if (dim)
        return gaussian_binomial(n, *dim, q);
    std::uint64_t s = 0;
    for (std::size_t k = 0; k <= n; ++k)
        s = saturating_add(s, gaussian_binomial(n, k, q));
    return s;
}

SubspaceEnumerator::SubspaceEnumerator(Field f, std::size_t ambient, std::optional<std::size_t> dim,
                                       std::uint64_t budget)
    : SubspaceEnumerator(f, ambient, dim, budget, false)
{
}

SubspaceEnumerator::SubspaceEnumerator(Field f, std::size_t ambient, std::optional<std::size_t> dim,
                                       std::uint64_t budget, bool descending)
    : f_(f), n_(ambient), only_(dim), descending_(descending)
{
    if (!f.finite())
        throw ValidationError("subspace enumeration needs a finite field");
    if (dim && *dim > ambient) {
        done_ = true;
        return;
    }
    total_ = subspace_count(ambient, f.p, dim);
    if (total_ > budget)
        throw BudgetError("enumeration too large: " + std::to_string(total_) +
                          " subspaces of dimension-" + std::to_string(ambient) + " space over " +
                          f.name() + " exceed budget " + std::to_string(budget));
}

bool SubspaceEnumerator::start_dim()
{
    piv_.resize(k_);
    for (std::size_t i = 0; i < k_; ++i)
        piv_[i] = i;
    return true;
}

bool SubspaceEnumerator::advance_pivots()
{
    // next k-combination of {0..n-1} in lexicographic order
    std::size_t k = piv_.size();
    if (k == 0)
        return false;
    std::size_t i = k;
    while (i > 0) {
        --i;
        if (piv_[i] < n_ - k + i) {
            ++piv_[i];
            for (std::size_t j = i + 1; j < k; ++j)
                piv_[j] = piv_[j - 1] + 1;
            return true;
        }
    }
    return false;
}

void SubspaceEnumerator::build(Subspace& out) const
{
    Matrix b(f_, piv_.size(), n_);
    for (std::size_t r = 0; r < piv_.size(); ++r)
        b.fp_row(r)[piv_[r]] = 1;
    for (std::size_t t = 0; t < free_.size(); ++t)
        b.fp_row(free_[t].first)[free_[t].second] = vals_[t];
    out = Subspace::from_echelon(std::move(b), piv_);
}

bool SubspaceEnumerator::next(Subspace& out)
{
    if (done_)
        return false;
    auto setup_free = [this]() {
        free_.clear();
        std::vector<bool> is_piv(n_, false);
        for (std::size_t c : piv_)
            is_piv[c] = true;
        for (std::size_t r = 0; r < piv_.size(); ++r)
            for (std::size_t c = piv_[r] + 1; c < n_; ++c)
                if (!is_piv[c])
                    free_.push_back({r, c});
        vals_.assign(free_.size(), 0);
    };
    if (!started_) {
        started_ = true;
        if (only_)
            k_ = *only_;
        else
            k_ = descending_ ? n_ : 0;
        start_dim();
        setup_free();
        build(out);
        return true;
    }
    // odometer over free entries
    for (std::size_t t = vals_.size(); t > 0; --t) {
        if (vals_[t - 1] + 1 < f_.p) {
            ++vals_[t - 1];
            for (std::size_t u = t; u < vals_.size(); ++u)
                vals_[u] = 0;
            build(out);
            return true;
        }
    }
    if (advance_pivots()) {
        setup_free();
        build(out);
        return true;
    }
    if (only_) {
        done_ = true;
        return false;
    }
    if (descending_) {
        if (k_ == 0) {
            done_ = true;
            return false;
        }
        --k_;
    } else {
        if (k_ == n_) {
            done_ = true;
            return false;
        }
        ++k_;
    }
    start_dim();
    setup_free();
    build(out);
    return true;
}

std::vector<Subspace> enumerate_subspaces(Field f, std::size_t ambient, std::optional<std::size_t> dim,
                                          std::uint64_t budget)
{
    SubspaceEnumerator e(f, ambient, dim, budget);
    std::vector<Subspace> out;
    Subspace s;
    while (e.next(s))
        out.push_back(s);
    return out;
}

} // namespace parakron
