#pragma once

#include "parakron/field.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace parakron {

// Dense matrix over a prime field or the rationals. Residues are stored
// unboxed so that elimination over GF(p) stays cheap.
class Matrix
{
  public:
    Matrix() = default;
    Matrix(Field f, std::size_t rows, std::size_t cols);

    static Matrix identity(Field f, std::size_t n);
    static Matrix from_ints(Field f, const std::vector<std::vector<long long>>& rows);
    static Matrix from_scalars(Field f, std::size_t rows, std::size_t cols,
                               const std::vector<Scalar>& entries);
    static Matrix vstack(const Matrix& a, const Matrix& b);
    static Matrix hstack(const Matrix& a, const Matrix& b);

    Field field() const { return f_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Scalar at(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, const Scalar& v);
    void set(std::size_t i, std::size_t j, long long v);
    void add_to(std::size_t i, std::size_t j, const Scalar& v);
    bool zero_at(std::size_t i, std::size_t j) const;

    std::uint32_t* fp_row(std::size_t i) { return fp_.data() + i * cols_; }
    const std::uint32_t* fp_row(std::size_t i) const { return fp_.data() + i * cols_; }
    Rational* q_row(std::size_t i) { return q_.data() + i * cols_; }
    const Rational* q_row(std::size_t i) const { return q_.data() + i * cols_; }

    Matrix operator*(const Matrix& o) const;
    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix scaled(const Scalar& c) const;
    Matrix transpose() const;
    Matrix row(std::size_t i) const;
    Matrix select_rows(const std::vector<std::size_t>& idx) const;
    Matrix select_cols(const std::vector<std::size_t>& idx) const;
    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const Matrix& b);
    void append_rows(const Matrix& b);

    bool is_zero() const;
    bool operator==(const Matrix& o) const;
    bool operator!=(const Matrix& o) const { return !(*this == o); }

  private:
    Field f_;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<std::uint32_t> fp_;
    std::vector<Rational> q_;
};

struct RrefResult
{
    std::size_t rank = 0;
    Matrix echelon; // the nonzero rows only
    std::vector<std::size_t> pivots;
};

RrefResult rref(const Matrix& m);
std::size_t rank(const Matrix& m);
bool full_column_rank(const Matrix& m);

class Subspace;
Subspace kernel(const Matrix& m);

// Subspace of k^n held by its reduced row-echelon basis (rows = vectors).
class Subspace
{
  public:
    Subspace() = default;
    Subspace(Field f, std::size_t ambient);

    static Subspace span(const Matrix& rows);
    static Subspace full(Field f, std::size_t ambient);
    // Trusted constructor: rows already in reduced echelon form.
    static Subspace from_echelon(Matrix echelon, std::vector<std::size_t> pivots);

    Field field() const { return basis_.field(); }
    std::size_t ambient() const { return ambient_; }
    std::size_t dim() const { return pivots_.size(); }
    const Matrix& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    bool contains(const Matrix& rows) const;
    bool contains(const Subspace& o) const;
    // Coordinates of each row with respect to the echelon basis; rows must lie in the subspace.
    Matrix coordinates(const Matrix& rows) const;
    // Remove the components along the pivot columns.
    Matrix reduce(const Matrix& rows) const;
    // Linear functionals vanishing on the subspace, as rows.
    Matrix annihilator() const;
    std::vector<std::size_t> free_columns() const;

    bool operator==(const Subspace& o) const;
    bool operator!=(const Subspace& o) const { return !(*this == o); }
    bool operator<(const Subspace& o) const;

  private:
    std::size_t ambient_ = 0;
    Matrix basis_;
    std::vector<std::size_t> pivots_;
};

Subspace sum(const Subspace& a, const Subspace& b);
Subspace intersection(const Subspace& a, const Subspace& b);

struct SubspaceOps
{
    Subspace sum, intersection;
    bool containment = false; // a ⊆ b
    std::size_t quotient_dim = 0; // dim (a + b) / b
};
SubspaceOps subspace_ops(const Subspace& a, const Subspace& b);

// A acts on column vectors: k^{A.cols} -> k^{A.rows}.
Subspace image(const Matrix& a, const Subspace& s);
Subspace preimage(const Matrix& a, const Subspace& s);
Subspace column_space(const Matrix& a);

// Subspaces of k^n containing `base` correspond to subspaces of the
// complement spanned by the free coordinates of `base`.
Subspace lift_from_quotient(const Subspace& base, const Subspace& in_quotient);

std::uint64_t default_budget();
std::uint64_t gaussian_binomial(std::size_t n, std::size_t k, std::uint64_t q);
std::uint64_t subspace_count(std::size_t n, std::uint64_t q, std::optional<std::size_t> dim = {});
std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b);
std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b);

// All subspaces of GF(p)^n, by dimension and then by pivot columns
// (lexicographic) and free entries (odometer, last entry fastest).
class SubspaceEnumerator
{
  public:
    SubspaceEnumerator(Field f, std::size_t ambient, std::optional<std::size_t> dim = {},
                       std::uint64_t budget = default_budget());
    SubspaceEnumerator(Field f, std::size_t ambient, std::optional<std::size_t> dim,
                       std::uint64_t budget, bool descending);

    bool next(Subspace& out);
    std::uint64_t total() const { return total_; }

  private:
    bool start_dim();
    bool advance_pivots();
    void build(Subspace& out) const;

    Field f_;
    std::size_t n_;
    std::optional<std::size_t> only_;
    bool descending_ = false;
    std::uint64_t total_ = 0;
    std::size_t k_ = 0;
    bool started_ = false, done_ = false;
    std::vector<std::size_t> piv_;
    std::vector<std::pair<std::size_t, std::size_t>> free_;
    std::vector<std::uint32_t> vals_;
};

std::vector<Subspace> enumerate_subspaces(Field f, std::size_t ambient,
                                          std::optional<std::size_t> dim = {},
                                          std::uint64_t budget = default_budget());

} // namespace parakron
