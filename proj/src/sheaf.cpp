#include "parakron/sheaf.hpp"
#include "parakron/errors.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <string>

namespace parakron {

SheafP1::SheafP1(std::vector<int> splitting) : a_(std::move(splitting))
{
    if (a_.empty())
        throw ValidationError("a sheaf on P^1 needs rank at least 1");
    std::sort(a_.begin(), a_.end(), std::greater<int>());
}

int SheafP1::degree() const
{
    return std::accumulate(a_.begin(), a_.end(), 0);
}

SheafP1 SheafP1::twisted(int k) const
{
    std::vector<int> b = a_;
    for (int& v : b)
        v += k;
    return SheafP1(std::move(b));
}

std::string SheafP1::str() const
{
    std::string s;
    for (std::size_t i = 0; i < a_.size(); ++i)
        s += (i ? "+O(" : "O(") + std::to_string(a_[i]) + ")";
    return s;
}

int h0(const SheafP1& e, int k)
{
    int s = 0;
    for (int a : e.splitting())
        s += forms_dim(a + k);
    return s;
}

RatPoly hilbert_polynomial(const SheafP1& e)
{
    return RatPoly::linear(e.rank(), e.degree() + e.rank());
}

int regularity(const SheafP1& e)
{
    return -e.min_twist();
}

bool is_regular(const SheafP1& e, int n)
{
    return n >= regularity(e);
}

std::vector<int> section_offsets(const SheafP1& e, int k)
{
    std::vector<int> off;
    int o = 0;
    for (int a : e.splitting()) {
        off.push_back(o);
        o += forms_dim(a + k);
    }
    off.push_back(o);
    return off;
}

Matrix form_multiplication(const BinaryForm& g, int d)
{
    Field f = g.field();
    int src = forms_dim(d);
    int dst = forms_dim(d + g.degree());
    Matrix m(f, dst, src);
    for (int s = 0; s < src; ++s)
        for (int u = 0; u <= g.degree(); ++u)
            if (!g.coeff(u).is_zero())
                m.set(s + u, s, g.coeff(u));
    return m;
}

Matrix multiplication_matrix(Field f, const SheafP1& e, int k, const BinaryForm& g)
{
    auto so = section_offsets(e, k);
    auto to = section_offsets(e, k + g.degree());
    Matrix m(f, to.back(), so.back());
    for (int i = 0; i < e.rank(); ++i) {
        int d = e.splitting()[i] + k;
        if (d < 0)
            continue;
        m.set_block(to[i], so[i], form_multiplication(g, d));
    }
    return m;
}

std::vector<BinaryForm> monomial_basis(Field f, int degree)
{
    std::vector<BinaryForm> b;
    for (int i = 0; i <= degree; ++i)
        b.push_back(BinaryForm::monomial(f, degree, i));
    return b;
}

MultMap mult_map(Field f, const SheafP1& e, int n, int m)
{
    if (m <= n)
        throw ValidationError("mult_map needs m > n, got n=" + std::to_string(n) + ", m=" + std::to_string(m));
    if (!is_regular(e, n))
        throw NotRegularError("summand O(" + std::to_string(e.min_twist()) + ") is not " +
                              std::to_string(n) + "-regular");
    MultMap mm;
    mm.h_basis = monomial_basis(f, m - n);
    for (const auto& h : mm.h_basis)
        mm.alpha.push_back(multiplication_matrix(f, e, n, h));
    return mm;
}

void GradedPresentation::validate() const
{
    if (entries.size() != target_twists.size())
        throw ValidationError("presentation: entry rows do not match target twists");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].size() != source_twists.size())
            throw ValidationError("presentation: entry columns do not match source twists");
        for (std::size_t j = 0; j < source_twists.size(); ++j) {
            int d = target_twists[i] - source_twists[j];
            const BinaryForm& g = entries[i][j];
            if (d < 0) {
                if (g.degree() >= 0 && !g.is_zero())
                    throw ValidationError("presentation: entry (" + std::to_string(i) + "," +
                                          std::to_string(j) + ") has negative degree but is nonzero");
            } else if (g.degree() != d || g.field() != field) {
                throw ValidationError("presentation: entry (" + std::to_string(i) + "," +
                                      std::to_string(j) + ") should have degree " + std::to_string(d));
            }
        }
    }
}

namespace {

int free_dim(const std::vector<int>& twists, int t)
{
    int s = 0;
    for (int a : twists)
        s += forms_dim(t + a);
    return s;
}

bool live(const BinaryForm& g)
{
    return g.degree() >= 0 && !g.is_zero();
}

// Multiplication by a monomial on every target summand in degree t.
Matrix monomial_shift(Field f, const std::vector<int>& twists, int t, int deg, int ypow)
{
    BinaryForm g = BinaryForm::monomial(f, deg, ypow);
    int rows = free_dim(twists, t + deg), cols = free_dim(twists, t);
    Matrix m(f, rows, cols);
    int ro = 0, co = 0;
    for (int a : twists) {
        int d = t + a;
        if (d >= 0)
            m.set_block(ro, co, form_multiplication(g, d));
        ro += forms_dim(d + deg);
        co += forms_dim(d);
    }
    return m;
}

} // namespace

Matrix graded_piece(const GradedPresentation& p, int t)
{
    int rows = free_dim(p.target_twists, t), cols = free_dim(p.source_twists, t);
    Matrix m(p.field, rows, cols);
    int ro = 0;
    for (std::size_t i = 0; i < p.target_twists.size(); ++i) {
        int co = 0;
        for (std::size_t j = 0; j < p.source_twists.size(); ++j) {
            int d = t + p.source_twists[j];
            if (d >= 0 && live(p.entries[i][j]))
                m.set_block(ro, co, form_multiplication(p.entries[i][j], d));
            co += forms_dim(d);
        }
        ro += forms_dim(t + p.target_twists[i]);
    }
    return m;
}

std::size_t cokernel_dim(const GradedPresentation& p, int t)
{
    Matrix a = graded_piece(p, t);
    return a.rows() - rank(a);
}

GradedPresentation minimize(const GradedPresentation& p)
{
    GradedPresentation q = p;
    Field f = q.field;
    for (;;) {
        std::size_t pi = SIZE_MAX, pj = SIZE_MAX;
        for (std::size_t i = 0; i < q.target_twists.size() && pi == SIZE_MAX; ++i)
            for (std::size_t j = 0; j < q.source_twists.size(); ++j)
                if (q.target_twists[i] == q.source_twists[j] && live(q.entries[i][j])) {
                    pi = i;
                    pj = j;
                    break;
                }
        if (pi == SIZE_MAX)
            return q;
        Scalar cinv = q.entries[pi][pj].coeff(0).inverse();
        for (std::size_t k = 0; k < q.source_twists.size(); ++k) {
            if (k == pj || !live(q.entries[pi][k]))
                continue;
            BinaryForm mult = q.entries[pi][k].scaled(cinv);
            for (std::size_t r = 0; r < q.target_twists.size(); ++r) {
                if (!live(q.entries[r][pj]))
                    continue;
                BinaryForm prod = mult * q.entries[r][pj];
                BinaryForm& e = q.entries[r][k];
                e = e.degree() >= 0 ? e - prod : prod.scaled(Scalar(f, -1LL));
            }
        }
        q.target_twists.erase(q.target_twists.begin() + pi);
        q.entries.erase(q.entries.begin() + pi);
        q.source_twists.erase(q.source_twists.begin() + pj);
        for (auto& row : q.entries)
            row.erase(row.begin() + pj);
    }
}

std::size_t pairing_dim(const GradedPresentation& p, int k, int l)
{
    Field f = p.field;
    int f0 = free_dim(p.target_twists, k + l);
    if (f0 == 0)
        return 0;
    Matrix yl = monomial_shift(f, p.target_twists, k + l, l, l);
    Matrix xl = monomial_shift(f, p.target_twists, k + l, l, 0);
    Matrix a2 = graded_piece(p, k + 2 * l);
    Matrix a1 = graded_piece(p, k + l);
    Matrix big = Matrix::hstack(Matrix::hstack(yl, xl), a2);
    long long d = 2LL * f0 - static_cast<long long>(rank(big)) + static_cast<long long>(rank(a2)) -
                  2LL * static_cast<long long>(rank(a1));
    return static_cast<std::size_t>(d);
}

std::size_t torsion_dim(const GradedPresentation& p, int k, int l)
{
    Field f = p.field;
    int f0k = free_dim(p.target_twists, k);
    if (f0k == 0)
        return 0;
    Matrix xl = monomial_shift(f, p.target_twists, k, l, 0);
    Matrix yl = monomial_shift(f, p.target_twists, k, l, l);
    Matrix a1 = graded_piece(p, k + l);
    Matrix a0 = graded_piece(p, k);
    std::size_t r1 = xl.rows(), c1 = a1.cols();
    Matrix g(f, 2 * r1, f0k + 2 * c1);
    g.set_block(0, 0, xl);
    g.set_block(r1, 0, yl);
    g.set_block(0, f0k, a1);
    g.set_block(r1, f0k + c1, a1);
    long long d = f0k - static_cast<long long>(rank(g)) + 2LL * static_cast<long long>(rank(a1)) -
                  static_cast<long long>(rank(a0));
    return static_cast<std::size_t>(d);
}

int default_level(const GradedPresentation& p)
{
    std::vector<int> all = p.target_twists;
    all.insert(all.end(), p.source_twists.begin(), p.source_twists.end());
    if (all.empty())
        return 1;
    auto [lo, hi] = std::minmax_element(all.begin(), all.end());
    return *hi - *lo + 1;
}

SaturatedPiece saturated_piece(const GradedPresentation& p, int k, int level, int doublings)
{
    if (level < 1)
        throw ValidationError("saturation level must be at least 1");
    std::vector<std::size_t> vals;
    std::vector<int> levels;
    int l = level;
    for (int step = 0; step <= doublings; ++step, l *= 2) {
        vals.push_back(pairing_dim(p, k, l));
        levels.push_back(l);
        std::size_t n = vals.size();
        if (n >= 3 && vals[n - 1] == vals[n - 2] && vals[n - 2] == vals[n - 3])
            return {vals[n - 1], levels[n - 3]};
    }
    throw SaturationError("saturation at degree " + std::to_string(k) + " did not stabilize within " +
                          std::to_string(doublings) + " doublings");
}

SheafP1 recover_splitting(const GradedPresentation& raw)
{
    raw.validate();
    GradedPresentation p = minimize(raw);
    if (p.target_twists.empty())
        throw NotLocallyFreeError("cokernel is the zero sheaf");
    int level = default_level(p);
    int t0 = INT32_MIN;
    for (int a : p.target_twists)
        t0 = std::max(t0, -a);
    for (int b : p.source_twists)
        t0 = std::max(t0, -b);

    std::map<int, long long> h;
    auto sat = [&](int k) -> long long {
        auto it = h.find(k);
        if (it != h.end())
            return it->second;
        long long v = static_cast<long long>(saturated_piece(p, k, level).dim);
        h[k] = v;
        return v;
    };

    int top = INT32_MIN;
    long long r = 0;
    for (int t = t0; t < t0 + 64; ++t) {
        long long n0 = static_cast<long long>(cokernel_dim(p, t));
        long long n1 = static_cast<long long>(cokernel_dim(p, t + 1));
        long long n2 = static_cast<long long>(cokernel_dim(p, t + 2));
        if (n1 - n0 != n2 - n1)
            continue;
        if (sat(t) != n0 || sat(t + 1) != n1 || sat(t + 2) != n2)
            continue;
        top = t;
        r = n1 - n0;
        break;
    }
    if (top == INT32_MIN)
        throw SaturationError("Hilbert function of the cokernel did not become linear");
    if (r <= 0) {
        if (sat(top) > 0)
            throw NotLocallyFreeError("cokernel sheaf is torsion (rank 0, h0 = " +
                                      std::to_string(sat(top)) + ")");
        throw NotLocallyFreeError("cokernel is the zero sheaf");
    }

    // D(k) = h0(k) - h0(k-1) counts summands with a_i >= -k.
    std::vector<int> splitting;
    long long prev_count = r;
    int k = top;
    for (int guard = 0; guard < 512; ++guard, --k) {
        long long dk = sat(k) - sat(k - 1);
        if (dk > prev_count || dk < 0)
            throw NotLocallyFreeError("h0 jumps are inconsistent with a vector bundle");
        for (long long c = dk; c < prev_count; ++c)
            splitting.push_back(-k - 1);
        prev_count = dk;
        if (dk == 0) {
            if (sat(k - 1) != 0)
                throw NotLocallyFreeError("h0 exceeds every splitting-type fit (torsion of length " +
                                          std::to_string(sat(k - 1)) + ")");
            break;
        }
    }
    if (prev_count != 0)
        throw SaturationError("splitting recovery did not terminate");
    SheafP1 e(splitting);
    for (const auto& [kk, v] : h)
        if (h0(e, kk) != v)
            throw NotLocallyFreeError("h0 at twist " + std::to_string(kk) + " does not match splitting fit");
    long long c = static_cast<long long>(cokernel_dim(p, top)) - r * top;
    if (c != e.degree() + e.rank())
        throw NotLocallyFreeError("Hilbert polynomial does not match the recovered splitting");
    return e;
}

} // namespace parakron
