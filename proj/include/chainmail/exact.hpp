#pragma once

// Exact arbitrary-precision integer matrix kernel: determinants (Bareiss),
// Smith normal form with unimodular transforms, positive-definiteness,
// cokernel structure. No floating point.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chainmail {

using Int = boost::multiprecision::cpp_int;

struct IntMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<Int> entries;  // row-major
    std::vector<std::string> row_labels;  // optional, size rows or empty
    std::vector<std::string> col_labels;  // optional, size cols or empty

    IntMatrix() = default;
    IntMatrix(int r, int c) : rows(r), cols(c), entries(static_cast<size_t>(r) * c) {
        if (r < 0 || c < 0) throw std::invalid_argument("IntMatrix: negative dimension");
    }

    static IntMatrix identity(int n) {
        IntMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    Int& at(int i, int j) { return entries[static_cast<size_t>(i) * cols + j]; }
    const Int& at(int i, int j) const { return entries[static_cast<size_t>(i) * cols + j]; }

    bool is_square() const { return rows == cols; }

    bool is_symmetric() const {
        if (!is_square()) return false;
        for (int i = 0; i < rows; ++i)
            for (int j = i + 1; j < cols; ++j)
                if (at(i, j) != at(j, i)) return false;
        return true;
    }

    bool operator==(const IntMatrix& o) const {
        return rows == o.rows && cols == o.cols && entries == o.entries;
    }

    IntMatrix operator*(const IntMatrix& o) const {
        if (cols != o.rows) throw std::invalid_argument("IntMatrix: dimension mismatch in product");
        IntMatrix r(rows, o.cols);
        for (int i = 0; i < rows; ++i)
            for (int k = 0; k < cols; ++k) {
                const Int& a = at(i, k);
                if (a == 0) continue;
                for (int j = 0; j < o.cols; ++j) r.at(i, j) += a * o.at(k, j);
            }
        return r;
    }

    IntMatrix submatrix(int r0, int c0, int r1, int c1) const {
        IntMatrix s(r1 - r0, c1 - c0);
        for (int i = r0; i < r1; ++i)
            for (int j = c0; j < c1; ++j) s.at(i - r0, j - c0) = at(i, j);
        return s;
    }
};

// Exact determinant by fraction-free (Bareiss) elimination.
// Pivot rule: first nonzero entry in column order. 0x0 matrix -> 1.
inline Int determinant(const IntMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("determinant: matrix is not square");
    const int n = m.rows;
    if (n == 0) return 1;
    IntMatrix a = m;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a.at(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (a.at(i, k) != 0) { p = i; break; }
            if (p < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(p, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j)
                a.at(i, j) = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / prev;
            a.at(i, k) = 0;
        }
        prev = a.at(k, k);
    }
    return sign > 0 ? a.at(n - 1, n - 1) : -a.at(n - 1, n - 1);
}

// True iff all leading principal minors are > 0 (Sylvester's criterion, exact).
inline bool is_positive_definite(const IntMatrix& m) {
    if (!m.is_symmetric()) throw std::invalid_argument("is_positive_definite: matrix is not symmetric");
    for (int k = 1; k <= m.rows; ++k)
        if (determinant(m.submatrix(0, 0, k, k)) <= 0) return false;
    return true;
}

struct SmithNormalForm {
    std::vector<Int> diagonal;  // nonnegative, divisibility order, length min(rows, cols)
    IntMatrix left;             // unimodular, rows x rows
    IntMatrix right;            // unimodular, cols x cols
};

namespace detail {

inline void row_op(IntMatrix& a, IntMatrix& l, int i, int j, const Int& p, const Int& q,
                   const Int& r, const Int& s) {
    // rows (i,j) <- (p*row_i + q*row_j, r*row_i + s*row_j) applied to a and l
    for (IntMatrix* m : {&a, &l}) {
        for (int k = 0; k < m->cols; ++k) {
            Int x = m->at(i, k), y = m->at(j, k);
            m->at(i, k) = p * x + q * y;
            m->at(j, k) = r * x + s * y;
        }
    }
}

inline void col_op(IntMatrix& a, IntMatrix& rgt, int i, int j, const Int& p, const Int& q,
                   const Int& r, const Int& s) {
    for (IntMatrix* m : {&a, &rgt}) {
        for (int k = 0; k < m->rows; ++k) {
            Int x = m->at(k, i), y = m->at(k, j);
            m->at(k, i) = p * x + q * y;
            m->at(k, j) = r * x + s * y;
        }
    }
}

inline Int ext_gcd(const Int& a, const Int& b, Int& x, Int& y) {
    if (b == 0) {
        x = a >= 0 ? 1 : -1;
        y = 0;
        return abs(a);
    }
    Int x1, y1;
    Int g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

}  // namespace detail

// left * m * right = diag(diagonal), entries nonnegative in divisibility order.
// Transforms are checked unimodular and the factorization is re-verified.
inline SmithNormalForm smith_normal_form(const IntMatrix& m) {
    IntMatrix a = m;
    a.row_labels.clear();
    a.col_labels.clear();
    IntMatrix l = IntMatrix::identity(m.rows);
    IntMatrix r = IntMatrix::identity(m.cols);
    const int n = std::min(m.rows, m.cols);

    for (int t = 0; t < n; ++t) {
        // pick pivot: nonzero entry of minimal absolute value in the remaining block
        int pi = -1, pj = -1;
        Int best;
        for (int i = t; i < a.rows; ++i)
            for (int j = t; j < a.cols; ++j)
                if (a.at(i, j) != 0 && (pi < 0 || abs(a.at(i, j)) < best)) {
                    pi = i;
                    pj = j;
                    best = abs(a.at(i, j));
                }
        if (pi < 0) break;  // remaining block is zero
        if (pi != t) detail::row_op(a, l, t, pi, 0, 1, 1, 0);
        if (pj != t) detail::col_op(a, r, t, pj, 0, 1, 1, 0);

        // Clears row/column t. Plain elimination (which leaves row/column t
        // intact) when the entry is divisible by the pivot, a gcd rotation
        // otherwise; each rotation strictly shrinks |pivot|, so it terminates.
        auto clear_cross = [&] {
            bool again = true;
            while (again) {
                again = false;
                for (int i = t + 1; i < a.rows; ++i) {
                    if (a.at(i, t) == 0) continue;
                    if (a.at(i, t) % a.at(t, t) == 0) {
                        detail::row_op(a, l, t, i, 1, 0, -(a.at(i, t) / a.at(t, t)), 1);
                    } else {
                        Int x, y;
                        Int g = detail::ext_gcd(a.at(t, t), a.at(i, t), x, y);
                        Int u = a.at(t, t) / g, v = a.at(i, t) / g;
                        detail::row_op(a, l, t, i, x, y, -v, u);
                        again = true;  // the rotation may refill row t
                    }
                }
                for (int j = t + 1; j < a.cols; ++j) {
                    if (a.at(t, j) == 0) continue;
                    if (a.at(t, j) % a.at(t, t) == 0) {
                        detail::col_op(a, r, t, j, 1, 0, -(a.at(t, j) / a.at(t, t)), 1);
                    } else {
                        Int x, y;
                        Int g = detail::ext_gcd(a.at(t, t), a.at(t, j), x, y);
                        Int u = a.at(t, t) / g, v = a.at(t, j) / g;
                        detail::col_op(a, r, t, j, x, y, -v, u);
                        again = true;  // the rotation may refill column t
                    }
                }
            }
        };
        clear_cross();
        // enforce divisibility: a(t,t) must divide the remaining block
        bool fixed = false;
        while (!fixed) {
            fixed = true;
            for (int i = t + 1; i < a.rows && fixed; ++i)
                for (int j = t + 1; j < a.cols && fixed; ++j)
                    if (a.at(i, j) % a.at(t, t) != 0) {
                        detail::row_op(a, l, t, i, 1, 1, 0, 1);  // row t += row i
                        clear_cross();  // shrinks |pivot| to a proper divisor
                        fixed = false;
                    }
        }
        if (a.at(t, t) < 0) {
            for (int k = 0; k < a.cols; ++k) a.at(t, k) = -a.at(t, k);
            for (int k = 0; k < l.cols; ++k) l.at(t, k) = -l.at(t, k);
        }
    }

    SmithNormalForm out;
    out.diagonal.resize(n);
    for (int t = 0; t < n; ++t) out.diagonal[t] = a.at(t, t);
    out.left = std::move(l);
    out.right = std::move(r);

    Int dl = determinant(out.left), dr = determinant(out.right);
    if (abs(dl) != 1 || abs(dr) != 1)
        throw std::logic_error("smith_normal_form: transform is not unimodular");
    IntMatrix check = out.left * m * out.right;
    for (int i = 0; i < check.rows; ++i)
        for (int j = 0; j < check.cols; ++j)
            if (check.at(i, j) != (i == j && i < n ? out.diagonal[i] : Int(0)))
                throw std::logic_error("smith_normal_form: factorization check failed");
    return out;
}

// Invariant-factor presentation of a finitely generated abelian group.
struct AbelianGroup {
    std::vector<Int> invariant_factors;  // each > 1, each divides the next
    int free_rank = 0;

    bool is_finite() const { return free_rank == 0; }

    Int order() const {
        if (!is_finite()) throw std::logic_error("AbelianGroup::order: group is infinite");
        Int o = 1;
        for (const Int& f : invariant_factors) o *= f;
        return o;
    }

    bool operator==(const AbelianGroup& o) const {
        return invariant_factors == o.invariant_factors && free_rank == o.free_rank;
    }

    std::string to_string() const {
        if (invariant_factors.empty() && free_rank == 0) return "0";
        std::string s;
        for (const Int& f : invariant_factors) {
            if (!s.empty()) s += " + ";
            s += "Z/" + f.str();
        }
        for (int i = 0; i < free_rank; ++i) {
            if (!s.empty()) s += " + ";
            s += "Z";
        }
        return s;
    }
};

inline AbelianGroup cokernel(const IntMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("cokernel: matrix is not square");
    SmithNormalForm snf = smith_normal_form(m);
    AbelianGroup g;
    for (const Int& d : snf.diagonal) {
        if (d == 0)
            ++g.free_rank;
        else if (d > 1)
            g.invariant_factors.push_back(d);
    }
    return g;
}

}  // namespace chainmail
