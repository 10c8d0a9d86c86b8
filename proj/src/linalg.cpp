#include "koszulhh/linalg.hpp"

#include "koszulhh/errors.hpp"

#include <algorithm>

namespace koszulhh {

Matrix::Matrix(std::size_t rows, std::size_t cols, Field f)
    : rows_(rows), cols_(cols), field_(f), data_(rows * cols, Scalar(0).in(f))
{
}

Vector Matrix::row(std::size_t r) const
{
    return Vector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

Vector Matrix::column(std::size_t c) const
{
    Vector v;
    v.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v.push_back(at(r, c));
    return v;
}

void Matrix::append_row(const Vector& v)
{
    if (rows_ == 0 && cols_ == 0) cols_ = v.size();
    if (v.size() != cols_) throw PreconditionError("row length mismatch");
    data_.insert(data_.end(), v.begin(), v.end());
    ++rows_;
}

Matrix Matrix::transpose() const
{
    Matrix t(cols_, rows_, field_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
    return t;
}

bool Matrix::is_zero() const
{
    return std::all_of(data_.begin(), data_.end(), [](const Scalar& s) { return s.is_zero(); });
}

Matrix operator*(const Matrix& a, const Matrix& b)
{
    if (a.cols_ != b.rows_) throw PreconditionError("matrix shape mismatch");
    Matrix p(a.rows_, b.cols_, a.field_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Scalar& x = a.at(i, k);
            if (x.is_zero()) continue;
            for (std::size_t j = 0; j < b.cols_; ++j)
                if (!b.at(k, j).is_zero()) p.at(i, j) += x * b.at(k, j);
        }
    return p;
}

Vector operator*(const Matrix& a, const Vector& v)
{
    if (a.cols_ != v.size()) throw PreconditionError("matrix/vector shape mismatch");
    Vector out(a.rows_, Scalar(0).in(a.field_));
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k)
            if (!a.at(i, k).is_zero() && !v[k].is_zero()) out[i] += a.at(i, k) * v[k];
    return out;
}

bool is_zero(const Vector& v)
{
    return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_zero(); });
}

Echelon rref(const Matrix& m, PivotOrder order)
{
    std::vector<std::vector<Scalar>> rows;
    rows.reserve(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(m.row(r));

    std::vector<std::size_t> cols(m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c) cols[c] = order == PivotOrder::First ? c : m.cols() - 1 - c;

    std::vector<std::size_t> pivots;
    std::size_t next = 0;
    for (std::size_t c : cols) {
        if (next == rows.size()) break;
        std::size_t found = next;
        while (found < rows.size() && rows[found][c].is_zero()) ++found;
        if (found == rows.size()) continue;
        std::swap(rows[next], rows[found]);
        Scalar inv = rows[next][c].inverse();
        for (auto& x : rows[next])
            if (!x.is_zero()) x *= inv;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == next || rows[r][c].is_zero()) continue;
            Scalar f = rows[r][c];
            for (std::size_t k = 0; k < m.cols(); ++k)
                if (!rows[next][k].is_zero()) rows[r][k] -= f * rows[next][k];
        }
        pivots.push_back(c);
        ++next;
    }

    Echelon e{Matrix(0, m.cols(), m.field()), pivots};
    for (std::size_t r = 0; r < next; ++r) e.reduced.append_row(rows[r]);
    return e;
}

std::size_t rank(const Matrix& m) { return rref(m).rank(); }

std::vector<Vector> nullspace(const Matrix& m, PivotOrder order)
{
    Echelon e = rref(m, order);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : e.pivots) is_pivot[p] = true;
    std::vector<Vector> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        Vector v(m.cols(), Scalar(0).in(m.field()));
        v[f] = Scalar(1).in(m.field());
        for (std::size_t r = 0; r < e.rank(); ++r) v[e.pivots[r]] = -e.reduced.at(r, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<Vector> solve(const Matrix& m, const Vector& b, PivotOrder order)
{
    if (b.size() != m.rows()) throw PreconditionError("right-hand side length mismatch");
    Matrix aug(m.rows(), m.cols() + 1, m.field());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) aug.at(r, c) = m.at(r, c);
        aug.at(r, m.cols()) = b[r];
    }
    // The augmented column must never be chosen as a pivot before the unknowns.
    Echelon e;
    if (order == PivotOrder::First) {
        e = rref(aug, order);
    } else {
        Matrix rot(m.rows(), m.cols() + 1, m.field());
        for (std::size_t r = 0; r < m.rows(); ++r) {
            rot.at(r, 0) = b[r];
            for (std::size_t c = 0; c < m.cols(); ++c) rot.at(r, c + 1) = m.at(r, c);
        }
        Echelon er = rref(rot, order);
        e.reduced = Matrix(0, m.cols() + 1, m.field());
        for (std::size_t r = 0; r < er.rank(); ++r) {
            Vector row = er.reduced.row(r);
            Vector moved(row.begin() + 1, row.end());
            moved.push_back(row[0]);
            e.reduced.append_row(moved);
            e.pivots.push_back(er.pivots[r] == 0 ? m.cols() : er.pivots[r] - 1);
        }
    }
    Vector x(m.cols(), Scalar(0).in(m.field()));
    for (std::size_t r = 0; r < e.rank(); ++r) {
        if (e.pivots[r] == m.cols()) return std::nullopt;
        x[e.pivots[r]] = e.reduced.at(r, m.cols());
    }
    return x;
}

Vector reduce_modulo(const Echelon& e, Vector v)
{
    for (std::size_t r = 0; r < e.rank(); ++r) {
        Scalar f = v[e.pivots[r]];
        if (f.is_zero()) continue;
        for (std::size_t k = 0; k < v.size(); ++k)
            if (!e.reduced.at(r, k).is_zero()) v[k] -= f * e.reduced.at(r, k);
    }
    return v;
}

bool in_row_space(const Echelon& e, const Vector& v) { return is_zero(reduce_modulo(e, v)); }

}  // namespace koszulhh
