#pragma once

#include "koszulhh/scalar.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace koszulhh {

using Vector = std::vector<Scalar>;

/// Dense exact matrix, row-major.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, Field f = {});

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Field field() const { return field_; }

    Scalar& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Scalar& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Vector row(std::size_t r) const;
    Vector column(std::size_t c) const;
    void append_row(const Vector& v);

    Matrix transpose() const;
    bool is_zero() const;

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Vector operator*(const Matrix& a, const Vector& v);
    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Field field_{};
    std::vector<Scalar> data_;
};

/// Which column a row's pivot sits in.
enum class PivotOrder { First, Last };

struct Echelon {
    Matrix reduced;                    // fully reduced, zero rows dropped
    std::vector<std::size_t> pivots;   // pivot column of each row
    std::size_t rank() const { return pivots.size(); }
};

/// Reduced row echelon form with pivot coefficient 1. With PivotOrder::Last the
/// elimination treats columns from right to left, so each row's pivot is its
/// highest-index nonzero column.
Echelon rref(const Matrix& m, PivotOrder order = PivotOrder::First);

std::size_t rank(const Matrix& m);

/// Basis of {x : m x = 0}, one vector per free column (that column set to 1,
/// other free columns 0), in increasing free-column order.
std::vector<Vector> nullspace(const Matrix& m, PivotOrder order = PivotOrder::First);

/// Basic solution of m x = b (free unknowns 0), or nullopt if inconsistent.
std::optional<Vector> solve(const Matrix& m, const Vector& b, PivotOrder order = PivotOrder::First);

bool is_zero(const Vector& v);

/// Reduce v modulo the row space of an echelon form (pivot entries cleared).
Vector reduce_modulo(const Echelon& e, Vector v);

/// True if v lies in the row space of e.
bool in_row_space(const Echelon& e, const Vector& v);

}  // namespace koszulhh
