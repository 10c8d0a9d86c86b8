#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace koszulhh {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Ground field: the rationals (modulus 0) or a prime field F_p.
struct Field {
    std::uint64_t modulus = 0;

    static Field rationals() { return {}; }
    static Field prime(std::uint64_t p);

    bool is_rational() const { return modulus == 0; }
    std::uint64_t characteristic() const { return modulus; }
    std::string name() const;

    friend bool operator==(const Field&, const Field&) = default;
};

bool is_prime(std::uint64_t n);

/// Exact field element. Rationals are kept in lowest terms with positive
/// denominator; F_p elements are canonical integers in [0, p).
///
/// Values built from integer or rational literals live in Q and are coerced
/// into F_p when combined with an F_p value. Combining two different primes
/// throws PreconditionError.
class Scalar {
public:
    Scalar() = default;
    Scalar(long long v) : value_(v) {}  // NOLINT: literal coercion is intended
    Scalar(BigRational v, Field f = {});
    Scalar(long long num, long long den, Field f = {});

    static Scalar parse(std::string_view text, Field f = {});

    Field field() const { return field_; }
    const BigRational& value() const { return value_; }

    bool is_zero() const { return value_ == 0; }
    bool is_one() const { return value_ == 1; }

    Scalar in(Field f) const;

    Scalar operator-() const;
    Scalar inverse() const;

    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

    friend bool operator==(const Scalar& a, const Scalar& b);

    /// "3", "-1/2"; F_p values print as their representative.
    std::string str() const;

private:
    void normalize();
    static Field join(const Field& a, const Field& b);

    BigRational value_{0};
    Field field_{};
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

}  // namespace koszulhh
