#include "koszulhh/scalar.hpp"

#include "koszulhh/errors.hpp"

#include <charconv>
#include <ostream>

namespace koszulhh {

bool is_prime(std::uint64_t n)
{
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

Field Field::prime(std::uint64_t p)
{
    if (!is_prime(p)) throw PreconditionError("modulus " + std::to_string(p) + " is not prime");
    return Field{p};
}

std::string Field::name() const
{
    return is_rational() ? "Q" : "F" + std::to_string(modulus);
}

Scalar::Scalar(BigRational v, Field f) : value_(std::move(v)), field_(f) { normalize(); }

Scalar::Scalar(long long num, long long den, Field f) : field_(f)
{
    if (den == 0) throw PreconditionError("zero denominator");
    value_ = BigRational(num) / BigRational(den);
    normalize();
}

void Scalar::normalize()
{
    if (field_.is_rational()) return;
    const BigInt p = field_.modulus;
    BigInt num = boost::multiprecision::numerator(value_);
    BigInt den = boost::multiprecision::denominator(value_);
    num %= p;
    if (num < 0) num += p;
    den %= p;
    if (den < 0) den += p;
    if (den == 0) throw MathError("denominator not invertible in " + field_.name());
    if (den != 1) {
        // den^(p-2) mod p
        BigInt inv = boost::multiprecision::powm(den, p - 2, p);
        num = (num * inv) % p;
    }
    value_ = BigRational(num);
}

Field Scalar::join(const Field& a, const Field& b)
{
    if (a == b) return a;
    if (a.is_rational()) return b;
    if (b.is_rational()) return a;
    throw PreconditionError("mixed field contexts " + a.name() + " and " + b.name());
}

Scalar Scalar::in(Field f) const
{
    if (field_ == f) return *this;
    if (!field_.is_rational()) throw PreconditionError("cannot move " + field_.name() + " value into " + f.name());
    return Scalar(value_, f);
}

Scalar Scalar::parse(std::string_view text, Field f)
{
    auto parse_int = [&](std::string_view s) {
        if (s.empty()) throw ParseError("empty scalar literal");
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) throw ParseError("bad scalar literal '" + std::string(text) + "'");
        for (std::size_t k = i; k < s.size(); ++k)
            if (s[k] < '0' || s[k] > '9') throw ParseError("bad scalar literal '" + std::string(text) + "'");
        return BigInt(std::string(s[0] == '+' ? s.substr(1) : s));
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Scalar(BigRational(parse_int(text)), f);
    BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    return Scalar(BigRational(parse_int(text.substr(0, slash))) / BigRational(den), f);
}

Scalar Scalar::operator-() const { return Scalar(-value_, field_); }

Scalar Scalar::inverse() const
{
    if (is_zero()) throw MathError("division by zero");
    return Scalar(1 / value_, field_);
}

Scalar& Scalar::operator+=(const Scalar& o)
{
    field_ = join(field_, o.field_);
    value_ += o.value_;
    normalize();
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o)
{
    field_ = join(field_, o.field_);
    value_ -= o.value_;
    normalize();
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o)
{
    field_ = join(field_, o.field_);
    value_ *= o.value_;
    normalize();
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o)
{
    Field f = join(field_, o.field_);
    Scalar d = o.in(f);
    if (d.is_zero()) throw MathError("division by zero");
    field_ = f;
    normalize();
    value_ /= d.value_;
    normalize();
    return *this;
}

bool operator==(const Scalar& a, const Scalar& b)
{
    if (a.field_ == b.field_) return a.value_ == b.value_;
    Field f = Scalar::join(a.field_, b.field_);
    return a.in(f).value_ == b.in(f).value_;
}

std::string Scalar::str() const
{
    BigInt num = boost::multiprecision::numerator(value_);
    BigInt den = boost::multiprecision::denominator(value_);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

}  // namespace koszulhh
