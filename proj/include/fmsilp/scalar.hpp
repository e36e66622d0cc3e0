#pragma once

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>
#include <Eigen/Core>

#include <cmath>
#include <compare>
#include <string>
#include <string_view>

namespace fmsilp {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

enum class NumericMode { Exact, Float };

// Float-mode zero test: |x| <= abs + rel * scale.
struct Tolerance {
    double abs = 1e-9;
    double rel = 1e-9;
};

template <typename Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static constexpr NumericMode mode = NumericMode::Exact;

    static Rational from_rational(const Rational& r) { return r; }
    static Rational to_rational(const Rational& r) { return r; }
    static double to_double(const Rational& r) { return r.convert_to<double>(); }
    static std::string to_string(const Rational& r) { return r.str(); }
    static Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

    static int sign(const Rational& x, const Rational& /*scale*/, const Tolerance& /*tol*/)
    {
        return x.sign();
    }
};

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static constexpr NumericMode mode = NumericMode::Float;

    static double from_rational(const Rational& r) { return r.convert_to<double>(); }
    static Rational to_rational(double x) { return Rational(x); }
    static double to_double(double x) { return x; }
    static std::string to_string(double x);
    static double abs(double x) { return std::fabs(x); }

    static int sign(double x, double scale, const Tolerance& tol)
    {
        if (std::fabs(x) <= tol.abs + tol.rel * std::fabs(scale)) return 0;
        return x > 0 ? 1 : -1;
    }
};

// Parses "p/q", integers and decimals ("-1.25", "3e-2") exactly.
Rational parse_rational(std::string_view text);

template <typename Scalar>
Scalar abs_value(const Scalar& x)
{
    return ScalarTraits<Scalar>::abs(x);
}

template <typename Scalar>
std::string scalar_to_string(const Scalar& x)
{
    return ScalarTraits<Scalar>::to_string(x);
}

template <typename Scalar>
int classify(const Scalar& x, const Scalar& scale, const Tolerance& tol)
{
    return ScalarTraits<Scalar>::sign(x, scale, tol);
}

template <typename Scalar>
int classify(const Scalar& x, const Tolerance& tol)
{
    return ScalarTraits<Scalar>::sign(x, Scalar(1), tol);
}

// A scalar extended by -inf and +inf.
template <typename Scalar>
class Extended {
public:
    enum class Kind { NegInf, Finite, PosInf };

    Extended() : kind_(Kind::NegInf), value_(0) {}
    Extended(Scalar v) : kind_(Kind::Finite), value_(std::move(v)) {}

    static Extended neg_inf() { return Extended(Kind::NegInf); }
    static Extended pos_inf() { return Extended(Kind::PosInf); }

    Kind kind() const { return kind_; }
    bool finite() const { return kind_ == Kind::Finite; }
    bool is_neg_inf() const { return kind_ == Kind::NegInf; }
    bool is_pos_inf() const { return kind_ == Kind::PosInf; }
    const Scalar& value() const { return value_; }

    std::string str() const
    {
        switch (kind_) {
        case Kind::NegInf: return "-inf";
        case Kind::PosInf: return "inf";
        default: return scalar_to_string(value_);
        }
    }

    friend bool operator==(const Extended& a, const Extended& b)
    {
        if (a.kind_ != b.kind_) return false;
        return a.kind_ != Kind::Finite || a.value_ == b.value_;
    }
    friend bool operator<(const Extended& a, const Extended& b)
    {
        if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) < static_cast<int>(b.kind_);
        return a.kind_ == Kind::Finite && a.value_ < b.value_;
    }
    friend bool operator>(const Extended& a, const Extended& b) { return b < a; }
    friend bool operator<=(const Extended& a, const Extended& b) { return !(b < a); }
    friend bool operator>=(const Extended& a, const Extended& b) { return !(a < b); }
    friend bool operator!=(const Extended& a, const Extended& b) { return !(a == b); }

    static const Extended& max(const Extended& a, const Extended& b) { return a < b ? b : a; }

private:
    explicit Extended(Kind k) : kind_(k), value_(0) {}
    Kind kind_;
    Scalar value_;
};

template <typename Scalar>
double to_double(const Extended<Scalar>& x)
{
    if (x.is_neg_inf()) return -HUGE_VAL;
    if (x.is_pos_inf()) return HUGE_VAL;
    return ScalarTraits<Scalar>::to_double(x.value());
}

}  // namespace fmsilp
