#include "fmsilp/scalar.hpp"

#include "fmsilp/errors.hpp"

#include <cctype>
#include <charconv>

namespace fmsilp {

std::string ScalarTraits<double>::to_string(double x)
{
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0) return "0";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

bool all_digits(std::string_view s)
{
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

Rational pow10(long e)
{
    Rational r(1);
    for (long i = 0; i < e; ++i) r *= 10;
    return r;
}

}  // namespace

Rational parse_rational(std::string_view text)
{
    std::string s(text);
    auto bad = [&] { return ParseError("malformed number '" + s + "'"); };
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(0, 1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    if (s.empty()) throw bad();

    std::string_view v(s);
    bool negative = false;
    if (v.front() == '-' || v.front() == '+') {
        negative = v.front() == '-';
        v.remove_prefix(1);
    }

    Rational result;
    if (auto slash = v.find('/'); slash != std::string_view::npos) {
        auto num = v.substr(0, slash);
        auto den = v.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) throw bad();
        Rational d{std::string(den)};
        if (d == 0) throw ParseError("zero denominator in '" + s + "'");
        result = Rational(std::string(num)) / d;
    } else {
        long exponent = 0;
        if (auto e = v.find_first_of("eE"); e != std::string_view::npos) {
            auto ex = v.substr(e + 1);
            bool neg_exp = false;
            if (!ex.empty() && (ex.front() == '-' || ex.front() == '+')) {
                neg_exp = ex.front() == '-';
                ex.remove_prefix(1);
            }
            if (!all_digits(ex) || ex.size() > 6) throw bad();
            exponent = std::stol(std::string(ex));
            if (neg_exp) exponent = -exponent;
            v = v.substr(0, e);
        }
        std::string digits;
        if (auto dot = v.find('.'); dot != std::string_view::npos) {
            auto ip = v.substr(0, dot);
            auto fp = v.substr(dot + 1);
            if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) ||
                (!fp.empty() && !all_digits(fp)))
                throw bad();
            digits = std::string(ip) + std::string(fp);
            exponent -= static_cast<long>(fp.size());
        } else {
            if (!all_digits(v)) throw bad();
            digits = std::string(v);
        }
        if (digits.empty()) digits = "0";
        result = Rational(digits);
        if (exponent > 0) result *= pow10(exponent);
        if (exponent < 0) result /= pow10(-exponent);
    }
    return negative ? Rational(-result) : result;
}

}  // namespace fmsilp
