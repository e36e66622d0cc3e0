#include "oracle.hpp"

#include <functional>
#include <stdexcept>

namespace oracle {

std::vector<std::size_t> rref(Mat& a)
{
    std::vector<std::size_t> pivots;
    if (a.empty()) return pivots;
    const std::size_t rows = a.size(), cols = a[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        Rational inv = Rational(1) / a[r][c];
        for (auto& v : a[r]) v *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rational f = a[i][c];
            for (std::size_t k = 0; k < cols; ++k) a[i][k] -= f * a[r][k];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

std::size_t rank(Mat a)
{
    return rref(a).size();
}

std::optional<Vec> solve(Mat a, Vec b)
{
    const std::size_t n = b.size();
    for (std::size_t i = 0; i < n; ++i) a[i].push_back(b[i]);
    auto piv = rref(a);
    if (piv.size() != n || piv.back() >= n) return std::nullopt;
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n];
    return x;
}

std::vector<Vec> null_space(Mat a, std::size_t n)
{
    auto piv = rref(a);
    std::vector<bool> is_pivot(n, false);
    for (auto p : piv) is_pivot[p] = true;
    std::vector<Vec> basis;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        Vec v(n, Rational(0));
        v[f] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -a[i][f];
        basis.push_back(v);
    }
    return basis;
}

Rational dot(const Vec& a, const Vec& b)
{
    Rational s(0);
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

bool satisfies(const Mat& a, const Vec& b, const Vec& x)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        if (dot(a[i], x) < b[i]) return false;
    return true;
}

namespace {

void for_each_subset(std::size_t m, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f)
{
    std::vector<std::size_t> idx;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (idx.size() == k) {
            f(idx);
            return;
        }
        for (std::size_t i = start; i < m; ++i) {
            idx.push_back(i);
            rec(i + 1);
            idx.pop_back();
        }
    };
    rec(0);
}

}  // namespace

LPResult lp_min(const Mat& a, const Vec& b, const Vec& c)
{
    const std::size_t n = c.size();
    if (rank(a) != n) throw std::invalid_argument("lp_min needs a full column rank system");
    LPResult out;
    bool found = false;
    for_each_subset(a.size(), n, [&](const std::vector<std::size_t>& rows) {
        Mat sub;
        Vec rhs;
        for (auto i : rows) {
            sub.push_back(a[i]);
            rhs.push_back(b[i]);
        }
        auto x = solve(sub, rhs);
        if (!x || !satisfies(a, b, *x)) return;
        Rational v = dot(c, *x);
        if (!found || v < out.value) {
            out.value = v;
            out.x = *x;
        }
        found = true;
    });
    if (!found) return out;

    // Extreme rays of the recession cone come from n-1 tight rows.
    bool unbounded = false;
    for_each_subset(a.size(), n - 1, [&](const std::vector<std::size_t>& rows) {
        if (unbounded) return;
        Mat sub;
        for (auto i : rows) sub.push_back(a[i]);
        std::vector<Vec> ns = n == 1 ? std::vector<Vec>{Vec{Rational(1)}} : null_space(sub, n);
        if (ns.size() != 1) return;
        for (int sign : {1, -1}) {
            Vec r = ns[0];
            for (auto& v : r) v *= sign;
            if (!satisfies(a, Vec(a.size(), Rational(0)), r)) continue;
            if (dot(c, r) < 0) unbounded = true;
        }
    });
    out.status = unbounded ? LPStatus::Unbounded : LPStatus::Optimal;
    return out;
}

bool implies(const Mat& a, const Vec& b, const Vec& c, const Rational& d)
{
    auto r = lp_min(a, b, c);
    if (r.status == LPStatus::Infeasible) return true;
    if (r.status == LPStatus::Unbounded) return false;
    return r.value >= d;
}

}  // namespace oracle
