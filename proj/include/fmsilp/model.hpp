#pragma once

#include "fmsilp/expression.hpp"
#include "fmsilp/scalar.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fmsilp {

class RowId {
public:
    enum class Kind { Objective, Atom, FamilyPoint };

    static RowId objective() { return RowId(Kind::Objective, "objective", {}); }
    static RowId atom(std::string name) { return RowId(Kind::Atom, std::move(name), {}); }
    static RowId family_point(std::string family, std::vector<Rational> point)
    {
        return RowId(Kind::FamilyPoint, std::move(family), std::move(point));
    }

    // "objective", "<name>" or "<family>@<p1>,<p2>,...".
    static RowId parse(const std::string& text);
    std::string str() const;

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const std::vector<Rational>& point() const { return point_; }

    friend bool operator==(const RowId& a, const RowId& b)
    {
        return a.kind_ == b.kind_ && a.name_ == b.name_ && a.point_ == b.point_;
    }
    friend bool operator<(const RowId& a, const RowId& b);

private:
    RowId(Kind k, std::string name, std::vector<Rational> point)
        : kind_(k), name_(std::move(name)), point_(std::move(point))
    {
    }
    Kind kind_;
    std::string name_;
    std::vector<Rational> point_;
};

// coeffs . x + z_coeff * z >= rhs
template <typename Scalar>
struct LinearRow {
    Vector<Scalar> coeffs;
    Scalar z_coeff{0};
    Scalar rhs{0};

    Scalar scale() const
    {
        Scalar s = abs_value(z_coeff);
        for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
            Scalar a = abs_value(coeffs[k]);
            if (a > s) s = a;
        }
        return s;
    }
};

// Nonnegative finite-support map from original row index to scalar, sorted by index.
template <typename Scalar>
class Multiplier {
public:
    using Entry = std::pair<std::size_t, Scalar>;

    Multiplier() = default;
    static Multiplier unit(std::size_t row)
    {
        Multiplier m;
        m.entries_.push_back({row, Scalar(1)});
        return m;
    }
    static Multiplier from_entries(std::vector<Entry> entries);

    const std::vector<Entry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    Scalar value(std::size_t row) const;

    // alpha * a + beta * b, dropping exact zeros.
    static Multiplier combine(const Scalar& alpha, const Multiplier& a, const Scalar& beta,
                              const Multiplier& b);
    Multiplier scaled(const Scalar& factor) const;
    // Keeps entries satisfying pred(row); used to drop the objective row.
    template <typename Pred>
    Multiplier filtered(Pred pred) const
    {
        Multiplier m;
        for (const auto& e : entries_)
            if (pred(e.first)) m.entries_.push_back(e);
        return m;
    }

    friend bool operator==(const Multiplier& a, const Multiplier& b)
    {
        return a.entries_ == b.entries_;
    }

private:
    std::vector<Entry> entries_;
};

template <typename Scalar>
Scalar dot(const std::map<std::size_t, Scalar>& column, const Multiplier<Scalar>& u)
{
    Scalar s(0);
    for (const auto& [row, value] : u.entries()) {
        auto it = column.find(row);
        if (it != column.end()) s += it->second * value;
    }
    return s;
}

template <typename Scalar>
Scalar dot(const Vector<Scalar>& column, const Multiplier<Scalar>& u)
{
    Scalar s(0);
    for (const auto& [row, value] : u.entries())
        if (static_cast<Eigen::Index>(row) < column.size()) s += column[row] * value;
    return s;
}

template <typename Scalar>
struct FiniteSystem {
    std::vector<std::string> variables;
    bool augmented = false;  // rows carry a z column
    std::vector<RowId> ids;
    std::vector<LinearRow<Scalar>> rows;

    std::size_t num_variables() const { return variables.size(); }
    std::size_t num_rows() const { return rows.size(); }
    void add_row(RowId id, LinearRow<Scalar> row)
    {
        ids.push_back(std::move(id));
        rows.push_back(std::move(row));
    }
    Vector<Scalar> column(std::size_t k) const;
    Vector<Scalar> rhs_column() const;
    Vector<Scalar> z_column() const;
    // Sum over u's support of row coefficient vectors.
    Vector<Scalar> image(const Multiplier<Scalar>& u) const;
    bool satisfied_by(const Vector<Scalar>& x, const Scalar& z, const Tolerance& tol) const;
};

struct Domain {
    enum class Kind { Real, Integer };
    Kind kind = Kind::Real;
    Rational lo{1};
    std::optional<Rational> hi;  // unset means +inf

    bool contains(const Rational& t) const;
    friend bool operator==(const Domain&, const Domain&) = default;
};

struct FiniteRow {
    RowId id = RowId::atom("r");
    std::vector<Rational> coeffs;
    Rational rhs;

    friend bool operator==(const FiniteRow&, const FiniteRow&) = default;
};

struct ParametricFamily {
    std::string name;
    std::string parameter;
    Domain domain;
    std::vector<Expression> coeffs;  // one per model variable
    Expression rhs;

    template <typename Scalar>
    LinearRow<Scalar> evaluate(const Rational& t) const;

    friend bool operator==(const ParametricFamily&, const ParametricFamily&) = default;
};

struct SILPModel {
    std::vector<std::string> variables;
    std::vector<Rational> objective;
    std::vector<FiniteRow> rows;
    std::vector<ParametricFamily> families;

    bool finite() const { return families.empty(); }
    std::size_t variable_index(const std::string& name) const;
    // Throws PreconditionViolated on n = 0, missing constraints, size mismatches
    // or duplicate row names.
    void validate() const;

    friend bool operator==(const SILPModel&, const SILPModel&) = default;
};

enum class IntegerGrowth { Doubling, Linear };

struct GridSchedule {
    int stages = 8;
    // Real [lo, inf): stage s covers reach_base + s octaves, 2^(s-1) points per octave.
    int reach_base = 4;
    // Real [lo, hi]: (uniform_points - 1) * 2^(s-1) + 1 equally spaced points.
    int uniform_points = 5;
    // Integer start..: 2^s * integer_base points (Doubling) or s * integer_base (Linear).
    int integer_base = 8;
    IntegerGrowth integer_growth = IntegerGrowth::Doubling;
    std::vector<Rational> deltas = default_deltas(10);

    static std::vector<Rational> default_deltas(int count);
    // 2, 4, ... up to and including the largest power of two <= max.
    static std::vector<Rational> deltas_up_to(const Rational& max);
    std::vector<Rational> grid(const Domain& domain, int stage) const;
    void validate() const;

    friend bool operator==(const GridSchedule&, const GridSchedule&) = default;
};

template <typename Scalar>
FiniteSystem<Scalar> instantiate_stage(const SILPModel& model, const GridSchedule& schedule,
                                       int stage);

// Only the listed rows, in the given order; family points are evaluated at their parameter.
template <typename Scalar>
FiniteSystem<Scalar> instantiate_rows(const SILPModel& model, const std::vector<RowId>& ids);

template <typename Scalar>
Vector<Scalar> objective_vector(const SILPModel& model);

}  // namespace fmsilp
