#include "fmsilp/model.hpp"

#include "fmsilp/errors.hpp"

#include <algorithm>
#include <set>

namespace fmsilp {

RowId RowId::parse(const std::string& text)
{
    if (text == "objective") return objective();
    auto at = text.find('@');
    if (at == std::string::npos) {
        if (text.empty()) throw ParseError("empty row id");
        return atom(text);
    }
    std::vector<Rational> point;
    std::string rest = text.substr(at + 1);
    std::size_t start = 0;
    while (start <= rest.size()) {
        auto comma = rest.find(',', start);
        if (comma == std::string::npos) comma = rest.size();
        point.push_back(parse_rational(rest.substr(start, comma - start)));
        start = comma + 1;
    }
    return family_point(text.substr(0, at), std::move(point));
}

std::string RowId::str() const
{
    if (kind_ != Kind::FamilyPoint) return name_;
    std::string s = name_ + "@";
    for (std::size_t i = 0; i < point_.size(); ++i) {
        if (i) s += ",";
        s += point_[i].str();
    }
    return s;
}

bool operator<(const RowId& a, const RowId& b)
{
    if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
    if (a.name_ != b.name_) return a.name_ < b.name_;
    return std::lexicographical_compare(a.point_.begin(), a.point_.end(), b.point_.begin(),
                                        b.point_.end());
}

template <typename Scalar>
Multiplier<Scalar> Multiplier<Scalar>::from_entries(std::vector<Entry> entries)
{
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    Multiplier m;
    for (auto& e : entries) {
        if (e.second < 0) throw PreconditionViolated("negative multiplier entry");
        if (!m.entries_.empty() && m.entries_.back().first == e.first)
            m.entries_.back().second += e.second;
        else
            m.entries_.push_back(std::move(e));
    }
    std::erase_if(m.entries_, [](const Entry& e) { return e.second == 0; });
    return m;
}

template <typename Scalar>
Scalar Multiplier<Scalar>::value(std::size_t row) const
{
    auto it = std::lower_bound(entries_.begin(), entries_.end(), row,
                               [](const Entry& e, std::size_t r) { return e.first < r; });
    if (it != entries_.end() && it->first == row) return it->second;
    return Scalar(0);
}

template <typename Scalar>
Multiplier<Scalar> Multiplier<Scalar>::combine(const Scalar& alpha, const Multiplier& a,
                                               const Scalar& beta, const Multiplier& b)
{
    Multiplier m;
    m.entries_.reserve(a.entries_.size() + b.entries_.size());
    auto ia = a.entries_.begin();
    auto ib = b.entries_.begin();
    while (ia != a.entries_.end() || ib != b.entries_.end()) {
        if (ib == b.entries_.end() || (ia != a.entries_.end() && ia->first < ib->first)) {
            m.entries_.push_back({ia->first, alpha * ia->second});
            ++ia;
        } else if (ia == a.entries_.end() || ib->first < ia->first) {
            m.entries_.push_back({ib->first, beta * ib->second});
            ++ib;
        } else {
            m.entries_.push_back({ia->first, alpha * ia->second + beta * ib->second});
            ++ia;
            ++ib;
        }
        if (m.entries_.back().second == 0) m.entries_.pop_back();
    }
    return m;
}

template <typename Scalar>
Multiplier<Scalar> Multiplier<Scalar>::scaled(const Scalar& factor) const
{
    Multiplier m;
    if (factor == 0) return m;
    m.entries_ = entries_;
    for (auto& e : m.entries_) e.second *= factor;
    return m;
}

template <typename Scalar>
Vector<Scalar> FiniteSystem<Scalar>::column(std::size_t k) const
{
    Vector<Scalar> c(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) c[i] = rows[i].coeffs[k];
    return c;
}

template <typename Scalar>
Vector<Scalar> FiniteSystem<Scalar>::rhs_column() const
{
    Vector<Scalar> c(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) c[i] = rows[i].rhs;
    return c;
}

template <typename Scalar>
Vector<Scalar> FiniteSystem<Scalar>::z_column() const
{
    Vector<Scalar> c(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) c[i] = rows[i].z_coeff;
    return c;
}

template <typename Scalar>
Vector<Scalar> FiniteSystem<Scalar>::image(const Multiplier<Scalar>& u) const
{
    Vector<Scalar> v = Vector<Scalar>::Zero(static_cast<Eigen::Index>(variables.size()));
    for (const auto& [row, value] : u.entries()) v += rows.at(row).coeffs * value;
    return v;
}

template <typename Scalar>
bool FiniteSystem<Scalar>::satisfied_by(const Vector<Scalar>& x, const Scalar& z,
                                        const Tolerance& tol) const
{
    for (const auto& r : rows) {
        Scalar lhs = r.coeffs.dot(x) + r.z_coeff * z;
        Scalar scale = std::max(r.scale(), abs_value(r.rhs));
        if (classify(Scalar(lhs - r.rhs), scale, tol) < 0) return false;
    }
    return true;
}

template <typename Scalar>
LinearRow<Scalar> ParametricFamily::evaluate(const Rational& t) const
{
    Scalar tv = ScalarTraits<Scalar>::from_rational(t);
    LinearRow<Scalar> row;
    row.coeffs.resize(static_cast<Eigen::Index>(coeffs.size()));
    try {
        for (std::size_t k = 0; k < coeffs.size(); ++k) row.coeffs[k] = coeffs[k].evaluate(tv);
        row.rhs = rhs.evaluate(tv);
    } catch (const ExpressionEvalError& e) {
        throw ExpressionEvalError("family '" + name + "' at " + parameter + " = " + t.str() +
                                  ": " + e.what());
    }
    row.z_coeff = Scalar(0);
    return row;
}

std::size_t SILPModel::variable_index(const std::string& name) const
{
    auto it = std::find(variables.begin(), variables.end(), name);
    if (it == variables.end()) throw ParseError("unknown variable '" + name + "'");
    return static_cast<std::size_t>(it - variables.begin());
}

void SILPModel::validate() const
{
    if (variables.empty()) throw PreconditionViolated("model has no variables");
    if (rows.empty() && families.empty()) throw PreconditionViolated("model has no constraints");
    if (objective.size() != variables.size())
        throw PreconditionViolated("objective length does not match the variable count");
    std::set<std::string> names;
    for (const auto& r : rows) {
        if (r.coeffs.size() != variables.size())
            throw PreconditionViolated("row '" + r.id.str() + "' has the wrong length");
        if (!names.insert(r.id.str()).second)
            throw PreconditionViolated("duplicate row name '" + r.id.str() + "'");
    }
    std::set<std::string> fams;
    for (const auto& f : families) {
        if (f.coeffs.size() != variables.size())
            throw PreconditionViolated("family '" + f.name + "' has the wrong length");
        if (!fams.insert(f.name).second)
            throw PreconditionViolated("duplicate family name '" + f.name + "'");
        if (f.domain.hi && *f.domain.hi < f.domain.lo)
            throw PreconditionViolated("family '" + f.name + "' has an empty domain");
        if (f.domain.kind == Domain::Kind::Integer &&
            (denominator(f.domain.lo) != 1 || (f.domain.hi && denominator(*f.domain.hi) != 1)))
            throw PreconditionViolated("integer family '" + f.name + "' has fractional bounds");
    }
}

std::vector<Rational> GridSchedule::default_deltas(int count)
{
    std::vector<Rational> d;
    Rational v(1);
    for (int m = 1; m <= count; ++m) {
        v *= 2;
        d.push_back(v);
    }
    return d;
}

std::vector<Rational> GridSchedule::deltas_up_to(const Rational& max)
{
    if (max < 2) throw PreconditionViolated("delta max must be at least 2");
    std::vector<Rational> d;
    for (Rational v(2); v <= max; v *= 2) d.push_back(v);
    return d;
}

bool Domain::contains(const Rational& t) const
{
    if (t < lo || (hi && t > *hi)) return false;
    return kind == Kind::Real || denominator(t) == 1;
}

void GridSchedule::validate() const
{
    if (stages < 1) throw PreconditionViolated("schedule needs at least one stage");
    if (reach_base < 0 || uniform_points < 2 || integer_base < 1)
        throw PreconditionViolated("invalid grid schedule parameters");
    if (deltas.empty()) throw PreconditionViolated("empty delta schedule");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (deltas[i] <= 0) throw PreconditionViolated("delta schedule must be positive");
        if (i && deltas[i] <= deltas[i - 1])
            throw PreconditionViolated("delta schedule must be strictly increasing");
    }
}

std::vector<Rational> GridSchedule::grid(const Domain& domain, int stage) const
{
    if (stage < 1) throw PreconditionViolated("stage numbers start at 1");
    std::vector<Rational> pts;
    if (domain.kind == Domain::Kind::Integer) {
        long count = integer_growth == IntegerGrowth::Doubling
                         ? (1L << std::min(stage, 40)) * integer_base
                         : static_cast<long>(stage) * integer_base;
        for (long i = 0; i < count; ++i) {
            Rational p = domain.lo + i;
            if (domain.hi && p > *domain.hi) break;
            pts.push_back(p);
        }
        return pts;
    }
    if (domain.hi) {
        if (*domain.hi == domain.lo) return {domain.lo};
        long intervals = static_cast<long>(uniform_points - 1) << (stage - 1);
        Rational step = (*domain.hi - domain.lo) / intervals;
        for (long i = 0; i <= intervals; ++i) pts.push_back(domain.lo + step * i);
        return pts;
    }
    // Geometric in octaves of the offset from lo; the offsets 1, 2, 4, ... are refined
    // dyadically, so grids are nested and stay exact.
    int octaves = reach_base + stage;
    long sub = 1L << (stage - 1);
    bool positive = domain.lo > 0;
    Rational base = positive ? domain.lo : Rational(1);
    Rational shift = positive ? Rational(0) : Rational(domain.lo - 1);
    Rational octave = base;
    for (int j = 0; j < octaves; ++j) {
        for (long k = 0; k < sub; ++k) pts.push_back(shift + octave * (1 + Rational(k, sub)));
        octave *= 2;
    }
    pts.push_back(shift + octave);
    return pts;
}

template <typename Scalar>
FiniteSystem<Scalar> instantiate_stage(const SILPModel& model, const GridSchedule& schedule,
                                       int stage)
{
    if (stage < 1 || stage > schedule.stages)
        throw PreconditionViolated("stage " + std::to_string(stage) + " outside 1.." +
                                   std::to_string(schedule.stages));
    FiniteSystem<Scalar> sys;
    sys.variables = model.variables;
    for (const auto& r : model.rows) {
        LinearRow<Scalar> row;
        row.coeffs.resize(static_cast<Eigen::Index>(r.coeffs.size()));
        for (std::size_t k = 0; k < r.coeffs.size(); ++k)
            row.coeffs[k] = ScalarTraits<Scalar>::from_rational(r.coeffs[k]);
        row.rhs = ScalarTraits<Scalar>::from_rational(r.rhs);
        sys.add_row(r.id, std::move(row));
    }
    for (const auto& f : model.families)
        for (const auto& t : schedule.grid(f.domain, stage))
            sys.add_row(RowId::family_point(f.name, {t}), f.template evaluate<Scalar>(t));
    return sys;
}

template <typename Scalar>
FiniteSystem<Scalar> instantiate_rows(const SILPModel& model, const std::vector<RowId>& ids)
{
    FiniteSystem<Scalar> sys;
    sys.variables = model.variables;
    for (const auto& id : ids) {
        if (id.kind() == RowId::Kind::FamilyPoint) {
            auto f = std::find_if(model.families.begin(), model.families.end(),
                                  [&](const ParametricFamily& fam) { return fam.name == id.name(); });
            if (f == model.families.end() || id.point().size() != 1)
                throw PreconditionViolated("no family row '" + id.str() + "'");
            if (!f->domain.contains(id.point()[0]))
                throw PreconditionViolated("row '" + id.str() + "' lies outside the family domain");
            sys.add_row(id, f->template evaluate<Scalar>(id.point()[0]));
            continue;
        }
        auto r = std::find_if(model.rows.begin(), model.rows.end(),
                              [&](const FiniteRow& row) { return row.id == id; });
        if (r == model.rows.end()) throw PreconditionViolated("no row '" + id.str() + "'");
        LinearRow<Scalar> row;
        row.coeffs.resize(static_cast<Eigen::Index>(r->coeffs.size()));
        for (std::size_t k = 0; k < r->coeffs.size(); ++k)
            row.coeffs[k] = ScalarTraits<Scalar>::from_rational(r->coeffs[k]);
        row.rhs = ScalarTraits<Scalar>::from_rational(r->rhs);
        sys.add_row(id, std::move(row));
    }
    return sys;
}

template <typename Scalar>
Vector<Scalar> objective_vector(const SILPModel& model)
{
    Vector<Scalar> c(static_cast<Eigen::Index>(model.objective.size()));
    for (std::size_t k = 0; k < model.objective.size(); ++k)
        c[k] = ScalarTraits<Scalar>::from_rational(model.objective[k]);
    return c;
}

#define FMSILP_INSTANTIATE(S)                                                                   \
    template class Multiplier<S>;                                                               \
    template struct FiniteSystem<S>;                                                            \
    template LinearRow<S> ParametricFamily::evaluate<S>(const Rational&) const;                 \
    template FiniteSystem<S> instantiate_stage<S>(const SILPModel&, const GridSchedule&, int); \
    template FiniteSystem<S> instantiate_rows<S>(const SILPModel&, const std::vector<RowId>&); \
    template Vector<S> objective_vector<S>(const SILPModel&);

FMSILP_INSTANTIATE(Rational)
FMSILP_INSTANTIATE(double)

}  // namespace fmsilp
