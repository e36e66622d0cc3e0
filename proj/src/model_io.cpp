#include "fmsilp/model_io.hpp"

#include "fmsilp/errors.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fmsilp {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

// ---- locator ---------------------------------------------------------------

namespace {

class LocatorScanner {
public:
    LocatorScanner(std::string_view text,
                   std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>>& out)
        : text_(text), out_(out)
    {
    }

    void run()
    {
        skip();
        if (pos_ < text_.size()) value("");
    }

private:
    void advance()
    {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
    void skip()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
    }
    bool at(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

    std::string string_token()
    {
        std::string s;
        advance();  // opening quote
        while (pos_ < text_.size() && text_[pos_] != '"') {
            if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
                advance();
                char e = text_[pos_];
                s += e == 'n' ? '\n' : e == 't' ? '\t' : e;
            } else {
                s += text_[pos_];
            }
            advance();
        }
        if (pos_ < text_.size()) advance();
        return s;
    }

    static std::string escape(const std::string& key)
    {
        std::string out;
        for (char c : key) {
            if (c == '~') out += "~0";
            else if (c == '/') out += "~1";
            else out += c;
        }
        return out;
    }

    void value(const std::string& pointer)
    {
        out_.push_back({pointer, {line_, col_}});
        if (++depth_ > 512) throw ParseError("JSON nesting too deep", line_, col_);
        if (at('{')) {
            advance();
            skip();
            while (pos_ < text_.size() && !at('}')) {
                if (!at('"')) return;
                std::string key = string_token();
                skip();
                if (!at(':')) return;
                advance();
                skip();
                value(pointer + "/" + escape(key));
                skip();
                if (at(',')) {
                    advance();
                    skip();
                }
            }
            if (at('}')) advance();
        } else if (at('[')) {
            advance();
            skip();
            for (std::size_t i = 0; pos_ < text_.size() && !at(']'); ++i) {
                value(pointer + "/" + std::to_string(i));
                skip();
                if (at(',')) {
                    advance();
                    skip();
                }
            }
            if (at(']')) advance();
        } else if (at('"')) {
            string_token();
        } else {
            while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
                   !at(',') && !at('}') && !at(']'))
                advance();
        }
        --depth_;
    }

    std::string_view text_;
    std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>>& out_;
    std::size_t pos_ = 0, line_ = 1, col_ = 1;
    int depth_ = 0;
};

}  // namespace

JsonLocator::JsonLocator(std::string_view text)
{
    LocatorScanner(text, entries_).run();
}

std::pair<std::size_t, std::size_t> JsonLocator::find(const std::string& pointer) const
{
    std::string p = pointer;
    while (true) {
        for (const auto& [ptr, pos] : entries_)
            if (ptr == p) return pos;
        if (p.empty()) return {1, 1};
        p = p.substr(0, p.rfind('/'));
    }
}

// ---- reading ---------------------------------------------------------------

Rational json_rational(const json& j)
{
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) {
        if (j.is_number_unsigned()) return Rational(std::to_string(j.get<std::uint64_t>()));
        return Rational(std::to_string(j.get<std::int64_t>()));
    }
    if (j.is_number_float()) throw ParseError("write non-integer numbers as strings (\"p/q\" or \"0.25\")");
    throw ParseError("expected a number");
}

namespace {

class Reader {
public:
    explicit Reader(std::string_view text) : loc_(text) {}

    [[noreturn]] void fail(const std::string& pointer, const std::string& msg) const
    {
        auto [line, col] = loc_.find(pointer);
        throw ParseError(msg + (pointer.empty() ? "" : " at " + pointer), line, col);
    }

    const json& member(const json& obj, const std::string& key, const std::string& pointer) const
    {
        if (!obj.is_object()) fail(pointer, "expected an object");
        auto it = obj.find(key);
        if (it == obj.end()) fail(pointer, "missing field '" + key + "'");
        return *it;
    }

    void allow_keys(const json& obj, const std::set<std::string>& keys, const std::string& pointer) const
    {
        if (!obj.is_object()) fail(pointer, "expected an object");
        for (auto it = obj.begin(); it != obj.end(); ++it)
            if (!keys.count(it.key())) fail(pointer + "/" + it.key(), "unknown field '" + it.key() + "'");
    }

    Rational rational(const json& j, const std::string& pointer) const
    {
        try {
            return json_rational(j);
        } catch (const ParseError& e) {
            fail(pointer, e.message());
        }
    }

    std::string string(const json& j, const std::string& pointer) const
    {
        if (!j.is_string()) fail(pointer, "expected a string");
        return j.get<std::string>();
    }

    int integer(const json& j, const std::string& pointer) const
    {
        if (!j.is_number_integer()) fail(pointer, "expected an integer");
        auto v = j.get<std::int64_t>();
        if (v < -1000000 || v > 1000000) fail(pointer, "integer out of range");
        return static_cast<int>(v);
    }

    const json& array(const json& j, const std::string& pointer) const
    {
        if (!j.is_array()) fail(pointer, "expected an array");
        return j;
    }

    Expression expression(const json& j, const std::vector<std::string>& symbols,
                          const std::string& pointer) const
    {
        if (j.is_number_integer()) return Expression(rational(j, pointer));
        std::string text = string(j, pointer);
        try {
            return Expression::parse(text, symbols);
        } catch (const ParseError& e) {
            auto [line, col] = loc_.find(pointer);
            // +1 for the opening quote; exact when the string has no escapes.
            throw ParseError(e.message() + " at " + pointer, line, col + e.column());
        }
    }

    std::vector<std::string> names(const json& j, const std::string& pointer) const
    {
        std::vector<std::string> out;
        std::set<std::string> seen;
        const auto& arr = array(j, pointer);
        for (std::size_t i = 0; i < arr.size(); ++i) {
            std::string p = pointer + "/" + std::to_string(i);
            std::string name = string(arr[i], p);
            if (name.empty()) fail(p, "empty variable name");
            if (!seen.insert(name).second) fail(p, "duplicate variable '" + name + "'");
            out.push_back(name);
        }
        return out;
    }

    Domain domain(const json& j, const std::string& pointer) const
    {
        allow_keys(j, {"type", "lo", "hi"}, pointer);
        Domain d;
        std::string type = j.contains("type") ? string(j["type"], pointer + "/type") : "real";
        if (type == "real") d.kind = Domain::Kind::Real;
        else if (type == "integer") d.kind = Domain::Kind::Integer;
        else fail(pointer + "/type", "domain type must be 'real' or 'integer'");
        d.lo = rational(member(j, "lo", pointer), pointer + "/lo");
        if (j.contains("hi") && !j["hi"].is_null()) d.hi = rational(j["hi"], pointer + "/hi");
        if (d.hi && *d.hi < d.lo) fail(pointer, "empty domain");
        if (d.kind == Domain::Kind::Integer &&
            (denominator(d.lo) != 1 || (d.hi && denominator(*d.hi) != 1)))
            fail(pointer, "integer domain bounds must be integers");
        return d;
    }

    SILPModel model(const json& root) const
    {
        SILPModel m;
        m.variables = names(member(root, "variables", ""), "/variables");
        if (m.variables.empty()) fail("/variables", "no variables");
        auto index_of = [&](const std::string& name, const std::string& pointer) {
            for (std::size_t k = 0; k < m.variables.size(); ++k)
                if (m.variables[k] == name) return k;
            fail(pointer, "unknown variable '" + name + "'");
        };

        m.objective.assign(m.variables.size(), Rational(0));
        const json& obj = member(root, "objective", "");
        if (obj.is_array()) {
            if (obj.size() != m.variables.size()) fail("/objective", "objective length does not match the variables");
            for (std::size_t k = 0; k < obj.size(); ++k)
                m.objective[k] = rational(obj[k], "/objective/" + std::to_string(k));
        } else if (obj.is_object()) {
            for (auto it = obj.begin(); it != obj.end(); ++it) {
                std::string p = "/objective/" + it.key();
                m.objective[index_of(it.key(), p)] = rational(it.value(), p);
            }
        } else {
            fail("/objective", "objective must be an array or an object");
        }

        const json& cons = array(member(root, "constraints", ""), "/constraints");
        std::set<std::string> row_names;
        for (std::size_t i = 0; i < cons.size(); ++i) {
            const std::string p = "/constraints/" + std::to_string(i);
            const json& c = cons[i];
            if (!c.is_object()) fail(p, "constraint must be an object");
            if (c.contains("family")) {
                allow_keys(c, {"family", "parameter", "domain", "coeffs", "rhs"}, p);
                ParametricFamily f;
                f.name = string(c["family"], p + "/family");
                if (f.name.empty() || f.name.find_first_of("@,") != std::string::npos)
                    fail(p + "/family", "family names must be nonempty and free of '@' and ','");
                if (!row_names.insert(f.name).second) fail(p + "/family", "duplicate row name '" + f.name + "'");
                f.parameter = string(member(c, "parameter", p), p + "/parameter");
                f.domain = domain(member(c, "domain", p), p + "/domain");
                std::vector<std::string> symbols{f.parameter};
                f.coeffs.assign(m.variables.size(), Expression());
                const json& co = member(c, "coeffs", p);
                if (!co.is_object()) fail(p + "/coeffs", "coeffs must be an object");
                for (auto it = co.begin(); it != co.end(); ++it) {
                    std::string cp = p + "/coeffs/" + it.key();
                    f.coeffs[index_of(it.key(), cp)] = expression(it.value(), symbols, cp);
                }
                f.rhs = expression(member(c, "rhs", p), symbols, p + "/rhs");
                m.families.push_back(std::move(f));
            } else {
                allow_keys(c, {"name", "coeffs", "rhs"}, p);
                FiniteRow r;
                std::string name = c.contains("name") ? string(c["name"], p + "/name") : "r" + std::to_string(i + 1);
                if (name.empty() || name == "objective" || name.find('@') != std::string::npos)
                    fail(p + "/name", "row names must be nonempty, not 'objective' and free of '@'");
                if (!row_names.insert(name).second) fail(p + "/name", "duplicate row name '" + name + "'");
                r.id = RowId::atom(name);
                r.coeffs.assign(m.variables.size(), Rational(0));
                const json& co = member(c, "coeffs", p);
                if (!co.is_object()) fail(p + "/coeffs", "coeffs must be an object");
                for (auto it = co.begin(); it != co.end(); ++it) {
                    std::string cp = p + "/coeffs/" + it.key();
                    r.coeffs[index_of(it.key(), cp)] = rational(it.value(), cp);
                }
                r.rhs = rational(member(c, "rhs", p), p + "/rhs");
                m.rows.push_back(std::move(r));
            }
        }
        try {
            m.validate();
        } catch (const PreconditionViolated& e) {
            fail("/constraints", e.what());
        }
        return m;
    }

    ConvexProgram convex(const json& j, const std::string& pointer) const
    {
        allow_keys(j, {"variables", "f", "g", "omega", "cap"}, pointer);
        ConvexProgram cp;
        cp.variables = names(member(j, "variables", pointer), pointer + "/variables");
        if (cp.variables.empty()) fail(pointer + "/variables", "no variables");
        cp.f = expression(member(j, "f", pointer), cp.variables, pointer + "/f");
        if (j.contains("g")) {
            const auto& g = array(j["g"], pointer + "/g");
            for (std::size_t i = 0; i < g.size(); ++i)
                cp.g.push_back(expression(g[i], cp.variables, pointer + "/g/" + std::to_string(i)));
        }
        if (j.contains("cap")) cp.cap = rational(j["cap"], pointer + "/cap");
        const std::string op = pointer + "/omega";
        const json& omega = member(j, "omega", pointer);
        allow_keys(omega, {"points", "box"}, op);
        if (omega.contains("box")) {
            const std::string bp = op + "/box";
            const json& b = omega["box"];
            allow_keys(b, {"lo", "hi", "points"}, bp);
            BoxGrid box;
            const auto& lo = array(member(b, "lo", bp), bp + "/lo");
            const auto& hi = array(member(b, "hi", bp), bp + "/hi");
            for (std::size_t k = 0; k < lo.size(); ++k) box.lo.push_back(rational(lo[k], bp + "/lo/" + std::to_string(k)));
            for (std::size_t k = 0; k < hi.size(); ++k) box.hi.push_back(rational(hi[k], bp + "/hi/" + std::to_string(k)));
            if (b.contains("points")) box.points = integer(b["points"], bp + "/points");
            cp.box = std::move(box);
        } else if (omega.contains("points")) {
            const auto& pts = array(omega["points"], op + "/points");
            for (std::size_t i = 0; i < pts.size(); ++i) {
                std::string pp = op + "/points/" + std::to_string(i);
                std::vector<Rational> x;
                const auto& arr = array(pts[i], pp);
                for (std::size_t k = 0; k < arr.size(); ++k) x.push_back(rational(arr[k], pp + "/" + std::to_string(k)));
                cp.points.push_back(std::move(x));
            }
        } else {
            fail(op, "omega needs 'points' or 'box'");
        }
        try {
            cp.validate();
        } catch (const Error& e) {
            fail(op, e.what());
        }
        return cp;
    }

    void schedule(const json& j, GridSchedule& s) const
    {
        const std::string p = "/schedule";
        allow_keys(j, {"stages", "reach_base", "uniform_points", "integer_base", "integer_growth",
                       "deltas", "delta_max"}, p);
        if (j.contains("stages")) s.stages = integer(j["stages"], p + "/stages");
        if (j.contains("reach_base")) s.reach_base = integer(j["reach_base"], p + "/reach_base");
        if (j.contains("uniform_points")) s.uniform_points = integer(j["uniform_points"], p + "/uniform_points");
        if (j.contains("integer_base")) s.integer_base = integer(j["integer_base"], p + "/integer_base");
        if (j.contains("integer_growth")) {
            std::string g = string(j["integer_growth"], p + "/integer_growth");
            if (g == "doubling") s.integer_growth = IntegerGrowth::Doubling;
            else if (g == "linear") s.integer_growth = IntegerGrowth::Linear;
            else fail(p + "/integer_growth", "integer_growth must be 'doubling' or 'linear'");
        }
        if (j.contains("deltas") && j.contains("delta_max")) fail(p, "give either deltas or delta_max");
        if (j.contains("deltas")) {
            s.deltas.clear();
            const auto& d = array(j["deltas"], p + "/deltas");
            for (std::size_t i = 0; i < d.size(); ++i) s.deltas.push_back(rational(d[i], p + "/deltas/" + std::to_string(i)));
        }
        if (j.contains("delta_max")) {
            try {
                s.deltas = GridSchedule::deltas_up_to(rational(j["delta_max"], p + "/delta_max"));
            } catch (const PreconditionViolated& e) {
                fail(p + "/delta_max", e.what());
            }
        }
        try {
            s.validate();
        } catch (const PreconditionViolated& e) {
            fail(p, e.what());
        }
    }

private:
    JsonLocator loc_;
};

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

ModelFile parse_model(std::string_view text)
{
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        auto [line, col] = line_col(text, e.byte);
        std::string msg = e.what();
        if (auto pos = msg.find("parse error"); pos != std::string::npos) msg = msg.substr(pos);
        throw ParseError("invalid JSON: " + msg, line, col);
    }
    Reader r(text);
    if (!root.is_object()) r.fail("", "model file must be a JSON object");
    r.allow_keys(root, {"version", "variables", "objective", "constraints", "schedule", "convex"}, "");
    const json& version = r.member(root, "version", "");
    if (!version.is_string() || version.get<std::string>() != "1")
        r.fail("/version", "unsupported version (expected \"1\")");

    ModelFile file;
    if (root.contains("constraints") || root.contains("variables") || root.contains("objective"))
        file.model = r.model(root);
    if (root.contains("convex")) file.convex = r.convex(root["convex"], "/convex");
    if (!file.model && !file.convex) r.fail("", "model file needs constraints or a convex section");
    if (root.contains("schedule")) {
        r.schedule(root["schedule"], file.schedule);
        file.has_schedule = true;
    }
    return file;
}

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ModelFile load_model_file(const std::string& path)
{
    return parse_model(read_text_file(path));
}

// ---- writing ---------------------------------------------------------------

ojson schedule_to_json(const GridSchedule& s)
{
    ojson j;
    j["stages"] = s.stages;
    j["reach_base"] = s.reach_base;
    j["uniform_points"] = s.uniform_points;
    j["integer_base"] = s.integer_base;
    j["integer_growth"] = s.integer_growth == IntegerGrowth::Doubling ? "doubling" : "linear";
    j["deltas"] = ojson::array();
    for (const auto& d : s.deltas) j["deltas"].push_back(d.str());
    return j;
}

void apply_schedule_json(const json& j, GridSchedule& schedule)
{
    Reader(j.dump()).schedule(j, schedule);
}

ojson model_to_json(const ModelFile& file)
{
    ojson j;
    j["version"] = "1";
    if (file.model) {
        const auto& m = *file.model;
        j["variables"] = m.variables;
        ojson obj = ojson::object();
        for (std::size_t k = 0; k < m.variables.size(); ++k) obj[m.variables[k]] = m.objective[k].str();
        j["objective"] = obj;
        j["constraints"] = ojson::array();
        for (const auto& r : m.rows) {
            ojson c;
            c["name"] = r.id.str();
            c["coeffs"] = ojson::object();
            for (std::size_t k = 0; k < m.variables.size(); ++k)
                if (r.coeffs[k] != 0) c["coeffs"][m.variables[k]] = r.coeffs[k].str();
            c["rhs"] = r.rhs.str();
            j["constraints"].push_back(c);
        }
        for (const auto& f : m.families) {
            ojson c;
            c["family"] = f.name;
            c["parameter"] = f.parameter;
            ojson d;
            d["type"] = f.domain.kind == Domain::Kind::Integer ? "integer" : "real";
            d["lo"] = f.domain.lo.str();
            if (f.domain.hi) d["hi"] = f.domain.hi->str();
            c["domain"] = d;
            c["coeffs"] = ojson::object();
            for (std::size_t k = 0; k < m.variables.size(); ++k) c["coeffs"][m.variables[k]] = f.coeffs[k].str();
            c["rhs"] = f.rhs.str();
            j["constraints"].push_back(c);
        }
    }
    if (file.has_schedule) j["schedule"] = schedule_to_json(file.schedule);
    if (file.convex) {
        const auto& cp = *file.convex;
        ojson c;
        c["variables"] = cp.variables;
        c["f"] = cp.f.str();
        c["g"] = ojson::array();
        for (const auto& g : cp.g) c["g"].push_back(g.str());
        ojson omega;
        if (cp.box) {
            ojson b;
            b["lo"] = ojson::array();
            b["hi"] = ojson::array();
            for (const auto& v : cp.box->lo) b["lo"].push_back(v.str());
            for (const auto& v : cp.box->hi) b["hi"].push_back(v.str());
            b["points"] = cp.box->points;
            omega["box"] = b;
        } else {
            omega["points"] = ojson::array();
            for (const auto& x : cp.points) {
                ojson p = ojson::array();
                for (const auto& v : x) p.push_back(v.str());
                omega["points"].push_back(p);
            }
        }
        c["omega"] = omega;
        if (cp.cap) c["cap"] = cp.cap->str();
        j["convex"] = c;
    }
    return j;
}

std::string serialize_model(const ModelFile& file)
{
    return model_to_json(file).dump(2) + "\n";
}

}  // namespace fmsilp
