#pragma once

#include "fmsilp/convex.hpp"
#include "fmsilp/model.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace fmsilp {

// Model file: {"version": "1", "variables", "objective", "constraints", "schedule"?,
// "convex"?}. Either constraints or a convex section must be present.
struct ModelFile {
    std::optional<SILPModel> model;
    std::optional<ConvexProgram> convex;
    GridSchedule schedule;
    bool has_schedule = false;

    friend bool operator==(const ModelFile&, const ModelFile&) = default;
};

// Throws ParseError carrying the line and column of the offending value.
ModelFile parse_model(std::string_view text);
ModelFile load_model_file(const std::string& path);

nlohmann::ordered_json model_to_json(const ModelFile& file);
std::string serialize_model(const ModelFile& file);

nlohmann::ordered_json schedule_to_json(const GridSchedule& schedule);
// Overrides fields present in `j`; `pointer` locates j for error messages.
void apply_schedule_json(const nlohmann::json& j, GridSchedule& schedule);

// Exact rational from a JSON string ("p/q", decimal) or integer.
Rational json_rational(const nlohmann::json& j);

// Maps JSON pointers to 1-based (line, column) of the value they name.
class JsonLocator {
public:
    explicit JsonLocator(std::string_view text);
    std::pair<std::size_t, std::size_t> find(const std::string& pointer) const;

private:
    std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> entries_;
};

std::string read_text_file(const std::string& path);

}  // namespace fmsilp
