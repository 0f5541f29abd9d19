#pragma once

#include "chstory/error.hpp"

#include <json.hpp>

#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace chstory {

using json = nlohmann::json;

/// Appends a JSON-pointer segment, escaping '~' and '/'.
std::string child_path(std::string_view parent, std::string_view key);
std::string child_path(std::string_view parent, std::size_t index);

/// Typed field access over one JSON object with path-aware errors.
///
/// All failures throw Error{MalformedDocument} located at the field. In
/// strict mode `finish()` rejects any key that was never looked up.
class ObjectReader {
public:
    ObjectReader(const json& value, std::string path, bool strict = true);

    const json* find(std::string_view key);
    const json& at(std::string_view key);

    std::string string(std::string_view key);
    std::optional<std::string> optional_string(std::string_view key);
    double number(std::string_view key);
    std::optional<double> optional_number(std::string_view key);
    std::int64_t integer(std::string_view key);
    bool boolean(std::string_view key);
    std::optional<bool> optional_boolean(std::string_view key);
    const json& array(std::string_view key);
    const json* optional_array(std::string_view key);
    const json& object(std::string_view key);
    const json* optional_object(std::string_view key);

    void finish() const;

    std::string path_of(std::string_view key) const { return child_path(path_, key); }
    const std::string& path() const noexcept { return path_; }

private:
    [[noreturn]] void fail(std::string_view key, std::string_view what) const;

    const json& value_;
    std::string path_;
    bool strict_;
    std::set<std::string, std::less<>> seen_;
};

} // namespace chstory
