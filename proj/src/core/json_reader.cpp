#include "chstory/json_reader.hpp"

#include <cmath>

namespace chstory {

std::string child_path(std::string_view parent, std::string_view key) {
    std::string out(parent);
    out.push_back('/');
    for (char c : key) {
        if (c == '~') out += "~0";
        else if (c == '/') out += "~1";
        else out.push_back(c);
    }
    return out;
}

std::string child_path(std::string_view parent, std::size_t index) {
    return std::string(parent) + "/" + std::to_string(index);
}

ObjectReader::ObjectReader(const json& value, std::string path, bool strict)
    : value_(value), path_(std::move(path)), strict_(strict) {
    if (!value_.is_object())
        throw Error(ErrorCode::MalformedDocument, "expected an object", path_.empty() ? "/" : path_);
}

void ObjectReader::fail(std::string_view key, std::string_view what) const {
    throw Error(ErrorCode::MalformedDocument, "field '" + std::string(key) + "': " + std::string(what),
                path_of(key));
}

const json* ObjectReader::find(std::string_view key) {
    seen_.emplace(key);
    auto it = value_.find(key);
    if (it == value_.end() || it->is_null()) return nullptr;
    return &*it;
}

const json& ObjectReader::at(std::string_view key) {
    const json* v = find(key);
    if (!v) fail(key, "missing");
    return *v;
}

std::string ObjectReader::string(std::string_view key) {
    const json& v = at(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
}

std::optional<std::string> ObjectReader::optional_string(std::string_view key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) fail(key, "expected a string");
    return v->get<std::string>();
}

double ObjectReader::number(std::string_view key) {
    const json& v = at(key);
    if (!v.is_number()) fail(key, "expected a number");
    double d = v.get<double>();
    if (!std::isfinite(d)) fail(key, "expected a finite number");
    return d;
}

std::optional<double> ObjectReader::optional_number(std::string_view key) {
    if (!find(key)) return std::nullopt;
    return number(key);
}

std::int64_t ObjectReader::integer(std::string_view key) {
    const json& v = at(key);
    if (!v.is_number_integer()) fail(key, "expected an integer");
    return v.get<std::int64_t>();
}

bool ObjectReader::boolean(std::string_view key) {
    const json& v = at(key);
    if (!v.is_boolean()) fail(key, "expected a boolean");
    return v.get<bool>();
}

std::optional<bool> ObjectReader::optional_boolean(std::string_view key) {
    if (!find(key)) return std::nullopt;
    return boolean(key);
}

const json& ObjectReader::array(std::string_view key) {
    const json& v = at(key);
    if (!v.is_array()) fail(key, "expected an array");
    return v;
}

const json* ObjectReader::optional_array(std::string_view key) {
    const json* v = find(key);
    if (v && !v->is_array()) fail(key, "expected an array");
    return v;
}

const json& ObjectReader::object(std::string_view key) {
    const json& v = at(key);
    if (!v.is_object()) fail(key, "expected an object");
    return v;
}

const json* ObjectReader::optional_object(std::string_view key) {
    const json* v = find(key);
    if (v && !v->is_object()) fail(key, "expected an object");
    return v;
}

void ObjectReader::finish() const {
    if (!strict_) return;
    for (const auto& [key, _] : value_.items())
        if (!seen_.contains(key))
            throw Error(ErrorCode::MalformedDocument, "unknown field '" + key + "'", path_of(key));
}

} // namespace chstory
