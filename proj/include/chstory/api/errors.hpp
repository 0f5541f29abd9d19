#pragma once

#include "chstory/error.hpp"
#include "chstory/json_reader.hpp"

#include <string>

namespace chstory::api {

struct ApiError {
    int status;
    std::string code;
};

/// Total: every ErrorCode has exactly one (status, code) pair, and no two
/// error codes share a code string.
ApiError api_error_for(ErrorCode code);

/// {"status", "code", "message", "path", "details"[]}
json error_body(const Error& e);

} // namespace chstory::api
