#pragma once

#include "chstory/api/service.hpp"

#include <string>

namespace httplib {
class Server;
}

namespace chstory::api {

struct HttpOptions {
    /// Value for Access-Control-Allow-Origin; empty disables CORS headers.
    std::string allow_origin;
};

/// Registers the /api endpoint surface on `server`. Bodies are JSON in the
/// formats of the owning modules; failures are ApiError bodies.
void install_routes(httplib::Server& server, Service& service, const HttpOptions& options = {});

} // namespace chstory::api
