#include "chstory/api/http.hpp"

#include "chstory/api/errors.hpp"
#include "chstory/query/query.hpp"
#include "chstory/story/codec.hpp"
#include "chstory/store/codec.hpp"
#include "chstory/viz/codec.hpp"

#include <httplib.h>

#include <charconv>

namespace chstory::api {

namespace {

using httplib::Request;
using httplib::Response;

void send_json(Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(Response& res, const Error& e) {
    json body = error_body(e);
    send_json(res, body, body["status"].get<int>());
}

template <class F>
httplib::Server::Handler guarded(F fn) {
    return [fn](const Request& req, Response& res) {
        try {
            fn(req, res);
        } catch (const Error& e) {
            send_error(res, e);
        } catch (const json::exception& e) {
            send_error(res, Error(ErrorCode::MalformedDocument, e.what()));
        } catch (const std::exception& e) {
            send_error(res, Error(ErrorCode::Internal, e.what()));
        }
    };
}

json parse_body(const Request& req) {
    try {
        return json::parse(req.body);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::MalformedDocument, std::string("request body is not valid JSON: ") + e.what(), "/");
    }
}

std::optional<std::int64_t> parse_integer(std::string_view text) {
    std::int64_t v = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || end != text.data() + text.size()) return std::nullopt;
    return v;
}

std::size_t size_param(const Request& req, const char* key, std::size_t fallback) {
    if (!req.has_param(key)) return fallback;
    auto v = parse_integer(req.get_param_value(key));
    if (!v || *v < 0) throw Error(ErrorCode::InvalidConstraint, std::string(key) + " must be a non-negative integer");
    return static_cast<std::size_t>(*v);
}

/// If-Match ("3", W/"3" or 3) or ?expected_version=3.
std::optional<std::int64_t> expected_version(const Request& req) {
    std::string text;
    if (req.has_header("If-Match")) {
        text = req.get_header_value("If-Match");
        if (text.rfind("W/", 0) == 0) text = text.substr(2);
        if (text.size() >= 2 && text.front() == '"' && text.back() == '"') text = text.substr(1, text.size() - 2);
    } else if (req.has_param("expected_version")) {
        text = req.get_param_value("expected_version");
    } else {
        return std::nullopt;
    }
    auto v = parse_integer(text);
    if (!v) throw Error(ErrorCode::MalformedDocument, "expected version '" + text + "' is not an integer");
    return v;
}

void send_story(Response& res, const StoryReply& r, int status = 200) {
    res.set_header("ETag", "\"" + std::to_string(r.version) + "\"");
    send_json(res, r.body, status);
}

CalendarDate date_param(const Request& req, const char* key) {
    try {
        return CalendarDate::parse(req.get_param_value(key));
    } catch (const Error& e) {
        throw Error(ErrorCode::InvalidConstraint, std::string(key) + ": " + e.what());
    }
}

json layouts_json() {
    json out = json::array();
    for (const auto& t : story::layout_registry()) {
        json areas = json::array();
        for (const auto& a : t.areas)
            areas.push_back({{"slot", a.slot},
                             {"column", a.column},
                             {"row", a.row},
                             {"column_span", a.column_span},
                             {"row_span", a.row_span}});
        out.push_back({{"id", std::string(story::to_string(t.id))},
                       {"viz_slots", t.viz_slots},
                       {"pane_slots", t.pane_slots},
                       {"areas", areas}});
    }
    return out;
}

} // namespace

void install_routes(httplib::Server& svr, Service& service, const HttpOptions& options) {
    const Store& store = service.store();

    svr.Get("/api/health", guarded([&](const Request&, Response& res) {
        auto [entities, events] = store.read([](const StoreState& s) { return std::pair(s.entity_count(), s.event_count()); });
        send_json(res, {{"status", "ok"}, {"entities", entities}, {"events", events}});
    }));

    // Entities and events.
    svr.Get("/api/entities", guarded([&](const Request& req, Response& res) {
        std::size_t offset = size_param(req, "offset", 0);
        std::size_t limit = size_param(req, "limit", 50);
        send_json(res, query::to_json(query::search_entities(store, {}, offset, limit)));
    }));
    svr.Post("/api/entities/search", guarded([&](const Request& req, Response& res) {
        json body;
        try {
            body = json::parse(req.body.empty() ? std::string("{}") : req.body);
        } catch (const json::parse_error& e) {
            throw Error(ErrorCode::InvalidConstraint, std::string("constraints are not valid JSON: ") + e.what());
        }
        auto constraints = query::constraints_from_json(body);
        std::size_t offset = size_param(req, "offset", 0);
        std::size_t limit = size_param(req, "limit", 50);
        send_json(res, query::to_json(query::search_entities(store, constraints, offset, limit)));
    }));
    svr.Get(R"(/api/entities/([^/]+))", guarded([&](const Request& req, Response& res) {
        send_json(res, to_json(store.get_entity(req.matches[1])));
    }));
    svr.Get(R"(/api/entities/([^/]+)/events)", guarded([&](const Request& req, Response& res) {
        std::optional<TermId> kind;
        if (req.has_param("kind")) kind = req.get_param_value("kind");
        std::optional<TimeSpan> window;
        if (req.has_param("from") || req.has_param("to")) {
            CalendarDate from = req.has_param("from") ? date_param(req, "from") : CalendarDate::from_year(1);
            CalendarDate to = req.has_param("to") ? date_param(req, "to") : CalendarDate::from_year(9999);
            window = TimeSpan{from, to};
            if (!window->well_ordered()) throw Error(ErrorCode::InvalidConstraint, "'from' is after 'to'");
        }
        json out = json::array();
        for (const auto& e : store.list_events(req.matches[1], kind, window)) out.push_back(to_json(e));
        send_json(res, out);
    }));
    svr.Get(R"(/api/entities/([^/]+)/related)", guarded([&](const Request& req, Response& res) {
        int hops = static_cast<int>(size_param(req, "max_hops", 1));
        send_json(res, query::to_json(query::related_entities(store, req.matches[1], hops)));
    }));
    svr.Post("/api/entities", guarded([&](const Request& req, Response& res) {
        send_json(res, service.upsert_entity(parse_body(req)));
    }));
    svr.Delete(R"(/api/entities/([^/]+))", guarded([&](const Request& req, Response& res) {
        service.delete_entity(req.matches[1]);
        res.status = 204;
    }));
    svr.Get(R"(/api/events/([^/]+))", guarded([&](const Request& req, Response& res) {
        send_json(res, to_json(store.get_event(req.matches[1])));
    }));
    svr.Post("/api/events", guarded([&](const Request& req, Response& res) {
        send_json(res, service.upsert_event(parse_body(req)));
    }));
    svr.Delete(R"(/api/events/([^/]+))", guarded([&](const Request& req, Response& res) {
        service.delete_event(req.matches[1]);
        res.status = 204;
    }));
    svr.Get("/api/terms", guarded([&](const Request&, Response& res) {
        json out = json::array();
        for (const auto& t : store.terms()) out.push_back(to_json(t));
        send_json(res, out);
    }));
    svr.Get(R"(/api/facets/([^/]+))", guarded([&](const Request& req, Response& res) {
        json constraints = json::object();
        if (req.has_param("constraints")) {
            try {
                constraints = json::parse(req.get_param_value("constraints"));
            } catch (const json::parse_error& e) {
                throw Error(ErrorCode::InvalidConstraint, std::string("constraints are not valid JSON: ") + e.what());
            }
        }
        auto facet = query::Facet::parse(req.matches[1].str());
        send_json(res, query::to_json(query::facet_histogram(store, query::constraints_from_json(constraints), facet)));
    }));

    // Collections.
    svr.Get("/api/collections", guarded([&](const Request&, Response& res) {
        json out = json::array();
        for (const auto& c : store.list_collections()) out.push_back(to_json(c));
        send_json(res, out);
    }));
    svr.Post("/api/collections", guarded([&](const Request& req, Response& res) {
        send_json(res, service.create_collection(parse_body(req)), 201);
    }));
    svr.Get(R"(/api/collections/([^/]+))", guarded([&](const Request& req, Response& res) {
        send_json(res, to_json(store.get_collection(req.matches[1])));
    }));
    svr.Get(R"(/api/collections/([^/]+)/resolve)", guarded([&](const Request& req, Response& res) {
        std::string id = req.matches[1];
        ResolvedCollection resolved = store.resolve_collection(id);
        json entities = json::array();
        for (const auto& e : resolved.entities) entities.push_back(to_json(e));
        json events = json::array();
        for (const auto& e : resolved.events) events.push_back(to_json(e));
        send_json(res, {{"collection", to_json(store.get_collection(id))}, {"entities", entities}, {"events", events}});
    }));

    // Stories.
    svr.Get("/api/layouts", guarded([&](const Request&, Response& res) { send_json(res, layouts_json()); }));
    svr.Get("/api/stories", guarded([&](const Request&, Response& res) { send_json(res, service.list_stories()); }));
    svr.Post("/api/stories", guarded([&](const Request& req, Response& res) {
        send_story(res, service.create_story(req.body.empty() ? json::object() : parse_body(req)), 201);
    }));
    svr.Post("/api/stories/import", guarded([&](const Request& req, Response& res) {
        std::string policy_text = req.has_param("id_policy") ? req.get_param_value("id_policy") : "keep";
        auto policy = story::parse_id_policy(policy_text);
        if (!policy) throw Error(ErrorCode::MalformedDocument, "id_policy must be 'keep' or 'remap'");
        send_story(res, service.import_story(req.body, *policy), 201);
    }));
    svr.Get(R"(/api/stories/([^/]+))", guarded([&](const Request& req, Response& res) {
        send_story(res, service.get_story(req.matches[1]));
    }));
    svr.Put(R"(/api/stories/([^/]+))", guarded([&](const Request& req, Response& res) {
        StoryReply r = service.put_story(req.matches[1], parse_body(req), expected_version(req));
        res.set_header("ETag", "\"" + std::to_string(r.version) + "\"");
        send_json(res, {{"version", r.version}});
    }));
    svr.Delete(R"(/api/stories/([^/]+))", guarded([&](const Request& req, Response& res) {
        service.delete_story(req.matches[1]);
        res.status = 204;
    }));
    auto export_handler = guarded([&](const Request& req, Response& res) {
        res.set_content(service.export_story(req.matches[1]), "application/json");
    });
    svr.Get(R"(/api/stories/([^/]+)/export)", export_handler);
    svr.Get(R"(/api/view/([^/]+))", export_handler);
    svr.Post(R"(/api/stories/([^/]+)/ops)", guarded([&](const Request& req, Response& res) {
        send_story(res, service.apply_story_operation(req.matches[1], parse_body(req), expected_version(req)));
    }));
    svr.Get(R"(/api/stories/([^/]+)/validate)", guarded([&](const Request& req, Response& res) {
        send_json(res, service.validate_story(req.matches[1]));
    }));

    // Pure computations.
    auto compute = [&](const char* path, json (*fn)(const json&)) {
        svr.Post(path, guarded([fn](const Request& req, Response& res) { send_json(res, fn(parse_body(req))); }));
    };
    compute("/api/viz/cluster", viz::handle_cluster_request);
    compute("/api/viz/fit-camera", viz::handle_fit_camera_request);
    compute("/api/viz/timeline-layout", viz::handle_timeline_request);
    compute("/api/viz/donut", viz::handle_donut_request);
    compute("/api/viz/colors", viz::handle_colors_request);

    svr.set_error_handler([](const Request& req, Response& res) {
        if (!res.body.empty()) return;
        if (res.status == 404)
            send_error(res, Error(ErrorCode::NotFound, "no endpoint " + req.method + " " + req.path));
    });

    if (!options.allow_origin.empty()) {
        std::string origin = options.allow_origin;
        svr.Options(R"(/api/.*)", [](const Request&, Response& res) { res.status = 204; });
        svr.set_post_routing_handler([origin](const Request&, Response& res) {
            res.set_header("Access-Control-Allow-Origin", origin);
            res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, DELETE, OPTIONS");
            res.set_header("Access-Control-Allow-Headers", "Content-Type, If-Match");
            res.set_header("Access-Control-Expose-Headers", "ETag");
            res.set_header("Vary", "Origin");
        });
    }
}

} // namespace chstory::api
