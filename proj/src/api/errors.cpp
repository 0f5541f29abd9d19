#include "chstory/api/errors.hpp"

#include "chstory/store/codec.hpp"

namespace chstory::api {

namespace {

int status_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::MalformedDocument:
    case ErrorCode::InvalidConstraint:
    case ErrorCode::OutOfRange:
    case ErrorCode::InvalidArgument:
    case ErrorCode::EmptyCluster:
    case ErrorCode::EmptySelection:
    case ErrorCode::BadIndex:
    case ErrorCode::UnknownLayout:
        return 400;
    case ErrorCode::NotFound:
        return 404;
    case ErrorCode::DuplicateId:
    case ErrorCode::VersionConflict:
    case ErrorCode::AlreadyExists:
        return 409;
    case ErrorCode::IntegrityError:
    case ErrorCode::InvariantViolation:
    case ErrorCode::NoDatedEvents:
    case ErrorCode::NoCoordinates:
    case ErrorCode::NoVisualization:
    case ErrorCode::InvalidStory:
    case ErrorCode::VizCount:
    case ErrorCode::PaneCount:
    case ErrorCode::LayoutSlot:
    case ErrorCode::DanglingEvent:
    case ErrorCode::NestDepth:
    case ErrorCode::QuizNoCorrect:
    case ErrorCode::SchemaVersion:
    case ErrorCode::DupSlideId:
        return 422;
    case ErrorCode::StorageCorrupt:
    case ErrorCode::Internal:
        return 500;
    }
    return 500;
}

} // namespace

ApiError api_error_for(ErrorCode code) { return {status_for(code), std::string(to_string(code))}; }

json error_body(const Error& e) {
    ApiError a = api_error_for(e.code());
    json details = json::array();
    for (const auto& d : e.details()) details.push_back(to_json(d));
    return {{"status", a.status}, {"code", a.code}, {"message", e.what()}, {"path", e.path()}, {"details", details}};
}

} // namespace chstory::api
