#include "chstory/error.hpp"

namespace chstory {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    case ErrorCode::IntegrityError: return "IntegrityError";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::InvalidConstraint: return "InvalidConstraint";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyCluster: return "EmptyCluster";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::NoDatedEvents: return "NoDatedEvents";
    case ErrorCode::BadIndex: return "BadIndex";
    case ErrorCode::UnknownLayout: return "UnknownLayout";
    case ErrorCode::NoCoordinates: return "NoCoordinates";
    case ErrorCode::NoVisualization: return "NoVisualization";
    case ErrorCode::InvalidStory: return "InvalidStory";
    case ErrorCode::VizCount: return "E_VIZ_COUNT";
    case ErrorCode::PaneCount: return "E_PANE_COUNT";
    case ErrorCode::LayoutSlot: return "E_LAYOUT_SLOT";
    case ErrorCode::DanglingEvent: return "E_DANGLING_EVENT";
    case ErrorCode::NestDepth: return "E_NEST_DEPTH";
    case ErrorCode::QuizNoCorrect: return "E_QUIZ_NO_CORRECT";
    case ErrorCode::SchemaVersion: return "E_SCHEMA_VERSION";
    case ErrorCode::DupSlideId: return "E_DUP_SLIDE_ID";
    case ErrorCode::VersionConflict: return "VersionConflict";
    case ErrorCode::AlreadyExists: return "AlreadyExists";
    case ErrorCode::StorageCorrupt: return "StorageCorrupt";
    case ErrorCode::Internal: return "Internal";
    }
    return "Internal";
}

Error::Error(ErrorCode code, std::string message, std::string path, std::vector<Issue> details)
    : std::runtime_error(std::move(message)),
      code_(code),
      path_(std::move(path)),
      details_(std::move(details)) {}

} // namespace chstory
