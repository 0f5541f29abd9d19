#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chstory {

// Closed set of error codes raised by every module. The api layer maps each
// one to exactly one HTTP status.
enum class ErrorCode {
    // entity_event_store
    MalformedDocument,
    IntegrityError,
    DuplicateId,
    NotFound,
    InvariantViolation,
    // query_engine
    InvalidConstraint,
    // viz_compute
    OutOfRange,
    InvalidArgument,
    EmptyCluster,
    EmptySelection,
    NoDatedEvents,
    // story_engine
    BadIndex,
    UnknownLayout,
    NoCoordinates,
    NoVisualization,
    InvalidStory,
    VizCount,        // E_VIZ_COUNT
    PaneCount,       // E_PANE_COUNT
    LayoutSlot,      // E_LAYOUT_SLOT
    DanglingEvent,   // E_DANGLING_EVENT
    NestDepth,       // E_NEST_DEPTH
    QuizNoCorrect,   // E_QUIZ_NO_CORRECT
    SchemaVersion,   // E_SCHEMA_VERSION
    DupSlideId,      // E_DUP_SLIDE_ID
    // api_service
    VersionConflict,
    AlreadyExists,
    StorageCorrupt,
    Internal,
};

inline constexpr ErrorCode kAllErrorCodes[] = {
    ErrorCode::MalformedDocument, ErrorCode::IntegrityError,  ErrorCode::DuplicateId,
    ErrorCode::NotFound,          ErrorCode::InvariantViolation, ErrorCode::InvalidConstraint,
    ErrorCode::OutOfRange,        ErrorCode::InvalidArgument, ErrorCode::EmptyCluster,
    ErrorCode::EmptySelection,    ErrorCode::NoDatedEvents,   ErrorCode::BadIndex,
    ErrorCode::UnknownLayout,     ErrorCode::NoCoordinates,   ErrorCode::NoVisualization,
    ErrorCode::InvalidStory,      ErrorCode::VizCount,        ErrorCode::PaneCount,
    ErrorCode::LayoutSlot,        ErrorCode::DanglingEvent,   ErrorCode::NestDepth,
    ErrorCode::QuizNoCorrect,     ErrorCode::SchemaVersion,   ErrorCode::DupSlideId,
    ErrorCode::VersionConflict,   ErrorCode::AlreadyExists,   ErrorCode::StorageCorrupt,
    ErrorCode::Internal,
};

std::string_view to_string(ErrorCode code) noexcept;

/// A located problem inside a document: ingest errors, story violations.
struct Issue {
    std::string path;
    ErrorCode code;
    std::string message;

    bool operator==(const Issue&) const = default;
};

/// The single exception type thrown across module boundaries.
///
/// `path` locates the offending node (JSON-pointer style) when one exists;
/// `details` carries the full list when an operation rejects several
/// problems at once (strict ingest, invalid story export).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, std::string path = {},
          std::vector<Issue> details = {});

    ErrorCode code() const noexcept { return code_; }
    const std::string& path() const noexcept { return path_; }
    const std::vector<Issue>& details() const noexcept { return details_; }

private:
    ErrorCode code_;
    std::string path_;
    std::vector<Issue> details_;
};

} // namespace chstory
