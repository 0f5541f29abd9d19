#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace chstory::api {

/// Replaces `target` with `bytes` so that readers (and a reader after a
/// crash) see either the old or the new content, never a mix: write to a
/// temporary sibling, fsync it, rename over the target, fsync the directory.
void write_file_atomically(const std::filesystem::path& target, std::string_view bytes);

/// Deletes temporaries that an interrupted write_file_atomically left in
/// `dir`. Returns how many were removed.
std::size_t remove_stale_temporaries(const std::filesystem::path& dir);

/// Throws Error{StorageCorrupt} when the file cannot be read.
std::string read_file(const std::filesystem::path& path);

} // namespace chstory::api
