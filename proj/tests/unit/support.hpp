#pragma once

#include "chstory/store/store.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace testing_support {

inline std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "cannot open " << p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::filesystem::path fixture_path() { return std::filesystem::path(CHSTORY_FIXTURE_DIR) / "durer.json"; }
inline std::filesystem::path test_data_dir() { return std::filesystem::path(CHSTORY_TEST_DATA_DIR); }

inline std::string fixture_text() { return read_text(fixture_path()); }

inline void load_fixture(chstory::Store& store) { store.ingest_dataset(fixture_text(), chstory::IngestMode::strict); }

/// A fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("chstory-test-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

} // namespace testing_support

#define CHECK_THROWS_CODE(expr, expected_code)                                                                    \
    do {                                                                                                          \
        bool thrown_ = false;                                                                                     \
        try {                                                                                                     \
            (void)(expr);                                                                                         \
        } catch (const chstory::Error& e_) {                                                                      \
            thrown_ = true;                                                                                       \
            CHECK_MESSAGE(e_.code() == (expected_code), "got " << chstory::to_string(e_.code()) << ": " << e_.what()); \
        }                                                                                                         \
        CHECK_MESSAGE(thrown_, "expected " << chstory::to_string(expected_code));                                 \
    } while (0)
