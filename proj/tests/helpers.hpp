#pragma once

// Shared helpers for the test suites.

#include <filesystem>
#include <string>

namespace testutil {

// Scratch directory under the system temp dir, wiped on construction and
// removed on destruction.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& name)
        : path(std::filesystem::temp_directory_path() / ("bwc_" + name)) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }

    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }

    std::filesystem::path operator/(const std::string& leaf) const { return path / leaf; }
};

}  // namespace testutil
