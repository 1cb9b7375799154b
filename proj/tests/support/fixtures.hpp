#pragma once

#include <filesystem>
#include <random>
#include <string>

#ifndef KBPLUGIN_FIXTURE_DIR
#error "KBPLUGIN_FIXTURE_DIR must be defined by the build"
#endif

namespace testing {

inline std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(KBPLUGIN_FIXTURE_DIR) / name;
}

/// Fresh, empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    static std::mt19937_64 rng(std::random_device{}());
    auto dir = std::filesystem::temp_directory_path() /
               ("kbplugin-" + tag + "-" + std::to_string(rng() % 1000000007));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace testing
