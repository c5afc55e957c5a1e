#pragma once

#include <filesystem>
#include <random>
#include <string>

inline std::filesystem::path fixtures_dir() { return STMTCLS_FIXTURES; }

// fresh scratch directory under the system temp dir, removed on scope exit
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path = std::filesystem::temp_directory_path() / ("stmtcls-" + tag + "-" + std::to_string(rd()));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};
