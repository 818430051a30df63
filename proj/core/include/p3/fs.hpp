// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef P3_FS_HPP_
#define P3_FS_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace p3 {

// Writes to a sibling temp file, then renames over `path`. Parent
// directories are created. Throws Error(kIoError).
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// Throws Error(kIoError) when the file cannot be read.
std::string read_file(const std::filesystem::path& path);

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

// Exclusive advisory lock on a lock file, held for the object's lifetime.
class DirectoryLock {
 public:
  // Throws Error(kIoError) if the lock is held by another process.
  explicit DirectoryLock(const std::filesystem::path& lock_file);
  ~DirectoryLock();

  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  int fd_ = -1;
};

}  // namespace p3

#endif  // P3_FS_HPP_
