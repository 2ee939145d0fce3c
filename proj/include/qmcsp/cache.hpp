// Copyright 2026 The qmcsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QMCSP_CACHE_HPP
#define QMCSP_CACHE_HPP

#include <mutex>
#include <optional>
#include <string>

#include "json.hpp"

namespace qmcsp {

// Oracle results keyed by (problem, gate set name and hash, object hash, sizes,
// thresholds, flags). Stored as {"schema_version": 1, "entries": {...}}.
class OracleCache {
 public:
  static constexpr int kSchemaVersion = 1;

  explicit OracleCache(std::string path);

  // $QMCSP_CACHE if set, else the given fallback.
  static std::string resolve_path(const std::string &fallback);

  std::optional<nlohmann::json> lookup(const std::string &key) const;
  // Writes through to disk.
  void store(const std::string &key, nlohmann::json value);
  void save() const;
  size_t size() const;
  const std::string &path() const { return path_; }

 private:
  std::string path_;
  mutable std::mutex mu_;
  nlohmann::json entries_ = nlohmann::json::object();
};

}  // namespace qmcsp

#endif
