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

#include "qmcsp/cache.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "qmcsp/qcore.hpp"

namespace qmcsp {

OracleCache::OracleCache(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  if (!in) return;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error &) {
    throw InvalidArgument("cache file " + path_ + " is not valid JSON");
  }
  if (doc.value("schema_version", 0) != kSchemaVersion)
    throw InvalidArgument("cache file " + path_ + " has an unsupported schema version");
  entries_ = doc.value("entries", nlohmann::json::object());
}

std::string OracleCache::resolve_path(const std::string &fallback) {
  const char *env = std::getenv("QMCSP_CACHE");
  return (env && *env) ? std::string(env) : fallback;
}

std::optional<nlohmann::json> OracleCache::lookup(const std::string &key) const {
  std::lock_guard<std::mutex> lk(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return *it;
}

void OracleCache::store(const std::string &key, nlohmann::json value) {
  {
    std::lock_guard<std::mutex> lk(mu_);
    entries_[key] = std::move(value);
  }
  save();
}

void OracleCache::save() const {
  std::lock_guard<std::mutex> lk(mu_);
  nlohmann::json doc = {{"schema_version", kSchemaVersion}, {"entries", entries_}};
  std::string tmp = path_ + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw InvalidArgument("cannot write cache file " + tmp);
    out << doc.dump(1) << "\n";
  }
  std::filesystem::rename(tmp, path_);
}

size_t OracleCache::size() const {
  std::lock_guard<std::mutex> lk(mu_);
  return entries_.size();
}

}  // namespace qmcsp
