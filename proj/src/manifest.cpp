// noise_oracle/manifest.cpp

// Copyright 2026 The noise-oracle Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "noise_oracle/manifest.hpp"

#include <fstream>
#include <sstream>

#include "noise_oracle/types.hpp"

namespace noise_oracle {

nlohmann::json Manifest::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  if (seed) j["seed"] = *seed;
  j["out_dir"] = out_dir;
  j["params"] = params;
  return j;
}

Manifest Manifest::from_json(const nlohmann::json& j) {
  Manifest manifest;
  try {
    manifest.command = j.at("command").get<std::string>();
    if (j.contains("seed")) manifest.seed = j.at("seed").get<std::uint64_t>();
    manifest.out_dir = j.value("out_dir", std::string("."));
    manifest.params = j.value("params", nlohmann::json::object());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad manifest: ") + e.what());
  }
  return manifest;
}

Manifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open manifest file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("manifest parse error in " + path + ": " + e.what());
  }
  return Manifest::from_json(j);
}

void write_manifest(const std::string& path, const Manifest& manifest) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write manifest file: " + path);
  out << manifest.to_json().dump(2) << '\n';
}

}  // namespace noise_oracle
