// noise_oracle/manifest.hpp

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

#ifndef NOISE_ORACLE_MANIFEST_HPP_
#define NOISE_ORACLE_MANIFEST_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace noise_oracle {

// Serializable record of one CLI invocation. Command-line flags compile into
// a manifest, the manifest is what actually runs, and a copy lands in the
// output directory next to the results. Thread count is a runtime knob, not
// part of the record, so reruns at different parallelism stay comparable.
struct Manifest {
  std::string command;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  nlohmann::json params = nlohmann::json::object();

  nlohmann::json to_json() const;
  static Manifest from_json(const nlohmann::json& j);

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

Manifest read_manifest(const std::string& path);
void write_manifest(const std::string& path, const Manifest& manifest);

}  // namespace noise_oracle

#endif  // NOISE_ORACLE_MANIFEST_HPP_
