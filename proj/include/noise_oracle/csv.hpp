// noise_oracle/csv.hpp

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

#ifndef NOISE_ORACLE_CSV_HPP_
#define NOISE_ORACLE_CSV_HPP_

#include <string>

namespace noise_oracle {

// Shortest text that parses back to the exact same double. All CSV/JSON
// output goes through this so reruns are byte-identical.
std::string format_double(double value);

}  // namespace noise_oracle

#endif  // NOISE_ORACLE_CSV_HPP_
