// Copyright 2026 The geez-forge Authors.
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

#pragma once

#include <string>
#include <vector>

namespace geez::detail {

// Renders rows as left-aligned columns separated by two spaces. Widths are
// measured in codepoints.
std::string render_text_table(const std::vector<std::vector<std::string>>& rows);

// "%.*f" without locale surprises.
std::string format_fixed(double value, int decimals);

}  // namespace geez::detail
