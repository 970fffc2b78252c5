// Copyright 2026 The hbias Authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you
// may not use this file except in compliance with the License.  You
// may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied.  See the License for the specific language governing
// permissions and limitations under the License.

#pragma once

#include <filesystem>

#include "hbias/autodiff/tape.hpp"
#include "json.hpp"

namespace hbias {

/// Writes raw little-endian tensors to `file` and a manifest
/// (`file` + ".json") with names, shapes, dtype and `extra`.
void save_checkpoint(const ParameterSet& params, const std::filesystem::path& file, const nlohmann::json& extra);

nlohmann::json read_manifest(const std::filesystem::path& file);

/// Fills `params` by name; shapes must match. Returns the manifest.
nlohmann::json load_checkpoint(ParameterSet& params, const std::filesystem::path& file);

std::filesystem::path manifest_path(const std::filesystem::path& file);

}  // namespace hbias
