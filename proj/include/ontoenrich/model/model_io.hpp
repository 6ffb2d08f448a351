// Copyright 2026 The ontoenrich Authors.
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

// Binary model container: magic, format version, a JSON header carrying
// hyperparameters, tag vocabularies, the embedding provider descriptor and
// tensor shapes, then little-endian float64 tensor data, then an FNV-1a
// checksum of everything before it.

#include <filesystem>
#include <string>

#include "ontoenrich/model/network.hpp"

namespace ontoenrich {

inline constexpr std::uint32_t kModelFormatVersion = 1;

template <typename Scalar>
std::string serialize_model(const RelationModel<Scalar>& model);

// Throws DataError on bad magic, unsupported version, checksum mismatch or
// inconsistent shapes; never returns a partial model.
template <typename Scalar>
RelationModel<Scalar> deserialize_model(std::string_view bytes, std::string_view source = "<model>");

template <typename Scalar>
void save_model(const RelationModel<Scalar>& model, const std::filesystem::path& path);

template <typename Scalar>
RelationModel<Scalar> load_model(const std::filesystem::path& path);

}  // namespace ontoenrich
