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

#include "ontoenrich/model/network.hpp"

#include <set>

namespace ontoenrich {

TagVocabs build_tag_vocabs(const std::vector<PairPaths>& data) {
  std::set<std::string> pos;
  std::set<std::string> dep;
  for (const auto& pp : data) {
    for (const auto& path : pp.paths) {
      for (const auto& node : path.nodes) {
        if (node.pos != kUnknownToken) pos.insert(node.pos);
        if (node.dep != kUnknownToken) dep.insert(node.dep);
      }
    }
  }
  return {TagVocab({pos.begin(), pos.end()}), TagVocab({dep.begin(), dep.end()}), direction_vocab()};
}

template class RelationModel<double>;
template class RelationModel<float>;

}  // namespace ontoenrich
