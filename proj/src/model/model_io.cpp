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

#include "ontoenrich/model/model_io.hpp"

#include <json.hpp>

#include <bit>
#include <cstring>

#include "ontoenrich/io.hpp"
#include "ontoenrich/text.hpp"

namespace ontoenrich {

using nlohmann::json;

namespace {

constexpr std::string_view kMagic = "ONTOENRM";

static_assert(std::endian::native == std::endian::little, "model files assume little-endian hosts");

template <typename T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  Reader(std::string_view bytes, std::string_view source) : bytes_(bytes), source_(source) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }

  std::string_view take(std::size_t n) {
    need(n);
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t pos() const { return pos_; }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw DataError(std::string(source_) + ": model file truncated");
  }

  std::string_view bytes_;
  std::string_view source_;
  std::size_t pos_ = 0;
};

}  // namespace

template <typename Scalar>
std::string serialize_model(const RelationModel<Scalar>& model) {
  auto params = model.params();
  json tensors = json::array();
  for (const auto& t : params.tensors()) {
    tensors.push_back({{"name", t.name}, {"rows", t.rows}, {"cols", t.cols}});
  }
  json hyper = json::object();
  const KeyValueConfig cfg = hyperparams_to_config(model.hyperparams());
  for (const auto& [k, v] : cfg.entries()) hyper[k] = v;
  const json header = {{"hyperparams", hyper},
                       {"word_dim", model.word_dim()},
                       {"provider", model.provider_descriptor()},
                       {"vocab_pos", model.vocabs().pos.tags()},
                       {"vocab_dep", model.vocabs().dep.tags()},
                       {"vocab_dir", model.vocabs().dir.tags()},
                       {"scalar", "f64"},
                       {"tensors", tensors}};
  const std::string head = header.dump();

  std::string out(kMagic);
  put<std::uint32_t>(out, kModelFormatVersion);
  put<std::uint64_t>(out, head.size());
  out += head;
  for (const auto& t : params.tensors()) {
    for (Eigen::Index k = 0; k < t.size(); ++k) put<double>(out, static_cast<double>(t.data[k]));
  }
  put<std::uint64_t>(out, fnv1a64(out));
  return out;
}

template <typename Scalar>
RelationModel<Scalar> deserialize_model(std::string_view bytes, std::string_view source) {
  const std::string src(source);
  if (bytes.size() < kMagic.size() + 12 + 8) throw DataError(src + ": model file truncated");
  if (bytes.substr(0, kMagic.size()) != kMagic) throw DataError(src + ": not a model file");
  const auto body = bytes.substr(0, bytes.size() - 8);
  std::uint64_t stored = 0;
  std::memcpy(&stored, bytes.data() + body.size(), 8);

  Reader r(bytes, source);
  r.take(kMagic.size());
  const auto version = r.get<std::uint32_t>();
  if (version != kModelFormatVersion) {
    throw DataError(src + ": unsupported model format version " + std::to_string(version));
  }
  if (fnv1a64(body) != stored) throw DataError(src + ": model checksum mismatch (corrupt or truncated)");

  const auto head_len = r.get<std::uint64_t>();
  json header;
  try {
    header = json::parse(r.take(head_len));
  } catch (const json::exception& e) {
    throw DataError(src + ": malformed model header: " + e.what());
  }
  try {
    KeyValueConfig cfg;
    for (const auto& item : header.at("hyperparams").items()) {
      cfg.set(item.key(), item.value().get<std::string>());
    }
    const Hyperparams h = hyperparams_from_config(cfg);
    const TagVocabs vocabs{TagVocab(header.at("vocab_pos").get<std::vector<std::string>>()),
                           TagVocab(header.at("vocab_dep").get<std::vector<std::string>>()),
                           TagVocab(header.at("vocab_dir").get<std::vector<std::string>>())};
    // Stored vocabularies include the UNK entry, which the constructor re-adds.
    RelationModel<Scalar> shape(h, header.at("word_dim").get<Eigen::Index>(), vocabs,
                                header.at("provider").get<std::string>());
    ModelParams<Scalar> params = shape.params().zeros_like();
    auto tensors = params.tensors();
    const auto& declared = header.at("tensors");
    if (declared.size() != tensors.size()) throw DataError(src + ": tensor count mismatch");
    for (std::size_t k = 0; k < tensors.size(); ++k) {
      const auto& d = declared[k];
      if (d.at("name").get<std::string>() != tensors[k].name ||
          d.at("rows").get<Eigen::Index>() != tensors[k].rows ||
          d.at("cols").get<Eigen::Index>() != tensors[k].cols) {
        throw DataError(src + ": tensor " + tensors[k].name + " has inconsistent shape");
      }
      for (Eigen::Index i = 0; i < tensors[k].size(); ++i) {
        tensors[k].data[i] = static_cast<Scalar>(r.get<double>());
      }
    }
    if (r.pos() != body.size()) throw DataError(src + ": trailing bytes in model file");
    return RelationModel<Scalar>(h, shape.word_dim(), shape.vocabs(), shape.provider_descriptor(),
                                 std::move(params));
  } catch (const json::exception& e) {
    throw DataError(src + ": malformed model header: " + e.what());
  } catch (const ArgumentError& e) {
    throw DataError(src + ": invalid hyperparameters: " + e.what());
  }
}

template <typename Scalar>
void save_model(const RelationModel<Scalar>& model, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_model(model));
}

template <typename Scalar>
RelationModel<Scalar> load_model(const std::filesystem::path& path) {
  return deserialize_model<Scalar>(read_file(path), path.string());
}

template std::string serialize_model(const RelationModel<double>&);
template std::string serialize_model(const RelationModel<float>&);
template RelationModel<double> deserialize_model<double>(std::string_view, std::string_view);
template RelationModel<float> deserialize_model<float>(std::string_view, std::string_view);
template void save_model(const RelationModel<double>&, const std::filesystem::path&);
template void save_model(const RelationModel<float>&, const std::filesystem::path&);
template RelationModel<double> load_model<double>(const std::filesystem::path&);
template RelationModel<float> load_model<float>(const std::filesystem::path&);

}  // namespace ontoenrich
