// Copyright 2026 The Tenyisyl Authors
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
#include <string_view>
#include <vector>

#include "tenyisyl/nn.hpp"
#include "tenyisyl/seq2seq.hpp"
#include "tenyisyl/tensor.hpp"

namespace tenyisyl {

/// Weight container written to disk: an architecture tag, the character
/// table the ids were built from, and named float64 tensors.
struct Checkpoint {
  std::string arch;
  std::string vocab;
  std::vector<std::pair<std::string, Tensor>> tensors;

  const Tensor& find(const std::string& name) const;
};

/// Binary image: "TSYL" magic, format version, strings and tensors with
/// little-endian 64-bit payloads. deserialize() throws std::runtime_error
/// on any truncation or corruption and round-trips bit-identically.
std::string serialize(const Checkpoint& ckpt);
Checkpoint deserialize(std::string_view bytes);

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

/// Tagger bridging. The architecture tag is the tagger kind name; loading
/// rebuilds the model with dimensions inferred from the tensor shapes and
/// rejects a vocabulary that does not match the current alphabet.
Checkpoint to_checkpoint(const TaggerModel& model);
TaggerModel tagger_from_checkpoint(const Checkpoint& ckpt);

/// Seq2seq bridging under the "seq2seq" architecture tag.
Checkpoint to_checkpoint(const Seq2SeqModel& model);
Seq2SeqModel seq2seq_from_checkpoint(const Checkpoint& ckpt);

}  // namespace tenyisyl
