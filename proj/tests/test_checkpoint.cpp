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

#include "tenyisyl/checkpoint.hpp"

#include <cstdio>
#include <string>

#include "doctest.h"
#include "tenyisyl/text.hpp"

using namespace tenyisyl;

TEST_CASE("serialize round trips bit for bit") {
  Checkpoint ckpt;
  ckpt.arch = "blstm";
  ckpt.vocab = vocab::table();
  Tensor a(2, 3);
  a(0, 0) = 1.5;
  a(0, 1) = -0.0;
  a(0, 2) = 1e-300;
  a(1, 0) = -123.456;
  a(1, 1) = 0.1;
  a(1, 2) = 3.0;
  Tensor b(1, 1);
  b(0, 0) = 42.0;
  ckpt.tensors.emplace_back("a", a);
  ckpt.tensors.emplace_back("b", b);

  const std::string bytes = serialize(ckpt);
  CHECK(bytes.substr(0, 4) == "TSYL");
  const Checkpoint back = deserialize(bytes);
  CHECK(back.arch == "blstm");
  CHECK(back.vocab == ckpt.vocab);
  REQUIRE(back.tensors.size() == 2);
  CHECK(back.tensors[0].first == "a");
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(back.tensors[0].second.data()[i] == a.data()[i]);
  }
  CHECK(std::signbit(back.tensors[0].second(0, 1)));
  CHECK(back.find("b")(0, 0) == 42.0);
  CHECK_THROWS_AS(back.find("c"), std::runtime_error);
  CHECK(serialize(back) == bytes);
}

TEST_CASE("corruption is rejected") {
  Checkpoint ckpt;
  ckpt.arch = "lstm";
  ckpt.vocab = vocab::table();
  Tensor t(1, 2);
  t(0, 0) = 1.0;
  ckpt.tensors.emplace_back("t", t);
  const std::string bytes = serialize(ckpt);

  CHECK_THROWS_AS(deserialize(""), std::runtime_error);
  CHECK_THROWS_AS(deserialize("XXXX"), std::runtime_error);
  CHECK_THROWS_AS(deserialize(bytes.substr(0, bytes.size() - 3)),
                  std::runtime_error);
  CHECK_THROWS_AS(deserialize(bytes + "x"), std::runtime_error);
  std::string wrong_magic = bytes;
  wrong_magic[0] = 'X';
  CHECK_THROWS_AS(deserialize(wrong_magic), std::runtime_error);
  std::string wrong_version = bytes;
  wrong_version[4] = 9;
  CHECK_THROWS_AS(deserialize(wrong_version), std::runtime_error);
}

TEST_CASE("tagger weights survive a disk round trip") {
  TaggerDims dims;
  dims.embed = 4;
  dims.hidden = 5;
  for (TaggerKind kind :
       {TaggerKind::kLstm, TaggerKind::kBlstm, TaggerKind::kBlstmCrf}) {
    TaggerModel model(kind, dims, 31);
    const Checkpoint ckpt = to_checkpoint(model);
    CHECK(ckpt.arch == to_string(kind));

    const std::string path =
        "ckpt_roundtrip_" + to_string(kind) + ".bin";
    save_checkpoint(ckpt, path);
    const Checkpoint loaded = load_checkpoint(path);
    std::remove(path.c_str());

    TaggerModel relit = tagger_from_checkpoint(loaded);
    CHECK(relit.kind() == kind);
    CHECK(relit.dims().embed == 4);
    CHECK(relit.dims().hidden == 5);
    CHECK(relit.parameter_count() == model.parameter_count());

    const auto before = model.snapshot_values();
    const auto after = relit.snapshot_values();
    REQUIRE(before.size() == after.size());
    for (std::size_t i = 0; i < before.size(); ++i) {
      for (std::size_t j = 0; j < before[i].size(); ++j) {
        CHECK(before[i].data()[j] == after[i].data()[j]);
      }
    }

    const auto tags = relit.predict_one(utf8_decode("tenyidie"));
    CHECK(tags == model.predict_one(utf8_decode("tenyidie")));
  }
}

TEST_CASE("wrong vocabulary is rejected") {
  TaggerModel model(TaggerKind::kLstm, {}, 1);
  Checkpoint ckpt = to_checkpoint(model);
  ckpt.vocab = "abc";
  CHECK_THROWS_AS(tagger_from_checkpoint(ckpt), std::runtime_error);

  Checkpoint bad_arch = to_checkpoint(model);
  bad_arch.arch = "transformer";
  CHECK_THROWS_AS(tagger_from_checkpoint(bad_arch), std::invalid_argument);
}
