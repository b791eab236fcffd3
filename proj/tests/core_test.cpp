// Copyright 2026 The alcost Authors
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

#include <atomic>
#include <cstring>
#include <fstream>

#include <gtest/gtest.h>

#include "alcost/core/binary_io.hpp"
#include "alcost/core/container.hpp"
#include "alcost/core/manifest.hpp"
#include "alcost/core/parallel.hpp"
#include "alcost/core/random.hpp"
#include "test_util.hpp"

namespace alcost {
namespace {

using testing::TempDir;

TEST(Split, RoundTripsThroughText) {
  for (Split s : {Split::kSeedTrainval, Split::kSeedTest, Split::kPool,
                  Split::kPoolTest}) {
    EXPECT_EQ(parse_split(to_string(s)), s);
  }
  EXPECT_THROW(parse_split("train"), ConfigError);
}

TEST(Validate, RejectsBrokenStacks) {
  Stack empty{.id = "e"};
  EXPECT_THROW(validate(empty), InvariantError);

  Stack ragged{.id = "r", .frames = {Frame(2, 2), Frame(2, 3)}};
  EXPECT_THROW(validate(ragged), InvariantError);

  Stack short_masks{.id = "m", .frames = {Frame(2, 2), Frame(2, 2)}};
  short_masks.gt_masks = std::vector<BinaryMask>{BinaryMask(2, 2)};
  EXPECT_THROW(validate(short_masks), InvariantError);

  Stack bad_bit{.id = "b", .frames = {Frame(1, 1)}};
  bad_bit.gt_masks = std::vector<BinaryMask>{BinaryMask(1, 1, 2)};
  EXPECT_THROW(validate(bad_bit), InvariantError);

  Stack bad_time{.id = "t", .frames = {Frame(1, 1)}};
  bad_time.gt_label_time = 0.0;
  EXPECT_THROW(validate(bad_time), InvariantError);
}

TEST(Container, MinimalStackPayloadIsOneFloat) {
  Stack s{.id = "one", .frames = {Frame(1, 1, 0.5f)}};
  const auto bytes = encode_stack(s);
  ASSERT_EQ(bytes.size(), 20u + 4u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "ALST");
  float v = 0.0f;
  std::memcpy(&v, bytes.data() + 20, 4);
  EXPECT_EQ(v, 0.5f);
  // version 1, flags 0, 1x1x1, little-endian
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[5], 0);
  EXPECT_EQ(bytes[6], 0);
  EXPECT_EQ(bytes[8], 1);
  EXPECT_EQ(bytes[12], 1);
  EXPECT_EQ(bytes[16], 1);
}

TEST(Container, RoundTripIsBitExact) {
  Rng rng(7);
  TempDir dir("container");
  for (int trial = 0; trial < 20; ++trial) {
    Stack s = testing::random_stack(rng, "s" + std::to_string(trial),
                                    1 + trial % 4, 3 + trial % 5, 2 + trial % 7,
                                    trial % 2 == 0);
    // Values that only survive a bit-exact path.
    s.frames[0](0, 0) = std::nextafter(0.3f, 1.0f);
    s.frames[0](0, 1) = -0.0f;
    const auto path = dir.path() / (s.id + ".alst");
    save_stack(s, path);
    const Stack back = load_stack(path);
    EXPECT_EQ(back.id, s.id);
    ASSERT_EQ(back.frames.size(), s.frames.size());
    for (std::size_t f = 0; f < s.frames.size(); ++f) {
      const auto a = s.frames[f].values();
      const auto b = back.frames[f].values();
      ASSERT_EQ(a.size(), b.size());
      EXPECT_EQ(std::memcmp(a.data(), b.data(), a.size() * sizeof(float)), 0);
    }
    EXPECT_EQ(back.gt_masks, s.gt_masks);
  }
}

TEST(Container, ThreeFrameZeroMaskStackLoads) {
  Stack s{.id = "z", .frames = {Frame(8, 8), Frame(8, 8), Frame(8, 8)}};
  s.gt_masks = std::vector<BinaryMask>(3, BinaryMask(8, 8));
  const Stack back = decode_stack(encode_stack(s));
  ASSERT_TRUE(back.gt_masks.has_value());
  std::size_t sum = 0;
  for (const auto& m : *back.gt_masks) {
    for (auto b : m.values()) sum += b;
  }
  EXPECT_EQ(sum, 0u);
}

TEST(Container, EqualStacksEncodeToEqualBytes) {
  Rng rng(3);
  const Stack s = testing::random_stack(rng, "d", 3, 5, 6, true);
  EXPECT_EQ(encode_stack(s), encode_stack(s));
  const Stack copy = s;
  EXPECT_EQ(encode_stack(copy), encode_stack(s));
}

TEST(Container, RefusesToWriteInvalidStack) {
  Stack s{.id = "bad", .frames = {Frame(2, 2), Frame(2, 2)}};
  s.gt_masks = std::vector<BinaryMask>{BinaryMask(2, 2)};
  EXPECT_THROW(encode_stack(s), InvariantError);
}

TEST(Container, DistinctLoadErrors) {
  Rng rng(5);
  const Stack s = testing::random_stack(rng, "x", 2, 4, 4, true);
  auto bytes = encode_stack(s);

  auto magic = bytes;
  magic[0] = 'X';
  EXPECT_THROW(decode_stack(magic), HeaderError);

  auto version = bytes;
  version[4] = 9;
  EXPECT_THROW(decode_stack(version), HeaderError);

  auto truncated = bytes;
  truncated.pop_back();
  EXPECT_THROW(decode_stack(truncated), PayloadError);

  auto dims = bytes;
  dims[8] = 5;  // height 4 -> 5 without more payload
  EXPECT_THROW(decode_stack(dims), PayloadError);

  auto mask = bytes;
  mask.back() = 7;
  EXPECT_THROW(decode_stack(mask), RangeError);

  Stack prob{.id = "p", .frames = {Frame(1, 2, 0.5f)}};
  prob.frames[0](0, 1) = 1.5f;
  const auto pbytes = encode_stack(prob);
  EXPECT_NO_THROW(decode_stack(pbytes, ValueDomain::kAny));
  EXPECT_THROW(decode_stack(pbytes, ValueDomain::kProbability), RangeError);

  // All load errors share a base class.
  EXPECT_THROW(decode_stack(magic), LoadError);
}

TEST(Container, HeatmapRoundTrip) {
  Rng rng(11);
  TempDir dir("heatmap");
  const HeatmapStack h = testing::random_heatmap(rng, "hm", 3, 4, 5);
  save_heatmap(h, dir.path() / "hm.alst");
  EXPECT_EQ(load_heatmap(dir.path() / "hm.alst"), h);
}

TEST(Manifest, RoundTripWithRelativePaths) {
  TempDir dir("manifest");
  DatasetManifest m;
  Rng rng(1);
  for (int i = 0; i < 3; ++i) {
    const Stack s = testing::random_stack(rng, "id" + std::to_string(i), 1, 2, 2, true);
    const auto p = dir.path() / "stacks" / (s.id + ".alst");
    std::filesystem::create_directories(p.parent_path());
    save_stack(s, p);
    m.entries.push_back({.stack_id = s.id,
                         .path = p,
                         .split = i == 0 ? Split::kSeedTest : Split::kPool,
                         .gt_label_time = i == 2 ? std::optional<double>{}
                                                 : std::optional<double>{12.5 + i},
                         .payload = PayloadKind::kIntensity});
  }
  write_manifest(m, dir.path() / "manifest.csv");
  std::ifstream in(dir.path() / "manifest.csv");
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, "stack_id,path,split,gt_label_time");
  EXPECT_EQ(first, "id0,stacks/id0.alst,seed_test,12.5");

  const auto back = read_manifest(dir.path() / "manifest.csv");
  EXPECT_EQ(back.entries, m.entries);
  const Stack loaded = load_entry(back.entries[1]);
  EXPECT_EQ(loaded.split, Split::kPool);
  EXPECT_EQ(loaded.gt_label_time, 13.5);
}

TEST(Manifest, RejectsDuplicatesAndMissingFiles) {
  TempDir dir("manifest_bad");
  io::write_text(dir.path() / "dup.csv",
                 "stack_id,path,split,gt_label_time\na,a.alst,pool,\na,b.alst,pool,\n");
  EXPECT_THROW(read_manifest(dir.path() / "dup.csv", false), ConfigError);
  io::write_text(dir.path() / "missing.csv",
                 "stack_id,path,split,gt_label_time\na,nope.alst,pool,\n");
  EXPECT_THROW(read_manifest(dir.path() / "missing.csv"), IoError);
  io::write_text(dir.path() / "header.csv", "id,path\n");
  EXPECT_THROW(read_manifest(dir.path() / "header.csv"), ConfigError);
  io::write_text(dir.path() / "time.csv",
                 "stack_id,path,split,gt_label_time\na,a.alst,pool,-3\n");
  EXPECT_THROW(read_manifest(dir.path() / "time.csv", false), ConfigError);
}

TEST(Manifest, PayloadColumnFlagsNonIntensityContainers) {
  TempDir dir("payload");
  HeatmapStack h{.stack_id = "j", .maps = {Frame(2, 2, 1.5f)}};
  save_heatmap(h, dir.path() / "j.alst");
  DatasetManifest m;
  m.entries.push_back({.stack_id = "j",
                       .path = dir.path() / "j.alst",
                       .split = Split::kPool,
                       .gt_label_time = std::nullopt,
                       .payload = PayloadKind::kJsBits});
  write_manifest(m, dir.path() / "m.csv");
  const auto back = read_manifest(dir.path() / "m.csv");
  EXPECT_EQ(back.entries[0].payload, PayloadKind::kJsBits);
  EXPECT_EQ(load_entry(back.entries[0]).frames[0](0, 0), 1.5f);
}

TEST(Random, DerivedSeedsAreStableAndDistinct) {
  EXPECT_EQ(derive_seed(1, "gen"), derive_seed(1, "gen"));
  EXPECT_NE(derive_seed(1, "gen"), derive_seed(2, "gen"));
  EXPECT_NE(derive_seed(1, "gen"), derive_seed(1, "train"));
  EXPECT_NE(derive_seed(1, "member", 0), derive_seed(1, "member", 1));
  static_assert(derive_seed(5, "x", 3) == derive_seed(5, "x", 3));
}

TEST(Parallel, ResultsIndependentOfJobCount) {
  auto run = [](int jobs) {
    std::vector<std::uint64_t> out(257);
    parallel_for(out.size(), jobs, [&](std::size_t i) {
      Rng rng(derive_seed(9, "task", i));
      out[i] = rng();
    });
    return out;
  };
  const auto one = run(1);
  EXPECT_EQ(run(3), one);
  EXPECT_EQ(run(8), one);
}

TEST(Parallel, PropagatesFirstException) {
  std::atomic<int> ran{0};
  EXPECT_THROW(parallel_for(100, 4,
                            [&](std::size_t i) {
                              ++ran;
                              if (i == 10) throw ConfigError("boom");
                            }),
               ConfigError);
  EXPECT_GE(ran.load(), 1);
}

}  // namespace
}  // namespace alcost
