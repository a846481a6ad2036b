// Copyright 2026 The hnlab Authors
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

#include <doctest.h>

#include <set>

#include "hnlab/rng.hpp"

using hnlab::Philox4x32;

// Known-answer vectors published with the Random123 reference implementation.
TEST_CASE("philox4x32-10 known answers") {
  CHECK(Philox4x32::block({0, 0, 0, 0}, {0, 0}) ==
        Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
        Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
        Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("random words separate every address component") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t seed : {0ull, 1ull, 1ull << 40})
    for (std::uint64_t stream : {0ull, 5ull})
      for (std::uint64_t index : {0ull, 1ull, 1ull << 33})
        for (std::uint32_t field : {0u, 1u, 2u, 0x40u}) seen.insert(hnlab::random_words(seed, stream, index, field).first);
  CHECK(seen.size() == 3u * 2u * 3u * 4u);
}

TEST_CASE("unit interval mapping") {
  CHECK(hnlab::unit_interval(0) == 0.0);
  CHECK(hnlab::unit_interval(~std::uint64_t{0}) < 1.0);
  CHECK(hnlab::unit_interval(std::uint64_t{1} << 63) == doctest::Approx(0.5).epsilon(1e-15));
}
