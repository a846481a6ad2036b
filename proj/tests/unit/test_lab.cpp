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

#include <filesystem>

#include "hnlab/error.hpp"
#include "hnlab/lab/config.hpp"
#include "hnlab/lab/io.hpp"

using namespace hnlab;
using namespace hnlab::lab;

namespace {

nlohmann::json minimal() {
  return nlohmann::json::parse(R"({"ensemble": {"seed": 3, "xi": -0.2, "eta": 0.2, "q": {"kind": "uniform", "lo": 0, "hi": 1}}})");
}

}  // namespace

TEST_CASE("config defaults, hashing and round trip") {
  const auto c = config_from_json(minimal());
  CHECK(c.sizes == std::vector<std::size_t>{201});
  const auto again = config_from_json(to_json(c));
  CHECK(config_hash(c) == config_hash(again));
  CHECK(config_hash(c).size() == 16u);
  auto j = minimal();
  j["ensemble"]["seed"] = 4;
  CHECK(config_hash(config_from_json(j)) != config_hash(c));
  // the IDS cache key ignores settings the IDS does not depend on
  j = minimal();
  j["spectrum"] = {{"sizes", {10, 20}}};
  CHECK(ids_hash(config_from_json(j)) == ids_hash(c));
  CHECK(hash_text("") == "cbf29ce484222325");
}

TEST_CASE("config validation") {
  auto j = minimal();
  j["spectrum"] = {{"sizes", {20, 10}}};
  CHECK_THROWS_AS(config_from_json(j), ValidationError);
  j = minimal();
  j["verify"] = {{"thouless_tol", -0.1}};
  CHECK_THROWS_AS(config_from_json(j), ValidationError);
  j = minimal();
  j["verify"] = {{"thouless_toll", 0.1}};
  CHECK_THROWS_AS(config_from_json(j), ValidationError);
  j = minimal();
  j["ensemble"].erase("seed");
  CHECK_THROWS_AS(config_from_json(j), ValidationError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ValidationError);
}

TEST_CASE("csv round trip with metadata") {
  const auto dir = std::filesystem::temp_directory_path() / "hnlab_unit_io";
  std::filesystem::remove_all(dir);
  const std::string path = (dir / "a" / "t.csv").string();
  write_file(path, csv_text({{"config_hash", "00ff"}, {"seed", "9"}}, {"x", "y"}, {{0.1, -2.5}, {1e-300, 3.0}}));
  const auto c = read_csv(path);
  CHECK(c.columns == std::vector<std::string>{"x", "y"});
  REQUIRE(c.rows.size() == 2u);
  CHECK(c.rows[0][0] == 0.1);
  CHECK(c.rows[1][0] == 1e-300);
  bool found = false;
  for (const auto& [k, v] : c.meta) found = found || (k == "config_hash" && v == "00ff");
  CHECK(found);
  CHECK(fmt(0.1) == "0.1");
  std::filesystem::remove_all(dir);
}
