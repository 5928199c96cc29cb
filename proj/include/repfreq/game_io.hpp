// Copyright 2026 The repfreq Authors.
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

// Game file format:
//
//   {
//     "actions1": ["H", "L"],
//     "actions2": ["h", "l"],
//     "u1": [[0.6, -0.2], [1, 0]],
//     "u2": [[1.5, 1], [-0.5, 0]],
//     "order1": ["H", "L"],          // optional, highest first
//     "order2": ["h", "l"]           // optional
//   }

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "repfreq/game.hpp"

namespace repfreq {

namespace detail {

inline std::vector<std::string> json_labels(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) throw ParseError(std::string("game file is missing '") + key + "'");
  const auto& arr = doc.at(key);
  if (!arr.is_array()) throw ParseError(std::string("'") + key + "' must be an array");
  std::vector<std::string> out;
  for (const auto& v : arr) {
    if (!v.is_string()) throw ParseError(std::string("'") + key + "' entries must be strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

inline Matrix json_matrix(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) throw ParseError(std::string("game file is missing '") + key + "'");
  const auto& arr = doc.at(key);
  if (!arr.is_array()) throw ParseError(std::string("'") + key + "' must be an array of rows");
  Matrix m;
  for (const auto& row : arr) {
    if (!row.is_array()) throw ParseError(std::string("'") + key + "' rows must be arrays");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) throw ParseError(std::string("'") + key + "' entries must be numbers");
      r.push_back(v.get<double>());
    }
    m.push_back(std::move(r));
  }
  return m;
}

inline std::optional<std::vector<ActionId>> json_order(const nlohmann::json& doc, const char* key,
                                                       const std::vector<std::string>& labels) {
  if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
  const auto names = json_labels(doc, key);
  std::vector<ActionId> order;
  for (const auto& n : names) {
    ActionId idx = labels.size();
    for (ActionId i = 0; i < labels.size(); ++i) {
      if (labels[i] == n) idx = i;
    }
    if (idx == labels.size()) {
      throw ValidationError(std::string("'") + key + "' names unknown action '" + n + "'");
    }
    order.push_back(idx);
  }
  return order;
}

}  // namespace detail

inline StageGame game_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("game document must be a JSON object");
  auto actions1 = detail::json_labels(doc, "actions1");
  auto actions2 = detail::json_labels(doc, "actions2");
  auto u1 = detail::json_matrix(doc, "u1");
  auto u2 = detail::json_matrix(doc, "u2");
  auto order1 = detail::json_order(doc, "order1", actions1);
  auto order2 = detail::json_order(doc, "order2", actions2);
  return StageGame(std::move(actions1), std::move(actions2), std::move(u1), std::move(u2),
                   std::move(order1), std::move(order2));
}

/// Parses and validates game-file content. Payoffs are kept exactly as written.
inline StageGame load_game(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed game document: ") + e.what());
  }
  return game_from_json(doc);
}

inline StageGame load_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open game file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_game(ss.str());
}

inline nlohmann::json game_to_json(const StageGame& game) {
  nlohmann::json doc;
  doc["actions1"] = game.actions1();
  doc["actions2"] = game.actions2();
  doc["u1"] = game.u1();
  doc["u2"] = game.u2();
  if (game.order1()) {
    std::vector<std::string> names;
    for (ActionId a : *game.order1()) names.push_back(game.label1(a));
    doc["order1"] = names;
  }
  if (game.order2()) {
    std::vector<std::string> names;
    for (ActionId b : *game.order2()) names.push_back(game.label2(b));
    doc["order2"] = names;
  }
  return doc;
}

inline std::string emit_game(const StageGame& game) { return game_to_json(game).dump(2); }

inline nlohmann::json mixed_to_json(const MixedAction& m, const std::vector<std::string>& labels) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < labels.size(); ++i) j[labels[i]] = m[i];
  return j;
}

}  // namespace repfreq
