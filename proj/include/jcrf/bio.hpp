// Copyright 2026 The jcrf Authors.
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

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jcrf {

/// Which annotation scheme a role or tag belongs to.
enum class Scheme { VN, PB };

enum class RoleKind { CoreArgument, Modifier, Verb, Outside };

enum class Prefix { Begin, Inside, Outside, Verb };

/// A single-scheme BIO tag. Outside tags have an empty role; Verb tags carry
/// the verb role's name and are written bare (no prefix).
struct BioTag {
  Prefix prefix = Prefix::Outside;
  std::string role;

  static BioTag outside() { return {Prefix::Outside, {}}; }
  static BioTag begin(std::string role) { return {Prefix::Begin, std::move(role)}; }
  static BioTag inside(std::string role) { return {Prefix::Inside, std::move(role)}; }
  static BioTag verb(std::string name) { return {Prefix::Verb, std::move(name)}; }

  /// "O", "B-<role>", "I-<role>" parse as such; any other nonempty string is
  /// read as a Verb tag. Throws ParseError on an empty string or empty role.
  static BioTag parse(std::string_view text);

  std::string str() const;
  bool is_argument() const { return prefix == Prefix::Begin || prefix == Prefix::Inside; }
  bool is_verb() const { return prefix == Prefix::Verb; }
  bool is_outside() const { return prefix == Prefix::Outside; }

  friend bool operator==(const BioTag&, const BioTag&) = default;
  friend auto operator<=>(const BioTag&, const BioTag&) = default;
};

/// Whether `next` may directly follow `prev` in a well-formed BIO sequence:
/// I-X continues only B-X or I-X.
bool bio_follows(const BioTag& prev, const BioTag& next);

/// Whether `tag` may open a sequence (anything but I-*).
inline bool bio_can_start(const BioTag& tag) { return tag.prefix != Prefix::Inside; }

/// Throws DataError unless `tags` is well-formed BIO.
void check_well_formed(const std::vector<BioTag>& tags);

std::vector<BioTag> parse_tags(const std::vector<std::string>& texts);
std::vector<std::string> tag_strings(const std::vector<BioTag>& tags);

}  // namespace jcrf
