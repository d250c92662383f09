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

#include "jcrf/bio.hpp"

#include "jcrf/errors.hpp"

namespace jcrf {

BioTag BioTag::parse(std::string_view text) {
  if (text.empty()) throw ParseError("empty tag", 0);
  if (text == "O") return outside();
  if (text.size() >= 2 && (text[0] == 'B' || text[0] == 'I') && text[1] == '-') {
    if (text.size() == 2) throw ParseError("tag '" + std::string(text) + "' has no role", 0);
    std::string role(text.substr(2));
    return text[0] == 'B' ? begin(std::move(role)) : inside(std::move(role));
  }
  return verb(std::string(text));
}

std::string BioTag::str() const {
  switch (prefix) {
    case Prefix::Outside:
      return "O";
    case Prefix::Begin:
      return "B-" + role;
    case Prefix::Inside:
      return "I-" + role;
    case Prefix::Verb:
      return role;
  }
  return {};
}

bool bio_follows(const BioTag& prev, const BioTag& next) {
  if (next.prefix != Prefix::Inside) return true;
  return prev.is_argument() && prev.role == next.role;
}

void check_well_formed(const std::vector<BioTag>& tags) {
  for (std::size_t i = 0; i < tags.size(); ++i) {
    bool ok = i == 0 ? bio_can_start(tags[i]) : bio_follows(tags[i - 1], tags[i]);
    if (!ok) {
      throw DataError("ill-formed BIO sequence: '" + tags[i].str() + "' at position " +
                      std::to_string(i));
    }
  }
}

std::vector<BioTag> parse_tags(const std::vector<std::string>& texts) {
  std::vector<BioTag> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(BioTag::parse(t));
  return out;
}

std::vector<std::string> tag_strings(const std::vector<BioTag>& tags) {
  std::vector<std::string> out;
  out.reserve(tags.size());
  for (const auto& t : tags) out.push_back(t.str());
  return out;
}

}  // namespace jcrf
