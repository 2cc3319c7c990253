// Copyright 2026 The eeorder Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include "eeorder/phonology.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "eeorder/error.hpp"
#include "eeorder/text.hpp"

#ifndef EEORDER_SOURCE_DATA_DIR
#define EEORDER_SOURCE_DATA_DIR "data"
#endif

namespace eeorder {

std::string_view to_string(PhonemeClass cls) {
  switch (cls) {
    case PhonemeClass::kOnset: return "onset";
    case PhonemeClass::kRhyme: return "rhyme";
    case PhonemeClass::kTone: return "tone";
  }
  return "?";
}

PhonemeClass phoneme_class_from_string(std::string_view name) {
  if (name == "onset" || name == "onsets") return PhonemeClass::kOnset;
  if (name == "rhyme" || name == "rhymes") return PhonemeClass::kRhyme;
  if (name == "tone" || name == "tones") return PhonemeClass::kTone;
  fail(ErrorCode::kInvalidArgument,
       "unknown phoneme class '" + std::string(name) + "'");
}

namespace {

constexpr std::string_view kGrave = "\xCC\x80";
constexpr std::string_view kAcute = "\xCC\x81";
constexpr std::string_view kCircumflex = "\xCC\x82";
constexpr std::string_view kMacron = "\xCC\x84";

// Two-byte UTF-8 code point -> (base letter, combining mark).
const std::vector<std::pair<std::string, std::string>>& decompositions() {
  static const std::vector<std::pair<std::string, std::string>> table = [] {
    std::vector<std::pair<std::string, std::string>> t;
    auto cp = [](unsigned c) {
      std::string s;
      s += static_cast<char>(0xC0 | (c >> 6));
      s += static_cast<char>(0x80 | (c & 0x3F));
      return s;
    };
    // Latin-1 Supplement rows: grave, acute, circumflex.
    const struct {
      char base;
      unsigned grave, acute, circ;
    } latin1[] = {{'A', 0xC0, 0xC1, 0xC2}, {'E', 0xC8, 0xC9, 0xCA}, {'I', 0xCC, 0xCD, 0xCE},
                  {'O', 0xD2, 0xD3, 0xD4}, {'U', 0xD9, 0xDA, 0xDB}, {'a', 0xE0, 0xE1, 0xE2},
                  {'e', 0xE8, 0xE9, 0xEA}, {'i', 0xEC, 0xED, 0xEE}, {'o', 0xF2, 0xF3, 0xF4},
                  {'u', 0xF9, 0xFA, 0xFB}};
    for (const auto& r : latin1) {
      const std::string b(1, r.base);
      t.emplace_back(cp(r.grave), b + std::string(kGrave));
      t.emplace_back(cp(r.acute), b + std::string(kAcute));
      t.emplace_back(cp(r.circ), b + std::string(kCircumflex));
    }
    // Latin Extended-A macrons.
    const struct {
      char base;
      unsigned code;
    } macron[] = {{'A', 0x100}, {'a', 0x101}, {'E', 0x112}, {'e', 0x113}, {'I', 0x12A},
                  {'i', 0x12B}, {'O', 0x14C}, {'o', 0x14D}, {'U', 0x16A}, {'u', 0x16B}};
    for (const auto& r : macron) t.emplace_back(cp(r.code), std::string(1, r.base) + std::string(kMacron));
    t.emplace_back("\xCC\xB1", std::string(kMacron));  // combining macron below
    t.emplace_back("?", "\xCA\x94");                  // glottal stop
    return t;
  }();
  return table;
}

}  // namespace

std::string canonical_spelling(std::string_view text) {
  std::string out;
  out.reserve(text.size() + 4);
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (c < 0x80 && c != '?') {
      out += text[i++];
      continue;
    }
    bool replaced = false;
    for (const auto& [from, to] : decompositions()) {
      if (text.substr(i, from.size()) == from) {
        out += to;
        i += from.size();
        replaced = true;
        break;
      }
    }
    if (!replaced) out += text[i++];
  }
  return out;
}

std::string normalize_symbol(std::string_view text) {
  if (text == kNullSymbol || text == "0") return {};
  return canonical_spelling(text);
}

std::string display_symbol(std::string_view symbol) {
  return symbol.empty() ? std::string(kNullSymbol) : std::string(symbol);
}

const std::string& Syllable::constituent(PhonemeClass cls) const {
  switch (cls) {
    case PhonemeClass::kOnset: return onset;
    case PhonemeClass::kRhyme: return rhyme;
    case PhonemeClass::kTone: return tone;
  }
  return tone;
}

PhonemeInventory::PhonemeInventory(std::string language,
                                   std::vector<std::string> onsets,
                                   std::vector<std::string> rhymes,
                                   std::vector<std::string> tones)
    : language_(std::move(language)) {
  symbols_ = {std::move(onsets), std::move(rhymes), std::move(tones)};
  for (PhonemeClass cls : kAllClasses) {
    const int c = static_cast<int>(cls);
    if (symbols_[c].empty())
      fail(ErrorCode::kFormat,
           "inventory has no " + std::string(to_string(cls)) + " symbols");
    for (std::size_t i = 0; i < symbols_[c].size(); ++i) {
      const std::string& sym = symbols_[c][i];
      if (sym.empty() && cls == PhonemeClass::kRhyme)
        fail(ErrorCode::kFormat, "the null symbol is not a valid rhyme");
      if (text::has_whitespace(sym))
        fail(ErrorCode::kFormat, "symbol '" + sym + "' contains whitespace");
      if (!index_[c].emplace(sym, i).second)
        fail(ErrorCode::kFormat, "duplicate " + std::string(to_string(cls)) +
                                     " symbol '" + display_symbol(sym) + "'");
    }
    by_length_[c] = symbols_[c];
    std::stable_sort(by_length_[c].begin(), by_length_[c].end(),
                     [](const std::string& a, const std::string& b) {
                       return a.size() > b.size();
                     });
  }
}

PhonemeInventory PhonemeInventory::load(const std::filesystem::path& path,
                                        std::string language) {
  if (language.empty()) language = path.stem().string();
  try {
    return parse(text::read_file(path), std::move(language));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIo) throw;
    fail(e.code(), path.string() + ": " + e.what());
  }
}

PhonemeInventory PhonemeInventory::parse(std::string_view content,
                                         std::string language) {
  std::array<std::vector<std::string>, 3> sections;
  std::array<bool, 3> seen{false, false, false};
  int current = -1;
  std::size_t lineno = 0;
  for (const std::string& raw : text::split(content, '\n')) {
    ++lineno;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line == "[onsets]") current = 0;
      else if (line == "[rhymes]") current = 1;
      else if (line == "[tones]") current = 2;
      else
        fail(ErrorCode::kFormat, "line " + std::to_string(lineno) +
                                     ": malformed section header '" +
                                     std::string(line) + "'");
      if (seen[current])
        fail(ErrorCode::kFormat, "line " + std::to_string(lineno) +
                                     ": repeated section " + std::string(line));
      seen[current] = true;
      continue;
    }
    if (current < 0)
      fail(ErrorCode::kFormat,
           "line " + std::to_string(lineno) + ": symbol outside a section");
    if (line == "0" && current == 1)
      fail(ErrorCode::kFormat,
           "line " + std::to_string(lineno) + ": rhymes cannot be null");
    sections[current].push_back(normalize_symbol(line));
  }
  static constexpr const char* kNames[] = {"[onsets]", "[rhymes]", "[tones]"};
  for (int c = 0; c < 3; ++c)
    if (!seen[c])
      fail(ErrorCode::kFormat, std::string("missing section ") + kNames[c]);
  return PhonemeInventory(std::move(language), std::move(sections[0]),
                          std::move(sections[1]), std::move(sections[2]));
}

std::optional<std::size_t> PhonemeInventory::index_of(
    PhonemeClass cls, std::string_view symbol) const {
  const auto& idx = index_[static_cast<int>(cls)];
  auto it = idx.find(std::string(symbol));
  if (it == idx.end()) return std::nullopt;
  return it->second;
}

std::optional<Syllable> PhonemeInventory::try_parse(
    std::string_view token) const {
  if (token.empty() || text::has_whitespace(token)) return std::nullopt;
  const std::string canonical = canonical_spelling(token);
  token = canonical;
  const bool null_tone = contains(PhonemeClass::kTone, "");
  for (const std::string& onset : by_length_[0]) {
    if (!token.starts_with(onset)) continue;
    const std::string_view rest = token.substr(onset.size());
    for (const std::string& rhyme : by_length_[1]) {
      if (!rest.starts_with(rhyme)) continue;
      const std::string_view tail = rest.substr(rhyme.size());
      if (tail.empty()) {
        if (null_tone) return Syllable{onset, rhyme, {}};
        continue;
      }
      if (contains(PhonemeClass::kTone, tail))
        return Syllable{onset, rhyme, std::string(tail)};
    }
  }
  return std::nullopt;
}

bool PhonemeInventory::valid(const Syllable& s) const {
  return contains(PhonemeClass::kOnset, s.onset) &&
         contains(PhonemeClass::kRhyme, s.rhyme) &&
         contains(PhonemeClass::kTone, s.tone);
}

Syllable parse_syllable(const PhonemeInventory& inv, std::string_view token) {
  if (auto s = inv.try_parse(token)) return *std::move(s);
  fail(ErrorCode::kNoParse, "'" + std::string(token) +
                                "' is not a well-formed " + inv.language() +
                                " syllable");
}

std::string render_syllable(const PhonemeInventory& inv, const Syllable& s) {
  for (PhonemeClass cls : kAllClasses)
    if (!inv.contains(cls, s.constituent(cls)))
      fail(ErrorCode::kInvalidArgument,
           std::string(to_string(cls)) + " '" +
               display_symbol(s.constituent(cls)) + "' is not in the " +
               inv.language() + " inventory");
  return s.onset + s.rhyme + s.tone;
}

Phoneme focal_phoneme(const LanguageProfile& profile, const Syllable& s) {
  return s.phoneme(profile.focal);
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("EEORDER_DATA"); env && *env) return env;
  return EEORDER_SOURCE_DATA_DIR;
}

LanguageProfile load_profile(std::string_view language,
                             const std::filesystem::path& data_dir) {
  LanguageProfile p;
  p.language = std::string(language);
  if (language == "hmong") {
    p.focal = PhonemeClass::kTone;
  } else if (language == "lahu") {
    p.focal = PhonemeClass::kRhyme;
  } else if (language == "mandarin") {
    p.focal = PhonemeClass::kTone;
  } else if (language == "mc" || language == "middle-chinese") {
    fail(ErrorCode::kInvalidArgument,
         "Middle Chinese profiles are built from a readings file");
  } else {
    fail(ErrorCode::kInvalidArgument,
         "unknown language '" + std::string(language) + "'");
  }
  p.inventory = PhonemeInventory::load(data_dir / (p.language + ".inv"), p.language);
  return p;
}

// ---------------------------------------------------------------------------

std::string_view to_string(MCToneCategory cat) {
  switch (cat) {
    case MCToneCategory::kPing: return "ping";
    case MCToneCategory::kShang: return "shang";
    case MCToneCategory::kQu: return "qu";
    case MCToneCategory::kRu: return "ru";
  }
  return "?";
}

MCToneCategory mc_tone_category(const MCReading& reading) {
  const std::string_view coda = text::trim(reading.coda);
  if (coda == "p" || coda == "t" || coda == "k") return MCToneCategory::kRu;
  const std::string_view mark = text::trim(reading.tone_mark);
  if (mark.empty() || mark == "0" || mark == kNullSymbol || mark == "ping" ||
      mark == "\xE5\xB9\xB3")  // 平
    return MCToneCategory::kPing;
  if (mark == "X" || mark == "shang" || mark == "\xE4\xB8\x8A")  // 上
    return MCToneCategory::kShang;
  if (mark == "H" || mark == "qu" || mark == "\xE5\x8E\xBB")  // 去
    return MCToneCategory::kQu;
  if (mark == "ru" || mark == "\xE5\x85\xA5")  // 入
    return MCToneCategory::kRu;
  fail(ErrorCode::kFormat, "unknown Middle Chinese tone mark '" +
                               std::string(mark) + "' for '" +
                               reading.character + "'");
}

std::vector<MCReading> load_mc_readings(const std::filesystem::path& path) {
  std::vector<MCReading> out;
  std::size_t lineno = 0;
  for (const std::string& line : text::read_lines(path)) {
    ++lineno;
    if (text::trim(line).empty() || line.front() == '#') continue;
    auto cols = text::split(line, '\t');
    if (lineno == 1 && cols[0] == "character") continue;
    if (cols.size() != 5)
      fail(ErrorCode::kFormat, path.string() + ":" + std::to_string(lineno) +
                                   ": expected 5 columns, got " +
                                   std::to_string(cols.size()));
    out.push_back({cols[0], normalize_symbol(text::trim(cols[1])),
                   std::string(text::trim(cols[2])),
                   std::string(text::trim(cols[3])),
                   std::string(text::trim(cols[4]))});
  }
  return out;
}

Syllable mc_syllable(const MCReading& reading) {
  std::string coda = normalize_symbol(reading.coda);
  return Syllable{reading.onset, reading.rhyme + coda,
                  std::string(to_string(mc_tone_category(reading)))};
}

MCLexicon profile_from_mc_readings(const std::vector<MCReading>& readings) {
  MCLexicon lex;
  std::vector<std::string> onsets, rhymes;
  std::set<std::string> seen_onset, seen_rhyme;
  for (const MCReading& r : readings) {
    Syllable s = mc_syllable(r);
    if (seen_onset.insert(s.onset).second) onsets.push_back(s.onset);
    if (seen_rhyme.insert(s.rhyme).second) rhymes.push_back(s.rhyme);
    // First reading wins for polyphonic characters.
    lex.syllables.emplace(r.character, std::move(s));
  }
  std::vector<std::string> tones;
  for (auto cat : {MCToneCategory::kPing, MCToneCategory::kShang,
                   MCToneCategory::kQu, MCToneCategory::kRu})
    tones.emplace_back(to_string(cat));
  lex.profile.language = "mc";
  lex.profile.focal = PhonemeClass::kTone;
  lex.profile.mc_mode = true;
  lex.profile.inventory = PhonemeInventory("mc", std::move(onsets),
                                           std::move(rhymes), std::move(tones));
  return lex;
}

}  // namespace eeorder
