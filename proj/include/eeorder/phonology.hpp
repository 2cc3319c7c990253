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

#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace eeorder {

enum class PhonemeClass { kOnset = 0, kRhyme = 1, kTone = 2 };

inline constexpr std::array<PhonemeClass, 3> kAllClasses = {
    PhonemeClass::kOnset, PhonemeClass::kRhyme, PhonemeClass::kTone};

std::string_view to_string(PhonemeClass cls);
PhonemeClass phoneme_class_from_string(std::string_view name);

// Display form of the null phoneme (empty onset, unmarked tone).
inline constexpr std::string_view kNullSymbol = "\xE2\x88\x85";  // U+2205

// The null phoneme is stored as an empty symbol and renders as nothing.
struct Phoneme {
  PhonemeClass cls = PhonemeClass::kOnset;
  std::string symbol;

  bool is_null() const { return symbol.empty(); }
  std::string display() const {
    return is_null() ? std::string(kNullSymbol) : symbol;
  }
  friend bool operator==(const Phoneme&, const Phoneme&) = default;
};

// Canonical spelling used for parsing: precomposed Latin vowels carrying a
// grave, acute, circumflex or macron are decomposed into vowel + combining
// mark, macron-below becomes macron, and ASCII "?" becomes the glottal stop.
std::string canonical_spelling(std::string_view text);

// Maps "∅" and "0" to the null symbol; everything else is canonicalized.
std::string normalize_symbol(std::string_view text);
std::string display_symbol(std::string_view symbol);

struct Syllable {
  std::string onset;
  std::string rhyme;
  std::string tone;

  const std::string& constituent(PhonemeClass cls) const;
  Phoneme phoneme(PhonemeClass cls) const { return {cls, constituent(cls)}; }
  friend bool operator==(const Syllable&, const Syllable&) = default;
};

class PhonemeInventory {
 public:
  PhonemeInventory() = default;

  // Symbols are given in inventory order; an empty string is the null
  // phoneme and is only legal for onsets and tones.
  PhonemeInventory(std::string language, std::vector<std::string> onsets,
                   std::vector<std::string> rhymes,
                   std::vector<std::string> tones);

  static PhonemeInventory load(const std::filesystem::path& path,
                               std::string language = {});
  static PhonemeInventory parse(std::string_view text,
                                std::string language = {});

  const std::string& language() const { return language_; }
  const std::vector<std::string>& symbols(PhonemeClass cls) const {
    return symbols_[static_cast<int>(cls)];
  }
  std::size_t size(PhonemeClass cls) const { return symbols(cls).size(); }
  bool contains(PhonemeClass cls, std::string_view symbol) const {
    return index_of(cls, symbol).has_value();
  }
  std::optional<std::size_t> index_of(PhonemeClass cls,
                                      std::string_view symbol) const;
  bool allow_empty_onset() const { return contains(PhonemeClass::kOnset, ""); }

  // Greedy longest match. Onsets are tried longest first; when an onset
  // leaves no rhyme+tone parse of the remainder the next shorter onset is
  // tried (the empty onset last). Rhymes are tried longest first and the
  // residue must be empty (null tone) or exactly one tone symbol.
  std::optional<Syllable> try_parse(std::string_view token) const;

  bool valid(const Syllable& s) const;

 private:
  std::string language_;
  std::array<std::vector<std::string>, 3> symbols_;
  std::array<std::unordered_map<std::string, std::size_t>, 3> index_;
  std::array<std::vector<std::string>, 3> by_length_;
};

// Throws Error(kNoParse) when the token is not a well-formed syllable.
Syllable parse_syllable(const PhonemeInventory& inv, std::string_view token);

std::string render_syllable(const PhonemeInventory& inv, const Syllable& s);

struct LanguageProfile {
  std::string language;
  PhonemeInventory inventory;
  PhonemeClass focal = PhonemeClass::kTone;
  bool mc_mode = false;
};

Phoneme focal_phoneme(const LanguageProfile& profile, const Syllable& s);

// Directory holding the shipped inventories and scales: $EEORDER_DATA if
// set, else the source-tree data directory baked in at build time.
std::filesystem::path default_data_dir();

// Known languages: hmong, lahu, mandarin. Middle Chinese profiles are built
// from a readings file with profile_from_mc_readings.
LanguageProfile load_profile(std::string_view language,
                             const std::filesystem::path& data_dir);

// ---------------------------------------------------------------------------
// Middle Chinese

enum class MCToneCategory { kPing = 0, kShang = 1, kQu = 2, kRu = 3 };

std::string_view to_string(MCToneCategory cat);

struct MCReading {
  std::string character;
  std::string onset;
  std::string rhyme;
  std::string coda;
  std::string tone_mark;
};

// Stop codas (p, t, k) are always ru. Otherwise the tone mark decides:
// empty, "0", "∅", "ping", "平" -> ping; "X", "上", "shang" -> shang;
// "H", "去", "qu" -> qu. "ru" and "入" are accepted as well.
MCToneCategory mc_tone_category(const MCReading& reading);

// TSV with columns character, onset, rhyme, coda, tone_mark. A header row
// starting with "character" is skipped.
std::vector<MCReading> load_mc_readings(const std::filesystem::path& path);

// Onset, rhyme+coda, and the tone category name as the tone symbol.
Syllable mc_syllable(const MCReading& reading);

struct MCLexicon {
  LanguageProfile profile;
  std::unordered_map<std::string, Syllable> syllables;  // by character
};

MCLexicon profile_from_mc_readings(const std::vector<MCReading>& readings);

}  // namespace eeorder
