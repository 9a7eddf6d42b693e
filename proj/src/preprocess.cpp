#include "ousia/preprocess.hpp"

#include <cstdint>
#include <unordered_set>

#include "ousia/error.hpp"
#include "ousia/util.hpp"

namespace ousia {

namespace {

// ===== boilerplate markers ===================================================

// True if `line` contains "***" followed (after optional spaces) by `tag`,
// case-insensitively. Gutenberg files vary between "*** START OF" and
// "***START OF" across decades.
bool line_has_marker(std::string_view line, std::string_view tag) {
  const std::string lower = lower_ascii_copy(std::string(line));
  std::size_t pos = 0;
  while ((pos = lower.find("***", pos)) != std::string::npos) {
    std::size_t after = pos + 3;
    while (after < lower.size() && lower[after] == ' ') ++after;
    if (lower.compare(after, tag.size(), tag) == 0) return true;
    ++pos;
  }
  return false;
}

// ===== character classes (UTF-8) ============================================

constexpr char32_t kReplacement = 0xFFFD;

// Decode one codepoint starting at `i`; advances `i` past it. Malformed bytes
// decode to U+FFFD (a non-letter, so they strip at edges or sink the token).
char32_t decode_utf8(std::string_view s, std::size_t& i) {
  const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
  const unsigned char b0 = byte(i);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int extra;
  char32_t cp;
  if ((b0 & 0xE0) == 0xC0) { extra = 1; cp = b0 & 0x1Fu; }
  else if ((b0 & 0xF0) == 0xE0) { extra = 2; cp = b0 & 0x0Fu; }
  else if ((b0 & 0xF8) == 0xF0) { extra = 3; cp = b0 & 0x07u; }
  else { ++i; return kReplacement; }
  if (i + static_cast<std::size_t>(extra) >= s.size()) {
    ++i;  // not enough continuation bytes
    return kReplacement;
  }
  for (int k = 1; k <= extra; ++k) {
    const unsigned char bk = byte(i + static_cast<std::size_t>(k));
    if ((bk & 0xC0) != 0x80) { ++i; return kReplacement; }
    cp = (cp << 6) | (bk & 0x3Fu);
  }
  i += static_cast<std::size_t>(extra) + 1;
  return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_letter(char32_t c) {
  if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) return true;
  // Latin-1 supplement letters (excluding multiply/divide signs)
  if (c >= 0xC0 && c <= 0xFF) return c != 0xD7 && c != 0xF7;
  // Latin Extended-A
  return c >= 0x100 && c <= 0x17F;
}

bool is_digit(char32_t c) { return c >= '0' && c <= '9'; }

bool is_space(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v' || c == 0xA0;  // include no-break space
}

char32_t to_lower(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 0x20;
  if ((c >= 0xC0 && c <= 0xD6) || (c >= 0xD8 && c <= 0xDE)) return c + 0x20;
  // Latin Extended-A: case pairs alternate; the parity flips twice mid-block.
  if ((c >= 0x100 && c <= 0x137) || (c >= 0x14A && c <= 0x177))
    return (c % 2 == 0) ? c + 1 : c;
  if ((c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E))
    return (c % 2 == 1) ? c + 1 : c;
  if (c == 0x178) return 0xFF;  // Y with diaeresis
  return c;
}

}  // namespace

StripResult strip_boilerplate(std::string_view text) {
  // Walk line by line tracking byte offsets so the body is sliced, not rebuilt.
  std::size_t pos = 0;
  std::size_t body_begin = std::string::npos;
  std::size_t body_end = std::string::npos;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    const std::size_t line_end = (eol == std::string::npos) ? text.size() : eol;
    const std::string_view line = text.substr(pos, line_end - pos);
    if (body_begin == std::string::npos) {
      if (line_has_marker(line, "start of"))
        body_begin = (eol == std::string::npos) ? text.size() : eol + 1;
    } else if (line_has_marker(line, "end of")) {
      body_end = pos;
      break;
    }
    if (eol == std::string::npos) break;
    pos = eol + 1;
  }

  if (body_begin == std::string::npos)
    return {std::string(text), BoilerplateFlag::no_markers};
  if (body_end == std::string::npos)
    return {std::string(text.substr(body_begin)), BoilerplateFlag::no_end_marker};
  // Trim the trailing newline that belongs to the last body line.
  std::string body(text.substr(body_begin, body_end - body_begin));
  if (!body.empty() && body.back() == '\n') body.pop_back();
  if (!body.empty() && body.back() == '\r') body.pop_back();
  return {std::move(body), BoilerplateFlag::markers_found};
}

std::string expand_contractions(std::string_view text) {
  // Normalize curly apostrophes so one suffix scan handles both spellings.
  std::string src;
  src.reserve(text.size());
  {
    std::size_t i = 0;
    while (i < text.size()) {
      std::size_t before = i;
      const char32_t cp = decode_utf8(text, i);
      if (cp == 0x2019) {
        src.push_back('\'');
      } else {
        src.append(text.substr(before, i - before));
      }
    }
  }

  const auto lower_at = [&](std::size_t i) {
    const char c = src[i];
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
  };
  const auto is_ascii_letter = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  };
  // A contraction suffix must end at a word boundary.
  const auto boundary_after = [&](std::size_t i) {
    return i >= src.size() || !is_ascii_letter(src[i]);
  };

  std::string out;
  out.reserve(src.size() + src.size() / 8);
  std::size_t i = 0;
  while (i < src.size()) {
    if (src[i] != '\'') {
      out.push_back(src[i]);
      ++i;
      continue;
    }
    const bool has_prev_letter = !out.empty() && is_ascii_letter(out.back());

    // n't -> " not": the n preceding the apostrophe is part of the suffix.
    if (has_prev_letter && (out.back() == 'n' || out.back() == 'N') &&
        i + 1 < src.size() && lower_at(i + 1) == 't' && boundary_after(i + 2)) {
      out.pop_back();
      out += " not";
      i += 2;
      continue;
    }
    if (has_prev_letter && i + 2 < src.size() && lower_at(i + 1) == 'l' &&
        lower_at(i + 2) == 'l' && boundary_after(i + 3)) {
      out += " will";
      i += 3;
      continue;
    }
    if (has_prev_letter && i + 2 < src.size() && lower_at(i + 1) == 'r' &&
        lower_at(i + 2) == 'e' && boundary_after(i + 3)) {
      out += " are";
      i += 3;
      continue;
    }
    if (has_prev_letter && i + 2 < src.size() && lower_at(i + 1) == 'v' &&
        lower_at(i + 2) == 'e' && boundary_after(i + 3)) {
      out += " have";
      i += 3;
      continue;
    }
    if (has_prev_letter && i + 1 < src.size() && lower_at(i + 1) == 'm' &&
        boundary_after(i + 2)) {
      out += " am";
      i += 2;
      continue;
    }
    // Ambiguous 's ('s = is/has/possessive) and 'd ('d = had/would): delete.
    if (has_prev_letter && i + 1 < src.size() &&
        (lower_at(i + 1) == 's' || lower_at(i + 1) == 'd') && boundary_after(i + 2)) {
      i += 2;
      continue;
    }
    out.push_back(src[i]);
    ++i;
  }
  return out;
}

TokenSequence tokenize(std::string_view text, std::string source_id) {
  TokenSequence seq;
  seq.source_id = std::move(source_id);

  std::vector<char32_t> candidate;
  const auto flush = [&]() {
    if (candidate.empty()) return;
    // Strip leading/trailing punctuation (anything neither letter nor digit).
    std::size_t b = 0, e = candidate.size();
    while (b < e && !is_letter(candidate[b]) && !is_digit(candidate[b])) ++b;
    while (e > b && !is_letter(candidate[e - 1]) && !is_digit(candidate[e - 1])) --e;
    bool keep = e > b;
    for (std::size_t k = b; keep && k < e; ++k)
      if (!is_letter(candidate[k])) keep = false;  // digits or symbols sink the token
    if (keep) {
      std::string tok;
      for (std::size_t k = b; k < e; ++k) encode_utf8(candidate[k], tok);
      seq.tokens.push_back(std::move(tok));
    }
    candidate.clear();
  };

  std::size_t i = 0;
  while (i < text.size()) {
    const char32_t cp = decode_utf8(text, i);
    if (is_space(cp)) {
      flush();
    } else {
      candidate.push_back(to_lower(cp));
    }
  }
  flush();
  return seq;
}

CoverageStats coverage(const TokenSequence& seq, const Lexicon& lex) {
  if (seq.tokens.empty())
    raise(Errc::undefined_coverage, "coverage: empty token sequence");
  std::unordered_set<std::string_view> types;
  std::unordered_set<std::string_view> covered_types;
  std::size_t hit_tokens = 0;
  for (const auto& tok : seq.tokens) {
    const bool hit = lex.find(tok) != nullptr;
    if (hit) ++hit_tokens;
    auto [it, inserted] = types.insert(tok);
    (void)it;
    if (inserted && hit) covered_types.insert(tok);
  }
  CoverageStats stats;
  stats.total_tokens = seq.tokens.size();
  stats.unique_types = types.size();
  stats.unique_coverage =
      static_cast<double>(covered_types.size()) / static_cast<double>(types.size());
  stats.token_coverage =
      static_cast<double>(hit_tokens) / static_cast<double>(seq.tokens.size());
  return stats;
}

Eligibility eligible(const CoverageStats& stats, const std::vector<bool>& window_has_hit) {
  Eligibility result;
  if (stats.unique_coverage < kMinUniqueCoverage) result.reasons.push_back("coverage");
  for (bool hit : window_has_hit) {
    if (!hit) {
      result.reasons.push_back("empty_window");
      break;
    }
  }
  result.eligible = result.reasons.empty();
  return result;
}

}  // namespace ousia
