#include "ousia/lexicon.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "ousia/error.hpp"
#include "ousia/util.hpp"

namespace ousia {

VadPoint normalize_vad(const VadPoint& raw) {
  auto center = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0))
      raise(Errc::invalid_argument,
            std::string("normalize_vad: ") + name + " outside [0,1]");
    return v - 0.5;
  };
  return {center(raw.valence, "valence"), center(raw.arousal, "arousal"),
          center(raw.dominance, "dominance")};
}

VadPoint denormalize_vad(const VadPoint& centered) {
  return {centered.valence + 0.5, centered.arousal + 0.5, centered.dominance + 0.5};
}

PdsPoint vad_to_pds(const VadPoint& v) {
  const double goodness = 0.86 * v.valence - 0.15 * v.arousal + 0.48 * v.dominance;
  const double energy = -0.16 * v.valence + 0.83 * v.arousal + 0.54 * v.dominance;
  const double structure = 0.48 * v.valence + 0.55 * v.arousal - 0.69 * v.dominance;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  return {(energy + goodness) * inv_sqrt2, (energy - goodness) * inv_sqrt2, structure};
}

namespace {

double parse_number(const std::string& cell, const std::string& origin, std::size_t line_no) {
  const std::string t = trim_copy(cell);
  if (t.empty())
    raise(Errc::invalid_lexicon,
          origin + ": empty numeric field on line " + std::to_string(line_no));
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end == t.c_str() || *end != '\0')
    raise(Errc::invalid_lexicon,
          origin + ": unparsable number '" + t + "' on line " + std::to_string(line_no));
  return v;
}

// Index of a header name, or -1.
int column_of(const std::vector<std::string>& header, const char* name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (lower_ascii_copy(trim_copy(header[i])) == name) return static_cast<int>(i);
  return -1;
}

}  // namespace

Lexicon Lexicon::load(const std::string& path) {
  return parse(read_text_file(path), path);
}

Lexicon Lexicon::parse(std::string_view content, const std::string& origin) {
  std::istringstream in{std::string(content)};
  std::string line;
  if (!std::getline(in, line))
    raise(Errc::invalid_lexicon, origin + ": empty lexicon file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const char sep = line.find('\t') != std::string::npos ? '\t' : ',';
  const auto header = split_on(line, sep);

  const int word_col = column_of(header, "word");
  if (word_col < 0) raise(Errc::invalid_lexicon, origin + ": missing 'word' column");

  const int valence_col = column_of(header, "valence");
  const int arousal_col = column_of(header, "arousal");
  const int dominance_col = column_of(header, "dominance");
  const int power_col = column_of(header, "power");
  const int danger_col = column_of(header, "danger");
  const int structure_col = column_of(header, "structure");

  const bool vad_format = valence_col >= 0 && arousal_col >= 0 && dominance_col >= 0;
  const bool pds_format = power_col >= 0 && danger_col >= 0;
  if (!vad_format && !pds_format)
    raise(Errc::invalid_lexicon,
          origin + ": need either valence/arousal/dominance or power/danger columns");

  Lexicon lex;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim_copy(line).empty()) continue;
    const auto cells = split_on(line, sep);
    auto cell = [&](int col) -> const std::string& {
      if (col < 0 || static_cast<std::size_t>(col) >= cells.size())
        raise(Errc::invalid_lexicon,
              origin + ": too few fields on line " + std::to_string(line_no));
      return cells[static_cast<std::size_t>(col)];
    };

    const std::string word = lower_ascii_copy(trim_copy(cell(word_col)));
    if (word.empty())
      raise(Errc::invalid_lexicon, origin + ": empty word on line " + std::to_string(line_no));

    PdsPoint score;
    if (pds_format) {
      score.power = parse_number(cell(power_col), origin, line_no);
      score.danger = parse_number(cell(danger_col), origin, line_no);
      if (structure_col >= 0)
        score.structure = parse_number(cell(structure_col), origin, line_no);
    } else {
      VadPoint raw{parse_number(cell(valence_col), origin, line_no),
                   parse_number(cell(arousal_col), origin, line_no),
                   parse_number(cell(dominance_col), origin, line_no)};
      try {
        score = vad_to_pds(normalize_vad(raw));
      } catch (const Error&) {
        raise(Errc::invalid_lexicon,
              origin + ": rating outside [0,1] on line " + std::to_string(line_no));
      }
    }

    auto [it, inserted] = lex.scores_.insert_or_assign(word, score);
    (void)it;
    if (!inserted) ++lex.duplicates_;
  }

  if (lex.scores_.empty())
    raise(Errc::invalid_lexicon, origin + ": no data rows");
  return lex;
}

const PdsPoint* Lexicon::find(std::string_view word) const {
  // Transparent lookup to avoid allocating for every token would need a
  // heterogeneous hash; profile showed the map lookup is far from the
  // bottleneck (EMD dominates), so keep the simple form.
  const auto it = scores_.find(std::string(word));
  return it == scores_.end() ? nullptr : &it->second;
}

}  // namespace ousia
