#pragma once

#include <stdexcept>
#include <string>

namespace ousia {

// Machine-readable failure categories. Pipeline code catches Error and maps
// code() onto per-book / per-dimension reason strings; the CLI maps any Error
// onto exit status 2 (data/processing error) as opposed to 1 (usage error).
enum class Errc {
  invalid_argument,    // bad parameter value passed to a library call
  invalid_lexicon,     // unreadable/contradictory lexicon file
  empty_input,         // no usable content at all
  too_short,           // series below the minimum length for decomposition
  undefined_coverage,  // coverage asked of an empty token sequence
  empty_series,        // windowing produced zero windows
  empty_window,        // a window contained no lexicon words
  decomposition_failed,// ensemble output failed the mean-consistency check
  null_failed,         // too few shuffled realizations decomposed successfully
  rescaling_undefined, // target first-IMF variance is zero
  undefined_period,    // no positive-frequency energy to bin
  io_error,            // file missing/unreadable/unwritable
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) {
  throw Error(code, what);
}

// Short stable token for logs, JSON reason fields, and tests.
inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_argument:     return "invalid_argument";
    case Errc::invalid_lexicon:      return "invalid_lexicon";
    case Errc::empty_input:          return "empty_input";
    case Errc::too_short:            return "too_short";
    case Errc::undefined_coverage:   return "undefined_coverage";
    case Errc::empty_series:         return "empty_series";
    case Errc::empty_window:         return "empty_window";
    case Errc::decomposition_failed: return "decomposition_failed";
    case Errc::null_failed:          return "null_failed";
    case Errc::rescaling_undefined:  return "rescaling_undefined";
    case Errc::undefined_period:     return "undefined_period";
    case Errc::io_error:             return "io_error";
  }
  return "unknown";
}

}  // namespace ousia
