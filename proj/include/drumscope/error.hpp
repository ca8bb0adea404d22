#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace drumscope {

enum class Errc {
  BadMagic,
  TruncatedChunk,
  TruncatedInput,
  Overlong,
  UnsupportedDivision,
  UnsupportedFormat,
  EmptyPiece,
  MidMeasureTimesig,
  NoMatches,
  InconsistentResult,
  DegenerateSamples,
  TooManyRecordings,
  BadConfig,
};

/// One error type for the whole library; code() tells callers what went
/// wrong, byte_offset() is >= 0 only for binary parse errors.
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& message, std::int64_t byte_offset = -1)
      : std::runtime_error(message), code_(code), byte_offset_(byte_offset) {}

  Errc code() const noexcept { return code_; }
  std::int64_t byte_offset() const noexcept { return byte_offset_; }

private:
  Errc code_;
  std::int64_t byte_offset_;
};

const char* errc_name(Errc code);

// Input/parse errors map to process exit code 2, semantic errors to 3.
bool is_input_error(Errc code);

}  // namespace drumscope
