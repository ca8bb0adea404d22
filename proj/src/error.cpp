#include "drumscope/error.hpp"

namespace drumscope {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::BadMagic: return "BadMagic";
    case Errc::TruncatedChunk: return "TruncatedChunk";
    case Errc::TruncatedInput: return "TruncatedInput";
    case Errc::Overlong: return "Overlong";
    case Errc::UnsupportedDivision: return "UnsupportedDivision";
    case Errc::UnsupportedFormat: return "UnsupportedFormat";
    case Errc::EmptyPiece: return "EmptyPiece";
    case Errc::MidMeasureTimesig: return "MidMeasureTimesig";
    case Errc::NoMatches: return "NoMatches";
    case Errc::InconsistentResult: return "InconsistentResult";
    case Errc::DegenerateSamples: return "DegenerateSamples";
    case Errc::TooManyRecordings: return "TooManyRecordings";
    case Errc::BadConfig: return "BadConfig";
  }
  return "UnknownError";
}

bool is_input_error(Errc code) {
  switch (code) {
    case Errc::BadMagic:
    case Errc::TruncatedChunk:
    case Errc::TruncatedInput:
    case Errc::Overlong:
    case Errc::UnsupportedDivision:
    case Errc::UnsupportedFormat:
      return true;
    default:
      return false;
  }
}

}  // namespace drumscope
