#include "stylestat/error.h"

#include <utility>

namespace stylestat {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kInvalidEncoding: return "InvalidEncoding";
    case ErrorCode::kLineCountMismatch: return "LineCountMismatch";
    case ErrorCode::kEmptySplit: return "EmptySplit";
    case ErrorCode::kEmptySentence: return "EmptySentence";
    case ErrorCode::kMissingTrainSplit: return "MissingTrainSplit";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kModelNotLoaded: return "ModelNotLoaded";
    case ErrorCode::kUnknownTag: return "UnknownTag";
    case ErrorCode::kMalformedConllu: return "MalformedConllu";
    case ErrorCode::kNonAlphabetic: return "NonAlphabetic";
    case ErrorCode::kNoWords: return "NoWords";
    case ErrorCode::kLexiconNotLoaded: return "LexiconNotLoaded";
    case ErrorCode::kTagsUnavailable: return "TagsUnavailable";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kSupportMismatch: return "SupportMismatch";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

std::string Decorate(ErrorCode code, const std::string &message,
                     const std::string &file, int line) {
  std::string out(ErrorCodeName(code));
  out += ": ";
  if (!file.empty()) {
    out += file;
    if (line > 0) out += ":" + std::to_string(line);
    out += ": ";
  }
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string &message, std::string file,
             int line)
    : std::runtime_error(Decorate(code, message, file, line)),
      code_(code),
      file_(std::move(file)),
      line_(line) {}

}  // namespace stylestat
