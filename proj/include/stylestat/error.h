#ifndef STYLESTAT_ERROR_H_
#define STYLESTAT_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace stylestat {

// Every failure surfaced by the library carries one of these codes. The CLI
// reports the code name in its error JSON.
enum class ErrorCode {
  kIo,
  kInvalidEncoding,
  kLineCountMismatch,
  kEmptySplit,
  kEmptySentence,
  kMissingTrainSplit,
  kConfig,
  kModelNotLoaded,
  kUnknownTag,
  kMalformedConllu,
  kNonAlphabetic,
  kNoWords,
  kLexiconNotLoaded,
  kTagsUnavailable,
  kSingleClass,
  kSchemaMismatch,
  kSupportMismatch,
  kLengthMismatch,
  kEmptyCorpus,
  kInvalidArgument,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message, std::string file = {},
        int line = 0);

  ErrorCode code() const { return code_; }

  // Source file and 1-based line the error refers to, when known.
  const std::string &file() const { return file_; }
  int line() const { return line_; }

 private:
  ErrorCode code_;
  std::string file_;
  int line_;
};

}  // namespace stylestat

#endif  // STYLESTAT_ERROR_H_
