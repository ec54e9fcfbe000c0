#ifndef STYLESTAT_HASH_H_
#define STYLESTAT_HASH_H_

#include <string>
#include <string_view>

namespace stylestat {

// Incremental SHA-256, hex digest. Used for cache keys and schema hashes.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256 &) = delete;
  Sha256 &operator=(const Sha256 &) = delete;

  // Length-prefixes each field so that ("ab","c") and ("a","bc") differ.
  Sha256 &Add(std::string_view field);
  std::string HexDigest();

 private:
  void *ctx_;
};

std::string Sha256Hex(std::string_view data);

}  // namespace stylestat

#endif  // STYLESTAT_HASH_H_
