#ifndef STYLESTAT_INTERNAL_ATOMIC_FILE_H_
#define STYLESTAT_INTERNAL_ATOMIC_FILE_H_

#include <filesystem>
#include <string_view>

namespace stylestat::internal {

// Writes to a sibling temporary file, then renames it over path.
void WriteFileAtomic(const std::filesystem::path &path, std::string_view content);

}  // namespace stylestat::internal

#endif  // STYLESTAT_INTERNAL_ATOMIC_FILE_H_
