#ifndef SUBJFAIR_DIGEST_H_
#define SUBJFAIR_DIGEST_H_

#include <filesystem>
#include <string>
#include <string_view>

namespace subjfair {

// Lower-case hex SHA-256.
std::string Sha256Hex(std::string_view bytes);
std::string Sha256File(const std::filesystem::path& path);

std::string ReadFile(const std::filesystem::path& path);
// Writes via a temporary file and rename, so readers never see a partial
// file.
void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view contents);

}  // namespace subjfair

#endif  // SUBJFAIR_DIGEST_H_
