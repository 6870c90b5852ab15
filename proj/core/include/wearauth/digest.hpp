#pragma once

#include <string>
#include <string_view>

namespace wearauth {

/// SHA-256 of the given bytes, as lowercase hex.
std::string sha256_hex(std::string_view data);

/// SHA-256 of a file's contents. Throws Error if the file cannot be read.
std::string sha256_file(const std::string& path);

}  // namespace wearauth
