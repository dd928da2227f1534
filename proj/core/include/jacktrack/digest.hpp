#pragma once

#include <string>
#include <string_view>

namespace jacktrack {

// Hex-encoded SHA-256. File variant throws InputError when unreadable.
std::string sha256_hex(std::string_view data);
std::string sha256_file_hex(const std::string& path);

}  // namespace jacktrack
