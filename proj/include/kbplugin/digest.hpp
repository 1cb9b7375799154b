#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace kbplugin {

/// Lower-case hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

/// 64-bit FNV-1a; used only to key deterministic random streams.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

} // namespace kbplugin
