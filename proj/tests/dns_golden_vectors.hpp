#pragma once

#include <cstdint>

// Golden wire vectors produced once by the reference encoder in
// tests/data/gen_dns_vectors.py (decode-checked there) and frozen here.

namespace golden {

inline constexpr std::uint8_t cname_query[] = {0x12, 0x34, 0x01, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x0e, 0x32, 0x2d, 0x30, 0x31, 0x2d, 0x34, 0x34, 0x36, 0x62, 0x2d, 0x30, 0x30, 0x30, 0x34, 0x03, 0x63, 0x64, 0x78, 0x07, 0x6d, 0x65, 0x74, 0x61, 0x63, 0x64, 0x6e, 0x04, 0x74, 0x65, 0x73, 0x74, 0x00, 0x00, 0x01, 0x00, 0x01};

inline constexpr std::uint8_t cname_response[] = {0x12, 0x34, 0x85, 0x00, 0x00, 0x01, 0x00, 0x01, 0x00, 0x00, 0x00, 0x00, 0x0e, 0x32, 0x2d, 0x30, 0x31, 0x2d, 0x34, 0x34, 0x36, 0x62, 0x2d, 0x30, 0x30, 0x30, 0x34, 0x03, 0x63, 0x64, 0x78, 0x07, 0x6d, 0x65, 0x74, 0x61, 0x63, 0x64, 0x6e, 0x04, 0x74, 0x65, 0x73, 0x74, 0x00, 0x00, 0x01, 0x00, 0x01, 0xc0, 0x0c, 0x00, 0x05, 0x00, 0x01, 0x00, 0x00, 0x00, 0x14, 0x00, 0x0e, 0x02, 0x67, 0x77, 0x04, 0x63, 0x64, 0x6e, 0x61, 0x04, 0x74, 0x65, 0x73, 0x74, 0x00};

inline constexpr std::uint8_t a_query[] = {0x00, 0x02, 0x01, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x0e, 0x32, 0x2d, 0x30, 0x31, 0x2d, 0x34, 0x34, 0x36, 0x62, 0x2d, 0x30, 0x30, 0x30, 0x35, 0x03, 0x63, 0x64, 0x78, 0x07, 0x6d, 0x65, 0x74, 0x61, 0x63, 0x64, 0x6e, 0x04, 0x74, 0x65, 0x73, 0x74, 0x00, 0x00, 0x01, 0x00, 0x01};

inline constexpr std::uint8_t a_response[] = {0x00, 0x02, 0x85, 0x00, 0x00, 0x01, 0x00, 0x01, 0x00, 0x00, 0x00, 0x00, 0x0e, 0x32, 0x2d, 0x30, 0x31, 0x2d, 0x34, 0x34, 0x36, 0x62, 0x2d, 0x30, 0x30, 0x30, 0x35, 0x03, 0x63, 0x64, 0x78, 0x07, 0x6d, 0x65, 0x74, 0x61, 0x63, 0x64, 0x6e, 0x04, 0x74, 0x65, 0x73, 0x74, 0x00, 0x00, 0x01, 0x00, 0x01, 0xc0, 0x0c, 0x00, 0x01, 0x00, 0x01, 0x00, 0x00, 0x01, 0x2c, 0x00, 0x04, 0xc6, 0x33, 0x64, 0x07};

inline constexpr std::uint8_t nxdomain_query[] = {0xbe, 0xef, 0x01, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x04, 0x6e, 0x6f, 0x70, 0x65, 0x03, 0x63, 0x64, 0x78, 0x07, 0x6d, 0x65, 0x74, 0x61, 0x63, 0x64, 0x6e, 0x04, 0x74, 0x65, 0x73, 0x74, 0x00, 0x00, 0x01, 0x00, 0x01};

inline constexpr std::uint8_t nxdomain_response[] = {0xbe, 0xef, 0x85, 0x03, 0x00, 0x01, 0x00, 0x00, 0x00, 0x01, 0x00, 0x00, 0x04, 0x6e, 0x6f, 0x70, 0x65, 0x03, 0x63, 0x64, 0x78, 0x07, 0x6d, 0x65, 0x74, 0x61, 0x63, 0x64, 0x6e, 0x04, 0x74, 0x65, 0x73, 0x74, 0x00, 0x00, 0x01, 0x00, 0x01, 0x03, 0x63, 0x64, 0x78, 0x07, 0x6d, 0x65, 0x74, 0x61, 0x63, 0x64, 0x6e, 0x04, 0x74, 0x65, 0x73, 0x74, 0x00, 0x00, 0x06, 0x00, 0x01, 0x00, 0x00, 0x00, 0x1e, 0x00, 0x46, 0x02, 0x6e, 0x73, 0x03, 0x63, 0x64, 0x78, 0x07, 0x6d, 0x65, 0x74, 0x61, 0x63, 0x64, 0x6e, 0x04, 0x74, 0x65, 0x73, 0x74, 0x00, 0x0a, 0x68, 0x6f, 0x73, 0x74, 0x6d, 0x61, 0x73, 0x74, 0x65, 0x72, 0x03, 0x63, 0x64, 0x78, 0x07, 0x6d, 0x65, 0x74, 0x61, 0x63, 0x64, 0x6e, 0x04, 0x74, 0x65, 0x73, 0x74, 0x00, 0x00, 0x00, 0x00, 0x01, 0x00, 0x00, 0x0e, 0x10, 0x00, 0x00, 0x02, 0x58, 0x00, 0x01, 0x51, 0x80, 0x00, 0x00, 0x00, 0x1e};

inline constexpr std::uint8_t ecs_query[] = {0x42, 0x42, 0x01, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x00, 0x00, 0x01, 0x0e, 0x32, 0x2d, 0x30, 0x31, 0x2d, 0x34, 0x34, 0x36, 0x62, 0x2d, 0x30, 0x30, 0x30, 0x34, 0x03, 0x63, 0x64, 0x78, 0x07, 0x6d, 0x65, 0x74, 0x61, 0x63, 0x64, 0x6e, 0x04, 0x74, 0x65, 0x73, 0x74, 0x00, 0x00, 0x01, 0x00, 0x01, 0x00, 0x00, 0x29, 0x10, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x0b, 0x00, 0x08, 0x00, 0x07, 0x00, 0x01, 0x18, 0x00, 0xcb, 0x00, 0x71};

inline constexpr std::uint8_t ecs_response[] = {0x42, 0x42, 0x85, 0x00, 0x00, 0x01, 0x00, 0x01, 0x00, 0x00, 0x00, 0x01, 0x0e, 0x32, 0x2d, 0x30, 0x31, 0x2d, 0x34, 0x34, 0x36, 0x62, 0x2d, 0x30, 0x30, 0x30, 0x34, 0x03, 0x63, 0x64, 0x78, 0x07, 0x6d, 0x65, 0x74, 0x61, 0x63, 0x64, 0x6e, 0x04, 0x74, 0x65, 0x73, 0x74, 0x00, 0x00, 0x01, 0x00, 0x01, 0xc0, 0x0c, 0x00, 0x05, 0x00, 0x01, 0x00, 0x00, 0x00, 0x14, 0x00, 0x0e, 0x02, 0x67, 0x77, 0x04, 0x63, 0x64, 0x6e, 0x61, 0x04, 0x74, 0x65, 0x73, 0x74, 0x00, 0x00, 0x00, 0x29, 0x02, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x0b, 0x00, 0x08, 0x00, 0x07, 0x00, 0x01, 0x18, 0x18, 0xcb, 0x00, 0x71};

}  // namespace golden
