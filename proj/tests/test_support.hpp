// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "pcf/device.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace pcftest
{

// Independent SHA-256 oracle backed by OpenSSL, deliberately not sharing any
// code with pcf::Sha256. Used to verify every hash construction byte-exactly.
std::array<uint8_t, 32> oracleSha256(std::vector<uint8_t> const& data);
std::string oracleSha256Hex(std::vector<uint8_t> const& data);

std::vector<uint8_t> bytesOf(std::string_view text);
std::vector<uint8_t> concat(std::vector<uint8_t> a,
                            std::vector<uint8_t> const& b);
std::vector<uint8_t> bigEndian64(uint64_t value);
std::string lowercaseHex(std::array<uint8_t, 32> const& digest);

// Deterministic synthetic device, varied per index.
pcf::DeviceProfile makeProfile(uint64_t index);

} // namespace pcftest
