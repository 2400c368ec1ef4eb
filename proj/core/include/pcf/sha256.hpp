// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pcf
{

using Digest256 = std::array<uint8_t, 32>;

// Incremental SHA-256 (FIPS 180-4). One hash primitive is used everywhere in
// this codebase: fingerprints, farbling, salts and identifier pseudonyms all
// depend on its output being bit-exact.
class Sha256
{
  public:
    Sha256();

    void update(std::span<uint8_t const> bytes);
    void update(std::string_view text);

    // Finishes the computation. The object must not be updated afterwards.
    Digest256 finish();

  private:
    void processBlock(uint8_t const* block);

    std::array<uint32_t, 8> mState;
    std::array<uint8_t, 64> mBuffer;
    uint64_t mTotalBytes;
    size_t mBufferLen;
    bool mFinished;
};

Digest256 sha256(std::span<uint8_t const> bytes);
Digest256 sha256(std::string_view text);

std::string sha256Hex(std::string_view text);

// Lowercase hex, two characters per byte.
std::string toHex(std::span<uint8_t const> bytes);

// Strict parse of an even-length hex string; throws std::invalid_argument on
// anything that is not [0-9a-fA-F].
std::vector<uint8_t> fromHex(std::string_view hex);

// Big-endian encoding of a 64-bit integer, used wherever an integer feeds a
// hash so the byte layout is pinned.
std::array<uint8_t, 8> toBigEndian64(uint64_t value);

} // namespace pcf
