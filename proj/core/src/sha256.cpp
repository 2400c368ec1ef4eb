// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "pcf/sha256.hpp"

#include <cassert>
#include <cstring>
#include <stdexcept>

namespace pcf
{

namespace
{

constexpr std::array<uint32_t, 64> K = {
    0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1,
    0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3,
    0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786,
    0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
    0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
    0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
    0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
    0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
    0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a,
    0x5b9cca4f, 0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
    0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};

inline uint32_t
rotr(uint32_t x, unsigned n)
{
    return (x >> n) | (x << (32 - n));
}

} // namespace

Sha256::Sha256()
    : mState{0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a, 0x510e527f,
             0x9b05688c, 0x1f83d9ab, 0x5be0cd19}
    , mBuffer{}
    , mTotalBytes(0)
    , mBufferLen(0)
    , mFinished(false)
{
}

void
Sha256::update(std::span<uint8_t const> bytes)
{
    assert(!mFinished);
    mTotalBytes += bytes.size();
    size_t offset = 0;
    while (offset < bytes.size())
    {
        size_t take = std::min(bytes.size() - offset, 64 - mBufferLen);
        std::memcpy(mBuffer.data() + mBufferLen, bytes.data() + offset, take);
        mBufferLen += take;
        offset += take;
        if (mBufferLen == 64)
        {
            processBlock(mBuffer.data());
            mBufferLen = 0;
        }
    }
}

void
Sha256::update(std::string_view text)
{
    update(std::span<uint8_t const>(
        reinterpret_cast<uint8_t const*>(text.data()), text.size()));
}

Digest256
Sha256::finish()
{
    assert(!mFinished);

    uint64_t bitLen = mTotalBytes * 8;
    uint8_t pad = 0x80;
    update(std::span<uint8_t const>(&pad, 1));
    uint8_t zero = 0;
    while (mBufferLen != 56)
    {
        update(std::span<uint8_t const>(&zero, 1));
    }
    mFinished = true;
    auto lenBytes = toBigEndian64(bitLen);
    // Bypass update() so the length bytes are not counted.
    std::memcpy(mBuffer.data() + 56, lenBytes.data(), 8);
    processBlock(mBuffer.data());

    Digest256 out;
    for (size_t i = 0; i < 8; ++i)
    {
        out[4 * i] = static_cast<uint8_t>(mState[i] >> 24);
        out[4 * i + 1] = static_cast<uint8_t>(mState[i] >> 16);
        out[4 * i + 2] = static_cast<uint8_t>(mState[i] >> 8);
        out[4 * i + 3] = static_cast<uint8_t>(mState[i]);
    }
    return out;
}

void
Sha256::processBlock(uint8_t const* block)
{
    uint32_t w[64];
    for (size_t i = 0; i < 16; ++i)
    {
        w[i] = (uint32_t(block[4 * i]) << 24) |
               (uint32_t(block[4 * i + 1]) << 16) |
               (uint32_t(block[4 * i + 2]) << 8) | uint32_t(block[4 * i + 3]);
    }
    for (size_t i = 16; i < 64; ++i)
    {
        uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
        uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
        w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }

    uint32_t a = mState[0], b = mState[1], c = mState[2], d = mState[3];
    uint32_t e = mState[4], f = mState[5], g = mState[6], h = mState[7];

    for (size_t i = 0; i < 64; ++i)
    {
        uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
        uint32_t ch = (e & f) ^ (~e & g);
        uint32_t t1 = h + s1 + ch + K[i] + w[i];
        uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
        uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
        uint32_t t2 = s0 + maj;
        h = g;
        g = f;
        f = e;
        e = d + t1;
        d = c;
        c = b;
        b = a;
        a = t1 + t2;
    }

    mState[0] += a;
    mState[1] += b;
    mState[2] += c;
    mState[3] += d;
    mState[4] += e;
    mState[5] += f;
    mState[6] += g;
    mState[7] += h;
}

Digest256
sha256(std::span<uint8_t const> bytes)
{
    Sha256 h;
    h.update(bytes);
    return h.finish();
}

Digest256
sha256(std::string_view text)
{
    Sha256 h;
    h.update(text);
    return h.finish();
}

std::string
sha256Hex(std::string_view text)
{
    return toHex(sha256(text));
}

std::string
toHex(std::span<uint8_t const> bytes)
{
    static char const* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (uint8_t b : bytes)
    {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

std::vector<uint8_t>
fromHex(std::string_view hex)
{
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9')
            return c - '0';
        if (c >= 'a' && c <= 'f')
            return c - 'a' + 10;
        if (c >= 'A' && c <= 'F')
            return c - 'A' + 10;
        return -1;
    };
    if (hex.size() % 2 != 0)
    {
        throw std::invalid_argument("hex string has odd length");
    }
    std::vector<uint8_t> out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2)
    {
        int hi = nibble(hex[i]);
        int lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0)
        {
            throw std::invalid_argument("invalid hex digit");
        }
        out.push_back(static_cast<uint8_t>((hi << 4) | lo));
    }
    return out;
}

std::array<uint8_t, 8>
toBigEndian64(uint64_t value)
{
    std::array<uint8_t, 8> out;
    for (size_t i = 0; i < 8; ++i)
    {
        out[i] = static_cast<uint8_t>(value >> (56 - 8 * i));
    }
    return out;
}

} // namespace pcf
