// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "pcf/sha256.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pcf
{

// Fingerprintable attribute surface exposed to scripts. canvas_hash and
// clock_skew stand in for hardware-derived methods; both are pure functions
// of the profile's hardware seed.
enum class AttributeName
{
    USER_AGENT,
    SCREEN_RESOLUTION,
    TIMEZONE_OFFSET,
    FONTS,
    LANGUAGE,
    CANVAS_HASH,
    CLOCK_SKEW,
};

constexpr std::array<AttributeName, 7> ALL_ATTRIBUTES = {
    AttributeName::USER_AGENT,   AttributeName::SCREEN_RESOLUTION,
    AttributeName::TIMEZONE_OFFSET, AttributeName::FONTS,
    AttributeName::LANGUAGE,     AttributeName::CANVAS_HASH,
    AttributeName::CLOCK_SKEW,
};

std::string_view attributeToken(AttributeName a);
std::optional<AttributeName> parseAttribute(std::string_view token);

// Attribute values are JSON values: strings, integers, [width, height]
// pairs or font lists.
using AttributeValue = nlohmann::json;

// One simulated client. Immutable after construction; client_secret drives
// per-site salts and is deliberately absent from the attribute surface.
struct DeviceProfile
{
    std::string deviceId;
    std::string userAgent;
    std::pair<uint32_t, uint32_t> screenResolution;
    int timezoneOffsetMinutes = 0; // [-720, +840]
    std::vector<std::string> fonts;
    std::string language;
    uint64_t hardwareSeed = 0;
    std::array<uint8_t, 32> clientSecret{};
    std::optional<std::string> userId;
};

// Per-page-session noise source for farbled values. Constant within a
// session, independent across sessions.
struct SessionSeed
{
    uint64_t value = 0;
};

// Authentic value as the underlying system reports it. canvas_hash is
// hex(SHA-256(seed_be8 || "canvas")); clock_skew is (seed mod 2001) - 1000
// microseconds. Throws UnknownAttribute.
AttributeValue realValue(DeviceProfile const& profile, AttributeName attribute);

// Masked/farbled value a normal context sees. Bucketed attributes are
// session-independent; canvas_hash is farbled per session as
// hex(SHA-256(realHex || session_be8)). Throws UnknownAttribute.
AttributeValue maskedValue(DeviceProfile const& profile,
                           AttributeName attribute, SessionSeed session);

using AttributeReader = std::function<AttributeValue(AttributeName)>;

// hex(SHA-256("name=value" pairs joined with 0x1f)) over the given attribute
// order. The id changes if any single attribute value changes.
std::string computeFingerprint(AttributeReader const& reader,
                               std::vector<AttributeName> const& attributes);

// Masking policy table, loaded from the bundled versioned data file. Exposed
// so callers and tests can check bucket membership.
struct MaskingPolicy
{
    int version = 0;
    std::vector<int> timezoneBuckets;
    std::vector<std::pair<uint32_t, uint32_t>> resolutionBuckets;
    std::vector<std::pair<std::string, std::string>> userAgentFamilies;
    std::vector<std::string> fontAllowlist;
};

MaskingPolicy const& maskingPolicy();

} // namespace pcf
