// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "pcf/device.hpp"

#include "pcf/detail/embedded_data.hpp"
#include "pcf/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace pcf
{

std::string_view
attributeToken(AttributeName a)
{
    switch (a)
    {
    case AttributeName::USER_AGENT:
        return "user_agent";
    case AttributeName::SCREEN_RESOLUTION:
        return "screen_resolution";
    case AttributeName::TIMEZONE_OFFSET:
        return "timezone_offset";
    case AttributeName::FONTS:
        return "fonts";
    case AttributeName::LANGUAGE:
        return "language";
    case AttributeName::CANVAS_HASH:
        return "canvas_hash";
    case AttributeName::CLOCK_SKEW:
        return "clock_skew";
    }
    return "unknown";
}

std::optional<AttributeName>
parseAttribute(std::string_view token)
{
    for (auto a : ALL_ATTRIBUTES)
    {
        if (attributeToken(a) == token)
        {
            return a;
        }
    }
    return std::nullopt;
}

MaskingPolicy const&
maskingPolicy()
{
    static MaskingPolicy const policy = [] {
        auto doc = nlohmann::json::parse(detail::MASKING_POLICY_JSON);
        MaskingPolicy p;
        p.version = doc.at("version").get<int>();
        for (auto const& tz : doc.at("timezone_buckets_minutes"))
        {
            p.timezoneBuckets.push_back(tz.get<int>());
        }
        for (auto const& res : doc.at("screen_resolution_buckets"))
        {
            p.resolutionBuckets.emplace_back(res.at(0).get<uint32_t>(),
                                             res.at(1).get<uint32_t>());
        }
        for (auto const& fam : doc.at("user_agent_families"))
        {
            p.userAgentFamilies.emplace_back(fam.at(0).get<std::string>(),
                                             fam.at(1).get<std::string>());
        }
        for (auto const& font : doc.at("font_allowlist"))
        {
            p.fontAllowlist.push_back(font.get<std::string>());
        }
        return p;
    }();
    return policy;
}

namespace
{

std::string
realCanvasHash(DeviceProfile const& profile)
{
    Sha256 h;
    h.update(toBigEndian64(profile.hardwareSeed));
    h.update(std::string_view("canvas"));
    return toHex(h.finish());
}

int64_t
realClockSkew(DeviceProfile const& profile)
{
    return static_cast<int64_t>(profile.hardwareSeed % 2001) - 1000;
}

std::string
maskUserAgent(std::string const& ua)
{
    // Family tokens are checked in priority order: Chrome-derived browsers
    // embed "Chrome/" and "Safari/" in their UA strings, so Edg and OPR must
    // win over both.
    for (auto const& [token, display] : maskingPolicy().userAgentFamilies)
    {
        auto pos = ua.find(token + "/");
        if (pos == std::string::npos)
        {
            continue;
        }
        auto versionStart = pos + token.size() + 1;
        std::string major;
        while (versionStart < ua.size() &&
               std::isdigit(static_cast<unsigned char>(ua[versionStart])))
        {
            major.push_back(ua[versionStart]);
            ++versionStart;
        }
        return major.empty() ? display : display + "/" + major;
    }
    return "Other";
}

int
maskTimezone(int offsetMinutes)
{
    auto const& buckets = maskingPolicy().timezoneBuckets;
    int best = buckets.front();
    long bestDist = std::numeric_limits<long>::max();
    for (int bucket : buckets)
    {
        long dist = std::labs(static_cast<long>(offsetMinutes) - bucket);
        if (dist < bestDist || (dist == bestDist && bucket < best))
        {
            best = bucket;
            bestDist = dist;
        }
    }
    return best;
}

std::pair<uint32_t, uint32_t>
maskResolution(std::pair<uint32_t, uint32_t> real)
{
    auto const& buckets = maskingPolicy().resolutionBuckets;
    auto best = buckets.front();
    long long bestDist = std::numeric_limits<long long>::max();
    for (auto const& bucket : buckets)
    {
        long long dw = static_cast<long long>(real.first) - bucket.first;
        long long dh = static_cast<long long>(real.second) - bucket.second;
        long long dist = dw * dw + dh * dh;
        if (dist < bestDist)
        {
            best = bucket;
            bestDist = dist;
        }
    }
    return best;
}

std::vector<std::string>
maskFonts(std::vector<std::string> const& fonts)
{
    // Intersection with the allowlist, preserving the profile's order.
    std::vector<std::string> out;
    auto const& allow = maskingPolicy().fontAllowlist;
    for (auto const& font : fonts)
    {
        if (std::find(allow.begin(), allow.end(), font) != allow.end())
        {
            out.push_back(font);
        }
    }
    return out;
}

std::string
maskLanguage(std::string const& language)
{
    auto cut = language.find_first_of("-_");
    return cut == std::string::npos ? language : language.substr(0, cut);
}

std::string
farbledCanvasHash(DeviceProfile const& profile, SessionSeed session)
{
    Sha256 h;
    h.update(std::string_view(realCanvasHash(profile)));
    h.update(toBigEndian64(session.value));
    return toHex(h.finish());
}

} // namespace

AttributeValue
realValue(DeviceProfile const& profile, AttributeName attribute)
{
    switch (attribute)
    {
    case AttributeName::USER_AGENT:
        return profile.userAgent;
    case AttributeName::SCREEN_RESOLUTION:
        return nlohmann::json::array(
            {profile.screenResolution.first, profile.screenResolution.second});
    case AttributeName::TIMEZONE_OFFSET:
        return profile.timezoneOffsetMinutes;
    case AttributeName::FONTS:
        return profile.fonts;
    case AttributeName::LANGUAGE:
        return profile.language;
    case AttributeName::CANVAS_HASH:
        return realCanvasHash(profile);
    case AttributeName::CLOCK_SKEW:
        return realClockSkew(profile);
    }
    throw UnknownAttribute(std::to_string(static_cast<int>(attribute)));
}

AttributeValue
maskedValue(DeviceProfile const& profile, AttributeName attribute,
            SessionSeed session)
{
    switch (attribute)
    {
    case AttributeName::USER_AGENT:
        return maskUserAgent(profile.userAgent);
    case AttributeName::SCREEN_RESOLUTION:
    {
        auto res = maskResolution(profile.screenResolution);
        return nlohmann::json::array({res.first, res.second});
    }
    case AttributeName::TIMEZONE_OFFSET:
        return maskTimezone(profile.timezoneOffsetMinutes);
    case AttributeName::FONTS:
        return maskFonts(profile.fonts);
    case AttributeName::LANGUAGE:
        return maskLanguage(profile.language);
    case AttributeName::CANVAS_HASH:
        return farbledCanvasHash(profile, session);
    case AttributeName::CLOCK_SKEW:
        return 0;
    }
    throw UnknownAttribute(std::to_string(static_cast<int>(attribute)));
}

std::string
computeFingerprint(AttributeReader const& reader,
                   std::vector<AttributeName> const& attributes)
{
    if (attributes.empty())
    {
        throw std::invalid_argument("fingerprint needs at least one attribute");
    }
    Sha256 h;
    bool first = true;
    for (auto attribute : attributes)
    {
        if (!first)
        {
            h.update(std::string_view("\x1f"));
        }
        first = false;
        auto value = reader(attribute);
        std::string text = value.is_string() ? value.get<std::string>()
                                             : value.dump();
        h.update(std::string_view(attributeToken(attribute)));
        h.update(std::string_view("="));
        h.update(std::string_view(text));
    }
    return toHex(h.finish());
}

} // namespace pcf
