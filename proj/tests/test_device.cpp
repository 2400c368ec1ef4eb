// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "pcf/device.hpp"
#include "pcf/errors.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace pcf;
using namespace pcftest;

TEST_CASE("real values come straight from the profile")
{
    auto profile = makeProfile(0);
    profile.timezoneOffsetMinutes = -60; // UTC-1

    CHECK(realValue(profile, AttributeName::TIMEZONE_OFFSET) == -60);
    CHECK(realValue(profile, AttributeName::USER_AGENT) == profile.userAgent);
    CHECK(realValue(profile, AttributeName::LANGUAGE) == profile.language);
    CHECK(realValue(profile, AttributeName::FONTS) ==
          nlohmann::json(profile.fonts));
}

TEST_CASE("real canvas hash is the pinned PRF of the hardware seed")
{
    auto profile = makeProfile(1);
    auto value = realValue(profile, AttributeName::CANVAS_HASH);
    REQUIRE(value.is_string());

    auto expected = oracleSha256Hex(
        concat(bigEndian64(profile.hardwareSeed), bytesOf("canvas")));
    CHECK(value.get<std::string>() == expected);

    // Repeat call: identical.
    CHECK(realValue(profile, AttributeName::CANVAS_HASH) == value);
}

TEST_CASE("clock skew formula boundary")
{
    auto profile = makeProfile(2);
    profile.hardwareSeed = 0;
    CHECK(realValue(profile, AttributeName::CLOCK_SKEW) == -1000);
    profile.hardwareSeed = 2000;
    CHECK(realValue(profile, AttributeName::CLOCK_SKEW) == 1000);
    profile.hardwareSeed = 2001;
    CHECK(realValue(profile, AttributeName::CLOCK_SKEW) == -1000);
}

TEST_CASE("masking: rare timezone snaps to the nearest common bucket")
{
    auto profile = makeProfile(3);
    profile.timezoneOffsetMinutes = -60;
    CHECK(maskedValue(profile, AttributeName::TIMEZONE_OFFSET,
                      SessionSeed{1}) == 0);

    profile.timezoneOffsetMinutes = 500;
    CHECK(maskedValue(profile, AttributeName::TIMEZONE_OFFSET,
                      SessionSeed{1}) == 480);

    profile.timezoneOffsetMinutes = -720;
    CHECK(maskedValue(profile, AttributeName::TIMEZONE_OFFSET,
                      SessionSeed{1}) == -300);
}

TEST_CASE("masking: fonts intersect the allowlist preserving order")
{
    auto profile = makeProfile(4);
    profile.fonts = {"Arial", "WeirdFont9", "Verdana"};
    auto masked = maskedValue(profile, AttributeName::FONTS, SessionSeed{1});
    CHECK(masked == nlohmann::json::array({"Arial", "Verdana"}));
}

TEST_CASE("masking: user agent truncates to family and major version")
{
    auto profile = makeProfile(5);
    profile.userAgent = "Mozilla/5.0 (X11; Linux x86_64) AppleWebKit/537.36 "
                        "(KHTML, like Gecko) Chrome/119.0.6045.105 "
                        "Safari/537.36";
    CHECK(maskedValue(profile, AttributeName::USER_AGENT, SessionSeed{1}) ==
          "Chrome/119");

    profile.userAgent = "Mozilla/5.0 (Windows NT 10.0; Win64; x64) "
                        "AppleWebKit/537.36 (KHTML, like Gecko) "
                        "Chrome/120.0.0.0 Safari/537.36 Edg/120.0.2210.91";
    CHECK(maskedValue(profile, AttributeName::USER_AGENT, SessionSeed{1}) ==
          "Edge/120");

    profile.userAgent = "CustomAgent/9.9";
    CHECK(maskedValue(profile, AttributeName::USER_AGENT, SessionSeed{1}) ==
          "Other");
}

TEST_CASE("masking: resolution snaps to the nearest bucket")
{
    auto profile = makeProfile(14);
    profile.screenResolution = {1920, 1200};
    CHECK(maskedValue(profile, AttributeName::SCREEN_RESOLUTION,
                      SessionSeed{1}) == nlohmann::json::array({1920, 1080}));
    profile.screenResolution = {1280, 720};
    CHECK(maskedValue(profile, AttributeName::SCREEN_RESOLUTION,
                      SessionSeed{1}) == nlohmann::json::array({1366, 768}));
}

TEST_CASE("masking: language keeps the primary subtag, skew masks to zero")
{
    auto profile = makeProfile(6);
    profile.language = "en-US";
    CHECK(maskedValue(profile, AttributeName::LANGUAGE, SessionSeed{1}) ==
          "en");
    CHECK(maskedValue(profile, AttributeName::CLOCK_SKEW, SessionSeed{1}) == 0);
}

TEST_CASE("masking: canvas farbling follows the pinned PRF and varies per session")
{
    auto profile = makeProfile(7);
    auto real = realValue(profile, AttributeName::CANVAS_HASH)
                    .get<std::string>();

    SessionSeed s1{101}, s2{202};
    auto masked1 =
        maskedValue(profile, AttributeName::CANVAS_HASH, s1).get<std::string>();
    auto masked2 =
        maskedValue(profile, AttributeName::CANVAS_HASH, s2).get<std::string>();

    CHECK(masked1 ==
          oracleSha256Hex(concat(bytesOf(real), bigEndian64(s1.value))));
    CHECK(masked2 ==
          oracleSha256Hex(concat(bytesOf(real), bigEndian64(s2.value))));
    CHECK(masked1 != masked2);
    // Stable within one session.
    CHECK(maskedValue(profile, AttributeName::CANVAS_HASH, s1) ==
          nlohmann::json(masked1));
}

TEST_CASE("masked values always land in the public buckets")
{
    auto const& policy = maskingPolicy();
    std::mt19937_64 rng(0x5eed0004);
    for (uint64_t i = 0; i < 100; ++i)
    {
        auto profile = makeProfile(rng());
        profile.timezoneOffsetMinutes = static_cast<int>(rng() % 1561) - 720;
        profile.screenResolution = {
            static_cast<uint32_t>(800 + rng() % 3000),
            static_cast<uint32_t>(600 + rng() % 2000)};
        SessionSeed session{rng()};

        auto tz = maskedValue(profile, AttributeName::TIMEZONE_OFFSET, session)
                      .get<int>();
        CHECK(std::find(policy.timezoneBuckets.begin(),
                        policy.timezoneBuckets.end(),
                        tz) != policy.timezoneBuckets.end());

        auto res =
            maskedValue(profile, AttributeName::SCREEN_RESOLUTION, session);
        std::pair<uint32_t, uint32_t> resPair{res[0].get<uint32_t>(),
                                              res[1].get<uint32_t>()};
        CHECK(std::find(policy.resolutionBuckets.begin(),
                        policy.resolutionBuckets.end(),
                        resPair) != policy.resolutionBuckets.end());

        for (auto const& font :
             maskedValue(profile, AttributeName::FONTS, session))
        {
            CHECK(std::find(policy.fontAllowlist.begin(),
                            policy.fontAllowlist.end(),
                            font.get<std::string>()) !=
                  policy.fontAllowlist.end());
        }

        auto language =
            maskedValue(profile, AttributeName::LANGUAGE, session)
                .get<std::string>();
        CHECK(language.find('-') == std::string::npos);
    }
}

TEST_CASE("farbled canvas hashes are pairwise distinct across sessions")
{
    auto profile = makeProfile(8);
    std::set<std::string> seen;
    for (uint64_t s = 0; s < 100; ++s)
    {
        seen.insert(maskedValue(profile, AttributeName::CANVAS_HASH,
                                SessionSeed{s})
                        .get<std::string>());
    }
    CHECK(seen.size() == 100);
}

TEST_CASE("fingerprints separate profiles that differ in one attribute")
{
    auto a = makeProfile(9);
    auto b = a;
    b.fonts = {"Arial", "Courier New"};

    std::vector<AttributeName> attrs{AttributeName::FONTS};
    auto readerFor = [](DeviceProfile const& profile) {
        return [&profile](AttributeName attr) {
            return realValue(profile, attr);
        };
    };

    auto idA = computeFingerprint(readerFor(a), attrs);
    auto idB = computeFingerprint(readerFor(b), attrs);
    CHECK(idA != idB);
    CHECK(idA.size() == 64);

    // Expected value through the independent oracle, using the documented
    // name=value / unit-separator serialization.
    auto expectA = oracleSha256Hex(
        bytesOf("fonts=" + nlohmann::json(a.fonts).dump()));
    CHECK(idA == expectA);

    // Deterministic on repeat.
    CHECK(computeFingerprint(readerFor(a), attrs) == idA);
}

TEST_CASE("fingerprint over multiple attributes uses the unit separator")
{
    auto profile = makeProfile(10);
    auto reader = [&profile](AttributeName attr) {
        return realValue(profile, attr);
    };
    std::vector<AttributeName> attrs{AttributeName::USER_AGENT,
                                     AttributeName::TIMEZONE_OFFSET};
    auto expected = oracleSha256Hex(bytesOf(
        "user_agent=" + profile.userAgent + "\x1f" + "timezone_offset=" +
        std::to_string(profile.timezoneOffsetMinutes)));
    CHECK(computeFingerprint(reader, attrs) == expected);
}

TEST_CASE("masked and real readers disagree for a rare-timezone device")
{
    auto profile = makeProfile(11);
    profile.timezoneOffsetMinutes = -60;
    SessionSeed session{7};

    std::vector<AttributeName> attrs{AttributeName::TIMEZONE_OFFSET};
    auto realId = computeFingerprint(
        [&](AttributeName a) { return realValue(profile, a); }, attrs);
    auto maskedId = computeFingerprint(
        [&](AttributeName a) { return maskedValue(profile, a, session); },
        attrs);
    CHECK(realId != maskedId);
}

TEST_CASE("fingerprint of no attributes is rejected")
{
    auto profile = makeProfile(12);
    CHECK_THROWS_AS(
        computeFingerprint(
            [&](AttributeName a) { return realValue(profile, a); }, {}),
        std::invalid_argument);
}

TEST_CASE("out-of-range attributes raise UnknownAttribute")
{
    auto profile = makeProfile(13);
    auto bogus = static_cast<AttributeName>(99);
    CHECK_THROWS_AS(realValue(profile, bogus), UnknownAttribute);
    CHECK_THROWS_AS(maskedValue(profile, bogus, SessionSeed{1}),
                    UnknownAttribute);
    CHECK_FALSE(parseAttribute("battery_level").has_value());
}
