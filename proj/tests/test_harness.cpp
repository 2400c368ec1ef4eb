// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "pcf/errors.hpp"
#include "pcf/harness.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace pcf;
using namespace pcftest;
using nlohmann::json;

namespace
{

std::string
scenarioPath(char const* name)
{
    return std::string(PCFSIM_SCENARIO_DIR) + "/" + name;
}

json
minimalScenario()
{
    return json::parse(R"({
      "schema": 1,
      "master_seed": 7,
      "mode": "pcf",
      "devices": [{
        "device_id": "d1",
        "user_agent": "Mozilla/5.0 (X11; Linux x86_64) Chrome/119.0.0.0",
        "screen_resolution": [1920, 1080],
        "timezone_offset": -60,
        "fonts": ["Arial", "Verdana"],
        "language": "en-US",
        "hardware_seed": 12
      }],
      "programs": {
        "send-fp": [
          {"op": "READ_API", "args": ["r0", "canvas_hash"]},
          {"op": "HASH", "args": ["r1", "r0"]},
          {"op": "FETCH", "args": ["https://collect.site-a.com/t", "per-domain-tracking", "r1"]}
        ]
      },
      "sites": [{
        "host": "site-a.com",
        "pages": [{
          "origin": "https://site-a.com",
          "html": "<script pcf src='https://site-a.com/fp.js'></script>",
          "scripts": [{"src": "https://site-a.com/fp.js", "program": "send-fp"}]
        }]
      }],
      "visit_plan": [
        {"device": "d1", "site": "site-a.com", "page": 0}
      ]
    })");
}

} // namespace

TEST_CASE("session seeds derive from the master seed and visit index")
{
    auto expectedDigest =
        oracleSha256(concat(bigEndian64(99), bigEndian64(3)));
    uint64_t expected = 0;
    for (size_t i = 0; i < 8; ++i)
    {
        expected = (expected << 8) | expectedDigest[i];
    }
    CHECK(deriveSessionSeed(99, 3) == expected);
    CHECK(deriveSessionSeed(99, 3) != deriveSessionSeed(99, 4));
    CHECK(deriveSessionSeed(99, 3) != deriveSessionSeed(98, 3));
}

TEST_CASE("a minimal scenario loads and runs")
{
    auto scenario = loadScenario(minimalScenario().dump());
    CHECK(scenario.devices.size() == 1);
    CHECK(scenario.sites.size() == 1);
    CHECK(scenario.visitPlan.size() == 1);

    auto report = runScenario(scenario);
    REQUIRE(report.visits.size() == 1);
    REQUIRE(report.deliveredIdentifiers.size() == 1);
    CHECK(report.deliveredIdentifiers[0].site.value == "site-a.com");
    CHECK(report.deliveredIdentifiers[0].value.size() == 64);
}

TEST_CASE("schema violations carry JSON-pointer locations")
{
    auto checkError = [](json broken, std::string const& pointerPrefix) {
        try
        {
            loadScenario(broken.dump());
            FAIL_CHECK("expected ScenarioError for " << pointerPrefix);
        }
        catch (ScenarioError const& e)
        {
            CHECK_MESSAGE(e.pointer.rfind(pointerPrefix, 0) == 0,
                          "pointer '" << e.pointer << "' does not start with '"
                                      << pointerPrefix << "'");
        }
    };

    auto missingDevices = minimalScenario();
    missingDevices.erase("devices");
    checkError(missingDevices, "");

    auto badSchema = minimalScenario();
    badSchema["schema"] = 2;
    checkError(badSchema, "/schema");

    auto badTimezone = minimalScenario();
    badTimezone["devices"][0]["timezone_offset"] = 9000;
    checkError(badTimezone, "/devices/0/timezone_offset");

    auto duplicateFonts = minimalScenario();
    duplicateFonts["devices"][0]["fonts"] = {"Arial", "Arial"};
    checkError(duplicateFonts, "/devices/0/fonts");

    auto badSecret = minimalScenario();
    badSecret["devices"][0]["client_secret"] = "abcd";
    checkError(badSecret, "/devices/0/client_secret");

    auto unknownDevice = minimalScenario();
    unknownDevice["visit_plan"][0]["device"] = "ghost";
    checkError(unknownDevice, "/visit_plan/0/device");

    auto unknownProgram = minimalScenario();
    unknownProgram["sites"][0]["pages"][0]["scripts"][0]["program"] = "nope";
    checkError(unknownProgram, "/sites/0/pages/0/scripts/0/program");

    auto unboundSrc = minimalScenario();
    unboundSrc["sites"][0]["pages"][0]["scripts"][0]["src"] =
        "https://elsewhere.com/x.js";
    checkError(unboundSrc, "/sites/0/pages/0/scripts/0/src");

    auto malformedHtml = minimalScenario();
    malformedHtml["sites"][0]["pages"][0]["html"] = "<script src='x";
    checkError(malformedHtml, "/sites/0/pages/0/html");

    auto foreignOrigin = minimalScenario();
    foreignOrigin["sites"][0]["pages"][0]["origin"] = "https://other-site.net";
    checkError(foreignOrigin, "/sites/0/pages/0/origin");

    auto pageOutOfRange = minimalScenario();
    pageOutOfRange["visit_plan"][0]["page"] = 5;
    checkError(pageOutOfRange, "/visit_plan/0/page");

    checkError(json::parse("[1,2]"), "");
}

TEST_CASE("delivered pseudonyms match the salt chain oracle")
{
    auto scenario = loadScenario(minimalScenario().dump());
    auto report = runScenario(scenario);
    REQUIRE(report.deliveredIdentifiers.size() == 1);

    // Recompute the raw fingerprint the script built: HASH of the real
    // canvas value.
    auto const& device = scenario.devices[0];
    auto canvas = realValue(device, AttributeName::CANVAS_HASH)
                      .get<std::string>();
    auto rawFp = oracleSha256Hex(bytesOf(canvas));

    // The delivered value must be the pseudonym under the page site's salt.
    auto salt = domainSalt(device.clientSecret, SiteKey{"site-a.com"});
    CHECK(report.deliveredIdentifiers[0].value ==
          hashIdentifier(rawFp, salt));
    CHECK(report.deliveredIdentifiers[0].value != rawFp);
}

TEST_CASE("baseline mode delivers raw identifiers")
{
    auto doc = minimalScenario();
    doc["mode"] = "baseline";
    auto scenario = loadScenario(doc.dump());
    auto report = runScenario(scenario);
    REQUIRE(report.deliveredIdentifiers.size() == 1);

    auto canvas = realValue(scenario.devices[0], AttributeName::CANVAS_HASH)
                      .get<std::string>();
    auto rawFp = oracleSha256Hex(bytesOf(canvas));
    CHECK(report.deliveredIdentifiers[0].value == rawFp);
}

TEST_CASE("pcf_disabled_sites pushes declared scripts into the normal context")
{
    auto doc = minimalScenario();
    doc["pcf_disabled_sites"] = {"site-a.com"};
    auto report = runScenario(loadScenario(doc.dump()));
    REQUIRE(report.visits.size() == 1);
    CHECK_FALSE(report.visits[0].pcfEnabled);
    CHECK(report.visits[0].scripts[0].kind == ContextKind::NORMAL);
    // Unfiltered normal-context delivery: the (masked) fingerprint goes out
    // raw, not pseudonymized.
    REQUIRE(report.deliveredIdentifiers.size() == 1);
    CHECK(report.deliveredIdentifiers[0].value.size() == 64);
}

TEST_CASE("empty visit plan yields null and empty metrics")
{
    auto doc = minimalScenario();
    doc["visit_plan"] = json::array();
    auto report = runScenario(loadScenario(doc.dump()));
    CHECK(report.visits.empty());
    CHECK(report.metrics.crossSiteLinkablePairs == 0);
    CHECK_FALSE(report.metrics.intraSiteStability.has_value());
    CHECK(report.metrics.perSiteUniqueness.empty());

    auto rendered = reportToJson(report);
    CHECK(rendered.at("metrics").at("intra_site_stability").is_null());
}

TEST_CASE("metrics computation on hand-built delivery lists")
{
    std::vector<DeliveredIdentifier> delivered{
        {"d1", SiteKey{"a.com"}, Purpose::PER_DOMAIN_TRACKING, "same"},
        {"d1", SiteKey{"b.com"}, Purpose::PER_DOMAIN_TRACKING, "same"},
        {"d1", SiteKey{"c.com"}, Purpose::PER_DOMAIN_TRACKING, "other"},
        {"d2", SiteKey{"a.com"}, Purpose::PER_DOMAIN_TRACKING, "same"},
    };
    auto metrics = computeMetrics(delivered);
    // d1 links a.com<->b.com only; d2 delivers to one site. Equal values on
    // different devices never count.
    CHECK(metrics.crossSiteLinkablePairs == 1);
    CHECK_FALSE(metrics.intraSiteStability.has_value());
    CHECK(metrics.perSiteUniqueness.at(SiteKey{"a.com"}) ==
          doctest::Approx(0.5));
    CHECK(metrics.perSiteUniqueness.at(SiteKey{"c.com"}) ==
          doctest::Approx(1.0));

    std::vector<DeliveredIdentifier> revisits{
        {"d1", SiteKey{"a.com"}, Purpose::PER_DOMAIN_TRACKING, "x"},
        {"d1", SiteKey{"a.com"}, Purpose::PER_DOMAIN_TRACKING, "x"},
        {"d1", SiteKey{"b.com"}, Purpose::PER_DOMAIN_TRACKING, "y"},
        {"d1", SiteKey{"b.com"}, Purpose::PER_DOMAIN_TRACKING, "z"},
    };
    auto stability = computeMetrics(revisits);
    REQUIRE(stability.intraSiteStability.has_value());
    CHECK(*stability.intraSiteStability == doctest::Approx(0.5));
    CHECK(stability.crossSiteLinkablePairs == 0);
}

TEST_CASE("reports are byte-identical across runs and self-consistent")
{
    for (char const* name :
         {"walkthrough.json", "tracker.json", "per_domain_tracking.json"})
    {
        auto scenario = loadScenarioFile(scenarioPath(name));
        auto first = renderReport(runScenario(scenario));
        auto second = renderReport(runScenario(scenario));
        CHECK_MESSAGE(first == second, "non-deterministic report: " << name);

        auto report = runScenario(scenario);
        auto recomputed = linkabilityMetrics(report);
        CHECK(recomputed.crossSiteLinkablePairs ==
              report.metrics.crossSiteLinkablePairs);
        CHECK(recomputed.intraSiteStability == report.metrics.intraSiteStability);
        CHECK(recomputed.perSiteUniqueness == report.metrics.perSiteUniqueness);
    }
}

TEST_CASE("walkthrough: three providers, three deliveries, one site salt")
{
    auto scenario = loadScenarioFile(scenarioPath("walkthrough.json"));
    auto report = runScenario(scenario);

    // Three declared scripts, all dispatched to the PCF context.
    REQUIRE(report.visits.size() == 1);
    REQUIRE(report.visits[0].scripts.size() == 3);
    for (auto const& script : report.visits[0].scripts)
    {
        CHECK(script.kind == ContextKind::PCF);
        REQUIRE(script.outcome.has_value());
        REQUIRE(script.outcome->comms.size() == 1);
        CHECK(script.outcome->comms[0].verdict.allowed);
    }

    // Each delivery targets a different provider site, so all three fit in
    // one session's budget, and each is salted with the visited site.
    REQUIRE(report.deliveredIdentifiers.size() == 3);
    auto salt = domainSalt(scenario.devices[0].clientSecret,
                           SiteKey{"example.com"});
    for (auto const& delivered : report.deliveredIdentifiers)
    {
        CHECK(delivered.site.value == "example.com");
        CHECK(delivered.value.size() == 64);
    }

    // Verify one of them end to end: fp3 hashes canvas + language and sends
    // to the visited host itself.
    auto const& device = scenario.devices[0];
    auto raw = oracleSha256Hex(bytesOf(
        realValue(device, AttributeName::CANVAS_HASH).get<std::string>() +
        device.language));
    CHECK(report.deliveredIdentifiers[2].value == hashIdentifier(raw, salt));
}

TEST_CASE("revisits recognize the device through a stable pseudonym")
{
    auto scenario = loadScenarioFile(scenarioPath("per_domain_tracking.json"));
    auto report = runScenario(scenario);
    REQUIRE(report.deliveredIdentifiers.size() == 3);
    CHECK(report.deliveredIdentifiers[0].value ==
          report.deliveredIdentifiers[1].value);
    CHECK(report.deliveredIdentifiers[1].value ==
          report.deliveredIdentifiers[2].value);
    REQUIRE(report.metrics.intraSiteStability.has_value());
    CHECK(*report.metrics.intraSiteStability == doctest::Approx(1.0));
}

TEST_CASE("persistent storage is partitioned by site and context kind")
{
    auto doc = json::parse(R"({
      "schema": 1,
      "master_seed": 17,
      "mode": "pcf",
      "devices": [{
        "device_id": "d1",
        "user_agent": "Mozilla/5.0 Chrome/119.0.0.0",
        "screen_resolution": [1920, 1080],
        "timezone_offset": 0,
        "fonts": ["Arial"],
        "language": "en",
        "hardware_seed": 5
      }],
      "programs": {
        "writer": [
          {"op": "CONST", "args": ["r0", "from-site-a"]},
          {"op": "STORE", "args": ["k", "r0"]}
        ],
        "reader": [
          {"op": "LOAD", "args": ["r0", "k"]}
        ]
      },
      "sites": [
        {"host": "site-a.com", "pages": [
          {
           "page_id": "write",
           "origin": "https://site-a.com",
           "html": "<script pcf src='https://site-a.com/w.js'></script>",
           "scripts": [{"src": "https://site-a.com/w.js", "program": "writer"}]
          },
          {
           "page_id": "read",
           "origin": "https://site-a.com",
           "html": "<script pcf src='https://site-a.com/r.js'></script>",
           "scripts": [{"src": "https://site-a.com/r.js", "program": "reader"}]
          },
          {
           "page_id": "read-normal",
           "origin": "https://site-a.com",
           "html": "<script src='https://site-a.com/r.js'></script>",
           "scripts": [{"src": "https://site-a.com/r.js", "program": "reader"}]
          }
        ]},
        {"host": "site-b.com", "pages": [{
           "origin": "https://site-b.com",
           "html": "<script pcf src='https://site-b.com/r.js'></script>",
           "scripts": [{"src": "https://site-b.com/r.js", "program": "reader"}]
        }]}
      ],
      "visit_plan": [
        {"device": "d1", "site": "site-a.com", "page": "write"},
        {"device": "d1", "site": "site-b.com", "page": 0},
        {"device": "d1", "site": "site-a.com", "page": "read"},
        {"device": "d1", "site": "site-a.com", "page": "read-normal"}
      ]
    })");

    auto report = runScenario(loadScenario(doc.dump()));
    REQUIRE(report.visits.size() == 4);

    auto loaded = [&](size_t visit) {
        auto const& script = report.visits[visit].scripts[0];
        REQUIRE(script.outcome.has_value());
        return script.outcome->registers[0];
    };

    // site-b never sees site-a's storage.
    CHECK(loaded(1).is_null());
    // A later PCF session on site-a does (persistence within the site).
    CHECK(loaded(2) == "from-site-a");
    // The normal partition of site-a is a different storage bucket.
    CHECK(loaded(3).is_null());

    // With persistence off, the revisit starts from a clean partition.
    doc["persistent_storage"] = false;
    auto ephemeral = runScenario(loadScenario(doc.dump()));
    auto const& script = ephemeral.visits[2].scripts[0];
    REQUIRE(script.outcome.has_value());
    CHECK(script.outcome->registers[0].is_null());
}

TEST_CASE("mode and seed overrides change the report accordingly")
{
    auto scenario = loadScenarioFile(scenarioPath("tracker.json"));

    auto pcfReport = runScenario(scenario);
    CHECK(pcfReport.metrics.crossSiteLinkablePairs == 0);

    auto baseline = scenario;
    baseline.mode = RunMode::BASELINE;
    auto baselineReport = runScenario(baseline);
    // 3 devices, each linkable across C(3,2) site pairs.
    CHECK(baselineReport.metrics.crossSiteLinkablePairs == 9);

    auto reseeded = scenario;
    reseeded.masterSeed = 1;
    auto reseededReport = runScenario(reseeded);
    CHECK(reseededReport.visits[0].sessionSeed !=
          pcfReport.visits[0].sessionSeed);
}

TEST_CASE("scenario hash pins the exact input bytes")
{
    auto bytes = minimalScenario().dump();
    auto scenario = loadScenario(bytes);
    auto report = runScenario(scenario);
    CHECK(report.scenarioHash == oracleSha256Hex(bytesOf(bytes)));

    auto reformatted = loadScenario(minimalScenario().dump(2));
    CHECK(runScenario(reformatted).scenarioHash != report.scenarioHash);
}
