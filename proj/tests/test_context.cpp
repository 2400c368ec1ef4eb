// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "pcf/context.hpp"

#include "test_support.hpp"

#include <doctest.h>

using namespace pcf;
using namespace pcftest;
using nlohmann::json;

namespace
{

PageSession
makeSession(DeviceProfile const& device, bool pcfEnabled = true)
{
    PageSession session;
    session.pageOrigin = *parseOrigin("https://www.example.com");
    session.site = siteOf("www.example.com");
    session.device = &device;
    session.session = SessionSeed{11};
    session.pcfEnabled = pcfEnabled;
    return session;
}

Script
makeScript(std::string id, bool pcf, json const& program,
           PurposeSet purposes = {})
{
    Script script;
    script.declaration.scriptId = std::move(id);
    script.declaration.pcfFlag = pcf;
    script.declaration.declaredVia =
        pcf ? DeclaredVia::HEADER : DeclaredVia::NONE;
    script.declaration.purposes = std::move(purposes);
    script.registerCount = 8;
    auto compiled = compileProgram(program, 8);
    script.instructions = std::move(compiled.instructions);
    return script;
}

json
trivialProgram()
{
    return json::array({{{"op", "CONST"}, {"args", {"r0", 1}}}});
}

} // namespace

TEST_CASE("declared scripts run in the PCF context and share one ledger")
{
    auto device = makeProfile(0);
    auto session = makeSession(device);

    json sender = json::array({
        {{"op", "CONST"}, {"args", {"r0", true}}},
        {{"op", "FETCH"},
         {"args", {"https://collector.example.net/c", "bot-detection", "r0"}}},
    });
    std::vector<Script> scripts{
        makeScript("fp1.js", true, sender),
        makeScript("fp2.js", true, sender),
        makeScript("fp3.js", true, sender),
    };

    auto results = executePage(session, scripts);
    REQUIRE(results.size() == 3);
    for (auto const& result : results)
    {
        CHECK(result.kind == ContextKind::PCF);
        REQUIRE(result.outcome.has_value());
    }
    // One shared session ledger: first send consumes the (purpose, site)
    // budget, the other two scripts are blocked.
    CHECK(results[0].outcome->comms[0].verdict.allowed);
    CHECK_FALSE(results[1].outcome->comms[0].verdict.allowed);
    CHECK(results[1].outcome->comms[0].verdict.reason ==
          BlockReason::BUDGET_EXHAUSTED);
    CHECK_FALSE(results[2].outcome->comms[0].verdict.allowed);
    CHECK(session.ledger.transcript.size() == 3);
}

TEST_CASE("undeclared scripts run in the normal context with masked reads")
{
    auto device = makeProfile(0);
    auto session = makeSession(device);

    auto reader = json::array(
        {{{"op", "READ_API"}, {"args", {"r0", "timezone_offset"}}}});
    std::vector<Script> scripts{makeScript("plain.js", false, reader)};

    auto results = executePage(session, scripts);
    REQUIRE(results.size() == 1);
    CHECK(results[0].kind == ContextKind::NORMAL);
    CHECK(results[0].outcome->apiReads[0].source == ValueSource::MASKED);
}

TEST_CASE("user preference forces declared scripts into the normal context")
{
    auto device = makeProfile(0);
    auto session = makeSession(device, /*pcfEnabled=*/false);

    std::vector<Script> scripts{makeScript("fp.js", true, trivialProgram())};
    auto results = executePage(session, scripts);
    CHECK(results[0].kind == ContextKind::NORMAL);
}

TEST_CASE("dispatch equals pcf_flag AND pcf_enabled")
{
    auto device = makeProfile(3);
    for (bool declared : {false, true})
    {
        for (bool enabled : {false, true})
        {
            auto session = makeSession(device, enabled);
            std::vector<Script> scripts{
                makeScript("s", declared, trivialProgram())};
            auto results = executePage(session, scripts);
            auto expected = declared && enabled ? ContextKind::PCF
                                                : ContextKind::NORMAL;
            CHECK(results[0].kind == expected);
        }
    }
}

TEST_CASE("two PCF scripts share their partition in program order")
{
    auto device = makeProfile(1);
    auto session = makeSession(device);

    json producer = json::array({
        {{"op", "CONST"}, {"args", {"r0", "shared-fingerprint"}}},
        {{"op", "GLOBAL_SET"}, {"args", {"fp", "r0"}}},
        {{"op", "CONST"}, {"args", {"r1", 1}}},
        {{"op", "EVENT_DISPATCH"}, {"args", {"ready", "r1"}}},
    });
    json consumer = json::array({
        {{"op", "GLOBAL_GET"}, {"args", {"r0", "fp"}}},
        {{"op", "EVENT_POLL"}, {"args", {"r1", "ready"}}},
    });
    std::vector<Script> scripts{makeScript("producer", true, producer),
                                makeScript("consumer", true, consumer)};

    auto results = executePage(session, scripts);
    CHECK(results[1].outcome->registers[0] == "shared-fingerprint");
    CHECK(results[1].outcome->registers[1] == 1);
}

TEST_CASE("a page of normal scripts never touches the PCF partition")
{
    auto device = makeProfile(2);
    auto session = makeSession(device);
    session.pcfPartition.globals["pre-existing"] = "value";
    auto before = session.pcfPartition.snapshot().dump();

    json writer = json::array({
        {{"op", "CONST"}, {"args", {"r0", "junk"}}},
        {{"op", "GLOBAL_SET"}, {"args", {"pre-existing", "r0"}}},
        {{"op", "STORE"}, {"args", {"k", "r0"}}},
        {{"op", "DOM_SET"}, {"args", {"#x", "r0"}}},
    });
    std::vector<Script> scripts{makeScript("w1", false, writer),
                                makeScript("w2", false, writer)};
    executePage(session, scripts);

    CHECK(session.pcfPartition.snapshot().dump() == before);
    CHECK(session.normalPartition.globals.at("pre-existing") == "junk");
}

TEST_CASE("generateAllowedCommunications scopes the gate to the declaration")
{
    auto device = makeProfile(4);
    auto session = makeSession(device);

    ScriptDeclaration decl;
    decl.scriptId = "scoped";
    decl.pcfFlag = true;
    decl.declaredVia = DeclaredVia::HEADER;
    decl.purposes = {Purpose::BOT_DETECTION};

    auto gate = generateAllowedCommunications(decl, session);
    CHECK(gate.isFiltered());

    OutboundMessage tracking;
    tracking.channel = Channel::PAGE;
    tracking.purpose = Purpose::PER_DOMAIN_TRACKING;
    tracking.payload = {{"per-domain-tracking", "fp"}};
    auto verdict = gate.request(tracking);
    CHECK_FALSE(verdict.allowed);
    CHECK(verdict.reason == BlockReason::PURPOSE_NOT_DECLARED);

    OutboundMessage bot;
    bot.channel = Channel::PAGE;
    bot.purpose = Purpose::BOT_DETECTION;
    bot.payload = {{"bot-detection", true}};
    CHECK(gate.request(bot).allowed);

    // Empty declared set admits any valid purpose once.
    ScriptDeclaration open = decl;
    open.purposes.clear();
    auto openGate = generateAllowedCommunications(open, session);
    OutboundMessage outdated;
    outdated.channel = Channel::PAGE;
    outdated.purpose = Purpose::SOFTWARE_OUTDATED;
    outdated.payload = {{"software-outdated", true}};
    CHECK(openGate.request(outdated).allowed);
}

TEST_CASE("invalid scripts become diagnostics, the page continues")
{
    auto device = makeProfile(5);
    auto session = makeSession(device);

    Script broken;
    broken.declaration.scriptId = "broken";
    broken.declaration.pcfFlag = true;
    broken.declaration.declaredVia = DeclaredVia::ATTRIBUTE;
    broken.registerCount = 2;
    Instruction bad;
    bad.op = Opcode::CONST;
    bad.reg0 = 7;
    broken.instructions.push_back(bad);

    std::vector<Script> scripts{broken,
                                makeScript("fine", true, trivialProgram())};
    auto results = executePage(session, scripts);
    REQUIRE(results.size() == 2);
    CHECK_FALSE(results[0].outcome.has_value());
    CHECK_FALSE(results[0].diagnostics.empty());
    CHECK(results[1].outcome.has_value());
}

TEST_CASE("baseline mode: real reads, no filtering, single partition")
{
    auto device = makeProfile(6);
    device.timezoneOffsetMinutes = -60;
    auto session = makeSession(device);

    json program = json::array({
        {{"op", "READ_API"}, {"args", {"r0", "timezone_offset"}}},
        {{"op", "CONST"}, {"args", {"r1", "raw-id"}}},
        {{"op", "FETCH"},
         {"args",
          {"http://insecure.example.net/t", "per-domain-tracking", "r1"}}},
        {{"op", "GLOBAL_SET"}, {"args", {"g", "r0"}}},
    });
    // Not declared as PCF; baseline ignores declarations anyway.
    std::vector<Script> scripts{makeScript("tracker", false, program)};

    auto results = executePageBaseline(session, scripts);
    REQUIRE(results.size() == 1);
    CHECK(results[0].kind == ContextKind::BASELINE);
    CHECK(results[0].outcome->apiReads[0].source == ValueSource::REAL);
    CHECK(results[0].outcome->apiReads[0].value == -60);
    // Even insecure destinations and raw identifiers pass in baseline.
    CHECK(results[0].outcome->comms[0].verdict.allowed);
    CHECK(results[0].outcome->comms[0].verdict.deliveredPayload ==
          json{{"per-domain-tracking", "raw-id"}});
    CHECK(session.normalPartition.globals.at("g") == -60);
}
