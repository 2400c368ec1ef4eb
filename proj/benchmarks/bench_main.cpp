// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "pcf/commfilter.hpp"
#include "pcf/context.hpp"
#include "pcf/declaration.hpp"
#include "pcf/device.hpp"
#include "pcf/harness.hpp"
#include "pcf/scenario.hpp"
#include "pcf/sha256.hpp"
#include "pcf/site.hpp"

#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

namespace
{

pcf::DeviceProfile
benchProfile()
{
    pcf::DeviceProfile profile;
    profile.deviceId = "bench-device";
    profile.userAgent =
        "Mozilla/5.0 (X11; Linux x86_64) AppleWebKit/537.36 (KHTML, like "
        "Gecko) Chrome/119.0.6045.105 Safari/537.36";
    profile.screenResolution = {1920, 1080};
    profile.timezoneOffsetMinutes = -60;
    profile.fonts = {"Arial", "Verdana", "DejaVu Sans"};
    profile.language = "en-US";
    profile.hardwareSeed = 0xbe9c;
    profile.clientSecret.fill(0x5a);
    return profile;
}

void
BM_Sha256_1KiB(benchmark::State& state)
{
    std::string data(1024, 'x');
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(pcf::sha256Hex(data));
    }
    state.SetBytesProcessed(int64_t(state.iterations()) * 1024);
}
BENCHMARK(BM_Sha256_1KiB);

void
BM_DomainSaltAndPseudonym(benchmark::State& state)
{
    auto profile = benchProfile();
    auto site = pcf::siteOf("shop.example.com");
    for (auto _ : state)
    {
        auto salt = pcf::domainSalt(profile.clientSecret, site);
        benchmark::DoNotOptimize(
            pcf::hashIdentifier("raw-fingerprint-id", salt));
    }
}
BENCHMARK(BM_DomainSaltAndPseudonym);

void
BM_SiteOf(benchmark::State& state)
{
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(pcf::siteOf("deep.sub.shop.example.co.uk"));
    }
}
BENCHMARK(BM_SiteOf);

void
BM_MaskedCanvasRead(benchmark::State& state)
{
    auto profile = benchProfile();
    uint64_t session = 0;
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(pcf::maskedValue(
            profile, pcf::AttributeName::CANVAS_HASH,
            pcf::SessionSeed{session++}));
    }
}
BENCHMARK(BM_MaskedCanvasRead);

void
BM_ParseDeclarations(benchmark::State& state)
{
    std::string page = "<html><head>"
                       "<script pcf src='https://a.com/fp1.js'></script>"
                       "<script src='https://b.com/fp2.js'></script>"
                       "<script>inline();</script>"
                       "</head><body>content</body></html>";
    std::map<std::string, pcf::HeaderList> headers{
        {"https://b.com/fp2.js", {{"PCF", "purposes=bot-detection"}}}};
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(pcf::parseScriptDeclarations(page, headers));
    }
}
BENCHMARK(BM_ParseDeclarations);

void
BM_RunFingerprintScript(benchmark::State& state)
{
    auto profile = benchProfile();
    auto program = nlohmann::json::array({
        {{"op", "READ_API"}, {"args", {"r0", "user_agent"}}},
        {{"op", "READ_API"}, {"args", {"r1", "fonts"}}},
        {{"op", "CONCAT"}, {"args", {"r2", "r0", "r1"}}},
        {{"op", "READ_API"}, {"args", {"r3", "canvas_hash"}}},
        {{"op", "CONCAT"}, {"args", {"r4", "r2", "r3"}}},
        {{"op", "HASH"}, {"args", {"r5", "r4"}}},
        {{"op", "FETCH"},
         {"args",
          {"https://collect.example.net/t", "per-domain-tracking", "r5"}}},
    });
    pcf::Script script;
    script.declaration.scriptId = "bench";
    script.declaration.pcfFlag = true;
    script.declaration.declaredVia = pcf::DeclaredVia::HEADER;
    script.instructions = pcf::compileProgram(program, 16).instructions;

    for (auto _ : state)
    {
        pcf::PageSession session;
        session.pageOrigin = *pcf::parseOrigin("https://bench.example.com");
        session.site = pcf::siteOf("bench.example.com");
        session.device = &profile;
        session.session = pcf::SessionSeed{7};
        auto ctx = session.pcfContext({});
        benchmark::DoNotOptimize(pcf::runScript(script, ctx));
    }
}
BENCHMARK(BM_RunFingerprintScript);

void
BM_RunTrackerScenario(benchmark::State& state)
{
    std::ifstream in(std::string(PCFSIM_SCENARIO_DIR) + "/tracker.json",
                     std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    auto scenario = pcf::loadScenario(buffer.str());

    for (auto _ : state)
    {
        benchmark::DoNotOptimize(pcf::runScenario(scenario));
    }
}
BENCHMARK(BM_RunTrackerScenario);

} // namespace

BENCHMARK_MAIN();
