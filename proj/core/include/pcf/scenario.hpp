// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "pcf/declaration.hpp"
#include "pcf/device.hpp"
#include "pcf/script.hpp"
#include "pcf/site.hpp"
#include "pcf/url.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pcf
{

enum class RunMode
{
    PCF,
    BASELINE,
};

std::string_view runModeToken(RunMode mode);
std::optional<RunMode> parseRunMode(std::string_view token);

// A named instruction program, compiled once at load. Compile diagnostics
// reject the bound scripts at run time, never the scenario itself.
struct ProgramSpec
{
    int registerCount = 16;
    CompiledProgram compiled;
};

struct PageSpec
{
    std::string pageId;
    Origin origin;
    HeaderList headers;
    std::string html;
    std::map<std::string, HeaderList> perScriptHeaders;
    std::vector<ScriptDeclaration> declarations; // document order
    // Program name bound to each declaration, when any.
    std::vector<std::optional<std::string>> boundPrograms;
};

struct SiteSpec
{
    std::string host;
    SiteKey key;
    std::vector<PageSpec> pages;
};

struct VisitSpec
{
    size_t deviceIndex = 0;
    size_t siteIndex = 0;
    size_t pageIndex = 0;
    uint64_t sessionIndex = 0;
};

// Fully resolved scenario: every reference checked at load. The exact input
// bytes are retained so reports can carry a content hash.
struct Scenario
{
    uint64_t masterSeed = 0;
    RunMode mode = RunMode::PCF;
    bool persistentStorage = true;
    std::vector<DeviceProfile> devices;
    std::map<std::string, ProgramSpec> programs;
    std::vector<SiteSpec> sites;
    std::vector<VisitSpec> visitPlan;
    std::set<SiteKey> pcfDisabledSites;
    std::string rawBytes;
};

// Parses and validates scenario JSON (schema version 1). Throws
// ScenarioError with a JSON-pointer location on any violation.
Scenario loadScenario(std::string const& bytes);
Scenario loadScenarioFile(std::string const& path);

} // namespace pcf
