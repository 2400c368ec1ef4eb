// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "pcf/scenario.hpp"

#include "pcf/errors.hpp"
#include "pcf/sha256.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace pcf
{

namespace
{

using nlohmann::json;

json const&
require(json const& node, std::string const& pointer, char const* field)
{
    if (!node.is_object() || !node.contains(field))
    {
        throw ScenarioError(pointer, std::string("missing field '") + field +
                                         "'");
    }
    return node.at(field);
}

std::string
requireString(json const& node, std::string const& pointer, char const* field)
{
    auto const& value = require(node, pointer, field);
    if (!value.is_string())
    {
        throw ScenarioError(pointer + "/" + field, "expected a string");
    }
    return value.get<std::string>();
}

uint64_t
requireUint(json const& node, std::string const& pointer, char const* field)
{
    auto const& value = require(node, pointer, field);
    if (!value.is_number_unsigned())
    {
        throw ScenarioError(pointer + "/" + field,
                            "expected an unsigned integer");
    }
    return value.get<uint64_t>();
}

HeaderList
parseHeaderList(json const& node, std::string const& pointer)
{
    if (!node.is_array())
    {
        throw ScenarioError(pointer, "expected an array of [name, value]");
    }
    HeaderList out;
    size_t i = 0;
    for (auto const& entry : node)
    {
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
            !entry[1].is_string())
        {
            throw ScenarioError(pointer + "/" + std::to_string(i),
                                "expected a [name, value] string pair");
        }
        out.emplace_back(entry[0].get<std::string>(),
                         entry[1].get<std::string>());
        ++i;
    }
    return out;
}

DeviceProfile
parseDevice(json const& node, std::string const& pointer, uint64_t masterSeed)
{
    DeviceProfile device;
    device.deviceId = requireString(node, pointer, "device_id");
    if (device.deviceId.empty())
    {
        throw ScenarioError(pointer + "/device_id", "must be non-empty");
    }
    device.userAgent = requireString(node, pointer, "user_agent");
    if (device.userAgent.empty())
    {
        throw ScenarioError(pointer + "/user_agent", "must be non-empty");
    }

    auto const& res = require(node, pointer, "screen_resolution");
    if (!res.is_array() || res.size() != 2 || !res[0].is_number_unsigned() ||
        !res[1].is_number_unsigned() || res[0].get<uint64_t>() == 0 ||
        res[1].get<uint64_t>() == 0 || res[0].get<uint64_t>() > 100000 ||
        res[1].get<uint64_t>() > 100000)
    {
        throw ScenarioError(pointer + "/screen_resolution",
                            "expected [width, height] positive integers");
    }
    device.screenResolution = {res[0].get<uint32_t>(), res[1].get<uint32_t>()};

    auto const& tz = require(node, pointer, "timezone_offset");
    if (!tz.is_number_integer())
    {
        throw ScenarioError(pointer + "/timezone_offset", "expected minutes");
    }
    auto tzWide = tz.get<int64_t>();
    if (tzWide < -720 || tzWide > 840)
    {
        throw ScenarioError(pointer + "/timezone_offset",
                            "must lie in [-720, 840]");
    }
    device.timezoneOffsetMinutes = static_cast<int>(tzWide);

    auto const& fonts = require(node, pointer, "fonts");
    if (!fonts.is_array() || fonts.empty())
    {
        throw ScenarioError(pointer + "/fonts", "expected a non-empty array");
    }
    for (auto const& font : fonts)
    {
        if (!font.is_string() || font.get<std::string>().empty())
        {
            throw ScenarioError(pointer + "/fonts", "font names are strings");
        }
        auto name = font.get<std::string>();
        if (std::find(device.fonts.begin(), device.fonts.end(), name) !=
            device.fonts.end())
        {
            throw ScenarioError(pointer + "/fonts",
                                "duplicate font '" + name + "'");
        }
        device.fonts.push_back(std::move(name));
    }

    device.language = requireString(node, pointer, "language");
    if (device.language.empty())
    {
        throw ScenarioError(pointer + "/language", "must be non-empty");
    }
    device.hardwareSeed = requireUint(node, pointer, "hardware_seed");

    if (node.contains("client_secret"))
    {
        auto hex = requireString(node, pointer, "client_secret");
        std::vector<uint8_t> bytes;
        try
        {
            bytes = fromHex(hex);
        }
        catch (std::invalid_argument const&)
        {
            bytes.clear();
        }
        if (bytes.size() != 32)
        {
            throw ScenarioError(pointer + "/client_secret",
                                "expected 64 hex characters");
        }
        std::copy(bytes.begin(), bytes.end(), device.clientSecret.begin());
    }
    else
    {
        // Deterministic per-device secret derived from the scenario seed.
        Sha256 h;
        h.update(std::string_view("pcf-client-secret"));
        h.update(toBigEndian64(masterSeed));
        h.update(std::string_view(device.deviceId));
        device.clientSecret = h.finish();
    }

    if (node.contains("user_id"))
    {
        device.userId = requireString(node, pointer, "user_id");
    }
    return device;
}

} // namespace

std::string_view
runModeToken(RunMode mode)
{
    return mode == RunMode::PCF ? "pcf" : "baseline";
}

std::optional<RunMode>
parseRunMode(std::string_view token)
{
    if (token == "pcf")
    {
        return RunMode::PCF;
    }
    if (token == "baseline")
    {
        return RunMode::BASELINE;
    }
    return std::nullopt;
}

Scenario
loadScenario(std::string const& bytes)
{
    json doc;
    try
    {
        doc = json::parse(bytes);
    }
    catch (json::parse_error const& e)
    {
        throw ScenarioError("", std::string("not valid JSON: ") + e.what());
    }
    if (!doc.is_object())
    {
        throw ScenarioError("", "scenario must be a JSON object");
    }
    if (requireUint(doc, "", "schema") != 1)
    {
        throw ScenarioError("/schema", "unsupported schema version");
    }

    Scenario scenario;
    scenario.rawBytes = bytes;
    scenario.masterSeed = requireUint(doc, "", "master_seed");
    if (doc.contains("mode"))
    {
        auto mode = parseRunMode(requireString(doc, "", "mode"));
        if (!mode)
        {
            throw ScenarioError("/mode", "expected 'pcf' or 'baseline'");
        }
        scenario.mode = *mode;
    }
    if (doc.contains("persistent_storage"))
    {
        auto const& flag = doc.at("persistent_storage");
        if (!flag.is_boolean())
        {
            throw ScenarioError("/persistent_storage", "expected a boolean");
        }
        scenario.persistentStorage = flag.get<bool>();
    }

    // Devices.
    auto const& devices = require(doc, "", "devices");
    if (!devices.is_array())
    {
        throw ScenarioError("/devices", "expected an array");
    }
    std::map<std::string, size_t> deviceIndex;
    for (size_t i = 0; i < devices.size(); ++i)
    {
        auto pointer = "/devices/" + std::to_string(i);
        auto device = parseDevice(devices[i], pointer, scenario.masterSeed);
        if (!deviceIndex.emplace(device.deviceId, i).second)
        {
            throw ScenarioError(pointer + "/device_id",
                                "duplicate device_id '" + device.deviceId +
                                    "'");
        }
        scenario.devices.push_back(std::move(device));
    }

    // Programs.
    if (doc.contains("programs"))
    {
        auto const& programs = doc.at("programs");
        if (!programs.is_object())
        {
            throw ScenarioError("/programs", "expected an object");
        }
        for (auto const& [name, body] : programs.items())
        {
            auto pointer = "/programs/" + name;
            ProgramSpec spec;
            json const* instructions = &body;
            if (body.is_object())
            {
                if (body.contains("register_count"))
                {
                    auto const& rc = body.at("register_count");
                    if (!rc.is_number_unsigned() || rc.get<uint64_t>() == 0 ||
                        rc.get<uint64_t>() > MAX_REGISTERS)
                    {
                        throw ScenarioError(pointer + "/register_count",
                                            "expected 1..256");
                    }
                    spec.registerCount = rc.get<int>();
                }
                instructions = &require(body, pointer, "instructions");
            }
            if (!instructions->is_array())
            {
                throw ScenarioError(pointer, "expected an instruction array");
            }
            spec.compiled = compileProgram(*instructions, spec.registerCount);
            scenario.programs.emplace(name, std::move(spec));
        }
    }

    // Sites and pages.
    auto const& sites = require(doc, "", "sites");
    if (!sites.is_array())
    {
        throw ScenarioError("/sites", "expected an array");
    }
    std::map<std::string, size_t> siteIndex;
    for (size_t s = 0; s < sites.size(); ++s)
    {
        auto sitePointer = "/sites/" + std::to_string(s);
        auto const& siteNode = sites[s];
        SiteSpec site;
        site.host = requireString(siteNode, sitePointer, "host");
        try
        {
            site.key = siteOf(site.host);
        }
        catch (InvalidHost const& e)
        {
            throw ScenarioError(sitePointer + "/host", e.what());
        }
        if (!siteIndex.emplace(site.host, s).second)
        {
            throw ScenarioError(sitePointer + "/host",
                                "duplicate site host '" + site.host + "'");
        }

        auto const& pages = require(siteNode, sitePointer, "pages");
        if (!pages.is_array() || pages.empty())
        {
            throw ScenarioError(sitePointer + "/pages",
                                "expected a non-empty array");
        }
        for (size_t p = 0; p < pages.size(); ++p)
        {
            auto pagePointer = sitePointer + "/pages/" + std::to_string(p);
            auto const& pageNode = pages[p];
            PageSpec page;
            if (pageNode.contains("page_id"))
            {
                page.pageId = requireString(pageNode, pagePointer, "page_id");
            }

            auto originText = requireString(pageNode, pagePointer, "origin");
            auto origin = parseOrigin(originText);
            if (!origin)
            {
                throw ScenarioError(pagePointer + "/origin",
                                    "expected scheme://host[:port]");
            }
            page.origin = *origin;
            if (siteOf(page.origin.host) != site.key)
            {
                throw ScenarioError(pagePointer + "/origin",
                                    "origin host belongs to a different site");
            }

            if (pageNode.contains("headers"))
            {
                page.headers = parseHeaderList(pageNode.at("headers"),
                                               pagePointer + "/headers");
            }
            page.html = requireString(pageNode, pagePointer, "html");

            if (pageNode.contains("per_script_headers"))
            {
                auto const& psh = pageNode.at("per_script_headers");
                if (!psh.is_object())
                {
                    throw ScenarioError(pagePointer + "/per_script_headers",
                                        "expected an object keyed by url");
                }
                for (auto const& [url, headers] : psh.items())
                {
                    page.perScriptHeaders.emplace(
                        url, parseHeaderList(headers,
                                             pagePointer +
                                                 "/per_script_headers/" + url));
                }
            }

            try
            {
                page.declarations = parseScriptDeclarations(
                    page.html, page.perScriptHeaders, page.origin);
            }
            catch (HtmlParseError const& e)
            {
                throw ScenarioError(pagePointer + "/html", e.what());
            }
            page.boundPrograms.assign(page.declarations.size(), std::nullopt);

            if (pageNode.contains("scripts"))
            {
                auto const& bindings = pageNode.at("scripts");
                if (!bindings.is_array())
                {
                    throw ScenarioError(pagePointer + "/scripts",
                                        "expected an array");
                }
                for (size_t b = 0; b < bindings.size(); ++b)
                {
                    auto bindPointer =
                        pagePointer + "/scripts/" + std::to_string(b);
                    auto const& binding = bindings[b];
                    auto program =
                        requireString(binding, bindPointer, "program");
                    if (scenario.programs.find(program) ==
                        scenario.programs.end())
                    {
                        throw ScenarioError(bindPointer + "/program",
                                            "unknown program '" + program +
                                                "'");
                    }

                    std::optional<size_t> target;
                    if (binding.contains("src"))
                    {
                        auto src = requireString(binding, bindPointer, "src");
                        for (size_t d = 0; d < page.declarations.size(); ++d)
                        {
                            if (page.declarations[d].external &&
                                page.declarations[d].srcUrl == src)
                            {
                                target = d;
                                break;
                            }
                        }
                        if (!target)
                        {
                            throw ScenarioError(bindPointer + "/src",
                                                "no script tag with src '" +
                                                    src + "'");
                        }
                    }
                    else if (binding.contains("inline_index"))
                    {
                        auto wanted =
                            requireUint(binding, bindPointer, "inline_index");
                        uint64_t seen = 0;
                        for (size_t d = 0; d < page.declarations.size(); ++d)
                        {
                            if (!page.declarations[d].external)
                            {
                                if (seen == wanted)
                                {
                                    target = d;
                                    break;
                                }
                                ++seen;
                            }
                        }
                        if (!target)
                        {
                            throw ScenarioError(bindPointer + "/inline_index",
                                                "no such inline script");
                        }
                    }
                    else
                    {
                        throw ScenarioError(bindPointer,
                                            "binding needs 'src' or "
                                            "'inline_index'");
                    }
                    if (page.boundPrograms[*target])
                    {
                        throw ScenarioError(bindPointer,
                                            "script already bound");
                    }
                    page.boundPrograms[*target] = program;
                }
            }
            site.pages.push_back(std::move(page));
        }
        scenario.sites.push_back(std::move(site));
    }

    // Visit plan.
    auto const& plan = require(doc, "", "visit_plan");
    if (!plan.is_array())
    {
        throw ScenarioError("/visit_plan", "expected an array");
    }
    for (size_t v = 0; v < plan.size(); ++v)
    {
        auto pointer = "/visit_plan/" + std::to_string(v);
        auto const& visitNode = plan[v];
        VisitSpec visit;

        auto deviceId = requireString(visitNode, pointer, "device");
        auto dIt = deviceIndex.find(deviceId);
        if (dIt == deviceIndex.end())
        {
            throw ScenarioError(pointer + "/device",
                                "unknown device '" + deviceId + "'");
        }
        visit.deviceIndex = dIt->second;

        auto siteHost = requireString(visitNode, pointer, "site");
        auto sIt = siteIndex.find(siteHost);
        if (sIt == siteIndex.end())
        {
            throw ScenarioError(pointer + "/site",
                                "unknown site '" + siteHost + "'");
        }
        visit.siteIndex = sIt->second;

        auto const& sitePages = scenario.sites[visit.siteIndex].pages;
        if (visitNode.contains("page"))
        {
            auto const& pageRef = visitNode.at("page");
            if (pageRef.is_number_unsigned())
            {
                if (pageRef.get<uint64_t>() >= sitePages.size())
                {
                    throw ScenarioError(pointer + "/page",
                                        "page index out of range");
                }
                visit.pageIndex = pageRef.get<size_t>();
            }
            else if (pageRef.is_string())
            {
                auto id = pageRef.get<std::string>();
                std::optional<size_t> found;
                for (size_t p = 0; p < sitePages.size(); ++p)
                {
                    if (sitePages[p].pageId == id)
                    {
                        found = p;
                        break;
                    }
                }
                if (!found)
                {
                    throw ScenarioError(pointer + "/page",
                                        "unknown page_id '" + id + "'");
                }
                visit.pageIndex = *found;
            }
            else
            {
                throw ScenarioError(pointer + "/page",
                                    "expected an index or page_id");
            }
        }

        visit.sessionIndex =
            visitNode.contains("session")
                ? requireUint(visitNode, pointer, "session")
                : v;
        scenario.visitPlan.push_back(visit);
    }

    // Per-site PCF opt-out.
    if (doc.contains("pcf_disabled_sites"))
    {
        auto const& disabled = doc.at("pcf_disabled_sites");
        if (!disabled.is_array())
        {
            throw ScenarioError("/pcf_disabled_sites", "expected an array");
        }
        for (size_t i = 0; i < disabled.size(); ++i)
        {
            auto pointer = "/pcf_disabled_sites/" + std::to_string(i);
            if (!disabled[i].is_string())
            {
                throw ScenarioError(pointer, "expected a hostname");
            }
            try
            {
                scenario.pcfDisabledSites.insert(
                    siteOf(disabled[i].get<std::string>()));
            }
            catch (InvalidHost const& e)
            {
                throw ScenarioError(pointer, e.what());
            }
        }
    }

    return scenario;
}

Scenario
loadScenarioFile(std::string const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw ScenarioError("", "cannot read scenario file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return loadScenario(buffer.str());
}

} // namespace pcf
