// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

// Command-line front end. Subcommands:
//   run   - execute a scenario file and write the report
//   lint  - print the script declaration table for a page
//   hash  - print the pseudonym delivered for an identifier
//   site  - print the SiteKey of a host
//
// Exit codes: 0 success, 1 validation error, 2 internal invariant violation.

#include "pcf/commfilter.hpp"
#include "pcf/declaration.hpp"
#include "pcf/errors.hpp"
#include "pcf/harness.hpp"
#include "pcf/scenario.hpp"
#include "pcf/sha256.hpp"
#include "pcf/site.hpp"
#include "pcf/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace
{

struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

std::string
readFile(std::string const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw UsageError("cannot read file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

int
cmdRun(std::string const& scenarioPath, std::string const& outPath,
       std::string const& modeOverride, std::optional<uint64_t> seedOverride)
{
    auto scenario = pcf::loadScenario(readFile(scenarioPath));
    if (!modeOverride.empty())
    {
        auto mode = pcf::parseRunMode(modeOverride);
        if (!mode)
        {
            throw UsageError("--mode must be 'pcf' or 'baseline'");
        }
        scenario.mode = *mode;
    }
    if (seedOverride)
    {
        scenario.masterSeed = *seedOverride;
    }

    auto report = pcf::runScenario(scenario);
    std::ofstream out(outPath, std::ios::binary);
    if (!out)
    {
        throw UsageError("cannot write report to '" + outPath + "'");
    }
    out << pcf::renderReport(report);

    std::cout << "mode: " << pcf::runModeToken(report.mode) << "\n"
              << "visits: " << report.visits.size() << "\n"
              << "delivered identifiers: "
              << report.deliveredIdentifiers.size() << "\n"
              << "cross-site linkable pairs: "
              << report.metrics.crossSiteLinkablePairs << "\n"
              << "report: " << outPath << "\n";
    return 0;
}

int
cmdLint(std::string const& pagePath, std::string const& headersPath,
        std::string const& originText)
{
    std::map<std::string, pcf::HeaderList> perScriptHeaders;
    if (!headersPath.empty())
    {
        auto doc = nlohmann::json::parse(readFile(headersPath), nullptr, false);
        if (doc.is_discarded() || !doc.is_object())
        {
            throw UsageError("--headers must be a JSON object keyed by url");
        }
        for (auto const& [url, headers] : doc.items())
        {
            if (!headers.is_array())
            {
                throw UsageError("headers for '" + url +
                                 "' must be an array of [name, value]");
            }
            pcf::HeaderList list;
            for (auto const& entry : headers)
            {
                if (!entry.is_array() || entry.size() != 2 ||
                    !entry[0].is_string() || !entry[1].is_string())
                {
                    throw UsageError("headers for '" + url +
                                     "' must be [name, value] string pairs");
                }
                list.emplace_back(entry[0].get<std::string>(),
                                  entry[1].get<std::string>());
            }
            perScriptHeaders.emplace(url, std::move(list));
        }
    }

    std::optional<pcf::Origin> origin;
    if (!originText.empty())
    {
        origin = pcf::parseOrigin(originText);
        if (!origin)
        {
            throw UsageError("--origin must look like scheme://host[:port]");
        }
    }

    std::vector<pcf::ScriptDeclaration> decls;
    try
    {
        decls = pcf::parseScriptDeclarations(readFile(pagePath),
                                             perScriptHeaders, origin);
    }
    catch (pcf::HtmlParseError const& e)
    {
        throw UsageError(e.what());
    }

    std::cout << "id          pcf    via        purposes              source\n";
    for (auto const& decl : decls)
    {
        std::string purposes;
        for (auto p : decl.purposes)
        {
            if (!purposes.empty())
            {
                purposes += " ";
            }
            purposes += pcf::purposeToken(p);
        }
        if (purposes.empty())
        {
            purposes = decl.pcfFlag ? "(all)" : "-";
        }
        auto pad = [](std::string s, size_t width) {
            if (s.size() < width)
            {
                s.append(width - s.size(), ' ');
            }
            return s + " ";
        };
        std::cout << pad(decl.scriptId, 11)
                  << pad(decl.pcfFlag ? "true" : "false", 6)
                  << pad(std::string(pcf::declaredViaToken(decl.declaredVia)),
                         10)
                  << pad(purposes, 21)
                  << (decl.external ? decl.srcUrl : "(inline)") << "\n";
        for (auto const& diagnostic : decl.diagnostics)
        {
            std::cerr << decl.scriptId << ": " << diagnostic << "\n";
        }
    }
    return 0;
}

int
cmdHash(std::string const& id, std::string const& siteHost,
        std::string const& secretHex, std::string const& userId)
{
    std::vector<uint8_t> secretBytes;
    try
    {
        secretBytes = pcf::fromHex(secretHex);
    }
    catch (std::invalid_argument const& e)
    {
        throw UsageError(std::string("--secret: ") + e.what());
    }
    if (secretBytes.size() != 32)
    {
        throw UsageError("--secret must be 64 hex characters");
    }
    std::array<uint8_t, 32> secret{};
    std::copy(secretBytes.begin(), secretBytes.end(), secret.begin());

    std::optional<std::string> user;
    if (!userId.empty())
    {
        user = userId;
    }

    try
    {
        auto salt = pcf::domainSalt(secret, pcf::siteOf(siteHost), user);
        std::cout << pcf::hashIdentifier(id, salt) << "\n";
    }
    catch (pcf::InvalidHost const& e)
    {
        throw UsageError(e.what());
    }
    catch (pcf::EmptyIdentifier const& e)
    {
        throw UsageError(e.what());
    }
    return 0;
}

int
cmdSite(std::string const& host)
{
    try
    {
        std::cout << pcf::siteOf(host).value << "\n";
    }
    catch (pcf::InvalidHost const& e)
    {
        throw UsageError(e.what());
    }
    return 0;
}

} // namespace

int
main(int argc, char** argv)
{
    CLI::App app{"Reference runtime for the Privacy-preserving Client-side "
                 "Fingerprinting (PCF) protocol"};
    app.set_version_flag("--version", std::string(pcf::TOOL_NAME) + " " +
                                          pcf::TOOL_VERSION);
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Execute a scenario file");
    std::string scenarioPath, outPath, modeOverride;
    std::optional<uint64_t> seedOverride;
    run->add_option("--scenario", scenarioPath, "Scenario JSON file")
        ->required();
    run->add_option("--out", outPath, "Report output path")->required();
    run->add_option("--mode", modeOverride, "Override mode: pcf | baseline");
    run->add_option("--seed", seedOverride, "Override the master seed");

    auto* lint = app.add_subcommand(
        "lint", "Print the script declaration table for a page");
    std::string pagePath, headersPath, originText;
    lint->add_option("--page", pagePath, "Restricted-HTML page file")
        ->required();
    lint->add_option("--headers", headersPath,
                     "JSON object: script url -> [[name, value], ...]");
    lint->add_option("--origin", originText, "Page origin for inline scripts");

    auto* hash = app.add_subcommand(
        "hash", "Print the pseudonym delivered for an identifier");
    std::string id, siteHost, secretHex, userId;
    hash->add_option("--id", id, "Raw identifier")->required();
    hash->add_option("--site", siteHost, "Host whose site salts the hash")
        ->required();
    hash->add_option("--secret", secretHex, "Client secret, 64 hex chars")
        ->required();
    hash->add_option("--user", userId, "Optional per-user salt component");

    auto* site = app.add_subcommand("site", "Print the SiteKey of a host");
    std::string host;
    site->add_option("--host", host, "Hostname")->required();

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (run->parsed())
        {
            return cmdRun(scenarioPath, outPath, modeOverride, seedOverride);
        }
        if (lint->parsed())
        {
            return cmdLint(pagePath, headersPath, originText);
        }
        if (hash->parsed())
        {
            return cmdHash(id, siteHost, secretHex, userId);
        }
        if (site->parsed())
        {
            return cmdSite(host);
        }
        return 1;
    }
    catch (UsageError const& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    catch (pcf::ScenarioError const& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    catch (std::exception const& e)
    {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
