// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "pcf/harness.hpp"

#include "pcf/sha256.hpp"
#include "pcf/version.hpp"

#include <cstdio>
#include <map>
#include <set>

namespace pcf
{

namespace
{

std::string
fixed6(double value)
{
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6f", value);
    return buffer;
}

// Assembles the runnable scripts for one page visit. Unbound script tags and
// programs that failed to compile become per-script diagnostics.
struct PreparedScript
{
    Script script;
    std::vector<std::string> diagnostics;
};

std::vector<PreparedScript>
prepareScripts(Scenario const& scenario, PageSpec const& page)
{
    std::vector<PreparedScript> out;
    for (size_t d = 0; d < page.declarations.size(); ++d)
    {
        PreparedScript prepared;
        prepared.script.declaration = page.declarations[d];
        auto const& bound = page.boundPrograms[d];
        if (!bound)
        {
            prepared.diagnostics.push_back("no program bound to this script");
            out.push_back(std::move(prepared));
            continue;
        }
        auto const& spec = scenario.programs.at(*bound);
        prepared.script.registerCount = spec.registerCount;
        if (!spec.compiled.ok())
        {
            prepared.diagnostics = spec.compiled.diagnostics;
        }
        else
        {
            prepared.script.instructions = spec.compiled.instructions;
        }
        out.push_back(std::move(prepared));
    }
    return out;
}

nlohmann::json
scriptResultToJson(ScriptResult const& result)
{
    auto const& declaration = result.declaration;
    nlohmann::json out{
        {"script_id", declaration.scriptId},
        {"context", contextKindToken(result.kind)},
        {"pcf_declared", declaration.pcfFlag},
        {"declared_via", declaredViaToken(declaration.declaredVia)},
    };
    if (declaration.external)
    {
        out["src"] = declaration.srcUrl;
    }
    auto diagnostics = declaration.diagnostics;
    diagnostics.insert(diagnostics.end(), result.diagnostics.begin(),
                       result.diagnostics.end());
    if (!diagnostics.empty())
    {
        out["diagnostics"] = diagnostics;
    }
    if (!result.outcome)
    {
        return out;
    }

    auto const& outcome = *result.outcome;
    out["halt"] = outcome.halt == HaltReason::COMPLETED ? "completed"
                                                        : "budget_exhausted";
    auto reads = nlohmann::json::array();
    for (auto const& read : outcome.apiReads)
    {
        reads.push_back({{"attribute", attributeToken(read.attribute)},
                         {"source", read.source == ValueSource::REAL
                                        ? "real"
                                        : "masked"},
                         {"value", read.value}});
    }
    out["api_reads"] = reads;

    auto comms = nlohmann::json::array();
    for (auto const& attempt : outcome.comms)
    {
        nlohmann::json entry{
            {"channel", channelToken(attempt.channel)},
            {"purpose", purposeToken(attempt.purpose)},
            {"verdict", attempt.verdict.allowed ? "allowed" : "blocked"},
        };
        if (attempt.channel == Channel::EXTERNAL)
        {
            entry["destination"] = attempt.destination;
        }
        if (attempt.verdict.allowed)
        {
            entry["delivered_payload"] = attempt.verdict.deliveredPayload;
        }
        else
        {
            entry["reason"] = blockReasonToken(attempt.verdict.reason);
        }
        comms.push_back(std::move(entry));
    }
    out["communications"] = comms;
    return out;
}

} // namespace

uint64_t
deriveSessionSeed(uint64_t masterSeed, uint64_t visitIndex)
{
    Sha256 h;
    h.update(toBigEndian64(masterSeed));
    h.update(toBigEndian64(visitIndex));
    auto digest = h.finish();
    uint64_t seed = 0;
    for (size_t i = 0; i < 8; ++i)
    {
        seed = (seed << 8) | digest[i];
    }
    return seed;
}

ScenarioReport
runScenario(Scenario const& scenario)
{
    ScenarioReport report;
    report.mode = scenario.mode;
    report.masterSeed = scenario.masterSeed;
    report.scenarioHash = sha256Hex(scenario.rawBytes);

    // Persistent storage, keyed by (site, partition kind); carried across
    // visits when the scenario enables it.
    std::map<std::pair<SiteKey, ContextKind>,
             std::map<std::string, nlohmann::json>>
        persistentStorage;

    for (size_t v = 0; v < scenario.visitPlan.size(); ++v)
    {
        auto const& visit = scenario.visitPlan[v];
        auto const& site = scenario.sites[visit.siteIndex];
        auto const& page = site.pages[visit.pageIndex];
        auto const& device = scenario.devices[visit.deviceIndex];

        PageSession session;
        session.pageOrigin = page.origin;
        session.site = site.key;
        session.device = &device;
        session.session = SessionSeed{deriveSessionSeed(scenario.masterSeed, v)};
        session.pcfEnabled =
            scenario.pcfDisabledSites.count(site.key) == 0;

        if (scenario.persistentStorage)
        {
            if (scenario.mode == RunMode::BASELINE)
            {
                session.normalPartition.storage =
                    persistentStorage[{site.key, ContextKind::BASELINE}];
            }
            else
            {
                session.normalPartition.storage =
                    persistentStorage[{site.key, ContextKind::NORMAL}];
                session.pcfPartition.storage =
                    persistentStorage[{site.key, ContextKind::PCF}];
            }
        }

        auto prepared = prepareScripts(scenario, page);
        std::vector<Script> runnable;
        runnable.reserve(prepared.size());
        for (auto const& p : prepared)
        {
            runnable.push_back(p.script);
        }

        std::vector<ScriptResult> results;
        if (scenario.mode == RunMode::BASELINE)
        {
            results = executePageBaseline(session, runnable);
        }
        else
        {
            results = executePage(session, runnable);
        }

        // Merge the preparation diagnostics: scripts without a bound program
        // never ran, so drop the spurious "no instructions" outcome state.
        for (size_t i = 0; i < results.size(); ++i)
        {
            if (!prepared[i].diagnostics.empty())
            {
                results[i].outcome.reset();
                results[i].diagnostics = prepared[i].diagnostics;
            }
        }

        if (scenario.persistentStorage)
        {
            if (scenario.mode == RunMode::BASELINE)
            {
                persistentStorage[{site.key, ContextKind::BASELINE}] =
                    session.normalPartition.storage;
            }
            else
            {
                persistentStorage[{site.key, ContextKind::NORMAL}] =
                    session.normalPartition.storage;
                persistentStorage[{site.key, ContextKind::PCF}] =
                    session.pcfPartition.storage;
            }
        }

        VisitReport visitReport;
        visitReport.visitIndex = v;
        visitReport.deviceId = device.deviceId;
        visitReport.site = site.key;
        visitReport.pageOrigin = page.origin;
        visitReport.sessionIndex = visit.sessionIndex;
        visitReport.sessionSeed = session.session.value;
        visitReport.pcfEnabled = session.pcfEnabled;
        visitReport.scripts = std::move(results);
        report.visits.push_back(std::move(visitReport));
    }

    report.deliveredIdentifiers = extractDeliveredIdentifiers(report.visits);
    report.metrics = computeMetrics(report.deliveredIdentifiers);
    return report;
}

std::vector<DeliveredIdentifier>
extractDeliveredIdentifiers(std::vector<VisitReport> const& visits)
{
    std::vector<DeliveredIdentifier> out;
    for (auto const& visit : visits)
    {
        for (auto const& script : visit.scripts)
        {
            if (!script.outcome)
            {
                continue;
            }
            for (auto const& attempt : script.outcome->comms)
            {
                if (!attempt.verdict.allowed ||
                    payloadKindOf(attempt.purpose) != PayloadKind::IDENTIFIER)
                {
                    continue;
                }
                auto const& payload = attempt.verdict.deliveredPayload;
                auto key = std::string(purposeToken(attempt.purpose));
                if (!payload.is_object() || !payload.contains(key))
                {
                    continue; // unfiltered malformed payloads carry no id
                }
                auto const& value = payload.at(key);
                out.push_back(DeliveredIdentifier{
                    visit.deviceId, visit.site, attempt.purpose,
                    valueText(value)});
            }
        }
    }
    return out;
}

Metrics
computeMetrics(std::vector<DeliveredIdentifier> const& delivered)
{
    Metrics metrics;

    // device -> site -> set of delivered values.
    std::map<std::string, std::map<SiteKey, std::set<std::string>>> byDevice;
    for (auto const& d : delivered)
    {
        byDevice[d.deviceId][d.site].insert(d.value);
    }

    for (auto const& [deviceId, sites] : byDevice)
    {
        std::vector<std::pair<SiteKey, std::set<std::string> const*>> list;
        list.reserve(sites.size());
        for (auto const& [site, values] : sites)
        {
            list.emplace_back(site, &values);
        }
        for (size_t i = 0; i < list.size(); ++i)
        {
            for (size_t j = i + 1; j < list.size(); ++j)
            {
                bool linkable = false;
                for (auto const& value : *list[i].second)
                {
                    if (list[j].second->count(value) != 0)
                    {
                        linkable = true;
                        break;
                    }
                }
                if (linkable)
                {
                    ++metrics.crossSiteLinkablePairs;
                }
            }
        }
    }

    // Stability: (device, site) groups with at least two deliveries.
    std::map<std::pair<std::string, SiteKey>, std::vector<std::string>>
        groups;
    for (auto const& d : delivered)
    {
        groups[{d.deviceId, d.site}].push_back(d.value);
    }
    int64_t eligible = 0;
    int64_t stable = 0;
    for (auto const& [key, values] : groups)
    {
        if (values.size() < 2)
        {
            continue;
        }
        ++eligible;
        bool allEqual = true;
        for (auto const& value : values)
        {
            if (value != values.front())
            {
                allEqual = false;
                break;
            }
        }
        if (allEqual)
        {
            ++stable;
        }
    }
    if (eligible > 0)
    {
        metrics.intraSiteStability =
            static_cast<double>(stable) / static_cast<double>(eligible);
    }

    // Uniqueness: per site, distinct values over devices delivering.
    std::map<SiteKey, std::set<std::string>> siteValues;
    std::map<SiteKey, std::set<std::string>> siteDevices;
    for (auto const& d : delivered)
    {
        siteValues[d.site].insert(d.value);
        siteDevices[d.site].insert(d.deviceId);
    }
    for (auto const& [site, values] : siteValues)
    {
        auto devices = siteDevices[site].size();
        metrics.perSiteUniqueness[site] =
            static_cast<double>(values.size()) / static_cast<double>(devices);
    }
    return metrics;
}

Metrics
linkabilityMetrics(ScenarioReport const& report)
{
    return computeMetrics(extractDeliveredIdentifiers(report.visits));
}

nlohmann::json
reportToJson(ScenarioReport const& report)
{
    nlohmann::json out{
        {"schema", 1},
        {"tool", {{"name", TOOL_NAME}, {"version", TOOL_VERSION}}},
        {"mode", runModeToken(report.mode)},
        {"master_seed", report.masterSeed},
        {"scenario_hash", report.scenarioHash},
    };

    auto visits = nlohmann::json::array();
    for (auto const& visit : report.visits)
    {
        auto scripts = nlohmann::json::array();
        for (auto const& script : visit.scripts)
        {
            scripts.push_back(scriptResultToJson(script));
        }
        visits.push_back(nlohmann::json{
            {"visit_index", visit.visitIndex},
            {"device_id", visit.deviceId},
            {"site", visit.site.value},
            {"page_origin", visit.pageOrigin.serialize()},
            {"session_index", visit.sessionIndex},
            {"session_seed", visit.sessionSeed},
            {"pcf_enabled", visit.pcfEnabled},
            {"scripts", std::move(scripts)},
        });
    }
    out["visits"] = std::move(visits);

    auto delivered = nlohmann::json::array();
    for (auto const& d : report.deliveredIdentifiers)
    {
        delivered.push_back(nlohmann::json{
            {"device_id", d.deviceId},
            {"site", d.site.value},
            {"purpose", purposeToken(d.purpose)},
            {"value", d.value},
        });
    }
    out["delivered_identifiers"] = std::move(delivered);

    nlohmann::json metrics{
        {"cross_site_linkable_pairs", report.metrics.crossSiteLinkablePairs},
    };
    metrics["intra_site_stability"] =
        report.metrics.intraSiteStability
            ? nlohmann::json(fixed6(*report.metrics.intraSiteStability))
            : nlohmann::json(nullptr);
    nlohmann::json uniqueness = nlohmann::json::object();
    for (auto const& [site, ratio] : report.metrics.perSiteUniqueness)
    {
        uniqueness[site.value] = fixed6(ratio);
    }
    metrics["per_site_uniqueness"] = std::move(uniqueness);
    out["metrics"] = std::move(metrics);
    return out;
}

std::string
renderReport(ScenarioReport const& report)
{
    return reportToJson(report).dump(2) + "\n";
}

} // namespace pcf
