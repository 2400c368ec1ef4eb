// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "pcf/context.hpp"
#include "pcf/scenario.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace pcf
{

// One identifier-kind payload that actually left a session, attributed to
// the visited site. The linkability metrics are pure functions of this list.
struct DeliveredIdentifier
{
    std::string deviceId;
    SiteKey site;
    Purpose purpose = Purpose::PER_DOMAIN_TRACKING;
    std::string value;
};

struct Metrics
{
    // (device, site-pair) combinations whose delivered identifier values
    // collide across two different sites — the browsing-history signal.
    int64_t crossSiteLinkablePairs = 0;
    // Fraction of (device, site) groups with >= 2 deliveries whose values
    // all agree; empty when no group qualifies.
    std::optional<double> intraSiteStability;
    // Per site: distinct identifier values / devices delivering there.
    std::map<SiteKey, double> perSiteUniqueness;
};

struct VisitReport
{
    size_t visitIndex = 0;
    std::string deviceId;
    SiteKey site;
    Origin pageOrigin;
    uint64_t sessionIndex = 0;
    uint64_t sessionSeed = 0;
    bool pcfEnabled = true;
    std::vector<ScriptResult> scripts;
};

struct ScenarioReport
{
    RunMode mode = RunMode::PCF;
    uint64_t masterSeed = 0;
    std::string scenarioHash; // SHA-256 of the scenario bytes
    std::vector<VisitReport> visits;
    std::vector<DeliveredIdentifier> deliveredIdentifiers;
    Metrics metrics;
};

// hash-derived, reproducible per-visit seed.
uint64_t deriveSessionSeed(uint64_t masterSeed, uint64_t visitIndex);

// Executes the visit plan in order. PCF mode applies the full protocol;
// baseline mode runs every script with authentic values, a single partition
// and unfiltered communications. Deterministic given the scenario bytes.
ScenarioReport runScenario(Scenario const& scenario);

Metrics computeMetrics(std::vector<DeliveredIdentifier> const& delivered);

// Recomputes the delivered-identifier list and metrics from the per-script
// transcripts, so a report can be checked against itself.
std::vector<DeliveredIdentifier>
extractDeliveredIdentifiers(std::vector<VisitReport> const& visits);
Metrics linkabilityMetrics(ScenarioReport const& report);

// Report serialization. Numbers with fractional parts are rendered with
// fixed six-decimal formatting so identical runs produce identical bytes.
nlohmann::json reportToJson(ScenarioReport const& report);
std::string renderReport(ScenarioReport const& report);

} // namespace pcf
