// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "pcf/commfilter.hpp"
#include "pcf/declaration.hpp"
#include "pcf/device.hpp"
#include "pcf/partition.hpp"
#include "pcf/script.hpp"
#include "pcf/url.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pcf
{

// normal: masked attribute reads, unfiltered communications (today's web).
// pcf: authentic reads, filtered one-shot communications.
// baseline: authentic reads, unfiltered communications, no partition split —
// the harness's model of a browser without any protections.
enum class ContextKind
{
    NORMAL,
    PCF,
    BASELINE,
};

std::string_view contextKindToken(ContextKind kind);

// Communication gate bound to a session ledger. PCF contexts get a filtered
// gate scoped to the script's declared purposes; everything else records
// unfiltered deliveries.
class CommGate
{
  public:
    static CommGate filtered(FilterLedger& ledger, PurposeSet scope,
                             SaltContext saltContext);
    static CommGate open(FilterLedger& ledger);

    Verdict request(OutboundMessage const& msg);

    bool isFiltered() const
    {
        return mFiltered;
    }

  private:
    CommGate(FilterLedger& ledger, bool filtered, PurposeSet scope,
             SaltContext saltContext);

    FilterLedger* mLedger;
    bool mFiltered;
    PurposeSet mScope;
    SaltContext mSaltContext;
};

// Everything a running script can observe: one partition, one attribute
// reader, one communication gate. The kind fixes the reader (pcf/baseline
// read authentic values, normal reads masked ones).
struct ExecutionContext
{
    ContextKind kind = ContextKind::NORMAL;
    ExecutionPartition* partition = nullptr;
    DeviceProfile const* device = nullptr;
    SessionSeed session;
    CommGate gate;

    AttributeValue readAttribute(AttributeName attribute) const;
    ValueSource valueSource() const;
};

// One page load by one device. Holds the two disjoint partitions, the
// communication ledger shared by every PCF script of the session, and the
// per-site user preference.
struct PageSession
{
    Origin pageOrigin;
    SiteKey site;
    DeviceProfile const* device = nullptr;
    SessionSeed session;
    bool pcfEnabled = true;
    ExecutionPartition normalPartition;
    ExecutionPartition pcfPartition;
    FilterLedger ledger;

    ExecutionContext normalContext();
    ExecutionContext pcfContext(PurposeSet const& scope);
    ExecutionContext baselineContext();

    SaltContext saltContext() const;
};

// Gate over the session ledger scoped to the declaration's purposes (empty
// set: all purposes). Requires decl.pcfFlag.
CommGate generateAllowedCommunications(ScriptDeclaration const& decl,
                                       PageSession& session);

// Per-script result of a page run. Scripts rejected by static validation
// have no outcome, only diagnostics; the page itself never aborts.
struct ScriptResult
{
    ScriptDeclaration declaration;
    ContextKind kind = ContextKind::NORMAL;
    std::optional<ScriptOutcome> outcome;
    std::vector<std::string> diagnostics;
};

// The client-side dispatch: scripts not marked as PCF — or any script when
// the user disabled PCF for this site — run in the normal context; declared
// scripts run in the PCF context against the shared session ledger.
std::vector<ScriptResult> executePage(PageSession& session,
                                      std::vector<Script> const& scripts);

// Baseline-mode variant: declaration handling is disabled and every script
// runs unpartitioned with authentic values and unfiltered communications.
std::vector<ScriptResult> executePageBaseline(PageSession& session,
                                              std::vector<Script> const& scripts);

} // namespace pcf
