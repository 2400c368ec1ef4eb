// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "pcf/context.hpp"

#include <cassert>

namespace pcf
{

std::string_view
contextKindToken(ContextKind kind)
{
    switch (kind)
    {
    case ContextKind::NORMAL:
        return "normal";
    case ContextKind::PCF:
        return "pcf";
    case ContextKind::BASELINE:
        return "baseline";
    }
    return "normal";
}

CommGate::CommGate(FilterLedger& ledger, bool filtered, PurposeSet scope,
                   SaltContext saltContext)
    : mLedger(&ledger)
    , mFiltered(filtered)
    , mScope(std::move(scope))
    , mSaltContext(std::move(saltContext))
{
}

CommGate
CommGate::filtered(FilterLedger& ledger, PurposeSet scope,
                   SaltContext saltContext)
{
    return CommGate(ledger, true, std::move(scope), std::move(saltContext));
}

CommGate
CommGate::open(FilterLedger& ledger)
{
    return CommGate(ledger, false, {}, {});
}

Verdict
CommGate::request(OutboundMessage const& msg)
{
    if (mFiltered)
    {
        return requestCommunication(*mLedger, mScope, msg, mSaltContext);
    }
    return recordUnfiltered(*mLedger, msg);
}

AttributeValue
ExecutionContext::readAttribute(AttributeName attribute) const
{
    if (kind == ContextKind::NORMAL)
    {
        return maskedValue(*device, attribute, session);
    }
    return realValue(*device, attribute);
}

ValueSource
ExecutionContext::valueSource() const
{
    return kind == ContextKind::NORMAL ? ValueSource::MASKED
                                       : ValueSource::REAL;
}

SaltContext
PageSession::saltContext() const
{
    SaltContext ctx;
    ctx.clientSecret = device->clientSecret;
    ctx.pageSite = site;
    ctx.userId = device->userId;
    return ctx;
}

ExecutionContext
PageSession::normalContext()
{
    return ExecutionContext{ContextKind::NORMAL, &normalPartition, device,
                            session, CommGate::open(ledger)};
}

ExecutionContext
PageSession::pcfContext(PurposeSet const& scope)
{
    return ExecutionContext{ContextKind::PCF, &pcfPartition, device, session,
                            CommGate::filtered(ledger, scope, saltContext())};
}

ExecutionContext
PageSession::baselineContext()
{
    return ExecutionContext{ContextKind::BASELINE, &normalPartition, device,
                            session, CommGate::open(ledger)};
}

CommGate
generateAllowedCommunications(ScriptDeclaration const& decl,
                              PageSession& session)
{
    assert(decl.pcfFlag);
    return CommGate::filtered(session.ledger, decl.purposes,
                              session.saltContext());
}

namespace
{

ScriptResult
runOne(Script const& script, ExecutionContext& ctx)
{
    ScriptResult result;
    result.declaration = script.declaration;
    result.kind = ctx.kind;

    result.diagnostics = validateScript(script);
    if (result.diagnostics.empty())
    {
        result.outcome = runScript(script, ctx);
    }
    return result;
}

} // namespace

std::vector<ScriptResult>
executePage(PageSession& session, std::vector<Script> const& scripts)
{
    std::vector<ScriptResult> results;
    results.reserve(scripts.size());
    for (auto const& script : scripts)
    {
        bool pcf = isMarkedAsPcf(script.declaration) && session.pcfEnabled;
        if (pcf)
        {
            auto ctx = session.pcfContext(script.declaration.purposes);
            results.push_back(runOne(script, ctx));
        }
        else
        {
            auto ctx = session.normalContext();
            results.push_back(runOne(script, ctx));
        }
    }
    return results;
}

std::vector<ScriptResult>
executePageBaseline(PageSession& session, std::vector<Script> const& scripts)
{
    std::vector<ScriptResult> results;
    results.reserve(scripts.size());
    for (auto const& script : scripts)
    {
        auto ctx = session.baselineContext();
        results.push_back(runOne(script, ctx));
    }
    return results;
}

} // namespace pcf
