// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "pcf/commfilter.hpp"

#include "pcf/errors.hpp"
#include "pcf/sha256.hpp"
#include "pcf/url.hpp"

namespace pcf
{

std::string_view
channelToken(Channel c)
{
    return c == Channel::PAGE ? "page" : "external";
}

std::string_view
blockReasonToken(BlockReason r)
{
    switch (r)
    {
    case BlockReason::PURPOSE_NOT_DECLARED:
        return "purpose-not-declared";
    case BlockReason::MALFORMED_PAYLOAD:
        return "malformed-payload";
    case BlockReason::PAYLOAD_KIND_MISMATCH:
        return "payload-kind-mismatch";
    case BlockReason::INVALID_DESTINATION:
        return "invalid-destination";
    case BlockReason::INSECURE_TRANSPORT:
        return "insecure-transport";
    case BlockReason::BUDGET_EXHAUSTED:
        return "budget-exhausted";
    }
    return "unknown";
}

nlohmann::json
TranscriptEntry::toJson() const
{
    nlohmann::json out{
        {"channel", channelToken(channel)},
        {"purpose", purposeToken(purpose)},
        {"filtered", filtered},
        {"verdict", allowed ? "allowed" : "blocked"},
    };
    if (channel == Channel::EXTERNAL)
    {
        out["destination"] = destination;
    }
    if (reason)
    {
        out["reason"] = blockReasonToken(*reason);
    }
    if (allowed)
    {
        out["delivered_payload"] = deliveredPayload;
    }
    return out;
}

std::array<uint8_t, 32>
domainSalt(std::array<uint8_t, 32> const& clientSecret, SiteKey const& site,
           std::optional<std::string> const& userId)
{
    Sha256 h;
    h.update(std::span<uint8_t const>(clientSecret.data(), clientSecret.size()));
    h.update(std::string_view(":"));
    h.update(std::string_view(site.value));
    if (userId)
    {
        h.update(std::string_view(":"));
        h.update(std::string_view(*userId));
    }
    return h.finish();
}

std::string
hashIdentifier(std::string_view id, std::array<uint8_t, 32> const& salt)
{
    if (id.empty())
    {
        throw EmptyIdentifier();
    }
    Sha256 h;
    h.update(std::span<uint8_t const>(salt.data(), salt.size()));
    h.update(std::string_view(":"));
    h.update(id);
    return toHex(h.finish());
}

namespace
{

Verdict
blocked(FilterLedger& ledger, OutboundMessage const& msg, BlockReason reason)
{
    TranscriptEntry entry;
    entry.channel = msg.channel;
    entry.destination = msg.destinationUrl;
    entry.purpose = msg.purpose;
    entry.filtered = true;
    entry.allowed = false;
    entry.reason = reason;
    ledger.transcript.push_back(std::move(entry));

    Verdict v;
    v.allowed = false;
    v.reason = reason;
    return v;
}

Verdict
allowed(FilterLedger& ledger, OutboundMessage const& msg, bool filtered,
        nlohmann::json deliveredPayload)
{
    TranscriptEntry entry;
    entry.channel = msg.channel;
    entry.destination = msg.destinationUrl;
    entry.purpose = msg.purpose;
    entry.filtered = filtered;
    entry.allowed = true;
    entry.deliveredPayload = deliveredPayload;
    ledger.transcript.push_back(std::move(entry));

    Verdict v;
    v.allowed = true;
    v.deliveredPayload = std::move(deliveredPayload);
    return v;
}

} // namespace

Verdict
requestCommunication(FilterLedger& ledger, PurposeSet const& gateScope,
                     OutboundMessage const& msg, SaltContext const& saltContext)
{
    // (1) the purpose must be within the declared scope.
    if (!purposeInScope(gateScope, msg.purpose))
    {
        return blocked(ledger, msg, BlockReason::PURPOSE_NOT_DECLARED);
    }

    // (2) payload envelope: a single-key object keyed by the purpose token.
    if (!msg.payload.is_object() || msg.payload.size() != 1 ||
        !msg.payload.contains(purposeToken(msg.purpose)))
    {
        return blocked(ledger, msg, BlockReason::MALFORMED_PAYLOAD);
    }
    auto const& value = msg.payload.at(std::string(purposeToken(msg.purpose)));

    // (3) the value type must match the purpose's payload kind.
    auto kind = payloadKindOf(msg.purpose);
    if (kind == PayloadKind::BOOLEAN && !value.is_boolean())
    {
        return blocked(ledger, msg, BlockReason::PAYLOAD_KIND_MISMATCH);
    }
    if (kind == PayloadKind::IDENTIFIER &&
        (!value.is_string() || value.get<std::string>().empty()))
    {
        return blocked(ledger, msg, BlockReason::PAYLOAD_KIND_MISMATCH);
    }

    // (4) external egress must be HTTPS to a parseable destination.
    std::optional<SiteKey> destinationSite;
    if (msg.channel == Channel::EXTERNAL)
    {
        auto url = parseUrl(msg.destinationUrl);
        if (!url)
        {
            return blocked(ledger, msg, BlockReason::INVALID_DESTINATION);
        }
        if (url->scheme != "https")
        {
            return blocked(ledger, msg, BlockReason::INSECURE_TRANSPORT);
        }
        try
        {
            destinationSite = siteOf(url->host);
        }
        catch (InvalidHost const&)
        {
            return blocked(ledger, msg, BlockReason::INVALID_DESTINATION);
        }
    }

    // (5) one-shot budget per purpose (page) or per purpose and site
    // (external). Blocked attempts never consume budget.
    if (msg.channel == Channel::PAGE)
    {
        if (ledger.usedPage.count(msg.purpose) != 0)
        {
            return blocked(ledger, msg, BlockReason::BUDGET_EXHAUSTED);
        }
    }
    else
    {
        if (ledger.usedExternal.count({msg.purpose, *destinationSite}) != 0)
        {
            return blocked(ledger, msg, BlockReason::BUDGET_EXHAUSTED);
        }
    }

    // (6) identifier payloads leave only as pseudonyms salted with the
    // visited site; booleans pass unchanged.
    nlohmann::json delivered = msg.payload;
    if (kind == PayloadKind::IDENTIFIER)
    {
        auto salt = domainSalt(saltContext.clientSecret, saltContext.pageSite,
                               saltContext.userId);
        delivered[std::string(purposeToken(msg.purpose))] =
            hashIdentifier(value.get<std::string>(), salt);
    }

    if (msg.channel == Channel::PAGE)
    {
        ledger.usedPage.insert(msg.purpose);
    }
    else
    {
        ledger.usedExternal.insert({msg.purpose, *destinationSite});
    }
    return allowed(ledger, msg, true, std::move(delivered));
}

Verdict
recordUnfiltered(FilterLedger& ledger, OutboundMessage const& msg)
{
    return allowed(ledger, msg, false, msg.payload);
}

} // namespace pcf
