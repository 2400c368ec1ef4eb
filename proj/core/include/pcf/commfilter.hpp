// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "pcf/purpose.hpp"
#include "pcf/site.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pcf
{

enum class Channel
{
    PAGE,     // message to the embedding page context
    EXTERNAL, // fetch to an external server
};

std::string_view channelToken(Channel c);

enum class BlockReason
{
    PURPOSE_NOT_DECLARED,
    MALFORMED_PAYLOAD,
    PAYLOAD_KIND_MISMATCH,
    INVALID_DESTINATION,
    INSECURE_TRANSPORT,
    BUDGET_EXHAUSTED,
};

std::string_view blockReasonToken(BlockReason r);

struct OutboundMessage
{
    Channel channel = Channel::PAGE;
    std::string destinationUrl; // external only
    Purpose purpose = Purpose::BOT_DETECTION;
    nlohmann::json payload;
};

// Allowed carries the payload as actually delivered (identifier values are
// replaced by their salted pseudonyms before leaving the context).
struct Verdict
{
    bool allowed = false;
    BlockReason reason = BlockReason::MALFORMED_PAYLOAD;
    nlohmann::json deliveredPayload;
};

struct TranscriptEntry
{
    Channel channel = Channel::PAGE;
    std::string destination;
    Purpose purpose = Purpose::BOT_DETECTION;
    bool filtered = true; // false for baseline / normal-context traffic
    bool allowed = false;
    std::optional<BlockReason> reason;
    nlohmann::json deliveredPayload;

    nlohmann::json toJson() const;
};

// Per-session communication state: which one-shot budgets are consumed plus
// the append-only transcript of every attempt, allowed or not.
struct FilterLedger
{
    std::set<Purpose> usedPage;
    std::set<std::pair<Purpose, SiteKey>> usedExternal;
    std::vector<TranscriptEntry> transcript;
};

// Inputs for identifier pseudonymization. pageSite is the visited site: all
// identifier payloads leaving a session are salted with it, so the same
// device yields unlinkable pseudonyms on different sites no matter where the
// message is addressed.
struct SaltContext
{
    std::array<uint8_t, 32> clientSecret{};
    SiteKey pageSite;
    std::optional<std::string> userId;
};

// SHA-256(secret || ":" || site [|| ":" || user]) — deterministic per
// (secret, site, user) triple.
std::array<uint8_t, 32> domainSalt(std::array<uint8_t, 32> const& clientSecret,
                                   SiteKey const& site,
                                   std::optional<std::string> const& userId =
                                       std::nullopt);

// hex(SHA-256(salt || ":" || id)), 64 lowercase hex chars. Throws
// EmptyIdentifier on an empty id.
std::string hashIdentifier(std::string_view id,
                           std::array<uint8_t, 32> const& salt);

// Applies the PCF communication policy in order: declared purpose, payload
// envelope shape, payload kind, HTTPS-only egress, one-shot budget, and
// finally identifier pseudonymization. Exactly one transcript entry is
// appended per call; blocked attempts consume no budget.
Verdict requestCommunication(FilterLedger& ledger, PurposeSet const& gateScope,
                             OutboundMessage const& msg,
                             SaltContext const& saltContext);

// Unfiltered delivery used outside the PCF context (normal-context scripts
// and baseline mode): always allowed, payload untouched, recorded in the
// transcript with filtered == false.
Verdict recordUnfiltered(FilterLedger& ledger, OutboundMessage const& msg);

} // namespace pcf
