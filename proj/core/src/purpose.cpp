// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "pcf/purpose.hpp"

namespace pcf
{

std::string_view
purposeToken(Purpose p)
{
    switch (p)
    {
    case Purpose::BOT_DETECTION:
        return "bot-detection";
    case Purpose::FRAUD_DETECTION:
        return "fraud-detection";
    case Purpose::TWO_FACTOR_AUTH:
        return "two-factor-auth";
    case Purpose::PER_DOMAIN_TRACKING:
        return "per-domain-tracking";
    case Purpose::SOFTWARE_OUTDATED:
        return "software-outdated";
    }
    return "unknown";
}

std::optional<Purpose>
parsePurpose(std::string_view token)
{
    for (auto p : ALL_PURPOSES)
    {
        if (purposeToken(p) == token)
        {
            return p;
        }
    }
    return std::nullopt;
}

PayloadKind
payloadKindOf(Purpose p)
{
    return p == Purpose::PER_DOMAIN_TRACKING ? PayloadKind::IDENTIFIER
                                             : PayloadKind::BOOLEAN;
}

bool
purposeInScope(PurposeSet const& scope, Purpose p)
{
    return scope.empty() || scope.count(p) != 0;
}

} // namespace pcf
