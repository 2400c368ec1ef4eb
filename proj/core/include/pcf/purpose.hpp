// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace pcf
{

// Closed set of legitimate communication purposes. Every purpose fixes the
// payload kind a message may carry; extending the set means adding an entry
// here and deciding its kind.
enum class Purpose
{
    BOT_DETECTION,
    FRAUD_DETECTION,
    TWO_FACTOR_AUTH,
    PER_DOMAIN_TRACKING,
    SOFTWARE_OUTDATED,
};

enum class PayloadKind
{
    BOOLEAN,
    IDENTIFIER,
};

constexpr std::array<Purpose, 5> ALL_PURPOSES = {
    Purpose::BOT_DETECTION, Purpose::FRAUD_DETECTION, Purpose::TWO_FACTOR_AUTH,
    Purpose::PER_DOMAIN_TRACKING, Purpose::SOFTWARE_OUTDATED};

std::string_view purposeToken(Purpose p);
std::optional<Purpose> parsePurpose(std::string_view token);
PayloadKind payloadKindOf(Purpose p);

// Declared purpose scope. Empty means "all purposes permitted".
using PurposeSet = std::set<Purpose>;

bool purposeInScope(PurposeSet const& scope, Purpose p);

} // namespace pcf
