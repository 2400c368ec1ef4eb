// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace pcf
{

// Registrable domain (public suffix plus one label), the unit that groups
// hosts run by one organization. Budgets and identifier salts are keyed by
// SiteKey, never by full host, so shop.example.com and coffee.example.com
// count as one site.
struct SiteKey
{
    std::string value;

    auto operator<=>(SiteKey const&) const = default;
};

// Maps a hostname to its SiteKey using the bundled public-suffix snapshot
// (longest-match rules, wildcard and exception entries supported). Hosts that
// are themselves public suffixes and IP literals map to themselves. Throws
// InvalidHost on empty or malformed input.
SiteKey siteOf(std::string_view host);

// Version line of the bundled snapshot, for report metadata and tests.
std::string const& publicSuffixSnapshotVersion();

} // namespace pcf
