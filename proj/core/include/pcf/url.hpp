// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace pcf
{

// Minimal absolute-URL model: scheme://host[:port][/path...]. Scheme and
// host are stored lowercase. Userinfo is rejected; IPv6 hosts are stored
// without brackets.
struct Url
{
    std::string scheme;
    std::string host;
    std::optional<uint16_t> port;
    std::string pathAndRest;

    uint16_t effectivePort() const;
};

std::optional<Url> parseUrl(std::string_view text);

// scheme + host + port triple identifying the serving origin.
struct Origin
{
    std::string scheme;
    std::string host;
    uint16_t port = 0;

    auto operator<=>(Origin const&) const = default;

    // "https://host" with the port omitted when it is the scheme default.
    std::string serialize() const;
};

std::optional<Origin> parseOrigin(std::string_view text);
Origin originOf(Url const& url);

} // namespace pcf
