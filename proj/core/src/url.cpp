// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "pcf/url.hpp"

#include <algorithm>
#include <cctype>

namespace pcf
{

namespace
{

std::string
toLower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return out;
}

bool
validSchemeChar(char c, bool first)
{
    if (std::isalpha(static_cast<unsigned char>(c)))
    {
        return true;
    }
    return !first && (std::isdigit(static_cast<unsigned char>(c)) ||
                      c == '+' || c == '-' || c == '.');
}

bool
validHostChar(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
           c == '.' || c == '_';
}

} // namespace

uint16_t
Url::effectivePort() const
{
    if (port)
    {
        return *port;
    }
    if (scheme == "https")
    {
        return 443;
    }
    if (scheme == "http")
    {
        return 80;
    }
    return 0;
}

std::optional<Url>
parseUrl(std::string_view text)
{
    auto sep = text.find("://");
    if (sep == std::string_view::npos || sep == 0)
    {
        return std::nullopt;
    }
    std::string_view scheme = text.substr(0, sep);
    for (size_t i = 0; i < scheme.size(); ++i)
    {
        if (!validSchemeChar(scheme[i], i == 0))
        {
            return std::nullopt;
        }
    }

    std::string_view rest = text.substr(sep + 3);
    auto authorityEnd = rest.find_first_of("/?#");
    std::string_view authority = rest.substr(0, authorityEnd);
    std::string_view pathAndRest =
        authorityEnd == std::string_view::npos ? "" : rest.substr(authorityEnd);

    if (authority.empty() || authority.find('@') != std::string_view::npos)
    {
        return std::nullopt;
    }

    Url url;
    url.scheme = toLower(scheme);
    url.pathAndRest = std::string(pathAndRest);

    std::string_view hostPart = authority;
    if (authority.front() == '[')
    {
        // IPv6 literal.
        auto close = authority.find(']');
        if (close == std::string_view::npos)
        {
            return std::nullopt;
        }
        hostPart = authority.substr(1, close - 1);
        std::string_view after = authority.substr(close + 1);
        if (!after.empty())
        {
            if (after.front() != ':')
            {
                return std::nullopt;
            }
            after.remove_prefix(1);
            int value = 0;
            if (after.empty() || after.size() > 5)
            {
                return std::nullopt;
            }
            for (char c : after)
            {
                if (!std::isdigit(static_cast<unsigned char>(c)))
                {
                    return std::nullopt;
                }
                value = value * 10 + (c - '0');
            }
            if (value < 1 || value > 65535)
            {
                return std::nullopt;
            }
            url.port = static_cast<uint16_t>(value);
        }
        if (hostPart.empty())
        {
            return std::nullopt;
        }
        url.host = toLower(hostPart);
        return url;
    }

    auto colon = authority.rfind(':');
    if (colon != std::string_view::npos)
    {
        hostPart = authority.substr(0, colon);
        std::string_view portPart = authority.substr(colon + 1);
        int value = 0;
        if (portPart.empty() || portPart.size() > 5)
        {
            return std::nullopt;
        }
        for (char c : portPart)
        {
            if (!std::isdigit(static_cast<unsigned char>(c)))
            {
                return std::nullopt;
            }
            value = value * 10 + (c - '0');
        }
        if (value < 1 || value > 65535)
        {
            return std::nullopt;
        }
        url.port = static_cast<uint16_t>(value);
    }

    if (hostPart.empty() || hostPart.front() == '.' || hostPart.back() == '.')
    {
        return std::nullopt;
    }
    for (char c : hostPart)
    {
        if (!validHostChar(c))
        {
            return std::nullopt;
        }
    }
    if (hostPart.find("..") != std::string_view::npos)
    {
        return std::nullopt;
    }
    url.host = toLower(hostPart);
    return url;
}

std::string
Origin::serialize() const
{
    std::string out = scheme + "://" + host;
    bool defaultPort = (scheme == "https" && port == 443) ||
                       (scheme == "http" && port == 80);
    if (!defaultPort && port != 0)
    {
        out += ":" + std::to_string(port);
    }
    return out;
}

std::optional<Origin>
parseOrigin(std::string_view text)
{
    auto url = parseUrl(text);
    if (!url || (!url->pathAndRest.empty() && url->pathAndRest != "/"))
    {
        return std::nullopt;
    }
    return originOf(*url);
}

Origin
originOf(Url const& url)
{
    return Origin{url.scheme, url.host, url.effectivePort()};
}

} // namespace pcf
