// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "pcf/site.hpp"

#include "pcf/detail/embedded_data.hpp"
#include "pcf/errors.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <vector>

namespace pcf
{

namespace
{

struct SuffixRule
{
    std::vector<std::string> labels; // right-to-left, "*" allowed
    bool exception = false;
};

struct SuffixTable
{
    std::vector<SuffixRule> rules;
    std::string version;
};

std::vector<std::string>
splitLabels(std::string_view host)
{
    std::vector<std::string> labels;
    size_t start = 0;
    while (start <= host.size())
    {
        auto dot = host.find('.', start);
        if (dot == std::string_view::npos)
        {
            labels.emplace_back(host.substr(start));
            break;
        }
        labels.emplace_back(host.substr(start, dot - start));
        start = dot + 1;
    }
    std::reverse(labels.begin(), labels.end());
    return labels;
}

SuffixTable
parseSnapshot(char const* text)
{
    SuffixTable table;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
    {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
        {
            line.pop_back();
        }
        if (line.empty())
        {
            continue;
        }
        if (line.rfind("//", 0) == 0)
        {
            if (table.version.empty() &&
                line.find("version") != std::string::npos)
            {
                table.version = line.substr(2);
                while (!table.version.empty() && table.version.front() == ' ')
                {
                    table.version.erase(table.version.begin());
                }
            }
            continue;
        }
        SuffixRule rule;
        std::string_view body = line;
        if (body.front() == '!')
        {
            rule.exception = true;
            body.remove_prefix(1);
        }
        rule.labels = splitLabels(body);
        table.rules.push_back(std::move(rule));
    }
    return table;
}

SuffixTable const&
suffixTable()
{
    static SuffixTable const table =
        parseSnapshot(detail::PUBLIC_SUFFIX_SNAPSHOT);
    return table;
}

// right-to-left match of a rule against host labels.
bool
ruleMatches(SuffixRule const& rule, std::vector<std::string> const& labels)
{
    if (rule.labels.size() > labels.size())
    {
        return false;
    }
    for (size_t i = 0; i < rule.labels.size(); ++i)
    {
        if (rule.labels[i] != "*" && rule.labels[i] != labels[i])
        {
            return false;
        }
    }
    return true;
}

bool
isIpv4(std::vector<std::string> const& labels)
{
    if (labels.size() != 4)
    {
        return false;
    }
    for (auto const& label : labels)
    {
        if (label.empty() || label.size() > 3)
        {
            return false;
        }
        int value = 0;
        for (char c : label)
        {
            if (!std::isdigit(static_cast<unsigned char>(c)))
            {
                return false;
            }
            value = value * 10 + (c - '0');
        }
        if (value > 255)
        {
            return false;
        }
    }
    return true;
}

} // namespace

SiteKey
siteOf(std::string_view host)
{
    std::string folded(host);
    std::transform(folded.begin(), folded.end(), folded.begin(),
                   [](unsigned char c) {
                       return static_cast<char>(std::tolower(c));
                   });

    if (folded.empty() || folded.front() == '.' || folded.back() == '.')
    {
        throw InvalidHost(folded);
    }
    // IPv6 literals carry colons and map to themselves.
    if (folded.find(':') != std::string::npos)
    {
        return SiteKey{folded};
    }
    for (char c : folded)
    {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
              c == '.' || c == '_'))
        {
            throw InvalidHost(folded);
        }
    }
    if (folded.find("..") != std::string::npos)
    {
        throw InvalidHost(folded);
    }

    auto labels = splitLabels(folded);
    if (isIpv4(labels))
    {
        return SiteKey{folded};
    }

    // Public Suffix List semantics: an exception rule beats everything,
    // otherwise the matching rule with the most labels wins, otherwise the
    // implicit "*" rule applies.
    size_t suffixLen = 1;
    SuffixRule const* best = nullptr;
    for (auto const& rule : suffixTable().rules)
    {
        if (!ruleMatches(rule, labels))
        {
            continue;
        }
        if (rule.exception)
        {
            best = &rule;
            break;
        }
        if (rule.labels.size() >= suffixLen)
        {
            suffixLen = rule.labels.size();
            best = &rule;
        }
    }
    if (best && best->exception)
    {
        suffixLen = best->labels.size() - 1;
    }

    size_t registrableLen = std::min(labels.size(), suffixLen + 1);
    std::string out;
    for (size_t i = registrableLen; i-- > 0;)
    {
        out += labels[i];
        if (i != 0)
        {
            out += '.';
        }
    }
    return SiteKey{out};
}

std::string const&
publicSuffixSnapshotVersion()
{
    return suffixTable().version;
}

} // namespace pcf
