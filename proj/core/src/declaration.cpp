// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "pcf/declaration.hpp"

#include "pcf/errors.hpp"

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
equalsIgnoreCase(std::string_view a, std::string_view b)
{
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

std::string_view
trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view>
splitTokens(std::string_view s)
{
    std::vector<std::string_view> out;
    size_t i = 0;
    while (i < s.size())
    {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
        {
            ++i;
        }
        size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])))
        {
            ++i;
        }
        if (i > start)
        {
            out.push_back(s.substr(start, i - start));
        }
    }
    return out;
}

// Parses a space-separated purpose list; nullopt on any unknown token.
std::optional<PurposeSet>
parsePurposeList(std::string_view text, std::string& badToken)
{
    PurposeSet purposes;
    for (auto token : splitTokens(text))
    {
        auto p = parsePurpose(token);
        if (!p)
        {
            badToken = std::string(token);
            return std::nullopt;
        }
        purposes.insert(*p);
    }
    return purposes;
}

struct RawTag
{
    std::map<std::string, std::optional<std::string>> attributes;
    std::string body;
    size_t endPos = 0; // index just past </script...>
};

// Parses one script element starting at `open` (which points at '<'). The
// restricted subset requires a terminated open tag and a closing tag.
RawTag
parseScriptElement(std::string_view html, size_t open)
{
    RawTag tag;
    size_t i = open + 7; // past "<script"

    while (true)
    {
        while (i < html.size() &&
               std::isspace(static_cast<unsigned char>(html[i])))
        {
            ++i;
        }
        if (i >= html.size())
        {
            throw HtmlParseError("unterminated <script> tag");
        }
        if (html[i] == '>')
        {
            ++i;
            break;
        }
        // Attribute name.
        size_t nameStart = i;
        while (i < html.size() && html[i] != '=' && html[i] != '>' &&
               !std::isspace(static_cast<unsigned char>(html[i])))
        {
            ++i;
        }
        if (i == nameStart)
        {
            throw HtmlParseError("malformed attribute in <script> tag");
        }
        std::string name = toLower(html.substr(nameStart, i - nameStart));

        while (i < html.size() &&
               std::isspace(static_cast<unsigned char>(html[i])))
        {
            ++i;
        }
        std::optional<std::string> value;
        if (i < html.size() && html[i] == '=')
        {
            ++i;
            while (i < html.size() &&
                   std::isspace(static_cast<unsigned char>(html[i])))
            {
                ++i;
            }
            if (i >= html.size())
            {
                throw HtmlParseError("unterminated attribute value");
            }
            if (html[i] == '"' || html[i] == '\'')
            {
                char quote = html[i++];
                size_t valueStart = i;
                while (i < html.size() && html[i] != quote)
                {
                    ++i;
                }
                if (i >= html.size())
                {
                    throw HtmlParseError("unterminated attribute value");
                }
                value = std::string(html.substr(valueStart, i - valueStart));
                ++i;
            }
            else
            {
                size_t valueStart = i;
                while (i < html.size() && html[i] != '>' &&
                       !std::isspace(static_cast<unsigned char>(html[i])))
                {
                    ++i;
                }
                value = std::string(html.substr(valueStart, i - valueStart));
            }
        }
        // First occurrence wins, as in HTML.
        tag.attributes.emplace(std::move(name), std::move(value));
    }

    // Body runs to the case-insensitive close tag.
    size_t bodyStart = i;
    while (true)
    {
        auto close = html.find('<', i);
        if (close == std::string_view::npos)
        {
            throw HtmlParseError("missing </script> close tag");
        }
        if (close + 8 <= html.size() &&
            equalsIgnoreCase(html.substr(close, 8), "</script"))
        {
            size_t j = close + 8;
            while (j < html.size() &&
                   std::isspace(static_cast<unsigned char>(html[j])))
            {
                ++j;
            }
            if (j < html.size() && html[j] == '>')
            {
                tag.body = std::string(html.substr(bodyStart, close - bodyStart));
                tag.endPos = j + 1;
                return tag;
            }
        }
        i = close + 1;
    }
}

} // namespace

std::string_view
declaredViaToken(DeclaredVia via)
{
    switch (via)
    {
    case DeclaredVia::NONE:
        return "none";
    case DeclaredVia::HEADER:
        return "header";
    case DeclaredVia::ATTRIBUTE:
        return "attribute";
    case DeclaredVia::BOTH:
        return "both";
    }
    return "none";
}

HeaderDeclaration
parsePcfHeader(HeaderList const& headers)
{
    HeaderDeclaration out;
    for (auto const& [name, rawValue] : headers)
    {
        if (!equalsIgnoreCase(name, "pcf"))
        {
            continue;
        }
        // First PCF header wins; later ones are ignored outright.
        auto value = trim(rawValue);
        if (value == "1")
        {
            out.pcfFlag = true;
        }
        else if (value.rfind("purposes=", 0) == 0)
        {
            auto list = value.substr(9);
            std::string badToken;
            auto purposes = parsePurposeList(list, badToken);
            if (!purposes)
            {
                out.diagnostics.push_back("PCF header rejected: unknown purpose token '" +
                                          badToken + "'");
            }
            else if (purposes->empty())
            {
                out.diagnostics.push_back(
                    "PCF header rejected: empty purpose list");
            }
            else
            {
                out.pcfFlag = true;
                out.purposes = std::move(*purposes);
            }
        }
        else
        {
            out.diagnostics.push_back("PCF header rejected: malformed value '" +
                                      std::string(value) + "'");
        }
        return out;
    }
    return out;
}

std::vector<ScriptDeclaration>
parseScriptDeclarations(std::string_view pageHtml,
                        std::map<std::string, HeaderList> const& perScriptHeaders,
                        std::optional<Origin> const& pageOrigin)
{
    std::vector<ScriptDeclaration> decls;
    size_t i = 0;
    while (i < pageHtml.size())
    {
        auto open = pageHtml.find('<', i);
        if (open == std::string_view::npos)
        {
            break;
        }
        // Skip comments so commented-out markup stays opaque.
        if (pageHtml.substr(open, 4) == "<!--")
        {
            auto end = pageHtml.find("-->", open + 4);
            i = end == std::string_view::npos ? pageHtml.size() : end + 3;
            continue;
        }
        if (open + 7 > pageHtml.size() ||
            !equalsIgnoreCase(pageHtml.substr(open, 7), "<script") ||
            (open + 7 < pageHtml.size() && pageHtml[open + 7] != '>' &&
             !std::isspace(static_cast<unsigned char>(pageHtml[open + 7]))))
        {
            i = open + 1;
            continue;
        }

        auto tag = parseScriptElement(pageHtml, open);
        i = tag.endPos;

        ScriptDeclaration decl;
        decl.scriptId = "script-" + std::to_string(decls.size());

        auto srcIt = tag.attributes.find("src");
        decl.external = srcIt != tag.attributes.end();

        // Attribute mechanism.
        bool attrFlag = false;
        PurposeSet attrPurposes;
        bool attrDeclaresPurposes = false;
        if (auto pcfIt = tag.attributes.find("pcf");
            pcfIt != tag.attributes.end())
        {
            if (!pcfIt->second || trim(*pcfIt->second).empty())
            {
                attrFlag = true; // bare attribute
            }
            else
            {
                std::string badToken;
                auto purposes = parsePurposeList(*pcfIt->second, badToken);
                if (!purposes)
                {
                    decl.diagnostics.push_back(
                        "pcf attribute rejected: unknown purpose token '" +
                        badToken + "'");
                }
                else
                {
                    attrFlag = true;
                    attrDeclaresPurposes = true;
                    attrPurposes = std::move(*purposes);
                }
            }
        }

        // Header mechanism applies only to external scripts; there is no
        // per-resource response for inline ones.
        bool headerFlag = false;
        PurposeSet headerPurposes;
        bool headerDeclaresPurposes = false;
        if (decl.external)
        {
            decl.srcUrl = srcIt->second.value_or("");
            auto url = parseUrl(decl.srcUrl);
            if (!url || (url->scheme != "https" && url->scheme != "http"))
            {
                decl.diagnostics.push_back(
                    "unresolvable script src '" + decl.srcUrl + "'");
                decl.pcfFlag = false;
                decl.declaredVia = DeclaredVia::NONE;
                decls.push_back(std::move(decl));
                continue;
            }
            decl.providerOrigin = originOf(*url);

            auto headersIt = perScriptHeaders.find(decl.srcUrl);
            if (headersIt == perScriptHeaders.end())
            {
                // Fall back to the canonical serialization of the URL.
                headersIt = perScriptHeaders.find(decl.providerOrigin->serialize() +
                                                  url->pathAndRest);
            }
            if (headersIt != perScriptHeaders.end())
            {
                auto header = parsePcfHeader(headersIt->second);
                headerFlag = header.pcfFlag;
                headerDeclaresPurposes = !header.purposes.empty();
                headerPurposes = std::move(header.purposes);
                for (auto& d : header.diagnostics)
                {
                    decl.diagnostics.push_back(std::move(d));
                }
            }
        }
        else
        {
            decl.inlineBody = std::move(tag.body);
            decl.providerOrigin = pageOrigin;
        }

        decl.pcfFlag = attrFlag || headerFlag;
        if (attrFlag && headerFlag)
        {
            decl.declaredVia = DeclaredVia::BOTH;
        }
        else if (attrFlag)
        {
            decl.declaredVia = DeclaredVia::ATTRIBUTE;
        }
        else if (headerFlag)
        {
            decl.declaredVia = DeclaredVia::HEADER;
        }

        // Purposes: union of the explicitly declared lists; a mechanism that
        // declares no list leaves scoping to the other. No list at all means
        // every purpose is permitted.
        if (attrDeclaresPurposes)
        {
            decl.purposes.insert(attrPurposes.begin(), attrPurposes.end());
        }
        if (headerDeclaresPurposes)
        {
            decl.purposes.insert(headerPurposes.begin(), headerPurposes.end());
        }

        decls.push_back(std::move(decl));
    }
    return decls;
}

bool
isMarkedAsPcf(ScriptDeclaration const& decl)
{
    return decl.pcfFlag;
}

} // namespace pcf
