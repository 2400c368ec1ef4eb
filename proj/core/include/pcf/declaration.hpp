// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "pcf/purpose.hpp"
#include "pcf/url.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pcf
{

using HeaderList = std::vector<std::pair<std::string, std::string>>;

enum class DeclaredVia
{
    NONE,
    HEADER,
    ATTRIBUTE,
    BOTH,
};

std::string_view declaredViaToken(DeclaredVia via);

// Provenance and PCF status of one script on a page. Parse failures fail
// closed: a declaration that could not be understood keeps pcfFlag == false
// and carries diagnostics, so the script runs in the normal context.
struct ScriptDeclaration
{
    std::string scriptId;
    bool external = false;
    std::string srcUrl;     // external scripts: the (raw) src attribute
    std::string inlineBody; // inline scripts: the element body text
    std::optional<Origin> providerOrigin;
    bool pcfFlag = false;
    DeclaredVia declaredVia = DeclaredVia::NONE;
    PurposeSet purposes; // empty set: all purposes permitted
    std::vector<std::string> diagnostics;
};

struct HeaderDeclaration
{
    bool pcfFlag = false;
    PurposeSet purposes;
    std::vector<std::string> diagnostics;
};

// Scans an ordered header list for the PCF response header (names compared
// case-insensitively, first PCF entry wins). Value grammar: the bare token
// "1", or "purposes=" followed by space-separated purpose tokens. Anything
// else rejects the declaration with a diagnostic.
HeaderDeclaration parsePcfHeader(HeaderList const& headers);

// Parses a restricted HTML subset in which only well-formed <script>
// elements (optional src / pcf attributes) are recognized; all other text is
// opaque. perScriptHeaders maps an external script's src to the response
// headers its fetch returned. pageOrigin is the serving origin for inline
// scripts. Declarations come back in document order. Throws HtmlParseError
// when the subset itself is malformed (unterminated tag or element).
std::vector<ScriptDeclaration>
parseScriptDeclarations(std::string_view pageHtml,
                        std::map<std::string, HeaderList> const& perScriptHeaders,
                        std::optional<Origin> const& pageOrigin = std::nullopt);

bool isMarkedAsPcf(ScriptDeclaration const& decl);

} // namespace pcf
