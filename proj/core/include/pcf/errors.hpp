// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace pcf
{

struct InvalidHost : std::runtime_error
{
    explicit InvalidHost(std::string const& host)
        : std::runtime_error("invalid hostname: '" + host + "'")
    {
    }
};

struct UnknownAttribute : std::runtime_error
{
    explicit UnknownAttribute(std::string const& name)
        : std::runtime_error("unknown attribute: '" + name + "'")
    {
    }
};

struct EmptyIdentifier : std::runtime_error
{
    EmptyIdentifier() : std::runtime_error("identifier must be non-empty")
    {
    }
};

struct HtmlParseError : std::runtime_error
{
    explicit HtmlParseError(std::string const& what)
        : std::runtime_error("html parse error: " + what)
    {
    }
};

// Scenario schema violation; `pointer` is the JSON-pointer location of the
// offending field.
struct ScenarioError : std::runtime_error
{
    ScenarioError(std::string const& pointer, std::string const& what)
        : std::runtime_error("scenario error at '" + pointer + "': " + what)
        , pointer(pointer)
    {
    }

    std::string pointer;
};

} // namespace pcf
