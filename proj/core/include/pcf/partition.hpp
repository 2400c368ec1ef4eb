// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <json.hpp>

#include <deque>
#include <map>
#include <string>

namespace pcf
{

// The complete world one execution context can read or write: the four
// script-to-script channels. A page session owns two of these, one per
// context kind, and no operation ever aliases them.
struct ExecutionPartition
{
    std::map<std::string, nlohmann::json> globals;
    std::map<std::string, nlohmann::json> dom;
    std::map<std::string, std::deque<nlohmann::json>> events;
    std::map<std::string, nlohmann::json> storage;

    bool operator==(ExecutionPartition const&) const = default;

    nlohmann::json snapshot() const;
};

} // namespace pcf
