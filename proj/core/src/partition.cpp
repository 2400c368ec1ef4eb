// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "pcf/partition.hpp"

namespace pcf
{

nlohmann::json
ExecutionPartition::snapshot() const
{
    nlohmann::json out;
    out["globals"] = globals;
    out["dom"] = dom;
    nlohmann::json ev = nlohmann::json::object();
    for (auto const& [name, queue] : events)
    {
        ev[name] = nlohmann::json::array();
        for (auto const& value : queue)
        {
            ev[name].push_back(value);
        }
    }
    out["events"] = ev;
    out["storage"] = storage;
    return out;
}

} // namespace pcf
