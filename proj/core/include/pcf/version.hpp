// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

namespace pcf
{

constexpr char const* TOOL_NAME = "pcfsim";
constexpr char const* TOOL_VERSION = "1.0.0";

} // namespace pcf
