// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

namespace pcf::detail
{

// Contents of core/data/*, embedded at configure time so binaries need no
// runtime data directory.
extern char const PUBLIC_SUFFIX_SNAPSHOT[];
extern char const MASKING_POLICY_JSON[];

} // namespace pcf::detail
