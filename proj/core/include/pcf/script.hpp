// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "pcf/commfilter.hpp"
#include "pcf/declaration.hpp"
#include "pcf/device.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pcf
{

struct ExecutionContext;

// Straight-line instruction set standing in for fingerprinting scripts.
// Expressive enough to read the attribute surface, exercise every blocked
// script-to-script channel, and attempt outbound messages; nothing more.
enum class Opcode
{
    CONST,          // reg <- literal
    READ_API,       // reg <- attribute value via the context
    CONCAT,         // reg <- text(a) + text(b)
    HASH,           // reg <- hex(SHA-256(text(src)))
    SEND_PAGE,      // message to the page context
    FETCH,          // message to an external url
    STORE,          // storage[key] <- reg
    LOAD,           // reg <- storage[key]
    GLOBAL_SET,     // globals[name] <- reg
    GLOBAL_GET,     // reg <- globals[name]
    DOM_SET,        // dom[selector] <- reg
    DOM_GET,        // reg <- dom[selector]
    EVENT_DISPATCH, // push reg onto the named event queue
    EVENT_POLL,     // reg <- pop front of the named event queue
};

std::string_view opcodeToken(Opcode op);

struct Instruction
{
    Opcode op = Opcode::CONST;
    int reg0 = -1; // destination / payload register
    int reg1 = -1;
    int reg2 = -1;
    std::string name; // key / selector / global / event / url literal
    AttributeName attribute = AttributeName::USER_AGENT;
    Purpose purpose = Purpose::BOT_DETECTION;
    nlohmann::json literal;
};

struct Script
{
    ScriptDeclaration declaration;
    int registerCount = 16;
    std::vector<Instruction> instructions;
};

// Execution stops after this many instructions and reports budget_exhausted.
constexpr size_t STEP_BUDGET = 10'000;
constexpr int MAX_REGISTERS = 256;

enum class HaltReason
{
    COMPLETED,
    BUDGET_EXHAUSTED,
};

enum class ValueSource
{
    REAL,
    MASKED,
};

struct ApiRead
{
    AttributeName attribute;
    ValueSource source;
    nlohmann::json value;
};

struct CommAttempt
{
    Channel channel;
    std::string destination;
    Purpose purpose;
    Verdict verdict;
};

struct ScriptOutcome
{
    std::vector<nlohmann::json> registers;
    std::vector<ApiRead> apiReads;
    std::vector<CommAttempt> comms;
    HaltReason halt = HaltReason::COMPLETED;
};

// Parses a JSON program: an array of {"op": ..., "args": [...]} objects.
// Structural or semantic problems (unknown op, bad register token, unknown
// purpose or attribute, relative FETCH url, empty program) come back as
// diagnostics and reject the script before execution.
struct CompiledProgram
{
    std::vector<Instruction> instructions;
    std::vector<std::string> diagnostics;

    bool ok() const
    {
        return diagnostics.empty();
    }
};

CompiledProgram compileProgram(nlohmann::json const& program,
                               int registerCount);

// Static validation applied before any execution: non-empty program, sane
// register count, register operands in range, absolute FETCH urls. Returns
// the reasons the script must be rejected, empty when it may run.
std::vector<std::string> validateScript(Script const& script);

// Text form used by CONCAT/HASH and payload stringification: strings stay
// raw, everything else serializes as compact JSON.
std::string valueText(nlohmann::json const& value);

// Executes a validated script against a context. Blocked communications do
// not abort execution; every attempt lands in the outcome trace.
ScriptOutcome runScript(Script const& script, ExecutionContext& ctx);

} // namespace pcf
