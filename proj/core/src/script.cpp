// Copyright 2026 the pcfsim contributors. Licensed under the Apache
// License, Version 2.0. See the COPYING file at the root of this
// distribution or at http://www.apache.org/licenses/LICENSE-2.0

#include "pcf/script.hpp"

#include "pcf/context.hpp"
#include "pcf/sha256.hpp"
#include "pcf/url.hpp"

#include <cassert>

namespace pcf
{

namespace
{

struct OpSpec
{
    Opcode op;
    std::string_view token;
    // Argument shape, one char per arg: r = register, s = string literal,
    // l = any JSON literal, p = purpose token, a = attribute token,
    // u = absolute url literal.
    std::string_view args;
};

constexpr std::array<OpSpec, 14> OP_SPECS = {{
    {Opcode::CONST, "CONST", "rl"},
    {Opcode::READ_API, "READ_API", "ra"},
    {Opcode::CONCAT, "CONCAT", "rrr"},
    {Opcode::HASH, "HASH", "rr"},
    {Opcode::SEND_PAGE, "SEND_PAGE", "pr"},
    {Opcode::FETCH, "FETCH", "upr"},
    {Opcode::STORE, "STORE", "sr"},
    {Opcode::LOAD, "LOAD", "rs"},
    {Opcode::GLOBAL_SET, "GLOBAL_SET", "sr"},
    {Opcode::GLOBAL_GET, "GLOBAL_GET", "rs"},
    {Opcode::DOM_SET, "DOM_SET", "sr"},
    {Opcode::DOM_GET, "DOM_GET", "rs"},
    {Opcode::EVENT_DISPATCH, "EVENT_DISPATCH", "sr"},
    {Opcode::EVENT_POLL, "EVENT_POLL", "rs"},
}};

OpSpec const*
findSpec(std::string_view token)
{
    for (auto const& spec : OP_SPECS)
    {
        if (spec.token == token)
        {
            return &spec;
        }
    }
    return nullptr;
}

// "r<N>" register tokens.
std::optional<int>
parseRegister(nlohmann::json const& arg)
{
    if (!arg.is_string())
    {
        return std::nullopt;
    }
    auto text = arg.get<std::string>();
    if (text.size() < 2 || text[0] != 'r')
    {
        return std::nullopt;
    }
    int value = 0;
    for (size_t i = 1; i < text.size(); ++i)
    {
        if (text[i] < '0' || text[i] > '9' || value > MAX_REGISTERS)
        {
            return std::nullopt;
        }
        value = value * 10 + (text[i] - '0');
    }
    return value;
}

} // namespace

std::string_view
opcodeToken(Opcode op)
{
    for (auto const& spec : OP_SPECS)
    {
        if (spec.op == op)
        {
            return spec.token;
        }
    }
    return "UNKNOWN";
}

CompiledProgram
compileProgram(nlohmann::json const& program, int registerCount)
{
    CompiledProgram out;
    if (!program.is_array())
    {
        out.diagnostics.push_back("program must be a JSON array");
        return out;
    }
    size_t index = 0;
    for (auto const& entry : program)
    {
        auto where = "instruction " + std::to_string(index);
        ++index;
        if (!entry.is_object() || !entry.contains("op") ||
            !entry.at("op").is_string())
        {
            out.diagnostics.push_back(where + ": expected {\"op\", \"args\"}");
            continue;
        }
        auto token = entry.at("op").get<std::string>();
        auto const* spec = findSpec(token);
        if (!spec)
        {
            out.diagnostics.push_back(where + ": unknown op '" + token + "'");
            continue;
        }
        auto args = entry.value("args", nlohmann::json::array());
        if (!args.is_array() || args.size() != spec->args.size())
        {
            out.diagnostics.push_back(where + ": " + token + " takes " +
                                      std::to_string(spec->args.size()) +
                                      " args");
            continue;
        }

        Instruction inst;
        inst.op = spec->op;
        bool bad = false;
        int regSlot = 0;
        for (size_t a = 0; a < spec->args.size() && !bad; ++a)
        {
            auto const& arg = args[a];
            switch (spec->args[a])
            {
            case 'r':
            {
                auto reg = parseRegister(arg);
                if (!reg || *reg >= registerCount)
                {
                    out.diagnostics.push_back(where + ": bad register " +
                                              arg.dump());
                    bad = true;
                    break;
                }
                (regSlot == 0 ? inst.reg0 : regSlot == 1 ? inst.reg1
                                                         : inst.reg2) = *reg;
                ++regSlot;
                break;
            }
            case 's':
                if (!arg.is_string())
                {
                    out.diagnostics.push_back(where + ": expected string, got " +
                                              arg.dump());
                    bad = true;
                    break;
                }
                inst.name = arg.get<std::string>();
                break;
            case 'u':
            {
                if (!arg.is_string() || !parseUrl(arg.get<std::string>()))
                {
                    out.diagnostics.push_back(
                        where + ": FETCH needs an absolute url, got " +
                        arg.dump());
                    bad = true;
                    break;
                }
                inst.name = arg.get<std::string>();
                break;
            }
            case 'p':
            {
                auto purpose =
                    arg.is_string() ? parsePurpose(arg.get<std::string>())
                                    : std::nullopt;
                if (!purpose)
                {
                    out.diagnostics.push_back(where + ": bad purpose " +
                                              arg.dump());
                    bad = true;
                    break;
                }
                inst.purpose = *purpose;
                break;
            }
            case 'a':
            {
                auto attribute =
                    arg.is_string() ? parseAttribute(arg.get<std::string>())
                                    : std::nullopt;
                if (!attribute)
                {
                    out.diagnostics.push_back(where + ": bad attribute " +
                                              arg.dump());
                    bad = true;
                    break;
                }
                inst.attribute = *attribute;
                break;
            }
            case 'l':
                inst.literal = arg;
                break;
            }
        }
        if (!bad)
        {
            out.instructions.push_back(std::move(inst));
        }
    }
    if (out.instructions.empty() && out.diagnostics.empty())
    {
        out.diagnostics.push_back("program has no instructions");
    }
    return out;
}

std::vector<std::string>
validateScript(Script const& script)
{
    std::vector<std::string> problems;
    if (script.registerCount < 1 || script.registerCount > MAX_REGISTERS)
    {
        problems.push_back("register count out of range");
        return problems;
    }
    if (script.instructions.empty())
    {
        problems.push_back("script has no instructions");
        return problems;
    }
    size_t index = 0;
    for (auto const& inst : script.instructions)
    {
        auto where = "instruction " + std::to_string(index);
        ++index;
        for (int reg : {inst.reg0, inst.reg1, inst.reg2})
        {
            if (reg != -1 && (reg < 0 || reg >= script.registerCount))
            {
                problems.push_back(where + ": register out of range");
            }
        }
        if (inst.op == Opcode::FETCH && !parseUrl(inst.name))
        {
            problems.push_back(where + ": FETCH url must be absolute");
        }
    }
    return problems;
}

std::string
valueText(nlohmann::json const& value)
{
    if (value.is_string())
    {
        return value.get<std::string>();
    }
    return value.dump();
}

namespace
{

// Scalar payloads wrap into the single-key purpose envelope; object payloads
// pass through verbatim so scripts can also attempt non-conforming shapes.
nlohmann::json
buildPayload(Purpose purpose, nlohmann::json const& value)
{
    if (value.is_object())
    {
        return value;
    }
    return nlohmann::json{{std::string(purposeToken(purpose)), value}};
}

} // namespace

ScriptOutcome
runScript(Script const& script, ExecutionContext& ctx)
{
    assert(ctx.partition != nullptr && ctx.device != nullptr);

    ScriptOutcome out;
    out.registers.assign(static_cast<size_t>(script.registerCount),
                         nlohmann::json());
    auto& regs = out.registers;
    auto& partition = *ctx.partition;

    size_t steps = 0;
    for (auto const& inst : script.instructions)
    {
        if (steps == STEP_BUDGET)
        {
            out.halt = HaltReason::BUDGET_EXHAUSTED;
            return out;
        }
        ++steps;

        switch (inst.op)
        {
        case Opcode::CONST:
            regs[inst.reg0] = inst.literal;
            break;
        case Opcode::READ_API:
        {
            auto value = ctx.readAttribute(inst.attribute);
            out.apiReads.push_back(
                ApiRead{inst.attribute, ctx.valueSource(), value});
            regs[inst.reg0] = std::move(value);
            break;
        }
        case Opcode::CONCAT:
            regs[inst.reg0] =
                valueText(regs[inst.reg1]) + valueText(regs[inst.reg2]);
            break;
        case Opcode::HASH:
            regs[inst.reg0] = sha256Hex(valueText(regs[inst.reg1]));
            break;
        case Opcode::SEND_PAGE:
        case Opcode::FETCH:
        {
            OutboundMessage msg;
            msg.channel = inst.op == Opcode::SEND_PAGE ? Channel::PAGE
                                                       : Channel::EXTERNAL;
            msg.destinationUrl = inst.op == Opcode::FETCH ? inst.name : "";
            msg.purpose = inst.purpose;
            msg.payload = buildPayload(inst.purpose, regs[inst.reg0]);
            auto verdict = ctx.gate.request(msg);
            out.comms.push_back(CommAttempt{msg.channel, msg.destinationUrl,
                                            msg.purpose, std::move(verdict)});
            break;
        }
        case Opcode::STORE:
            partition.storage[inst.name] = regs[inst.reg0];
            break;
        case Opcode::LOAD:
        {
            auto it = partition.storage.find(inst.name);
            regs[inst.reg0] =
                it == partition.storage.end() ? nlohmann::json() : it->second;
            break;
        }
        case Opcode::GLOBAL_SET:
            partition.globals[inst.name] = regs[inst.reg0];
            break;
        case Opcode::GLOBAL_GET:
        {
            auto it = partition.globals.find(inst.name);
            regs[inst.reg0] =
                it == partition.globals.end() ? nlohmann::json() : it->second;
            break;
        }
        case Opcode::DOM_SET:
            partition.dom[inst.name] = regs[inst.reg0];
            break;
        case Opcode::DOM_GET:
        {
            auto it = partition.dom.find(inst.name);
            regs[inst.reg0] =
                it == partition.dom.end() ? nlohmann::json() : it->second;
            break;
        }
        case Opcode::EVENT_DISPATCH:
            partition.events[inst.name].push_back(regs[inst.reg0]);
            break;
        case Opcode::EVENT_POLL:
        {
            auto it = partition.events.find(inst.name);
            if (it == partition.events.end() || it->second.empty())
            {
                regs[inst.reg0] = nlohmann::json();
            }
            else
            {
                regs[inst.reg0] = std::move(it->second.front());
                it->second.pop_front();
                if (it->second.empty())
                {
                    partition.events.erase(it);
                }
            }
            break;
        }
        }
    }
    out.halt = HaltReason::COMPLETED;
    return out;
}

} // namespace pcf
