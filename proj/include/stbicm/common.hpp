#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace stbicm {

using BitVec = std::vector<uint8_t>;

// Invalid dimensions, generator strings, divisibility violations, ... (CLI exit code 2)
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Complexity caps exceeded (CLI exit code 3)
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& msg) : std::runtime_error(msg) {}
};

// LLR convention used throughout: L(b) = log P(b=0) - log P(b=1).
// A large positive LLR means "bit is 0".

} // namespace stbicm
