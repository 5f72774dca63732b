#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fnlc/common.hpp"

namespace fnlc {

// Versioned container of named double tensors plus a free-form metadata
// block. Round trips are bit-exact.
struct Checkpoint {
    std::string meta;
    std::vector<std::pair<std::string, MatX>> tensors;

    const MatX* find(const std::string& name) const {
        for (const auto& [n, t] : tensors)
            if (n == name) return &t;
        return nullptr;
    }
};

void save_checkpoint(const std::string& path, const Checkpoint& c);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace fnlc
