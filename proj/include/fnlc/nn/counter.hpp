#pragma once

#include <array>
#include <cstdint>

namespace fnlc {

// Where a real multiplication is charged. Matches the component split of the
// complexity model so instrumented counts can be compared term by term.
enum class OpSite {
    Embedding = 0,
    Projection,
    Attention,
    Ffn,
    LayerNorm,
    OutputMlp,
};

inline constexpr int kOpSiteCount = 6;

// Tallies real multiplications at the call sites that perform them.
// Additions, activations (beyond the modeled softmax cost) and the positional
// encoding are free by convention.
struct MultCounter {
    std::array<std::uint64_t, kOpSiteCount> by_site{};

    void add(OpSite s, std::uint64_t n) { by_site[static_cast<int>(s)] += n; }
    std::uint64_t at(OpSite s) const { return by_site[static_cast<int>(s)]; }

    std::uint64_t total() const {
        std::uint64_t t = 0;
        for (const auto v : by_site) t += v;
        return t;
    }

    void reset() { by_site.fill(0); }
};

}  // namespace fnlc
