#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

namespace lddkit {

// SplitMix64. Small, seedable, and splittable: child streams are derived by
// mixing a label into the parent seed, so nested algorithms get independent
// reproducible streams no matter how many draws their siblings consume.
struct SplitRng {
    uint64_t state;

    explicit SplitRng(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    SplitRng child(uint64_t label) const {
        SplitRng probe(state ^ (0xa0761d6478bd642fULL + label));
        probe.next();
        return SplitRng(probe.state);
    }

    bool coin() { return (next() >> 63) != 0; }

    // Uniform in [0, n), n >= 1. Rejection-free modulo bias is fine here:
    // draws only steer test-corpus generation, never guarantee checks.
    uint64_t below(uint64_t n) { return n <= 1 ? 0 : next() % n; }
};

// Every randomized algorithm draws its branch coins through this front, so
// tests can substitute a scripted tape and enumerate all branches exactly.
using CoinFn = std::function<bool()>;

struct Mode {
    bool randomized = false;
    CoinFn coin; // set iff randomized

    static Mode det() { return Mode{}; }
    static Mode rand_seeded(uint64_t seed) {
        auto rng = std::make_shared<SplitRng>(seed);
        Mode m;
        m.randomized = true;
        m.coin = [rng]() { return rng->coin(); };
        return m;
    }
};

// Scripted coins for exhaustive branch enumeration. Reading past the script
// appends `false`, so a driver can walk the full binary tree of outcomes by
// re-running with successively incremented scripts (see tests).
struct CoinTape {
    std::vector<char> bits;
    size_t pos = 0;

    explicit CoinTape(std::vector<char> script = {}) : bits(std::move(script)) {}

    bool draw() {
        if (pos == bits.size()) bits.push_back(0);
        return bits[pos++] != 0;
    }

    Mode as_mode() {
        Mode m;
        m.randomized = true;
        m.coin = [this]() { return draw(); };
        return m;
    }
};

} // namespace lddkit
