#pragma once

#include <string>

namespace nsatk {

// Numerical checks can falsify a claim or support it at a declared
// resolution; they never prove it. "verified" means no counterexample
// was found at the resolution used.
enum class Outcome { verified, falsified, inconclusive };

struct Verdict {
    Outcome outcome = Outcome::inconclusive;
    std::string evidence;

    bool verified() const noexcept { return outcome == Outcome::verified; }
    bool falsified() const noexcept { return outcome == Outcome::falsified; }
    bool inconclusive() const noexcept { return outcome == Outcome::inconclusive; }

    static Verdict pass(std::string ev = {}) { return {Outcome::verified, std::move(ev)}; }
    static Verdict fail(std::string ev = {}) { return {Outcome::falsified, std::move(ev)}; }
    static Verdict unknown(std::string ev = {}) { return {Outcome::inconclusive, std::move(ev)}; }
};

inline const char* to_string(Outcome o) noexcept {
    switch (o) {
        case Outcome::verified: return "verified";
        case Outcome::falsified: return "falsified";
        default: return "inconclusive";
    }
}

} // namespace nsatk
