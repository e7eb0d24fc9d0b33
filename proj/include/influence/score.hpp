#pragma once

#include <ostream>

namespace influence {

/// Left score (Left moves first) and Right score (Right moves first).
struct ScorePair {
    int ls = 0;
    int rs = 0;

    ScorePair shifted(int s) const { return {ls + s, rs + s}; }
    ScorePair negated() const { return {-rs, -ls}; }
    friend bool operator==(const ScorePair&, const ScorePair&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const ScorePair& s) {
    return os << "(ls=" << s.ls << ", rs=" << s.rs << ")";
}

} // namespace influence
