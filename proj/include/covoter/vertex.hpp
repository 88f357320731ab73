#ifndef COVOTER_VERTEX_HPP
#define COVOTER_VERTEX_HPP

#include <algorithm>
#include <cmath>

#include "covoter/common.hpp"

namespace covoter {

/** The two opinions. Plus sorts before Minus in the canonical labelling. */
enum class Opinion : int { Plus = 0, Minus = 1 };

inline Opinion flipped(Opinion o) { return o == Opinion::Plus ? Opinion::Minus : Opinion::Plus; }

/** Exact advance of the accumulated-exposure value y over a window of
 *  constant opinion. y follows y' = 1 - y while the opinion is Plus and
 *  y' = -y while it is Minus, so the flow has a closed form and lazy
 *  updates between a vertex's own events are exact. */
inline double advance_y(double y, Opinion opinion, double dt) {
    require(dt >= 0.0, "advance_y: dt must be nonnegative");
    require(y >= 0.0 && y <= 1.0, "advance_y: y must lie in [0,1]");
    const double e = std::exp(-dt);
    const double out = (opinion == Opinion::Plus) ? 1.0 - (1.0 - y) * e : y * e;
    return std::clamp(out, 0.0, 1.0);
}

/** Per-vertex dynamic state. y is stored lazily: it is correct as of
 *  last_update and advanced with advance_y whenever the vertex is touched. */
struct VertexState {
    Opinion opinion = Opinion::Minus;
    double y = 0.0;
    double y0 = 0.0;
    double last_update = 0.0;
};

/** The type of a vertex at time t: its y value with the initial-condition
 *  remnant e^{-t} y0 removed. Lies in [0, 1 - e^{-t}]; clamped to absorb
 *  1-ulp drift. */
inline double vertex_type(double y, double y0, double t) {
    require(t >= 0.0, "vertex_type: t must be nonnegative");
    const double hi = 1.0 - std::exp(-t);
    return std::clamp(y - std::exp(-t) * y0, 0.0, hi);
}

} // namespace covoter

#endif
