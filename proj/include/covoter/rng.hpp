#ifndef COVOTER_RNG_HPP
#define COVOTER_RNG_HPP

#include <cmath>
#include <cstdint>

namespace covoter {

/** What a random draw is for. Part of the stream key, so adding a new
 *  consumer never perturbs the variates seen by existing ones. */
enum class RngKind : std::uint64_t {
    race = 1,          // event-loop clock and selection draws
    init_opinion = 2,  // i.i.d. initial opinions
    init_y = 3,        // i.i.d. initial y values
    init_edge = 4,     // initial edge Bernoullis
    vertex_action = 5, // per-vertex ring uniforms
    edge_action = 6,   // per-edge ring uniforms
    search = 7,        // randomized restarts (cut-norm lower bound)
    sample = 8         // generic test/oracle sampling
};

/** Counter-based random stream: every variate is a pure function of
 *  (seed, kind, id, counter). Two simulations given the same seed consume
 *  identical uniforms for the same logical event, which is exactly what the
 *  coupled runs need, and replays are bitwise reproducible. */
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed = 0) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /** 64 uniform bits for the keyed draw. */
    std::uint64_t bits(RngKind kind, std::uint64_t id, std::uint64_t counter) const {
        std::uint64_t z = mix(seed_ ^ 0x9e3779b97f4a7c15ULL);
        z = mix(z ^ (static_cast<std::uint64_t>(kind) * 0xbf58476d1ce4e5b9ULL));
        z = mix(z ^ (id * 0x94d049bb133111ebULL));
        z = mix(z ^ (counter * 0xd6e8feb86659fd93ULL));
        return z;
    }

    /** Uniform double in the open interval (0,1); safe for log(). */
    double u01(RngKind kind, std::uint64_t id, std::uint64_t counter) const {
        return (static_cast<double>(bits(kind, id, counter) >> 12) + 0.5) * 0x1.0p-52;
    }

    /** Exponential waiting time with the given rate from a keyed uniform. */
    double exponential(double rate, RngKind kind, std::uint64_t id, std::uint64_t counter) const {
        return -std::log(u01(kind, id, counter)) / rate;
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        // splitmix64 finalizer
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
};

/** Stateful convenience view over one (kind, id) stream. */
class RngSequence {
  public:
    RngSequence(const RngStream& s, RngKind kind, std::uint64_t id)
        : stream_(&s), kind_(kind), id_(id) {}

    double u01() { return stream_->u01(kind_, id_, counter_++); }
    std::uint64_t bits() { return stream_->bits(kind_, id_, counter_++); }

  private:
    const RngStream* stream_;
    RngKind kind_;
    std::uint64_t id_;
    std::uint64_t counter_ = 0;
};

} // namespace covoter

#endif
