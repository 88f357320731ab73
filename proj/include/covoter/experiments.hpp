#ifndef COVOTER_EXPERIMENTS_HPP
#define COVOTER_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "covoter/config.hpp"

namespace covoter {

/** Outcome of one preregistered experiment. `pass` is meaningful only for
 *  experiments with a threshold; purely descriptive runs always pass. */
struct Verdict {
    std::string name;
    Config config;      // exact resolved configuration
    std::string metric;
    double value = 0;
    double threshold = 0;
    bool pass = false;
    double runtime_s = 0;
    std::string note;   // free-form context recorded alongside the numbers
};

/** Names accepted by run_experiment, in documentation order. */
const std::vector<std::string>& experiment_registry();

/** Runs one named experiment with `overrides` applied on top of its
 *  preregistered defaults, writing CSV/PGM outputs plus verdict.json under
 *  out_dir. Throws config_error for unknown names (message lists the
 *  registry). */
Verdict run_experiment(const std::string& name, const Config& overrides, uint64_t seed,
                       const std::string& out_dir);

std::string verdict_json(const Verdict& v);

} // namespace covoter

#endif
