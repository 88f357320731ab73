#ifndef COVOTER_COMMON_HPP
#define COVOTER_COMMON_HPP

#include <stdexcept>
#include <string>

namespace covoter {

/** Thrown when a caller violates a documented precondition. */
struct contract_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/** Thrown for invalid run/solver configurations (grid, CFL, coverage, keys). */
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/** Thrown when parameters hit a structural singularity (e.g. a pole in the
 *  series recursion) that the caller must resolve, not the library. */
struct singular_parameter_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw contract_error(msg);
}

inline void require_config(bool cond, const std::string& msg) {
    if (!cond) throw config_error(msg);
}

} // namespace covoter

#endif
