#ifndef COVOTER_CONFIG_HPP
#define COVOTER_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "covoter/params.hpp"
#include "covoter/simulator.hpp"

namespace covoter {

/** Flat key=value configuration ('#' comments, blank lines ignored).
 *  Ordered map so serialization is canonical and parse(serialize(c)) == c. */
using Config = std::map<std::string, std::string>;

Config parse_config_text(const std::string& text);
Config parse_config_file(const std::string& path);
/** Applies one "key=value" override (the CLI --set form). */
void apply_override(Config& cfg, const std::string& key_value);
std::string serialize_config(const Config& cfg);

/** Typed getters; a missing key returns the default or, without one,
 *  throws config_error naming the key. Malformed values also throw. */
double get_double(const Config& cfg, const std::string& key,
                  std::optional<double> fallback = {});
long long get_int(const Config& cfg, const std::string& key,
                  std::optional<long long> fallback = {});
std::string get_string(const Config& cfg, const std::string& key,
                       std::optional<std::string> fallback = {});

/** Builds the model parameters from cfg ("model" = 1 | 2 | 3; model-2
 *  configs may set q_exp for the nonlinear variant). Rejects any parameter
 *  key that does not belong to the selected model, naming the offending
 *  key, and rejects unknown keys outside the accepted general set. */
ModelParams params_from_config(const Config& cfg);

/** Initial-condition selectors shared by the run commands:
 *  opinion_init = all_plus | all_minus | bernoulli:<p> | half
 *  y_init       = zero | uniform | const:<v>  */
OpinionLaw opinion_law_from_config(const Config& cfg, int n);
YLaw y_law_from_config(const Config& cfg);

} // namespace covoter

#endif
