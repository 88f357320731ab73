#ifndef COVOTER_IO_HPP
#define COVOTER_IO_HPP

#include <string>
#include <vector>

#include "covoter/density.hpp"
#include "covoter/simulator.hpp"
#include "covoter/stats.hpp"

namespace covoter {

/** Creates the directory (and parents) if missing. */
void ensure_directory(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/** Density slices: header t,u,f_plus,f_minus; one row per slice node. */
void write_density_csv(const std::string& path, const DensityTrajectory& traj);

/** Histogram vs Beta reference: bin_left,bin_right,mass,beta_mass. */
void write_histogram_csv(const std::string& path, const Histogram& h, double beta_a,
                         double beta_b);

/** Plus-fraction path: t,frac_plus. */
void write_fraction_csv(const std::string& path, const FractionTrajectory& traj);

/** Coupling trace: t,d_V,d_E,min_degree. */
void write_coupling_csv(const std::string& path, const CouplingTrace& trace);

} // namespace covoter

#endif
