#ifndef COVOTER_DENSITY_HPP
#define COVOTER_DENSITY_HPP

#include <cstddef>
#include <vector>

#include "covoter/common.hpp"

namespace covoter {

/** Joint density of (opinion, y) at one instant, as node values on the
 *  uniform grid u_i = i/M, i = 0..M. Integrals over the field use the
 *  trapezoid rule, i.e. node weights (h/2, h, ..., h, h/2); that same
 *  weighting is the conserved mass of the PDE solvers. */
struct DensityField {
    double t = 0.0;
    int M = 0; // grid cells; M+1 nodes
    std::vector<double> f_plus;
    std::vector<double> f_minus;

    DensityField() = default;
    DensityField(double time, int cells);

    double h() const { return 1.0 / M; }
    double node(int i) const { return static_cast<double>(i) / M; }
    double weight(int i) const { return (i == 0 || i == M) ? 0.5 * h() : h(); }

    /** Trapezoid integral of one branch. */
    double mass(const std::vector<double>& f) const;
    double mass_plus() const { return mass(f_plus); }
    double mass_minus() const { return mass(f_minus); }
    double total_mass() const { return mass_plus() + mass_minus(); }

    /** Fails loudly if the field is not a (near-)probability density. */
    void validate(double mass_tol = 1e-3) const;
};

/** A density trajectory: slices at increasing times, linearly interpolated
 *  in t between stored slices (all slices share one grid). */
class DensityTrajectory {
  public:
    DensityTrajectory() = default;
    explicit DensityTrajectory(std::vector<DensityField> slices);

    bool covers(double t0, double t1) const;
    const std::vector<DensityField>& slices() const { return slices_; }

    /** Field at time t (linear interpolation of node values; exact at
     *  stored slice times). */
    DensityField at(double t) const;

  private:
    std::vector<DensityField> slices_;
};

/** Generalized inverse of the combined (Plus branch first, then Minus
 *  branch) cumulative distribution: for mass coordinate y in [0,1] returns
 *  the smallest grid location whose CDF reaches y, resolving within a cell
 *  by linear interpolation of the trapezoid CDF. */
double quantile(const DensityField& field, double y);

} // namespace covoter

#endif
