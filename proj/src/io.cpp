#include "covoter/io.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace covoter {

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    require_config(!ec, "cannot create directory '" + path + "': " + ec.message());
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    require_config(out.good(), "cannot open '" + path + "' for writing");
    out << content;
    require_config(out.good(), "write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require_config(in.good(), "cannot open '" + path + "' for reading");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_density_csv(const std::string& path, const DensityTrajectory& traj) {
    std::ofstream out(path);
    require_config(out.good(), "cannot open '" + path + "' for writing");
    out.precision(12);
    out << "t,u,f_plus,f_minus\n";
    for (const DensityField& f : traj.slices())
        for (int i = 0; i <= f.M; ++i)
            out << f.t << ',' << f.node(i) << ',' << f.f_plus[i] << ',' << f.f_minus[i] << '\n';
    require_config(out.good(), "write failed for '" + path + "'");
}

void write_histogram_csv(const std::string& path, const Histogram& h, double beta_a,
                         double beta_b) {
    std::ofstream out(path);
    require_config(out.good(), "cannot open '" + path + "' for writing");
    out.precision(12);
    out << "bin_left,bin_right,mass,beta_mass\n";
    double cdf_left = 0.0;
    for (int b = 0; b < h.bins(); ++b) {
        const double cdf_right =
            b + 1 == h.bins() ? 1.0 : boost::math::ibeta(beta_a, beta_b, h.edges[b + 1]);
        out << h.edges[b] << ',' << h.edges[b + 1] << ',' << h.mass(b) << ','
            << (cdf_right - cdf_left) << '\n';
        cdf_left = cdf_right;
    }
    require_config(out.good(), "write failed for '" + path + "'");
}

void write_fraction_csv(const std::string& path, const FractionTrajectory& traj) {
    std::ofstream out(path);
    require_config(out.good(), "cannot open '" + path + "' for writing");
    out.precision(12);
    out << "t,frac_plus\n";
    for (std::size_t k = 0; k < traj.t.size(); ++k)
        out << traj.t[k] << ',' << traj.frac_plus[k] << '\n';
    require_config(out.good(), "write failed for '" + path + "'");
}

void write_coupling_csv(const std::string& path, const CouplingTrace& trace) {
    std::ofstream out(path);
    require_config(out.good(), "cannot open '" + path + "' for writing");
    out.precision(12);
    out << "t,d_V,d_E,min_degree\n";
    for (std::size_t k = 0; k < trace.t.size(); ++k)
        out << trace.t[k] << ',' << trace.d_v[k] << ',' << trace.d_e[k] << ','
            << trace.min_degree[k] << '\n';
    require_config(out.good(), "write failed for '" + path + "'");
}

}  // namespace covoter
