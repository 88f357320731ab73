#include "covoter/graphon.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "covoter/kernels.hpp"
#include "covoter/rng.hpp"

namespace covoter {

StepGraphon::StepGraphon(int k, double fill) {
    require(k >= 1, "step graphon needs at least one block");
    boundaries.resize(k + 1);
    for (int i = 0; i <= k; ++i) boundaries[i] = static_cast<double>(i) / k;
    boundaries[k] = 1.0;
    values.assign(static_cast<size_t>(k) * k, fill);
}

double StepGraphon::at(double x, double y) const {
    require(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0,
            "graphon evaluation point must lie in [0,1]^2");
    const auto cell = [&](double c) {
        // left-closed cells; the last cell is closed on both sides
        const auto it = std::upper_bound(boundaries.begin(), boundaries.end(), c);
        int i = static_cast<int>(it - boundaries.begin()) - 1;
        return std::min(std::max(i, 0), k() - 1);
    };
    return value(cell(x), cell(y));
}

void StepGraphon::validate(bool allow_signed) const {
    require(boundaries.size() >= 2, "step graphon needs at least one block");
    require(std::abs(boundaries.front()) < 1e-12 && std::abs(boundaries.back() - 1.0) < 1e-12,
            "graphon boundaries must span [0,1]");
    for (std::size_t i = 1; i < boundaries.size(); ++i)
        require(boundaries[i] > boundaries[i - 1], "graphon boundaries must strictly increase");
    require(values.size() == static_cast<size_t>(k()) * k(),
            "graphon value table must be k*k");
    const double lo = allow_signed ? -1.0 : 0.0;
    for (int i = 0; i < k(); ++i)
        for (int j = 0; j < k(); ++j) {
            const double v = value(i, j);
            require(std::isfinite(v) && v >= lo - 1e-12 && v <= 1.0 + 1e-12,
                    "graphon values out of range");
            require(std::abs(v - value(j, i)) < 1e-12, "graphon must be symmetric");
        }
}

StepGraphon from_snapshot(const Snapshot& snap) {
    require(snap.graph.has_value(), "snapshot carries no graph to project");
    const int n = snap.n();
    StepGraphon g(n, 0.0);
    for (int r1 = 0; r1 < n; ++r1)
        for (int r2 = r1 + 1; r2 < n; ++r2)
            if (snap.graph->active(snap.permutation[r1], snap.permutation[r2]))
                g.set_value(r1, r2, 1.0);
    return g;
}

StepGraphon reference(double t, const DensityField& densities, const ModelParams& params,
                      int grid_k) {
    require(t >= 0.0, "reference kernel time must be >= 0");
    require(grid_k >= 1, "reference grid needs at least one block");
    validate(params);
    const double scale = 1.0 - std::exp(-t);
    StepGraphon g(grid_k, 0.0);
    std::vector<double> q(grid_k);
    for (int i = 0; i < grid_k; ++i) {
        const double center = (i + 0.5) / grid_k;
        q[i] = scale * quantile(densities, center);
    }
    const auto* m3 = std::get_if<Model3Params>(&params);
    const KernelParams k1 = std::holds_alternative<Model1Params>(params)
                                ? std::get<Model1Params>(params).kernel()
                                : (m3 ? KernelParams{} : std::get<Model2Params>(params).kernel());
    for (int i = 0; i < grid_k; ++i)
        for (int j = i; j < grid_k; ++j) {
            const double v = m3 ? kernel_hr(*m3, t, q[i], q[j]) : kernel_h(k1, t, q[i], q[j]);
            g.set_value(i, j, v);
        }
    return g;
}

namespace {

/** Merged boundary grid of two graphons (1e-12 coincidence tolerance). */
std::vector<double> merge_boundaries(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        double v;
        if (j >= b.size() || (i < a.size() && a[i] < b[j]))
            v = a[i++];
        else
            v = b[j++];
        if (out.empty() || v > out.back() + 1e-12) out.push_back(v);
    }
    out.front() = 0.0;
    out.back() = 1.0;
    return out;
}

/** Map refined cells to source blocks by cell centers. */
std::vector<int> source_cells(const std::vector<double>& refined, const StepGraphon& g) {
    std::vector<int> idx(refined.size() - 1);
    int cur = 0;
    for (std::size_t c = 0; c + 1 < refined.size(); ++c) {
        const double center = 0.5 * (refined[c] + refined[c + 1]);
        while (cur + 1 < g.k() && g.boundaries[cur + 1] <= center) ++cur;
        idx[c] = cur;
    }
    return idx;
}

}  // namespace

StepGraphon difference(const StepGraphon& a, const StepGraphon& b) {
    a.validate(true);
    b.validate(true);
    StepGraphon out;
    out.boundaries = merge_boundaries(a.boundaries, b.boundaries);
    const int k = static_cast<int>(out.boundaries.size()) - 1;
    out.values.assign(static_cast<size_t>(k) * k, 0.0);
    const std::vector<int> ia = source_cells(out.boundaries, a);
    const std::vector<int> ib = source_cells(out.boundaries, b);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            out.values[static_cast<size_t>(i) * k + j] =
                a.value(ia[i], ia[j]) - b.value(ib[i], ib[j]);
    return out;
}

double l1_distance(const StepGraphon& a, const StepGraphon& b) {
    const StepGraphon d = difference(a, b);
    double s = 0.0;
    for (int i = 0; i < d.k(); ++i)
        for (int j = 0; j < d.k(); ++j)
            s += d.width(i) * d.width(j) * std::abs(d.value(i, j));
    return s;
}

double cut_norm_exact(const StepGraphon& g) {
    g.validate(true);
    const int k = g.k();
    require_config(k <= 22,
                   "cut_norm_exact enumerates 2^k subsets and is limited to k <= 22 blocks; "
                   "use cut_norm_lower_bound for finer graphons");
    // mass matrix a_ij = w_i w_j g_ij
    std::vector<double> a(static_cast<size_t>(k) * k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            a[static_cast<size_t>(i) * k + j] = g.width(i) * g.width(j) * g.value(i, j);

    // Gray-code walk over subsets S, maintaining column sums of S x [k];
    // for each S the best T is the positive part or the negative part.
    std::vector<double> col(k, 0.0);
    double best = 0.0;
    uint32_t prev = 0;
    const uint32_t count = static_cast<uint32_t>(1) << k;
    for (uint32_t m = 1; m < count; ++m) {
        const uint32_t gray = m ^ (m >> 1);
        const uint32_t diff = gray ^ prev;
        prev = gray;
        int bit = 0;
        while (!((diff >> bit) & 1u)) ++bit;
        const double sign = (gray >> bit) & 1u ? 1.0 : -1.0;
        const double* row = &a[static_cast<size_t>(bit) * k];
        for (int j = 0; j < k; ++j) col[j] += sign * row[j];
        double pos = 0.0, neg = 0.0;
        for (int j = 0; j < k; ++j) {
            if (col[j] > 0.0)
                pos += col[j];
            else
                neg -= col[j];
        }
        best = std::max({best, pos, neg});
    }
    return best;
}

double cut_norm_lower_bound(const StepGraphon& g, int restarts, uint64_t seed) {
    g.validate(true);
    require(restarts >= 1, "cut_norm_lower_bound needs at least one restart");
    const int k = g.k();
    std::vector<double> a(static_cast<size_t>(k) * k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            a[static_cast<size_t>(i) * k + j] = g.width(i) * g.width(j) * g.value(i, j);

    const RngStream rng(seed);
    std::vector<uint8_t> s(k), tt(k);
    std::vector<double> col(k), row(k);
    double best = 0.0;
    for (int r = 0; r < restarts; ++r) {
        RngSequence seq(rng, RngKind::search, static_cast<uint64_t>(r));
        for (int i = 0; i < k; ++i) s[i] = seq.bits() & 1u;
        double value = -1.0;
        for (int iter = 0; iter < 200; ++iter) {
            // best T given S: take all columns of one sign
            std::fill(col.begin(), col.end(), 0.0);
            for (int i = 0; i < k; ++i)
                if (s[i]) {
                    const double* arow = &a[static_cast<size_t>(i) * k];
                    for (int j = 0; j < k; ++j) col[j] += arow[j];
                }
            double pos = 0.0, neg = 0.0;
            for (int j = 0; j < k; ++j) {
                if (col[j] > 0.0)
                    pos += col[j];
                else
                    neg -= col[j];
            }
            const bool positive = pos >= neg;
            for (int j = 0; j < k; ++j)
                tt[j] = positive ? col[j] > 0.0 : col[j] < 0.0;

            // best S given T, for the chosen sign
            std::fill(row.begin(), row.end(), 0.0);
            for (int j = 0; j < k; ++j)
                if (tt[j])
                    for (int i = 0; i < k; ++i) row[i] += a[static_cast<size_t>(i) * k + j];
            double next = 0.0;
            for (int i = 0; i < k; ++i) {
                const bool take = positive ? row[i] > 0.0 : row[i] < 0.0;
                s[i] = take;
                if (take) next += positive ? row[i] : -row[i];
            }
            if (next <= value + 1e-15) {
                value = std::max(value, next);
                break;
            }
            value = next;
        }
        best = std::max(best, value);
    }
    return best;
}

void write_graphon_csv(const std::string& path, const StepGraphon& g) {
    g.validate(true);
    std::ofstream out(path);
    require_config(out.good(), "cannot open '" + path + "' for writing");
    out.precision(17);
    for (std::size_t i = 0; i < g.boundaries.size(); ++i) {
        if (i) out << ',';
        out << g.boundaries[i];
    }
    out << '\n';
    for (int i = 0; i < g.k(); ++i) {
        for (int j = 0; j < g.k(); ++j) {
            if (j) out << ',';
            out << g.value(i, j);
        }
        out << '\n';
    }
    require_config(out.good(), "write failed for '" + path + "'");
}

StepGraphon read_graphon_csv(const std::string& path) {
    std::ifstream in(path);
    require_config(in.good(), "cannot open '" + path + "' for reading");
    const auto parse = [&path](const std::string& tok) {
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            require_config(used == tok.size(), "trailing junk");
            return v;
        } catch (const config_error&) {
            throw config_error("graphon file '" + path + "': malformed number '" + tok + "'");
        } catch (const std::exception&) {
            throw config_error("graphon file '" + path + "': malformed number '" + tok + "'");
        }
    };
    std::string line;
    require_config(static_cast<bool>(std::getline(in, line)), "empty graphon file '" + path + "'");
    StepGraphon g;
    {
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) g.boundaries.push_back(parse(tok));
    }
    require_config(g.boundaries.size() >= 2, "graphon file '" + path + "' has no blocks");
    const int k = static_cast<int>(g.boundaries.size()) - 1;
    g.values.reserve(static_cast<size_t>(k) * k);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) g.values.push_back(parse(tok));
    }
    require_config(g.values.size() == static_cast<size_t>(k) * k,
                   "graphon file '" + path + "' has a malformed value table");
    g.validate(true);
    return g;
}

void write_graphon_pgm(const std::string& path, const StepGraphon& g, int min_px) {
    g.validate();
    require(min_px >= 1, "pgm size must be positive");
    const int px = std::max(g.k(), min_px);
    std::ofstream out(path, std::ios::binary);
    require_config(out.good(), "cannot open '" + path + "' for writing");
    out << "P5\n" << px << ' ' << px << "\n255\n";
    std::vector<unsigned char> rowbuf(px);
    // x runs left to right, y top to bottom; darker = larger value
    for (int r = 0; r < px; ++r) {
        const double y = (r + 0.5) / px;
        for (int c = 0; c < px; ++c) {
            const double x = (c + 0.5) / px;
            const double v = std::clamp(g.at(x, y), 0.0, 1.0);
            rowbuf[c] = static_cast<unsigned char>(255 - std::lround(255.0 * v));
        }
        out.write(reinterpret_cast<const char*>(rowbuf.data()), px);
    }
    require_config(out.good(), "write failed for '" + path + "'");
}

}  // namespace covoter
