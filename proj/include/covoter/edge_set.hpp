#ifndef COVOTER_EDGE_SET_HPP
#define COVOTER_EDGE_SET_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "covoter/common.hpp"

namespace covoter {

/** Dense symmetric boolean relation over unordered vertex pairs {i,j},
 *  i != j, with maintained degrees and active-pair count. */
class EdgeSet {
  public:
    EdgeSet() = default;
    explicit EdgeSet(int n) : n_(n), bits_(pair_count(n), 0), degree_(n, 0) {
        require(n >= 2, "EdgeSet: need at least 2 vertices");
    }

    int n() const { return n_; }
    static long long pair_count(int n) {
        return static_cast<long long>(n) * (n - 1) / 2;
    }
    long long pair_count() const { return pair_count(n_); }

    /** Linear index of unordered pair {i,j}; stable across runs (used to
     *  key edge-clock random streams). */
    static long long pair_index(int i, int j) {
        if (i > j) std::swap(i, j);
        return static_cast<long long>(j) * (j - 1) / 2 + i;
    }

    bool active(int i, int j) const { return bits_[pair_index(i, j)] != 0; }

    /** Sets pair {i,j}; returns the previous state. */
    bool set(int i, int j, bool value) {
        const long long idx = pair_index(i, j);
        const bool old = bits_[idx] != 0;
        if (old != value) {
            bits_[idx] = value ? 1 : 0;
            const int d = value ? 1 : -1;
            degree_[i] += d;
            degree_[j] += d;
            active_ += d;
        }
        return old;
    }

    int degree(int i) const { return degree_[i]; }
    long long active_count() const { return active_; }

    int min_degree() const {
        int m = degree_.empty() ? 0 : degree_[0];
        for (int d : degree_) m = d < m ? d : m;
        return m;
    }

    /** Number of pairs on which two edge sets over the same vertices differ. */
    static long long disagreement(const EdgeSet& a, const EdgeSet& b) {
        require(a.n_ == b.n_, "EdgeSet::disagreement: size mismatch");
        long long d = 0;
        for (size_t k = 0; k < a.bits_.size(); ++k) d += a.bits_[k] != b.bits_[k];
        return d;
    }

  private:
    int n_ = 0;
    std::vector<uint8_t> bits_;
    std::vector<int> degree_;
    long long active_ = 0;
};

} // namespace covoter

#endif
