#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "fuzzdyn/errors.hpp"
#include "fuzzdyn/families.hpp"
#include "fuzzdyn/spaces.hpp"

namespace fuzzdyn {

/// One-sided vertex shift of finite type, observed at a finite word
/// resolution. The metric is d(x, y) = 2^{-i} with i the first index where x
/// and y disagree; two sequences sharing a length-k prefix are within 2^{-k}.
class SymbolicSystem {
public:
    using Word = std::vector<std::uint8_t>;
    using Matrix = std::vector<std::vector<bool>>;

    SymbolicSystem(std::vector<std::string> alphabet, Matrix adjacency, std::size_t resolution)
        : alphabet_(std::move(alphabet)), adjacency_(std::move(adjacency)), resolution_(resolution) {
        const std::size_t s = alphabet_.size();
        if (s == 0 || s > 16) throw InputError("alphabet size must lie in [1, 16]");
        if (resolution_ == 0 || resolution_ > 12) throw InputError("resolution must lie in [1, 12]");
        if (adjacency_.size() != s) throw InputError("adjacency matrix has wrong size");
        for (const auto& row : adjacency_)
            if (row.size() != s) throw InputError("adjacency matrix is not square");
        for (std::size_t a = 0; a < s; ++a) {
            bool out = false, in = false;
            for (std::size_t b = 0; b < s; ++b) {
                out = out || adjacency_[a][b];
                in = in || adjacency_[b][a];
            }
            if (!out || !in) throw InputError("symbol '" + alphabet_[a] + "' is stranded in the transition graph");
        }
        compute_power_cycle();
    }

    static SymbolicSystem full_shift(std::size_t symbols, std::size_t resolution) {
        std::vector<std::string> alphabet;
        for (std::size_t i = 0; i < symbols; ++i) alphabet.push_back(std::to_string(i));
        return SymbolicSystem(std::move(alphabet), Matrix(symbols, std::vector<bool>(symbols, true)), resolution);
    }

    const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
    const Matrix& adjacency() const noexcept { return adjacency_; }
    std::size_t resolution() const noexcept { return resolution_; }
    bool is_full_shift() const {
        for (const auto& row : adjacency_)
            for (bool b : row)
                if (!b) return false;
        return true;
    }

    bool allowed(const Word& w) const {
        for (auto c : w)
            if (c >= alphabet_.size()) return false;
        for (std::size_t i = 1; i < w.size(); ++i)
            if (!adjacency_[w[i - 1]][w[i]]) return false;
        return !w.empty();
    }

    /// Allowed words of the given length in lexicographic order.
    std::vector<Word> words(std::size_t length) const {
        std::vector<Word> out;
        if (length == 0) return out;
        Word w(length, 0);
        const auto s = static_cast<std::uint8_t>(alphabet_.size());
        while (true) {
            if (allowed(w)) out.push_back(w);
            std::size_t i = length;
            while (i > 0) {
                --i;
                if (++w[i] < s) break;
                w[i] = 0;
                if (i == 0) return out;
            }
        }
    }

    std::string label(const Word& w) const {
        std::string s;
        for (auto c : w) s += alphabet_.at(c);
        return s;
    }

    /// Length-k words with the truncated prefix metric.
    MetricSpace word_space() const {
        const auto ws = words(resolution_);
        std::vector<std::string> labels;
        std::vector<std::vector<Rational>> dist(ws.size(), std::vector<Rational>(ws.size()));
        for (std::size_t a = 0; a < ws.size(); ++a) {
            labels.push_back(label(ws[a]));
            for (std::size_t b = 0; b < ws.size(); ++b) dist[a][b] = prefix_distance(ws[a], ws[b]);
        }
        return MetricSpace::from_table(std::move(labels), dist, MetricSpace::Kind::word_space);
    }

    static Rational prefix_distance(const Word& x, const Word& y) {
        const std::size_t len = std::min(x.size(), y.size());
        for (std::size_t i = 0; i < len; ++i)
            if (x[i] != y[i]) return Rational(1, std::int64_t{1} << i);
        return Rational(0);
    }

    /// First exponent e0 >= 1 and period p with M^{e0+p} = M^{e0}.
    std::size_t power_preperiod() const noexcept { return power_rho_; }
    std::size_t power_period() const noexcept { return power_pi_; }

    /// Is there a path with exactly `edges` edges from a to b?
    bool path_of_length(std::size_t a, std::size_t b, std::size_t edges) const {
        if (edges == 0) return a == b;
        std::size_t e = edges;
        if (e >= power_rho_) e = power_rho_ + (e - power_rho_) % power_pi_;
        return powers_[e - 1][a][b];
    }

    /// N([u], [v]) = {n : sigma^n [u] meets [v]}, exactly.
    IndexSet cylinder_returns(const Word& u, const Word& v) const {
        if (!allowed(u) || !allowed(v)) throw InputError("cylinder words must be allowed and nonempty");
        const std::size_t lu = u.size();
        const std::size_t rho = lu + power_rho_ - 1;
        IndexSet::Bits bits(rho + power_pi_);
        for (std::size_t n = 0; n < bits.size(); ++n) {
            if (n < lu) {
                bool ok = true;
                for (std::size_t j = 0; j < v.size() && n + j < lu; ++j) ok = ok && u[n + j] == v[j];
                const std::size_t overhang = lu - n;
                if (ok && v.size() > overhang) ok = adjacency_[u.back()][v[overhang]];
                bits[n] = ok;
            } else {
                bits[n] = path_of_length(u.back(), v.front(), n - lu + 1);
            }
        }
        return IndexSet::eventually_periodic(std::move(bits), power_pi_);
    }

private:
    void compute_power_cycle() {
        const std::size_t s = alphabet_.size();
        auto multiply = [s](const Matrix& a, const Matrix& b) {
            Matrix c(s, std::vector<bool>(s, false));
            for (std::size_t i = 0; i < s; ++i)
                for (std::size_t k = 0; k < s; ++k)
                    if (a[i][k])
                        for (std::size_t j = 0; j < s; ++j)
                            if (b[k][j]) c[i][j] = true;
            return c;
        };
        powers_.push_back(adjacency_);
        while (true) {
            Matrix next = multiply(powers_.back(), adjacency_);
            for (std::size_t i = 0; i < powers_.size(); ++i)
                if (powers_[i] == next) {
                    power_rho_ = i + 1;
                    power_pi_ = powers_.size() - i;
                    return;
                }
            powers_.push_back(std::move(next));
            if (powers_.size() > 4096) throw BoundError("max_horizon", "adjacency powers do not cycle");
        }
    }

    std::vector<std::string> alphabet_;
    Matrix adjacency_;
    std::size_t resolution_;
    std::vector<Matrix> powers_;  // M^1 .. M^{rho+pi-1}
    std::size_t power_rho_ = 1;
    std::size_t power_pi_ = 1;
};

}  // namespace fuzzdyn
