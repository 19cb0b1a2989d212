#pragma once

// Dense transportation problem solved to optimality with the classic
// primal simplex on the basis tree (MODI method):
//
//   min  sum_{ij} c_ij f_ij
//   s.t. sum_j f_ij = supply_i,  sum_i f_ij = demand_j,  f >= 0.
//
// The initial basis comes from a cheapest-sink greedy allocation, which is
// acyclic because a source only moves on to its next sink after exhausting
// the previous one. Entering arcs are picked by block search over the
// reduced costs; leaving-arc ties go to the lexicographically smallest arc,
// and a stall of degenerate pivots switches entering selection to Bland's
// rule, which guarantees termination.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "cpd/errors.hpp"

namespace cpd {

struct TransportationSolution {
    struct Arc {
        std::uint32_t source = 0;
        std::uint32_t sink = 0;
        double amount = 0.0;
    };
    double cost = 0.0;
    std::vector<Arc> arcs;                   // basic arcs with positive flow
    std::vector<double> source_potentials;   // u_i
    std::vector<double> sink_potentials;     // v_j with u_i + v_j = c_ij on the basis
    std::size_t pivots = 0;
};

namespace detail {

class TransportationSimplex {
public:
    TransportationSimplex(std::span<const double> supply, std::span<const double> demand,
                          std::span<const double> cost)
        : m_(supply.size()), n_(demand.size()), cost_(cost),
          supply_(supply.begin(), supply.end()), demand_(demand.begin(), demand.end()) {
        // Rebalance the demand so both sides sum identically; callers have
        // already checked the mismatch is within tolerance.
        double total_supply = 0.0, total_demand = 0.0;
        for (double s : supply_) total_supply += s;
        for (double d : demand_) total_demand += d;
        if (total_demand > 0.0) {
            const double scale = total_supply / total_demand;
            for (double& d : demand_) d *= scale;
        }
    }

    TransportationSolution solve() {
        initial_basis();
        const std::size_t nodes = m_ + n_;
        parent_arc_.assign(nodes, -1);
        parent_node_.assign(nodes, -1);
        order_.reserve(nodes);
        u_.assign(m_, 0.0);
        v_.assign(n_, 0.0);

        TransportationSolution sol;
        const double opt_tol = optimality_tolerance();
        std::size_t degenerate_streak = 0;
        bool bland = false;
        std::size_t cursor = 0;
        while (true) {
            compute_duals();
            const std::ptrdiff_t entering = bland ? find_entering_bland()
                                                  : find_entering_block(cursor, opt_tol);
            if (entering < 0) break;
            const double moved = pivot(static_cast<std::size_t>(entering));
            ++sol.pivots;
            if (moved <= 0.0) {
                if (++degenerate_streak > m_ + n_) bland = true;
            } else {
                degenerate_streak = 0;
                bland = false;
            }
        }

        for (std::size_t k = 0; k < basis_src_.size(); ++k) {
            const double f = basis_flow_[k];
            if (f > 0.0) {
                sol.arcs.push_back({static_cast<std::uint32_t>(basis_src_[k]),
                                    static_cast<std::uint32_t>(basis_dst_[k]), f});
                sol.cost += f * cost_[basis_src_[k] * n_ + basis_dst_[k]];
            }
        }
        std::sort(sol.arcs.begin(), sol.arcs.end(), [](const auto& a, const auto& b) {
            return a.source != b.source ? a.source < b.source : a.sink < b.sink;
        });
        sol.source_potentials = u_;
        sol.sink_potentials = v_;
        return sol;
    }

private:
    std::size_t node_of_sink(std::size_t j) const { return m_ + j; }

    double optimality_tolerance() const {
        double max_cost = 0.0;
        for (double c : cost_) max_cost = std::max(max_cost, std::abs(c));
        return std::max(1e-13, 1e-13 * max_cost);
    }

    // Cheapest-available-sink allocation per source, in index order.
    void initial_basis() {
        std::vector<double> remaining = demand_;
        std::vector<std::size_t> open;  // sinks with remaining capacity
        open.reserve(n_);
        for (std::size_t j = 0; j < n_; ++j) open.push_back(j);

        for (std::size_t i = 0; i < m_; ++i) {
            double left = supply_[i];
            while (left > 0.0 && !open.empty()) {
                std::size_t best_pos = 0;
                double best_cost = std::numeric_limits<double>::max();
                for (std::size_t pos = 0; pos < open.size(); ++pos) {
                    const double c = cost_[i * n_ + open[pos]];
                    if (c < best_cost) {
                        best_cost = c;
                        best_pos = pos;
                    }
                }
                const std::size_t j = open[best_pos];
                const double amount = std::min(left, remaining[j]);
                add_basic_arc(i, j, amount);
                left -= amount;
                remaining[j] -= amount;
                if (remaining[j] <= 0.0 && !(i == m_ - 1 && left <= 0.0)) {
                    open.erase(open.begin() + static_cast<std::ptrdiff_t>(best_pos));
                } else if (left <= 0.0) {
                    break;
                }
            }
            // Force exact exhaustion; roundoff may leave a dust residue.
            if (left > 0.0 && !basis_src_.empty() && basis_src_.back() == i)
                basis_flow_.back() += left;
        }

        // The allocation is a forest; connect any separate components with
        // zero-flow arcs to obtain a spanning tree of m + n nodes.
        std::vector<std::ptrdiff_t> comp(m_ + n_, -1);
        auto find = [&](std::size_t x) {
            std::size_t root = x;
            while (comp[root] >= 0) root = static_cast<std::size_t>(comp[root]);
            while (comp[x] >= 0) {
                const std::size_t next = static_cast<std::size_t>(comp[x]);
                comp[x] = static_cast<std::ptrdiff_t>(root);
                x = next;
            }
            return root;
        };
        auto unite = [&](std::size_t a, std::size_t b) {
            a = find(a);
            b = find(b);
            if (a != b) comp[a] = static_cast<std::ptrdiff_t>(b);
        };
        for (std::size_t k = 0; k < basis_src_.size(); ++k)
            unite(basis_src_[k], node_of_sink(basis_dst_[k]));
        for (std::size_t j = 0; j < n_; ++j) {
            if (find(node_of_sink(j)) != find(0)) {
                add_basic_arc(0, j, 0.0);
                unite(0, node_of_sink(j));
            }
        }
        for (std::size_t i = 1; i < m_; ++i) {
            if (find(i) != find(0)) {  // isolated zero-supply source
                add_basic_arc(i, 0, 0.0);
                unite(i, node_of_sink(0));
            }
        }
    }

    void add_basic_arc(std::size_t i, std::size_t j, double flow) {
        const std::size_t id = basis_src_.size();
        basis_src_.push_back(i);
        basis_dst_.push_back(j);
        basis_flow_.push_back(flow);
        if (adjacency_.size() < m_ + n_) adjacency_.resize(m_ + n_);
        adjacency_[i].push_back(id);
        adjacency_[node_of_sink(j)].push_back(id);
    }

    void remove_basic_arc(std::size_t id) {
        auto detach = [&](std::size_t node) {
            auto& list = adjacency_[node];
            list.erase(std::find(list.begin(), list.end(), id));
        };
        detach(basis_src_[id]);
        detach(node_of_sink(basis_dst_[id]));
        const std::size_t last = basis_src_.size() - 1;
        if (id != last) {
            auto relabel = [&](std::size_t node) {
                for (auto& arc : adjacency_[node])
                    if (arc == last) arc = id;
            };
            basis_src_[id] = basis_src_[last];
            basis_dst_[id] = basis_dst_[last];
            basis_flow_[id] = basis_flow_[last];
            relabel(basis_src_[id]);
            relabel(node_of_sink(basis_dst_[id]));
        }
        basis_src_.pop_back();
        basis_dst_.pop_back();
        basis_flow_.pop_back();
    }

    // Roots the basis tree at node 0 and propagates u_i + v_j = c_ij.
    void compute_duals() {
        const std::size_t nodes = m_ + n_;
        std::fill(parent_arc_.begin(), parent_arc_.end(), -1);
        std::fill(parent_node_.begin(), parent_node_.end(), -1);
        order_.clear();
        order_.push_back(0);
        parent_node_[0] = 0;
        u_[0] = 0.0;
        for (std::size_t head = 0; head < order_.size(); ++head) {
            const std::size_t node = order_[head];
            for (const std::size_t arc : adjacency_[node]) {
                const std::size_t src = basis_src_[arc];
                const std::size_t snk = node_of_sink(basis_dst_[arc]);
                const std::size_t other = (node == src) ? snk : src;
                if (parent_node_[other] >= 0) continue;
                parent_node_[other] = static_cast<std::ptrdiff_t>(node);
                parent_arc_[other] = static_cast<std::ptrdiff_t>(arc);
                const double c = cost_[basis_src_[arc] * n_ + basis_dst_[arc]];
                if (other == snk)
                    v_[basis_dst_[arc]] = c - u_[src];
                else
                    u_[src] = c - v_[basis_dst_[arc]];
                order_.push_back(other);
            }
        }
        (void)nodes;
    }

    double reduced_cost(std::size_t i, std::size_t j) const {
        return cost_[i * n_ + j] - u_[i] - v_[j];
    }

    // Most negative reduced cost within the first block (of ~1/16 of the
    // matrix) that contains any negative entry, scanning from a rotating
    // cursor. Returns the encoded arc i*n+j, or -1 at optimality.
    std::ptrdiff_t find_entering_block(std::size_t& cursor, double tol) const {
        const std::size_t total = m_ * n_;
        const std::size_t block = std::max<std::size_t>(64, total / 16);
        std::ptrdiff_t best = -1;
        double best_red = -tol;
        std::size_t scanned_in_block = 0;
        for (std::size_t step = 0; step < total; ++step) {
            const std::size_t k = (cursor + step) % total;
            const double red = reduced_cost(k / n_, k % n_);
            if (red < best_red) {
                best_red = red;
                best = static_cast<std::ptrdiff_t>(k);
            }
            if (++scanned_in_block == block) {
                if (best >= 0) {
                    cursor = (k + 1) % total;
                    return best;
                }
                scanned_in_block = 0;
            }
        }
        if (best >= 0) cursor = (static_cast<std::size_t>(best) + 1) % total;
        return best;
    }

    std::ptrdiff_t find_entering_bland() const {
        const double tol = optimality_tolerance();
        for (std::size_t k = 0, total = m_ * n_; k < total; ++k)
            if (reduced_cost(k / n_, k % n_) < -tol) return static_cast<std::ptrdiff_t>(k);
        return -1;
    }

    // Applies the pivot for entering arc (i, j); returns the amount moved.
    double pivot(std::size_t entering) {
        const std::size_t i = entering / n_;
        const std::size_t j = entering % n_;
        const std::size_t a = i;
        const std::size_t b = node_of_sink(j);

        // Tree path a -> b via root-relative depths.
        auto depth_of = [&](std::size_t x) {
            std::size_t d = 0;
            while (x != 0) {
                x = static_cast<std::size_t>(parent_node_[x]);
                ++d;
            }
            return d;
        };
        std::size_t pa = a, pb = b;
        std::size_t da = depth_of(pa), db = depth_of(pb);
        std::vector<std::size_t> path_a, path_b;  // arc ids from a up, from b up
        while (da > db) {
            path_a.push_back(static_cast<std::size_t>(parent_arc_[pa]));
            pa = static_cast<std::size_t>(parent_node_[pa]);
            --da;
        }
        while (db > da) {
            path_b.push_back(static_cast<std::size_t>(parent_arc_[pb]));
            pb = static_cast<std::size_t>(parent_node_[pb]);
            --db;
        }
        while (pa != pb) {
            path_a.push_back(static_cast<std::size_t>(parent_arc_[pa]));
            pa = static_cast<std::size_t>(parent_node_[pa]);
            path_b.push_back(static_cast<std::size_t>(parent_arc_[pb]));
            pb = static_cast<std::size_t>(parent_node_[pb]);
        }

        // Walking the cycle from the entering arc, flows alternate signs;
        // node-by-node from a the first tree arc is a minus arc, and from b
        // likewise when approached in cycle order.
        std::vector<std::size_t> minus_arcs;
        for (std::size_t k = 0; k < path_a.size(); ++k)
            if (k % 2 == 0) minus_arcs.push_back(path_a[k]);
        for (std::size_t k = 0; k < path_b.size(); ++k)
            if (k % 2 == 0) minus_arcs.push_back(path_b[k]);

        double theta = std::numeric_limits<double>::max();
        std::size_t leaving = static_cast<std::size_t>(-1);
        for (const std::size_t arc : minus_arcs) {
            const double f = basis_flow_[arc];
            const bool tie = f == theta && leaving != static_cast<std::size_t>(-1) &&
                             (basis_src_[arc] < basis_src_[leaving] ||
                              (basis_src_[arc] == basis_src_[leaving] &&
                               basis_dst_[arc] < basis_dst_[leaving]));
            if (f < theta || tie) {
                theta = f;
                leaving = arc;
            }
        }

        for (std::size_t k = 0; k < path_a.size(); ++k)
            basis_flow_[path_a[k]] += (k % 2 == 0) ? -theta : theta;
        for (std::size_t k = 0; k < path_b.size(); ++k)
            basis_flow_[path_b[k]] += (k % 2 == 0) ? -theta : theta;

        remove_basic_arc(leaving);
        add_basic_arc(i, j, theta);
        return theta;
    }

    std::size_t m_;
    std::size_t n_;
    std::span<const double> cost_;
    std::vector<double> supply_;
    std::vector<double> demand_;

    std::vector<std::size_t> basis_src_, basis_dst_;
    std::vector<double> basis_flow_;
    std::vector<std::vector<std::size_t>> adjacency_;
    std::vector<std::ptrdiff_t> parent_arc_, parent_node_;
    std::vector<std::size_t> order_;
    std::vector<double> u_, v_;
};

}  // namespace detail

// cost is row-major |supply| x |demand|. Total supply and demand must agree
// within 1e-10 (relative to their magnitude); the solution is exact for the
// finite problem up to floating-point arithmetic.
inline TransportationSolution solve_transportation(std::span<const double> supply,
                                                   std::span<const double> demand,
                                                   std::span<const double> cost) {
    if (supply.empty() || demand.empty()) throw ConfigError("empty transportation problem");
    if (cost.size() != supply.size() * demand.size())
        throw ConfigError("cost matrix size mismatch");
    double total_supply = 0.0, total_demand = 0.0;
    for (double s : supply) {
        if (s < 0.0) throw ConfigError("negative supply");
        total_supply += s;
    }
    for (double d : demand) {
        if (d < 0.0) throw ConfigError("negative demand");
        total_demand += d;
    }
    if (std::abs(total_supply - total_demand) > 1e-10 * std::max(1.0, std::abs(total_supply)))
        throw MassMismatch(total_supply, total_demand);
    detail::TransportationSimplex simplex(supply, demand, cost);
    return simplex.solve();
}

}  // namespace cpd
