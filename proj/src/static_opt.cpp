#include "obst/static_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>

namespace obst {

EmpiricalMeasures empirical_measures(std::span<const Request> sigma, PeerId n) {
    if (sigma.empty()) throw InputError("empirical_measures: empty request sequence");
    if (n < 1) throw InputError("empirical_measures: n must be >= 1");
    EmpiricalMeasures em;
    em.n = n;
    em.m = sigma.size();
    const auto un = static_cast<std::size_t>(n);
    em.x.assign(un, 0.0);
    em.y.assign(un, 0.0);
    em.z.assign(un, 0.0);
    std::map<Request, std::size_t> counts;
    for (std::size_t t = 0; t < sigma.size(); ++t) {
        const Request& r = sigma[t];
        if (r.source < 1 || r.source > n || r.dest < 1 || r.dest > n) {
            throw InputError("empirical_measures: request " + std::to_string(t) + " has an id outside [1," +
                             std::to_string(n) + "]");
        }
        ++counts[r];
    }
    const double m = static_cast<double>(em.m);
    for (const auto& [r, c] : counts) {
        const double f = static_cast<double>(c) / m;
        em.f.emplace_back(r, f);
        em.x[static_cast<std::size_t>(r.source - 1)] += f;
        em.y[static_cast<std::size_t>(r.dest - 1)] += f;
    }
    for (std::size_t i = 0; i < un; ++i) em.z[i] = (em.x[i] + em.y[i]) / 2.0;
    return em;
}

double entropy(std::span<const double> p) {
    double total = 0.0;
    double h = 0.0;
    for (double v : p) {
        if (v < 0.0 || std::isnan(v)) throw InputError("entropy: negative or NaN mass");
        total += v;
        if (v > 0.0) h -= v * std::log2(v);
    }
    if (std::abs(total - 1.0) > 1e-6) throw InputError("entropy: distribution sums to " + std::to_string(total));
    return std::max(0.0, h);  // rounding can push a point mass slightly negative
}

double balance_constant() { return 1.0 / (1.0 - std::log2(std::sqrt(5.0) - 1.0)); }

double weighted_depth(const Bst& t, std::span<const double> weights) {
    double cost = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] != 0.0) cost += weights[i] * t.depth(static_cast<PeerId>(i + 1));
    }
    return cost;
}

Bst mehlhorn_tree(std::span<const double> weights) {
    const std::size_t n = weights.size();
    if (n == 0) throw InputError("mehlhorn_tree: no keys");
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (weights[i] < 0.0) throw InputError("mehlhorn_tree: negative weight");
        prefix[i + 1] = prefix[i] + weights[i];
    }
    std::vector<PeerId> order;
    order.reserve(n);
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, n}};  // half-open
    while (!stack.empty()) {
        auto [lo, hi] = stack.back();
        stack.pop_back();
        if (lo >= hi) continue;
        std::size_t best = lo;
        double best_gap = std::numeric_limits<double>::infinity();
        for (std::size_t r = lo; r < hi; ++r) {
            const double gap = std::abs((prefix[r] - prefix[lo]) - (prefix[hi] - prefix[r + 1]));
            if (gap < best_gap - 1e-12) {
                best_gap = gap;
                best = r;
            }
        }
        order.push_back(static_cast<PeerId>(best + 1));
        stack.emplace_back(best + 1, hi);
        stack.emplace_back(lo, best);
    }
    return Bst::from_insertion_order(order);
}

WeightedTree optimal_lookup_bst(std::span<const double> weights, std::size_t limit) {
    const std::size_t n = weights.size();
    if (n == 0) throw InputError("optimal_lookup_bst: no keys");
    if (n > limit) throw InputError("optimal_lookup_bst: " + std::to_string(n) + " keys exceed the limit " + std::to_string(limit));
    // 1-based keys; cost[i][j] over keys i..j counts depth + 1, with j = i - 1
    // the empty range.
    const std::size_t w = n + 2;
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + weights[i];
    std::vector<double> cost(w * w, 0.0);
    std::vector<std::size_t> root(w * w, 0);
    auto at = [w](std::size_t i, std::size_t j) { return i * w + j; };
    for (std::size_t i = 1; i <= n; ++i) {
        cost[at(i, i)] = weights[i - 1];
        root[at(i, i)] = i;
    }
    for (std::size_t len = 2; len <= n; ++len) {
        for (std::size_t i = 1; i + len - 1 <= n; ++i) {
            const std::size_t j = i + len - 1;
            double best = std::numeric_limits<double>::infinity();
            std::size_t best_r = root[at(i, j - 1)];
            for (std::size_t r = root[at(i, j - 1)]; r <= root[at(i + 1, j)]; ++r) {
                const double c = (r > i ? cost[at(i, r - 1)] : 0.0) + (r < j ? cost[at(r + 1, j)] : 0.0);
                if (c < best) {
                    best = c;
                    best_r = r;
                }
            }
            cost[at(i, j)] = best + prefix[j] - prefix[i - 1];
            root[at(i, j)] = best_r;
        }
    }
    std::vector<PeerId> order;
    order.reserve(n);
    std::vector<std::pair<std::size_t, std::size_t>> stack{{1, n}};
    while (!stack.empty()) {
        auto [i, j] = stack.back();
        stack.pop_back();
        if (i > j) continue;
        const std::size_t r = root[at(i, j)];
        order.push_back(static_cast<PeerId>(r));
        stack.emplace_back(r + 1, j);
        if (r > i) stack.emplace_back(i, r - 1);
    }
    return {Bst::from_insertion_order(order), cost[at(1, n)] - prefix[n]};
}

std::vector<std::vector<PeerId>> enumerate_bsts(PeerId n) {
    if (n < 1 || n > 12) throw InputError("enumerate_bsts: n must lie in [1, 12]");
    std::vector<std::vector<std::vector<PeerId>>> shapes(static_cast<std::size_t>(n) + 1);
    shapes[0].push_back({});
    for (PeerId len = 1; len <= n; ++len) {
        auto& out = shapes[static_cast<std::size_t>(len)];
        for (PeerId r = 1; r <= len; ++r) {
            for (const auto& left : shapes[static_cast<std::size_t>(r - 1)]) {
                for (const auto& right : shapes[static_cast<std::size_t>(len - r)]) {
                    std::vector<PeerId> parent(static_cast<std::size_t>(len), 0);
                    for (std::size_t i = 0; i < left.size(); ++i) parent[i] = left[i] == 0 ? r : left[i];
                    for (std::size_t i = 0; i < right.size(); ++i) {
                        parent[static_cast<std::size_t>(r) + i] = right[i] == 0 ? r : right[i] + r;
                    }
                    out.push_back(std::move(parent));
                }
            }
        }
    }
    return std::move(shapes[static_cast<std::size_t>(n)]);
}

Bst bst_from_parents(std::span<const PeerId> parent) {
    const auto n = parent.size();
    std::vector<PeerId> left(n + 1, kNoPeer);
    std::vector<PeerId> right(n + 1, kNoPeer);
    PeerId root = kNoPeer;
    for (std::size_t i = 0; i < n; ++i) {
        const auto id = static_cast<PeerId>(i + 1);
        const PeerId p = parent[i];
        if (p == kNoPeer) {
            if (root != kNoPeer) throw InputError("bst_from_parents: more than one root");
            root = id;
        } else if (p < 1 || static_cast<std::size_t>(p) > n) {
            throw InputError("bst_from_parents: parent out of range");
        } else {
            (id < p ? left : right)[static_cast<std::size_t>(p)] = id;
        }
    }
    if (root == kNoPeer) throw InputError("bst_from_parents: no root");
    std::vector<PeerId> order;
    std::vector<PeerId> stack{root};
    while (!stack.empty()) {
        const PeerId x = stack.back();
        stack.pop_back();
        order.push_back(x);
        if (right[static_cast<std::size_t>(x)] != kNoPeer) stack.push_back(right[static_cast<std::size_t>(x)]);
        if (left[static_cast<std::size_t>(x)] != kNoPeer) stack.push_back(left[static_cast<std::size_t>(x)]);
    }
    Bst t = Bst::from_insertion_order(order);
    if (t.size() != n) throw InputError("bst_from_parents: parent array is not a tree");
    return t;
}

double Partition::h_alpha() const { return entropy(alphas); }

int Partition::set_of(Request r) const {
    if (symmetric && r.source > r.dest) std::swap(r.source, r.dest);
    auto it = std::find(classes.begin(), classes.end(), r);
    return it == classes.end() ? -1 : assignment[static_cast<std::size_t>(it - classes.begin())];
}

namespace {

double entropy_of_sums(const std::vector<double>& sums) {
    double h = 0.0;
    for (double v : sums) {
        if (v > 0.0) h -= v * std::log2(v);
    }
    return h;
}

// Largest entropy reachable by pouring `remaining` onto `sums`: fill the
// lowest sets up to a common level.
double water_fill_bound(std::vector<double> sums, double remaining) {
    std::sort(sums.begin(), sums.end());
    const std::size_t k = sums.size();
    double prefix = 0.0;
    double level = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        prefix += sums[j];
        level = (remaining + prefix) / static_cast<double>(j + 1);
        if (j + 1 == k || level <= sums[j + 1]) break;
    }
    for (double& s : sums) s = std::max(s, level);
    return entropy_of_sums(sums);
}

class PartitionSearch {
public:
    PartitionSearch(const std::vector<double>& freq, int k, std::vector<int> incumbent, double incumbent_h)
        : freq_(freq), k_(k), best_(std::move(incumbent)), best_h_(incumbent_h), current_(freq.size(), -1),
          sums_(static_cast<std::size_t>(k), 0.0), suffix_(freq.size() + 1, 0.0) {
        for (std::size_t i = freq.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] + freq[i];
    }

    void run() { descend(0, 0); }
    [[nodiscard]] const std::vector<int>& best() const { return best_; }

private:
    void descend(std::size_t i, int used) {
        if (i == freq_.size()) {
            const double h = entropy_of_sums(sums_);
            if (h > best_h_ + 1e-12) {
                best_h_ = h;
                best_ = current_;
            }
            return;
        }
        if (water_fill_bound(sums_, suffix_[i]) <= best_h_ + 1e-12) return;
        // Empty sets are interchangeable: only the first one is tried.
        const int limit = std::min(k_, used + 1);
        for (int s = 0; s < limit; ++s) {
            current_[i] = s;
            sums_[static_cast<std::size_t>(s)] += freq_[i];
            descend(i + 1, std::max(used, s + 1));
            sums_[static_cast<std::size_t>(s)] -= freq_[i];
        }
        current_[i] = -1;
    }

    const std::vector<double>& freq_;
    int k_;
    std::vector<int> best_;
    double best_h_;
    std::vector<int> current_;
    std::vector<double> sums_;
    std::vector<double> suffix_;
};

}  // namespace

Partition partition_requests(std::span<const Request> sigma, int k, const PartitionOptions& options) {
    if (k < 1) throw InputError("partition_requests: k must be >= 1");
    if (sigma.empty()) throw InputError("partition_requests: empty request sequence");
    std::map<Request, std::size_t> counts;
    for (Request r : sigma) {
        if (options.symmetric && r.source > r.dest) std::swap(r.source, r.dest);
        ++counts[r];
    }
    std::vector<std::pair<Request, std::size_t>> classes(counts.begin(), counts.end());
    std::stable_sort(classes.begin(), classes.end(), [](const auto& a, const auto& b) { return a.second > b.second; });

    Partition p;
    p.symmetric = options.symmetric;
    p.alphas.assign(static_cast<std::size_t>(k), 0.0);
    const double m = static_cast<double>(sigma.size());
    for (const auto& [r, c] : classes) {
        p.classes.push_back(r);
        p.frequency.push_back(static_cast<double>(c) / m);
    }
    // Heaviest class first into the currently lightest set.
    for (double f : p.frequency) {
        const auto lightest = static_cast<int>(std::min_element(p.alphas.begin(), p.alphas.end()) - p.alphas.begin());
        p.assignment.push_back(lightest);
        p.alphas[static_cast<std::size_t>(lightest)] += f;
    }
    if (k > 1 && p.classes.size() <= options.exact_limit) {
        PartitionSearch search(p.frequency, k, p.assignment, entropy_of_sums(p.alphas));
        search.run();
        p.assignment = search.best();
        std::fill(p.alphas.begin(), p.alphas.end(), 0.0);
        for (std::size_t i = 0; i < p.assignment.size(); ++i) p.alphas[static_cast<std::size_t>(p.assignment[i])] += p.frequency[i];
        p.exact = true;
    } else if (k == 1) {
        p.exact = true;
    }
    return p;
}

std::vector<double> set_node_weights(const Partition& p, int set, PeerId n) {
    if (set < 0 || set >= p.k()) throw InputError("set_node_weights: set index out of range");
    std::vector<double> z(static_cast<std::size_t>(n), 0.0);
    const double alpha = p.alphas[static_cast<std::size_t>(set)];
    if (alpha <= 0.0) return z;
    for (std::size_t i = 0; i < p.classes.size(); ++i) {
        if (p.assignment[i] != set) continue;
        const Request r = p.classes[i];
        if (r.source < 1 || r.source > n || r.dest < 1 || r.dest > n) throw InputError("set_node_weights: id outside [1, n]");
        const double half = p.frequency[i] / (2.0 * alpha);
        z[static_cast<std::size_t>(r.source - 1)] += half;
        z[static_cast<std::size_t>(r.dest - 1)] += half;
    }
    return z;
}

StaticObst build_static_obst(std::span<const Request> sigma, PeerId n, int k, const PartitionOptions& options) {
    const EmpiricalMeasures em = empirical_measures(sigma, n);
    Partition partition = partition_requests(sigma, k, options);
    std::vector<Bst> trees;
    trees.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        if (partition.alphas[static_cast<std::size_t>(i)] > 0.0) {
            trees.push_back(mehlhorn_tree(set_node_weights(partition, i, n)));
        } else {
            trees.push_back(mehlhorn_tree(em.z));
        }
    }
    return {Overlay::from_trees(std::move(trees)), std::move(partition)};
}

BoundReport bound_report(std::span<const Request> sigma, PeerId n, const Partition& partition) {
    const EmpiricalMeasures em = empirical_measures(sigma, n);
    BoundReport r;
    r.k = partition.k();
    r.h_x = entropy(em.x);
    r.h_y = entropy(em.y);
    r.h_z = entropy(em.z);
    r.h_alpha = partition.h_alpha();
    const double c = balance_constant();
    r.balance_constant = c;
    r.lookup_lower = r.h_y / kLog2Three;
    r.balanced_upper = 2.0 + c * r.h_y;
    r.single_tree_upper = 4.0 + 2.0 * c * r.h_z;
    r.k_tree_upper = 4.0 + c * (2.0 * r.h_z - 2.0 * r.h_alpha);
    const double raw = (r.h_y - std::log2(static_cast<double>(r.k))) / kLog2Three;
    r.k_lookup_vacuous = raw <= 0.0;
    r.k_lookup_lower = std::max(0.0, raw);
    return r;
}

std::string to_json(const BoundReport& r) {
    nlohmann::ordered_json j;
    j["k"] = r.k;
    j["H_X"] = r.h_x;
    j["H_Y"] = r.h_y;
    j["H_Z"] = r.h_z;
    j["H_alpha"] = r.h_alpha;
    j["balance_constant"] = r.balance_constant;
    j["lookup_lower"] = r.lookup_lower;
    j["balanced_upper"] = r.balanced_upper;
    j["single_tree_upper"] = r.single_tree_upper;
    j["k_tree_upper"] = r.k_tree_upper;
    j["k_lookup_lower"] = r.k_lookup_lower;
    j["k_lookup_vacuous"] = r.k_lookup_vacuous;
    return j.dump(2);
}

double lookup_cost(std::span<const Bst> trees, std::span<const PeerId> lookups) {
    if (trees.empty()) throw InputError("lookup_cost: no trees");
    if (lookups.empty()) throw InputError("lookup_cost: no lookups");
    double total = 0.0;
    for (PeerId v : lookups) {
        int best = std::numeric_limits<int>::max();
        for (const Bst& t : trees) best = std::min(best, t.depth(v));
        total += best;
    }
    return total / static_cast<double>(lookups.size());
}

BruteForceResult brute_force_optimal_obst1(std::span<const Request> sigma, PeerId n, PeerId limit) {
    if (n > limit) throw InputError("brute_force_optimal_obst1: n = " + std::to_string(n) + " exceeds " + std::to_string(limit));
    const EmpiricalMeasures em = empirical_measures(sigma, n);
    const auto shapes = enumerate_bsts(n);
    const auto un = static_cast<std::size_t>(n);
    std::vector<int> depth(un + 1);
    double best_cost = std::numeric_limits<double>::infinity();
    std::size_t best_index = 0;
    for (std::size_t s = 0; s < shapes.size(); ++s) {
        const auto& parent = shapes[s];
        auto depth_of = [&](PeerId v) {
            int d = 0;
            for (PeerId x = parent[static_cast<std::size_t>(v - 1)]; x != kNoPeer; x = parent[static_cast<std::size_t>(x - 1)]) ++d;
            return d;
        };
        for (PeerId v = 1; v <= n; ++v) depth[static_cast<std::size_t>(v)] = depth_of(v);
        double cost = 0.0;
        for (const auto& [r, f] : em.f) {
            PeerId a = r.source;
            PeerId b = r.dest;
            int d = 0;
            while (a != b) {
                if (depth[static_cast<std::size_t>(a)] >= depth[static_cast<std::size_t>(b)]) {
                    a = parent[static_cast<std::size_t>(a - 1)];
                } else {
                    b = parent[static_cast<std::size_t>(b - 1)];
                }
                ++d;
            }
            cost += f * (d + 1);
        }
        if (cost < best_cost - 1e-12) {
            best_cost = cost;
            best_index = s;
        }
    }
    return {bst_from_parents(shapes[best_index]), best_cost, shapes.size()};
}

}  // namespace obst
