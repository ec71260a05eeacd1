#include "obst/bst.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace obst {

namespace {

std::string id_str(PeerId id) { return id == kNoPeer ? std::string("-") : std::to_string(id); }

}  // namespace

const Bst::Node& Bst::node(PeerId id) const {
    require(id);
    return nodes_[static_cast<std::size_t>(id)];
}

Bst::Node& Bst::node(PeerId id) {
    require(id);
    return nodes_[static_cast<std::size_t>(id)];
}

bool Bst::contains(PeerId id) const {
    return id > 0 && static_cast<std::size_t>(id) < nodes_.size() && nodes_[static_cast<std::size_t>(id)].present;
}

void Bst::require(PeerId id) const {
    if (!contains(id)) throw InputError("peer " + std::to_string(id) + " is not in the tree");
}

void Bst::ensure_capacity(PeerId id) {
    if (static_cast<std::size_t>(id) >= nodes_.size()) nodes_.resize(static_cast<std::size_t>(id) + 1);
}

void Bst::refresh(PeerId id) {
    Node& n = nodes_[static_cast<std::size_t>(id)];
    n.sub_min = n.left != kNoPeer ? nodes_[static_cast<std::size_t>(n.left)].sub_min : id;
    n.sub_max = n.right != kNoPeer ? nodes_[static_cast<std::size_t>(n.right)].sub_max : id;
}

void Bst::refresh_path(PeerId from) {
    for (PeerId x = from; x != kNoPeer; x = nodes_[static_cast<std::size_t>(x)].parent) refresh(x);
}

void Bst::replace_child(PeerId parent, PeerId old_child, PeerId new_child) {
    if (parent == kNoPeer) {
        root_ = new_child;
    } else {
        Node& p = nodes_[static_cast<std::size_t>(parent)];
        if (p.left == old_child) {
            p.left = new_child;
        } else {
            p.right = new_child;
        }
    }
    if (new_child != kNoPeer) nodes_[static_cast<std::size_t>(new_child)].parent = parent;
}

Bst Bst::from_edges(PeerId n, std::span<const Edge> edges) {
    if (n < 1) throw InputError("from_edges: n must be >= 1");
    if (edges.size() != static_cast<std::size_t>(n - 1)) {
        throw InputError("from_edges: a tree on " + std::to_string(n) + " nodes needs " + std::to_string(n - 1) +
                         " edges, got " + std::to_string(edges.size()));
    }
    const auto un = static_cast<std::size_t>(n);
    std::vector<std::vector<PeerId>> adj(un + 1);
    std::vector<Edge> seen;
    seen.reserve(edges.size());
    for (const Edge& e : edges) {
        if (e.a < 1 || e.a > n || e.b < 1 || e.b > n) {
            throw InputError("from_edges: edge {" + std::to_string(e.a) + "," + std::to_string(e.b) + "} out of range");
        }
        if (e.a == e.b) throw InputError("from_edges: self loop at " + std::to_string(e.a));
        seen.push_back(make_edge(e.a, e.b));
        adj[static_cast<std::size_t>(e.a)].push_back(e.b);
        adj[static_cast<std::size_t>(e.b)].push_back(e.a);
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
        throw InputError("from_edges: duplicate edge (the edge set contains a cycle)");
    }

    // n-1 distinct edges: connected <=> acyclic.
    {
        std::vector<char> mark(un + 1, 0);
        std::vector<PeerId> stack{1};
        mark[1] = 1;
        std::size_t reached = 1;
        while (!stack.empty()) {
            PeerId x = stack.back();
            stack.pop_back();
            for (PeerId y : adj[static_cast<std::size_t>(x)]) {
                if (!mark[static_cast<std::size_t>(y)]) {
                    mark[static_cast<std::size_t>(y)] = 1;
                    ++reached;
                    stack.push_back(y);
                }
            }
        }
        if (reached != un) throw InputError("from_edges: edge set is disconnected (or contains a cycle)");
    }

    struct Frame {
        PeerId id;
        PeerId parent;
        PeerId lo;  // exclusive bounds
        PeerId hi;
        int depth;
    };

    // Height of the orientation rooted at r, or -1 if r admits none.
    auto orient = [&](PeerId r, int height_cap) -> int {
        int height = 0;
        std::vector<Frame> stack{{r, kNoPeer, 0, n + 1, 0}};
        while (!stack.empty()) {
            Frame f = stack.back();
            stack.pop_back();
            height = std::max(height, f.depth);
            if (height > height_cap) return -1;
            int smaller = 0;
            int larger = 0;
            for (PeerId c : adj[static_cast<std::size_t>(f.id)]) {
                if (c == f.parent) continue;
                if (c < f.id) {
                    if (++smaller > 1 || c <= f.lo) return -1;
                    stack.push_back({c, f.id, f.lo, f.id, f.depth + 1});
                } else {
                    if (++larger > 1 || c >= f.hi) return -1;
                    stack.push_back({c, f.id, f.id, f.hi, f.depth + 1});
                }
            }
        }
        return height;
    };

    PeerId best_root = kNoPeer;
    int best_height = std::numeric_limits<int>::max();
    for (PeerId r = 1; r <= n; ++r) {
        if (adj[static_cast<std::size_t>(r)].size() > 2) continue;
        int h = orient(r, best_height - 1);
        if (h >= 0 && h < best_height) {
            best_height = h;
            best_root = r;
        }
    }
    if (best_root == kNoPeer) throw InputError("from_edges: no root yields a valid search-order orientation");

    Bst t;
    t.nodes_.resize(un + 1);
    t.root_ = best_root;
    t.size_ = un;
    std::vector<PeerId> order;
    order.reserve(un);
    std::vector<std::pair<PeerId, PeerId>> stack{{best_root, kNoPeer}};
    while (!stack.empty()) {
        auto [x, p] = stack.back();
        stack.pop_back();
        order.push_back(x);
        Node& nx = t.nodes_[static_cast<std::size_t>(x)];
        nx.present = true;
        nx.parent = p;
        for (PeerId c : adj[static_cast<std::size_t>(x)]) {
            if (c == p) continue;
            (c < x ? nx.left : nx.right) = c;
            stack.emplace_back(c, x);
        }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) t.refresh(*it);
    return t;
}

Bst Bst::random(PeerId n, std::uint64_t seed) {
    if (n < 1) throw InputError("random_bst: n must be >= 1");
    std::vector<PeerId> keys(static_cast<std::size_t>(n));
    std::iota(keys.begin(), keys.end(), PeerId{1});
    std::mt19937_64 rng(seed);
    std::shuffle(keys.begin(), keys.end(), rng);
    return from_insertion_order(keys);
}

Bst Bst::from_insertion_order(std::span<const PeerId> keys) {
    Bst t;
    if (!keys.empty()) t.nodes_.reserve(static_cast<std::size_t>(*std::max_element(keys.begin(), keys.end())) + 1);
    for (PeerId k : keys) t.insert_leaf(k);
    return t;
}

Bst Bst::parse(std::string_view text) {
    Bst t;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    std::vector<PeerId> child_of;  // parent recorded while parsing
    auto parse_field = [&](const std::string& tok) -> PeerId {
        if (tok == "-") return kNoPeer;
        PeerId v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size() || v < 1) {
            throw InputError("tree line " + std::to_string(line_no) + ": bad id '" + tok + "'");
        }
        return v;
    };
    std::vector<PeerId> declared;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string a, b, c, extra;
        if (!(ls >> a >> b >> c) || (ls >> extra)) {
            throw InputError("tree line " + std::to_string(line_no) + ": expected 'id left right'");
        }
        PeerId id = parse_field(a);
        if (id == kNoPeer) throw InputError("tree line " + std::to_string(line_no) + ": node id cannot be '-'");
        PeerId l = parse_field(b);
        PeerId r = parse_field(c);
        t.ensure_capacity(std::max({id, l, r}));
        child_of.resize(t.nodes_.size(), kNoPeer);
        Node& nd = t.nodes_[static_cast<std::size_t>(id)];
        if (nd.present) throw InputError("tree line " + std::to_string(line_no) + ": node " + a + " declared twice");
        nd.present = true;
        nd.left = l;
        nd.right = r;
        for (PeerId c2 : {l, r}) {
            if (c2 == kNoPeer) continue;
            if (c2 == id || child_of[static_cast<std::size_t>(c2)] != kNoPeer) {
                throw InputError("tree line " + std::to_string(line_no) + ": node " + std::to_string(c2) +
                                 " has more than one parent");
            }
            child_of[static_cast<std::size_t>(c2)] = id;
        }
        if (t.root_ == kNoPeer) t.root_ = id;
        declared.push_back(id);
        ++t.size_;
    }
    for (PeerId id : declared) {
        Node& nd = t.nodes_[static_cast<std::size_t>(id)];
        for (PeerId c : {nd.left, nd.right}) {
            if (c != kNoPeer && !t.nodes_[static_cast<std::size_t>(c)].present) {
                throw InputError("tree: node " + std::to_string(id) + " references undeclared child " + std::to_string(c));
            }
        }
        nd.parent = child_of[static_cast<std::size_t>(id)];
    }
    if (t.root_ != kNoPeer && t.nodes_[static_cast<std::size_t>(t.root_)].parent != kNoPeer) {
        throw InputError("tree: first node " + std::to_string(t.root_) + " must be the root but has a parent");
    }
    // Annotations follow the structure as given; check() judges search order.
    std::vector<PeerId> order;
    std::vector<PeerId> stack;
    if (t.root_ != kNoPeer) stack.push_back(t.root_);
    while (!stack.empty() && order.size() <= t.size_) {
        PeerId x = stack.back();
        stack.pop_back();
        order.push_back(x);
        const Node& nx = t.nodes_[static_cast<std::size_t>(x)];
        if (nx.left != kNoPeer) stack.push_back(nx.left);
        if (nx.right != kNoPeer) stack.push_back(nx.right);
    }
    for (PeerId id : declared) t.refresh(id);
    for (auto it = order.rbegin(); it != order.rend(); ++it) t.refresh(*it);
    return t;
}

int Bst::depth(PeerId id) const {
    int d = 0;
    for (PeerId x = node(id).parent; x != kNoPeer; x = nodes_[static_cast<std::size_t>(x)].parent) ++d;
    return d;
}

int Bst::height() const {
    if (root_ == kNoPeer) return -1;
    int h = 0;
    std::vector<std::pair<PeerId, int>> stack{{root_, 0}};
    while (!stack.empty()) {
        auto [x, d] = stack.back();
        stack.pop_back();
        h = std::max(h, d);
        const Node& nx = nodes_[static_cast<std::size_t>(x)];
        if (nx.left != kNoPeer) stack.emplace_back(nx.left, d + 1);
        if (nx.right != kNoPeer) stack.emplace_back(nx.right, d + 1);
    }
    return h;
}

PeerId Bst::next_hop(PeerId current, PeerId dest) const {
    if (!contains(dest)) throw InputError("unroutable: destination " + std::to_string(dest) + " is not in the tree");
    const Node& c = node(current);
    if (current == dest) return current;
    if (c.sub_min <= dest && dest < current) return c.left;
    if (current < dest && dest <= c.sub_max) return c.right;
    return c.parent;
}

std::vector<PeerId> Bst::route(PeerId u, PeerId v) const {
    std::vector<PeerId> path{u};
    PeerId x = u;
    while (x != v) {
        x = next_hop(x, v);
        if (x == kNoPeer || path.size() > size_) {
            throw InvariantViolation("route " + std::to_string(u) + "->" + std::to_string(v) + " did not terminate");
        }
        path.push_back(x);
    }
    return path;
}

PeerId Bst::lca(PeerId u, PeerId v) const {
    require(u);
    require(v);
    const PeerId lo = std::min(u, v);
    const PeerId hi = std::max(u, v);
    PeerId x = root_;
    while (x < lo || x > hi) x = x > hi ? nodes_[static_cast<std::size_t>(x)].left : nodes_[static_cast<std::size_t>(x)].right;
    return x;
}

int Bst::distance(PeerId u, PeerId v) const {
    if (u == v) {
        require(u);
        return 0;
    }
    const PeerId w = lca(u, v);
    int d = 0;
    for (PeerId x = u; x != w; x = nodes_[static_cast<std::size_t>(x)].parent) ++d;
    for (PeerId x = v; x != w; x = nodes_[static_cast<std::size_t>(x)].parent) ++d;
    return d;
}

void Bst::rotate_up(PeerId x, RotationLedger& ledger) {
    Node& nx = node(x);
    const PeerId p = nx.parent;
    if (p == kNoPeer) throw InputError("rotate_up: " + std::to_string(x) + " is the root");
    Node& np = nodes_[static_cast<std::size_t>(p)];
    const PeerId g = np.parent;
    const PeerId old_min = np.sub_min;
    const PeerId old_max = np.sub_max;
    if (np.left == x) {
        np.left = nx.right;
        if (nx.right != kNoPeer) nodes_[static_cast<std::size_t>(nx.right)].parent = p;
        nx.right = p;
    } else {
        np.right = nx.left;
        if (nx.left != kNoPeer) nodes_[static_cast<std::size_t>(nx.left)].parent = p;
        nx.left = p;
    }
    np.parent = x;
    replace_child(g, p, x);
    refresh(p);
    nx.sub_min = old_min;
    nx.sub_max = old_max;
    ++ledger.count;
}

void Bst::splay_within(PeerId x, PeerId subtree_root, RotationLedger& ledger) {
    require(subtree_root);
    PeerId y = x;
    while (y != subtree_root && y != kNoPeer) y = node(y).parent;
    if (y != subtree_root) {
        throw InputError("splay_within: " + std::to_string(x) + " is not in the subtree of " + std::to_string(subtree_root));
    }
    const PeerId anchor = node(subtree_root).parent;
    while (node(x).parent != anchor) {
        const PeerId p = node(x).parent;
        const PeerId g = node(p).parent;
        if (g == anchor) {
            rotate_up(x, ledger);  // zig
        } else if ((node(p).left == x) == (node(g).left == p)) {
            rotate_up(p, ledger);  // zig-zig
            rotate_up(x, ledger);
        } else {
            rotate_up(x, ledger);  // zig-zag
            rotate_up(x, ledger);
        }
    }
}

void Bst::double_splay(PeerId u, PeerId v, RotationLedger& ledger) {
    require(u);
    require(v);
    if (u == v) return;
    splay_within(u, lca(u, v), ledger);
    const PeerId c = v < u ? node(u).left : node(u).right;
    splay_within(v, c, ledger);
}

void Bst::insert_leaf(PeerId id) {
    if (id < 1) throw InputError("insert_leaf: ids must be >= 1, got " + std::to_string(id));
    if (contains(id)) throw InputError("insert_leaf: duplicate id " + std::to_string(id));
    ensure_capacity(id);
    PeerId parent = kNoPeer;
    for (PeerId x = root_; x != kNoPeer;) {
        parent = x;
        x = id < x ? nodes_[static_cast<std::size_t>(x)].left : nodes_[static_cast<std::size_t>(x)].right;
    }
    Node& n = nodes_[static_cast<std::size_t>(id)];
    n = Node{kNoPeer, kNoPeer, parent, id, id, true};
    if (parent == kNoPeer) {
        root_ = id;
    } else {
        Node& p = nodes_[static_cast<std::size_t>(parent)];
        (id < parent ? p.left : p.right) = id;
        refresh_path(parent);
    }
    ++size_;
}

void Bst::remove(PeerId id) {
    const Node n = node(id);
    PeerId repair_from = n.parent;
    if (n.left == kNoPeer && n.right == kNoPeer) {
        replace_child(n.parent, id, kNoPeer);
    } else {
        const bool use_pred = n.left != kNoPeer;
        PeerId s = use_pred ? n.left : n.right;
        if (use_pred) {
            while (nodes_[static_cast<std::size_t>(s)].right != kNoPeer) s = nodes_[static_cast<std::size_t>(s)].right;
        } else {
            while (nodes_[static_cast<std::size_t>(s)].left != kNoPeer) s = nodes_[static_cast<std::size_t>(s)].left;
        }
        Node& ns = nodes_[static_cast<std::size_t>(s)];
        if (ns.parent == id) {
            // s is the direct child; it keeps its own outer subtree.
            repair_from = s;
            if (use_pred) {
                ns.right = n.right;
                if (n.right != kNoPeer) nodes_[static_cast<std::size_t>(n.right)].parent = s;
            } else {
                ns.left = n.left;
                if (n.left != kNoPeer) nodes_[static_cast<std::size_t>(n.left)].parent = s;
            }
        } else {
            const PeerId sp = ns.parent;
            const PeerId orphan = use_pred ? ns.left : ns.right;
            replace_child(sp, s, orphan);
            repair_from = sp;
            ns.left = n.left;
            ns.right = n.right;
            if (n.left != kNoPeer) nodes_[static_cast<std::size_t>(n.left)].parent = s;
            if (n.right != kNoPeer) nodes_[static_cast<std::size_t>(n.right)].parent = s;
        }
        replace_child(n.parent, id, s);
    }
    nodes_[static_cast<std::size_t>(id)] = Node{};
    --size_;
    refresh_path(repair_from);
}

std::vector<PeerId> Bst::inorder() const {
    std::vector<PeerId> out;
    out.reserve(size_);
    std::vector<PeerId> stack;
    PeerId x = root_;
    while (x != kNoPeer || !stack.empty()) {
        while (x != kNoPeer) {
            stack.push_back(x);
            x = nodes_[static_cast<std::size_t>(x)].left;
        }
        x = stack.back();
        stack.pop_back();
        out.push_back(x);
        x = nodes_[static_cast<std::size_t>(x)].right;
    }
    return out;
}

std::vector<PeerId> Bst::preorder() const {
    std::vector<PeerId> out;
    out.reserve(size_);
    std::vector<PeerId> stack;
    if (root_ != kNoPeer) stack.push_back(root_);
    while (!stack.empty()) {
        PeerId x = stack.back();
        stack.pop_back();
        out.push_back(x);
        const Node& nx = nodes_[static_cast<std::size_t>(x)];
        if (nx.right != kNoPeer) stack.push_back(nx.right);
        if (nx.left != kNoPeer) stack.push_back(nx.left);
    }
    return out;
}

std::vector<Edge> Bst::edges() const {
    std::vector<Edge> out;
    out.reserve(size_ > 0 ? size_ - 1 : 0);
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        const Node& n = nodes_[i];
        if (n.present && n.parent != kNoPeer) out.push_back(make_edge(static_cast<PeerId>(i), n.parent));
    }
    std::sort(out.begin(), out.end());
    return out;
}

CheckResult Bst::check() const {
    auto fail = [](std::string msg) { return CheckResult{false, std::move(msg)}; };
    std::size_t present = 0;
    for (std::size_t i = 1; i < nodes_.size(); ++i) present += nodes_[i].present ? 1 : 0;
    if (present != size_) return fail("size counter " + std::to_string(size_) + " != " + std::to_string(present) + " nodes");
    if (root_ == kNoPeer) return present == 0 ? CheckResult{} : fail("nodes present but no root");
    if (!contains(root_)) return fail("root " + std::to_string(root_) + " is not a node");
    if (nodes_[static_cast<std::size_t>(root_)].parent != kNoPeer) return fail("root " + std::to_string(root_) + " has a parent");

    struct Frame {
        PeerId id;
        PeerId lo;
        PeerId hi;
        bool expanded;
    };
    std::vector<char> visited(nodes_.size(), 0);
    std::vector<Frame> stack{{root_, std::numeric_limits<PeerId>::min(), std::numeric_limits<PeerId>::max(), false}};
    std::size_t reached = 0;
    while (!stack.empty()) {
        Frame& f = stack.back();
        const Node& n = nodes_[static_cast<std::size_t>(f.id)];
        if (f.expanded) {
            const PeerId want_min = n.left != kNoPeer ? nodes_[static_cast<std::size_t>(n.left)].sub_min : f.id;
            const PeerId want_max = n.right != kNoPeer ? nodes_[static_cast<std::size_t>(n.right)].sub_max : f.id;
            if (n.sub_min != want_min || n.sub_max != want_max) {
                return fail("annotation wrong at " + std::to_string(f.id) + ": [" + std::to_string(n.sub_min) + "," +
                            std::to_string(n.sub_max) + "] expected [" + std::to_string(want_min) + "," +
                            std::to_string(want_max) + "]");
            }
            stack.pop_back();
            continue;
        }
        f.expanded = true;
        if (visited[static_cast<std::size_t>(f.id)]) return fail("cycle through " + std::to_string(f.id));
        visited[static_cast<std::size_t>(f.id)] = 1;
        ++reached;
        if (f.id <= f.lo || f.id >= f.hi) {
            return fail("search-order violated at " + std::to_string(f.id));
        }
        const Frame here = f;
        for (int side = 0; side < 2; ++side) {
            const PeerId c = side == 0 ? n.left : n.right;
            if (c == kNoPeer) continue;
            if (!contains(c)) return fail("node " + std::to_string(here.id) + " links to missing child " + std::to_string(c));
            if (side == 0 && c > here.id) return fail("search-order violated at " + std::to_string(here.id));
            if (side == 1 && c < here.id) return fail("search-order violated at " + std::to_string(here.id));
            if (nodes_[static_cast<std::size_t>(c)].parent != here.id) {
                return fail("parent link of " + std::to_string(c) + " does not point to " + std::to_string(here.id));
            }
            stack.push_back(side == 0 ? Frame{c, here.lo, here.id, false} : Frame{c, here.id, here.hi, false});
        }
    }
    if (reached != size_) return fail("tree reaches " + std::to_string(reached) + " of " + std::to_string(size_) + " nodes");
    return {};
}

std::string Bst::serialize() const {
    std::string out;
    for (PeerId x : preorder()) {
        const Node& n = nodes_[static_cast<std::size_t>(x)];
        out += std::to_string(x);
        out += ' ';
        out += id_str(n.left);
        out += ' ';
        out += id_str(n.right);
        out += '\n';
    }
    return out;
}

bool operator==(const Bst& a, const Bst& b) {
    if (a.root_ != b.root_ || a.size_ != b.size_) return false;
    const std::size_t cap = std::max(a.nodes_.size(), b.nodes_.size());
    for (std::size_t i = 1; i < cap; ++i) {
        const bool pa = a.contains(static_cast<PeerId>(i));
        const bool pb = b.contains(static_cast<PeerId>(i));
        if (pa != pb) return false;
        if (!pa) continue;
        const auto& x = a.nodes_[i];
        const auto& y = b.nodes_[i];
        if (x.left != y.left || x.right != y.right || x.parent != y.parent) return false;
    }
    return true;
}

}  // namespace obst
