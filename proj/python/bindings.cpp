#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "obst/experiment.hpp"
#include "obst/metrics.hpp"
#include "obst/overlay.hpp"
#include "obst/perfect.hpp"
#include "obst/static_opt.hpp"
#include "obst/workload.hpp"

namespace py = pybind11;
using namespace obst;

namespace {

using Pair = std::pair<PeerId, PeerId>;

std::vector<Edge> to_edges(const std::vector<Pair>& ps) {
    std::vector<Edge> out;
    out.reserve(ps.size());
    for (const auto& [a, b] : ps) out.push_back({a, b});
    return out;
}

std::vector<Pair> from_edges(const std::vector<Edge>& es) {
    std::vector<Pair> out;
    out.reserve(es.size());
    for (const Edge& e : es) out.emplace_back(e.a, e.b);
    return out;
}

RequestSequence to_requests(const std::vector<Pair>& ps) {
    RequestSequence out;
    out.reserve(ps.size());
    for (const auto& [a, b] : ps) out.push_back({a, b});
    return out;
}

std::vector<Pair> from_requests(const RequestSequence& rs) {
    std::vector<Pair> out;
    out.reserve(rs.size());
    for (const Request& r : rs) out.emplace_back(r.source, r.dest);
    return out;
}

py::dict ledger_dict(const CostLedger& led) {
    py::dict d;
    std::vector<int> dist;
    std::vector<std::int64_t> rot;
    std::vector<int> tree;
    for (const CostRecord& r : led.records()) {
        dist.push_back(r.distance);
        rot.push_back(r.rotations);
        tree.push_back(r.tree);
    }
    d["distance"] = dist;
    d["rotations"] = rot;
    d["tree"] = tree;
    d["average_cost"] = led.average_cost();
    d["average_distance"] = led.average_distance();
    return d;
}

}  // namespace

PYBIND11_MODULE(_obst, m) {
    m.doc() = "OBST(k) self-adjusting overlay simulator";

    // translators run newest first, so the base class goes in first
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<InvariantViolation>(m, "InvariantViolation", PyExc_RuntimeError);

    py::class_<Bst>(m, "Bst")
        .def_static("random", &Bst::random, py::arg("n"), py::arg("seed"))
        .def_static("from_insertion_order", [](const std::vector<PeerId>& keys) { return Bst::from_insertion_order(keys); })
        .def_static("from_edges", [](PeerId n, const std::vector<Pair>& es) { return Bst::from_edges(n, to_edges(es)); })
        .def_static("parse", &Bst::parse)
        .def_property_readonly("root", &Bst::root)
        .def("__len__", &Bst::size)
        .def("__contains__", &Bst::contains)
        .def("depth", &Bst::depth)
        .def("height", &Bst::height)
        .def("route", &Bst::route)
        .def("distance", &Bst::distance)
        .def("lca", &Bst::lca)
        .def("double_splay",
             [](Bst& t, PeerId u, PeerId v) {
                 RotationLedger led;
                 t.double_splay(u, v, led);
                 return led.count;
             })
        .def("insert_leaf", &Bst::insert_leaf)
        .def("remove", &Bst::remove)
        .def("inorder", &Bst::inorder)
        .def("edges", [](const Bst& t) { return from_edges(t.edges()); })
        .def("check",
             [](const Bst& t) {
                 const auto r = t.check();
                 return py::make_tuple(r.ok, r.violation);
             })
        .def("serialize", &Bst::serialize)
        .def("__eq__", [](const Bst& a, const Bst& b) { return a == b; });

    py::class_<Overlay>(m, "Overlay")
        .def_static("new_random", &Overlay::new_random, py::arg("n"), py::arg("k"), py::arg("seed"))
        .def_static("from_trees", &Overlay::from_trees, py::arg("trees"), py::arg("seed") = 0)
        .def_static("parse_snapshot", &Overlay::parse_snapshot, py::arg("text"), py::arg("seed") = 0)
        .def_property_readonly("k", &Overlay::k)
        .def_property_readonly("n", &Overlay::n)
        .def("tree", &Overlay::tree)
        .def("closest_tree",
             [](const Overlay& o, PeerId u, PeerId v) {
                 const auto c = o.closest_tree(u, v);
                 return py::make_tuple(c.tree, c.distance);
             })
        .def("serve",
             [](Overlay& o, PeerId u, PeerId v, bool adjust) {
                 const auto r = o.serve(u, v, adjust);
                 return py::make_tuple(r.distance, r.rotations, r.tree);
             },
             py::arg("u"), py::arg("v"), py::arg("adjust") = true)
        .def("run",
             [](Overlay& o, const std::vector<Pair>& sigma, bool adjust, int adjust_every, int churn) {
                 return ledger_dict(o.run(to_requests(sigma), RunOptions{adjust, adjust_every, churn}));
             },
             py::arg("sigma"), py::arg("adjust") = true, py::arg("adjust_every") = 1, py::arg("churn") = 0)
        .def("join", &Overlay::join)
        .def("leave", &Overlay::leave)
        .def("union_edges", [](const Overlay& o) { return from_edges(o.union_graph().edges()); })
        .def("check",
             [](const Overlay& o) {
                 const auto r = o.check();
                 return py::make_tuple(r.ok, r.violation);
             })
        .def("snapshot", &Overlay::snapshot);

    m.def("gen_bt", [](PeerId n, int swarm_size, int swarms_per_peer, std::uint64_t seed) {
        return from_edges(gen_bt(n, SwarmParams{swarm_size, swarms_per_peer}, seed).edges());
    }, py::arg("n"), py::arg("swarm_size") = 32, py::arg("swarms_per_peer") = 2, py::arg("seed") = 1);
    m.def("gen_rnd_obst", [](PeerId n, int k, std::uint64_t seed) { return from_edges(gen_rnd_obst(n, k, seed).edges()); });
    m.def("bad2_edges", [](PeerId n) { return py::make_tuple(from_edges(bad2_edges_e1(n)), from_edges(bad2_edges_e2(n))); });
    m.def("seq_match", [](PeerId n, const std::vector<Pair>& edges, std::size_t m, std::uint64_t seed) {
        return from_requests(seq_match(Graph(n, to_edges(edges)), m, seed));
    });
    m.def("seq_rw", [](PeerId n, const std::vector<Pair>& edges, std::size_t m, double p_repeat, std::uint64_t seed) {
        return from_requests(seq_rw(Graph(n, to_edges(edges)), m, p_repeat, seed));
    });

    m.def("entropy", [](const std::vector<double>& p) { return entropy(p); });
    m.def("balance_constant", &balance_constant);
    m.def("mehlhorn_tree", [](const std::vector<double>& w) { return mehlhorn_tree(w); });
    m.def("optimal_lookup_bst", [](const std::vector<double>& w) {
        auto r = optimal_lookup_bst(w);
        return py::make_tuple(std::move(r.tree), r.cost);
    });
    m.def("bound_report", [](const std::vector<Pair>& sigma, PeerId n, int k) {
        const auto rs = to_requests(sigma);
        return to_json(bound_report(rs, n, partition_requests(rs, k)));
    });
    m.def("build_static_obst", [](const std::vector<Pair>& sigma, PeerId n, int k) {
        return build_static_obst(to_requests(sigma), n, k).overlay;
    });
    m.def("max_mutually_intersecting", [](const std::vector<Pair>& ms) { return max_mutually_intersecting(to_edges(ms)); });
    m.def("min_edge_cut", [](PeerId n, const std::vector<Pair>& edges) { return min_edge_cut(Graph(n, to_edges(edges))); });

    m.def("preset_names", &preset_names);
    m.def("run_scenario", [](const std::string& config_json) {
        const auto cfg = config_from_json(nlohmann::json::parse(config_json));
        const auto r = run_scenario(cfg);
        return py::make_tuple(r.csv, r.metadata.dump());
    }, py::arg("config_json"));
}
