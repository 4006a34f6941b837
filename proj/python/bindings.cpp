#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "outertrack/bound.hpp"
#include "outertrack/core_graph.hpp"
#include "outertrack/game.hpp"
#include "outertrack/measure.hpp"
#include "outertrack/serialize.hpp"

namespace py = pybind11;
using namespace outertrack;

namespace {

ConstructionParams make_params(int n, const std::vector<std::string>& alphas,
                               const std::vector<std::string>& betas) {
    ConstructionParams p;
    p.n = n;
    for (const auto& a : alphas) p.alphas.push_back(Int(a));
    for (const auto& b : betas) p.betas.push_back(Int(b));
    p.validate();
    return p;
}

std::vector<std::vector<std::string>> matrix_rows(const ExactMatrix& m) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::vector<std::string> row;
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).str());
        rows.push_back(std::move(row));
    }
    return rows;
}

Direction parse_dir(const std::string& d) {
    if (d == "folding") return Direction::Folding;
    if (d == "unfolding") return Direction::Unfolding;
    throw std::invalid_argument("direction must be 'folding' or 'unfolding'");
}

}  // namespace

PYBIND11_MODULE(_outertrack, mod) {
    mod.doc() = "exact folding/unfolding sequence laboratory";

    mod.def("gamma_rank", [](int n) { return build_gamma(n).graph()->rank(); });
    mod.def("gamma_edge_labels", [](int n, const std::string& dir) {
        GammaGraph g = build_gamma(n);
        return edge_order_labels(g, parse_dir(dir));
    });

    mod.def("closed_form_matrix",
            [](int n, const std::vector<std::string>& alphas, const std::vector<std::string>& betas,
               const std::string& dir) {
                return matrix_rows(closed_form_M(make_params(n, alphas, betas), parse_dir(dir)));
            });

    mod.def("big_f_images", [](int n, const std::vector<std::string>& alphas,
                               const std::vector<std::string>& betas) {
        GammaGraph gamma = build_gamma(n);
        Morphism F = big_F(gamma, make_params(n, alphas, betas));
        std::map<std::string, std::string> images;
        for (int e = 0; e < gamma.graph()->edge_count(); ++e)
            images[gamma.graph()->label(e)] = F.forward_image(e).to_string(*gamma.graph());
        return images;
    });

    mod.def("construction_identity_holds",
            [](int n, const std::vector<std::string>& alphas, const std::vector<std::string>& betas) {
                GammaGraph gamma = build_gamma(n);
                ConstructionParams p = make_params(n, alphas, betas);
                auto order = folding_edge_order(gamma);
                return transition_matrix(big_F(gamma, p), order, order) ==
                       closed_form_M(p, Direction::Folding);
            });

    mod.def("certify_folding",
            [](const std::vector<std::vector<std::string>>& rows, std::size_t m) {
                ExactMatrix a(rows.size(), rows.empty() ? 0 : rows[0].size());
                for (std::size_t i = 0; i < rows.size(); ++i)
                    for (std::size_t j = 0; j < rows[i].size(); ++j) a.at(i, j) = Int(rows[i][j]);
                FoldingCert c = certify_folding(a, m);
                return py::dict(py::arg("eps") = frac_to_string(c.eps),
                                py::arg("K") = frac_to_string(c.K));
            });

    mod.def("certify_unfolding",
            [](const std::vector<std::vector<std::string>>& rows, std::size_t m) {
                ExactMatrix a(rows.size(), rows.empty() ? 0 : rows[0].size());
                for (std::size_t i = 0; i < rows.size(); ++i)
                    for (std::size_t j = 0; j < rows[i].size(); ++j) a.at(i, j) = Int(rows[i][j]);
                UnfoldingCert c = certify_unfolding(a, m);
                return py::dict(py::arg("eps") = frac_to_string(c.eps),
                                py::arg("delta") = frac_to_string(c.delta_diag),
                                py::arg("p") = frac_to_string(c.p),
                                py::arg("tier2") = frac_to_string(c.tier2),
                                py::arg("K") = frac_to_string(c.K));
            });

    mod.def(
        "run_game",
        [](int n, std::size_t m, const std::string& dir, std::size_t steps) {
            GameResult res = run_game(n, m, parse_dir(dir), steps);
            py::list pairs;
            for (const auto& rec : res.report.pairs) {
                py::dict d;
                d["r"] = rec.r;
                d["s"] = rec.s;
                d["eps"] = frac_to_string(rec.eps);
                d["pass"] = rec.pass;
                if (rec.has_unfolding) {
                    d["delta"] = frac_to_string(rec.delta);
                    d["p"] = frac_to_string(rec.p);
                }
                pairs.append(std::move(d));
            }
            return py::dict(py::arg("all_pass") = res.report.all_pass, py::arg("pairs") = pairs);
        },
        py::arg("n"), py::arg("m"), py::arg("direction"), py::arg("steps"));

    mod.def("ergodic_rank", [](int n, std::size_t m, std::size_t steps) {
        GameResult res = run_game(n, m, Direction::Folding, steps);
        ErgodicBound eb = ergodic_lower_bound(res.run, m, steps);
        return py::dict(py::arg("rank") = eb.rank,
                        py::arg("defects_monotone") = eb.defects_monotone);
    });

    mod.def("decompose", [](int n, std::size_t m, std::size_t steps) {
        GameResult res = run_game(n, m, Direction::Folding, steps);
        DecompositionReport rep = approximate_retraction(res.run, steps, Rat(1));
        py::list blocks;
        for (const auto& block : rep.blocks) {
            py::list b;
            for (std::size_t e : block) b.append(res.run.edge_labels()[e]);
            blocks.append(std::move(b));
        }
        py::list h0;
        for (std::size_t e : rep.h0) h0.append(res.run.edge_labels()[e]);
        return py::dict(py::arg("blocks") = blocks, py::arg("H0") = h0,
                        py::arg("defect") = rat_to_string(rep.defect));
    });

    mod.def("monitor_subgroup",
            [](int n, const std::vector<std::string>& generators, std::size_t steps,
               const std::string& policy) {
                GammaGraph gamma = build_gamma(n);
                std::vector<ConstructionParams> schedule(steps,
                                                         ConstructionParams::uniform(n, 1, 1));
                SequenceRun run = run_sequence(n, schedule, Direction::Folding, true);
                std::vector<std::vector<HalfEdge>> words;
                for (const auto& w : generators) {
                    EdgePath path = EdgePath::parse(*gamma.graph(), w);
                    words.push_back(path.expand());
                }
                MonitorReport rep =
                    monitor(run, gamma, {words},
                            policy == "manual" ? MonitorPolicy::Manual : MonitorPolicy::Greedy, false);
                const auto& traj = rep.trajectories[0];
                return py::dict(py::arg("counts") = traj.counts,
                                py::arg("reached_zero") = traj.reached_zero,
                                py::arg("monotone") = traj.monotone,
                                py::arg("insertions") = traj.insertions);
            });

    mod.def("mixing_depth",
            [](int n, std::size_t m, const std::string& dir, std::size_t steps,
               const std::string& threshold) {
                GameResult res = run_game(n, m, parse_dir(dir), steps);
                auto depth = mixing_certificate(res.run, Int(threshold));
                return depth ? py::object(py::int_(*depth)) : py::object(py::none());
            },
            py::arg("n"), py::arg("m"), py::arg("direction"), py::arg("steps"),
            py::arg("threshold") = "0");

    mod.def("edge_order", [](int n, std::size_t m, std::size_t steps, const std::string& margin) {
        GameResult res = run_game(n, m, Direction::Folding, steps);
        EdgeOrder order = estimate_edge_order(res.run, steps, rat_from_string(margin));
        py::list classes;
        for (const auto& cls : order.classes) {
            py::list c;
            for (std::size_t e : cls) c.append(res.run.edge_labels()[e]);
            classes.append(std::move(c));
        }
        return py::dict(py::arg("classes") = classes, py::arg("complete") = order.complete());
    });

    mod.def("witness_loop_through",
            [](int n, const std::string& edge_label, const std::vector<std::string>& forbidden) {
                GammaGraph gamma = build_gamma(n);
                const MarkedGraph& g = *gamma.graph();
                auto e = g.edge_by_label(edge_label);
                if (!e) throw std::invalid_argument("unknown edge label: " + edge_label);
                std::vector<int> banned;
                for (const auto& lab : forbidden) {
                    auto b = g.edge_by_label(lab);
                    if (!b) throw std::invalid_argument("unknown edge label: " + lab);
                    banned.push_back(*b);
                }
                auto loop = witness_loop(g, std::nullopt, *e, banned);
                return loop ? py::object(py::str(loop->to_string(g))) : py::object(py::none());
            });

    mod.def("audit_run", [](int n, std::size_t m, std::size_t steps, std::size_t depth) {
        GameResult res = run_game(n, m, Direction::Folding, steps);
        DecompositionReport dec = approximate_retraction(res.run, depth, Rat(1));
        EdgeOrder order = estimate_edge_order(res.run, depth, Rat(2));
        GammaGraph gamma = build_gamma(n);
        auto order_edges = folding_edge_order(gamma);
        std::vector<std::vector<int>> decomposition{{}};
        for (std::size_t e : dec.h0) decomposition[0].push_back(order_edges[e]);
        for (std::size_t e : dec.unresolved) decomposition[0].push_back(order_edges[e]);
        for (const auto& block : dec.blocks) {
            std::vector<int> part;
            for (std::size_t e : block) part.push_back(order_edges[e]);
            decomposition.push_back(std::move(part));
        }
        for (auto& cls : order.classes)
            for (auto& e : cls) e = static_cast<std::size_t>(order_edges[e]);
        AuditReport rep = upper_bound_audit(*gamma.graph(), decomposition, order);
        return py::dict(py::arg("holds") = rep.holds, py::arg("k") = rep.k,
                        py::arg("s") = rep.s, py::arg("m") = rep.m, py::arg("bound") = rep.bound,
                        py::arg("inequality_cap") = 2 * rep.n_rank - 1);
    });

    mod.def("chi_minus", [](int vertices, const std::vector<std::tuple<int, int>>& edges) {
        std::vector<MarkedGraph::Edge> es;
        int id = 0;
        for (auto [a, b] : edges) es.push_back({a, b, "e_" + std::to_string(id++)});
        return chi_minus(MarkedGraph(vertices, std::move(es))).total;
    });
}
