#include "outertrack/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace outertrack {

Json graph_to_json(const MarkedGraph& g) {
    Json j;
    j["vertices"] = g.vertex_count();
    Json edges = Json::array();
    for (int e = 0; e < g.edge_count(); ++e) {
        const auto& ed = g.edge(e);
        edges.push_back({{"id", e}, {"label", ed.label}, {"init", ed.init}, {"term", ed.term}});
    }
    j["edges"] = edges;
    // involution pairs of directed half-edges, explicit for the record
    Json inv = Json::array();
    for (int e = 0; e < g.edge_count(); ++e) inv.push_back({2 * e, 2 * e + 1});
    j["involution"] = inv;
    return j;
}

MarkedGraph graph_from_json(const Json& j) {
    int vc = j.at("vertices").get<int>();
    std::vector<MarkedGraph::Edge> edges;
    for (const auto& e : j.at("edges"))
        edges.push_back({e.at("init").get<int>(), e.at("term").get<int>(),
                         e.at("label").get<std::string>()});
    return MarkedGraph(vc, std::move(edges));
}

Json train_track_to_json(const MarkedGraph& g, const TrainTrack& tt) {
    Json gates = Json::array();
    for (const auto& gate : tt.gates()) {
        Json one = Json::array();
        for (HalfEdge h : gate) one.push_back(g.half_edge_label(h));
        gates.push_back(one);
    }
    return Json{{"gates", gates}};
}

TrainTrack train_track_from_json(const MarkedGraph& g, const Json& j) {
    std::vector<std::vector<HalfEdge>> groups;
    for (const auto& gate : j.at("gates")) {
        std::vector<HalfEdge> group;
        for (const auto& lab : gate) group.push_back(g.half_edge_by_label(lab.get<std::string>()));
        if (group.size() > 1) groups.push_back(group);
    }
    return TrainTrack::with_gates(g, groups);
}

Json morphism_to_json(const Morphism& f) {
    Json j;
    j["vertex_map"] = f.vertex_map();
    Json images;
    for (int e = 0; e < f.source().edge_count(); ++e)
        images[f.source().label(e)] = f.forward_image(e).to_string(f.target());
    j["edge_map"] = images;
    return j;
}

Morphism morphism_from_json(std::shared_ptr<const MarkedGraph> source,
                            std::shared_ptr<const MarkedGraph> target, const Json& j) {
    std::vector<int> vmap = j.at("vertex_map").get<std::vector<int>>();
    std::vector<EdgePath> images;
    for (int e = 0; e < source->edge_count(); ++e)
        images.push_back(
            EdgePath::parse(*target, j.at("edge_map").at(source->label(e)).get<std::string>()));
    return Morphism(std::move(source), std::move(target), std::move(vmap), std::move(images));
}

Json matrix_to_json(const ExactMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).str());
        rows.push_back(row);
    }
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

ExactMatrix matrix_from_json(const Json& j) {
    std::size_t rows = j.at("rows").get<std::size_t>(), cols = j.at("cols").get<std::size_t>();
    ExactMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < cols; ++k)
            m.at(i, k) = Int(j.at("entries")[i][k].get<std::string>());
    return m;
}

std::string matrix_to_csv(const ExactMatrix& m) {
    std::ostringstream os;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) os << ',';
            os << m.at(i, j).str();
        }
        os << '\n';
    }
    return os.str();
}

Json cert_to_json(const FoldingCert& c) {
    return Json{{"type", "folding"},
                {"m", c.m},
                {"eps", frac_to_string(c.eps)},
                {"K", frac_to_string(c.K)}};
}

Json cert_to_json(const UnfoldingCert& c) {
    return Json{{"type", "unfolding"},
                {"m", c.m},
                {"eps", frac_to_string(c.eps)},
                {"delta", frac_to_string(c.delta_diag)},
                {"delta_folded", frac_to_string(c.delta_folded())},
                {"p", frac_to_string(c.p)},
                {"tier2", frac_to_string(c.tier2)},
                {"K", frac_to_string(c.K)}};
}

Json run_to_json(const SequenceRun& run, bool include_cumulative) {
    Json j;
    j["direction"] = run.direction() == Direction::Folding ? "folding" : "unfolding";
    j["m"] = run.tier_width();
    j["edge_order"] = run.edge_labels();
    Json steps = Json::array();
    for (const auto& st : run.steps()) {
        Json s;
        if (st.params) {
            Json alphas = Json::array(), betas = Json::array();
            for (const Int& a : st.params->alphas) alphas.push_back(a.str());
            for (const Int& b : st.params->betas) betas.push_back(b.str());
            s["params"] = Json{{"n", st.params->n}, {"alphas", alphas}, {"betas", betas}};
        }
        s["matrix"] = matrix_to_json(st.matrix);
        s["inserted"] = st.inserted;
        if (!st.note.empty()) s["note"] = st.note;
        if (st.morphism) s["morphism"] = morphism_to_json(*st.morphism);
        steps.push_back(std::move(s));
    }
    j["steps"] = std::move(steps);
    if (include_cumulative) {
        Json cum = Json::array();
        for (std::size_t r = 0; r < run.size(); ++r)
            for (std::size_t s = r + 1; s <= run.size(); ++s)
                cum.push_back(Json{{"r", r}, {"s", s}, {"matrix", matrix_to_json(run.cumulative(r, s))}});
        j["cumulative"] = std::move(cum);
    }
    return j;
}

Json game_report_to_json(const GameReport& report) {
    Json j;
    Json eps = Json::array(), delta = Json::array();
    for (const Frac& e : report.alice_eps) eps.push_back(frac_to_string(e));
    for (const Frac& d : report.alice_delta) delta.push_back(frac_to_string(d));
    j["alice_eps"] = std::move(eps);
    j["alice_delta"] = std::move(delta);
    Json maxr = Json::array();
    for (const Frac& v : report.max_eps_per_r) maxr.push_back(frac_to_string(v));
    j["max_eps_per_r"] = std::move(maxr);
    Json pairs = Json::array();
    for (const auto& rec : report.pairs) {
        Json p{{"r", rec.r},
               {"s", rec.s},
               {"eps", frac_to_string(rec.eps)},
               {"eps_envelope", frac_to_string(rec.eps_envelope)},
               {"pass", rec.pass}};
        if (rec.has_unfolding) {
            p["delta"] = frac_to_string(rec.delta);
            p["delta_envelope"] = frac_to_string(rec.delta_envelope);
            p["p"] = frac_to_string(rec.p);
            p["p_envelope"] = frac_to_string(rec.p_envelope);
        }
        pairs.push_back(std::move(p));
    }
    j["pairs"] = std::move(pairs);
    j["all_pass"] = report.all_pass;
    return j;
}

Json decomposition_to_json(const DecompositionReport& rep, const std::vector<std::string>& labels) {
    auto name = [&](std::size_t e) { return labels.at(e); };
    Json j;
    Json h0 = Json::array();
    for (std::size_t e : rep.h0) h0.push_back(name(e));
    j["H0"] = std::move(h0);
    Json blocks = Json::array();
    for (const auto& block : rep.blocks) {
        Json b = Json::array();
        for (std::size_t e : block) b.push_back(name(e));
        blocks.push_back(std::move(b));
    }
    j["blocks"] = std::move(blocks);
    Json unresolved = Json::array();
    for (std::size_t e : rep.unresolved) unresolved.push_back(name(e));
    j["unresolved"] = std::move(unresolved);
    j["defect"] = rat_to_string(rep.defect);
    j["tau_squared"] = rat_to_string(rep.tau_squared);
    j["depth"] = Json{{"r", rep.depth_r}, {"s", rep.depth_s}};
    Json diag = Json::array();
    for (const Rat& v : rep.diagonal_products) diag.push_back(rat_to_string(v));
    j["diagonal_products"] = std::move(diag);
    return j;
}

Json audit_to_json(const AuditReport& rep, const MarkedGraph& g) {
    auto name = [&](int e) { return g.label(e); };
    Json j;
    Json h0 = Json::array();
    for (int e : rep.initial_h0) h0.push_back(name(e));
    Json loops = Json::array();
    for (int e : rep.initial_loops) loops.push_back(name(e));
    Json rank1 = Json::array();
    for (const auto& comp : rep.initial_rank1) {
        Json c = Json::array();
        for (int e : comp) c.push_back(name(e));
        rank1.push_back(std::move(c));
    }
    j["initial"] = Json{{"H0", std::move(h0)}, {"loops", std::move(loops)}, {"rank1", std::move(rank1)}};
    Json adds = Json::array();
    for (const auto& a : rep.additions) {
        Json edges = Json::array();
        for (int e : a.edges) edges.push_back(name(e));
        Json entry{{"class", a.order_class},
                   {"measure", a.measure},
                   {"edges", std::move(edges)},
                   {"chi_before", a.chi_before},
                   {"chi_after", a.chi_after}};
        if (a.witness) entry["witness_loop"] = a.witness->to_string(g);
        adds.push_back(std::move(entry));
    }
    j["additions"] = std::move(adds);
    j["s"] = rep.s;
    j["m"] = rep.m;
    j["k"] = rep.k;
    j["n"] = rep.n_rank;
    j["bound"] = rep.bound;
    j["inequality"] = std::to_string(rep.k) + " <= (" + std::to_string(rep.s) + " + " +
                      std::to_string(rep.m) + ") + (" + std::to_string(rep.n_rank) + " - 1) = " +
                      std::to_string(rep.bound) + " <= " + std::to_string(2 * rep.n_rank - 1);
    j["holds"] = rep.holds;
    return j;
}

Json edge_order_to_json(const EdgeOrder& order, const std::vector<std::string>& labels) {
    Json j;
    Json classes = Json::array();
    for (const auto& cls : order.classes) {
        Json c = Json::array();
        for (std::size_t e : cls) c.push_back(labels.at(e));
        classes.push_back(std::move(c));
    }
    j["classes"] = std::move(classes);
    Json un = Json::array();
    for (auto [a, b] : order.unclassified) un.push_back(Json::array({labels.at(a), labels.at(b)}));
    j["unclassified"] = std::move(un);
    j["complete"] = order.complete();
    return j;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        out << contents;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

}  // namespace outertrack
