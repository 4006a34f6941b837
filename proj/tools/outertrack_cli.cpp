// outertrack: build the rank-n rein constructions, run the Alice-Bob games,
// certify diagonal dominance, estimate ergodic ranks, decompose, monitor
// cores, and audit the counting bound. JSON in, JSON out, exact rationals
// only.
//
// exit codes: 0 all-pass; 2 construction mismatch or bad config;
// 3 certificate/envelope violation; 4 inconclusive (not within horizon,
// unclassifiable order, unresolved decomposition).

#include <CLI11.hpp>

#include "outertrack/bound.hpp"
#include "outertrack/core_graph.hpp"
#include "outertrack/game.hpp"
#include "outertrack/measure.hpp"
#include "outertrack/serialize.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

using namespace outertrack;
namespace fs = std::filesystem;

namespace {

int log_level() {
    const char* env = std::getenv("OUTERTRACK_LOG");
    return env ? std::atoi(env) : 0;
}

void logline(int level, const std::string& msg) {
    if (log_level() >= level) std::cerr << "outertrack: " << msg << "\n";
}

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    int jobs = 0;
    std::size_t stride = 1;
    bool no_timestamp = false;
};

Json load_config(const std::string& path, const std::vector<std::string>& allowed) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config " + path);
    Json j = Json::parse(in);
    for (auto& [key, value] : j.items()) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw std::invalid_argument("unknown config key: " + key);
    }
    return j;
}

void emit(const Options& opt, const std::string& name, Json j) {
    if (!opt.no_timestamp) j["generated_at"] = static_cast<long>(std::time(nullptr));
    fs::create_directories(opt.out_dir);
    std::string path = (fs::path(opt.out_dir) / name).string();
    write_file_atomic(path, j.dump(2) + "\n");
    logline(1, "wrote " + path);
}

Direction parse_direction(const Json& j) {
    std::string d = j.value("direction", "folding");
    if (d == "folding") return Direction::Folding;
    if (d == "unfolding") return Direction::Unfolding;
    throw std::invalid_argument("direction must be 'folding' or 'unfolding'");
}

ConstructionParams params_from_json(int n, const Json& j) {
    ConstructionParams p;
    p.n = n;
    for (const auto& a : j.at("alphas")) p.alphas.push_back(Int(a.get<std::string>()));
    for (const auto& b : j.at("betas")) p.betas.push_back(Int(b.get<std::string>()));
    p.validate();
    return p;
}

std::vector<ConstructionParams> schedule_from_config(int n, std::size_t steps, const Json& config) {
    std::vector<ConstructionParams> schedule;
    if (config.contains("schedule") && config["schedule"].is_array()) {
        for (const auto& entry : config["schedule"]) schedule.push_back(params_from_json(n, entry));
        if (schedule.size() != steps) throw std::invalid_argument("schedule length must equal steps");
    } else {
        Int alpha = Int(config.value("alpha", "1")), beta = Int(config.value("beta", "1"));
        schedule.assign(steps, ConstructionParams::uniform(n, alpha, beta));
    }
    return schedule;
}

int cmd_construct(const Options& opt) {
    Json config = load_config(opt.config_path, {"n", "alphas", "betas", "direction"});
    int n = config.at("n").get<int>();
    if (n < 4) {
        std::cerr << "outertrack: construction requires n >= 4\n";
        return 2;
    }
    Direction dir = parse_direction(config);
    ConstructionParams params =
        config.contains("alphas") ? params_from_json(n, config)
                                  : ConstructionParams::uniform(n, 1, 1);
    GammaGraph gamma = build_gamma(n);
    Morphism F = big_F(gamma, params);
    auto order = dir == Direction::Folding ? folding_edge_order(gamma) : unfolding_edge_order(gamma);
    ExactMatrix computed = transition_matrix(F, order, order);
    ExactMatrix closed = closed_form_M(params, dir);

    Json out;
    out["n"] = n;
    out["graph"] = graph_to_json(*gamma.graph());
    out["train_track"] = train_track_to_json(*gamma.graph(), gamma.train_track());
    ElementaryMaps em = elementary_maps(params);
    Json maps = Json::array();
    for (std::size_t k = 0; k < em.maps.size(); ++k)
        maps.push_back(Json{{"name", em.names[k]}, {"map", morphism_to_json(em.maps[k])}});
    out["elementary_maps"] = std::move(maps);
    out["big_F"] = morphism_to_json(F);
    out["edge_order"] = edge_order_labels(gamma, dir);
    out["matrix"] = matrix_to_json(computed);
    out["matches_closed_form"] = computed == closed;
    Json diff = Json::array();
    for (std::size_t i = 0; i < computed.rows(); ++i)
        for (std::size_t j = 0; j < computed.cols(); ++j)
            if (computed.at(i, j) != closed.at(i, j))
                diff.push_back(Json{{"row", i},
                                    {"col", j},
                                    {"computed", computed.at(i, j).str()},
                                    {"closed_form", closed.at(i, j).str()}});
    out["diff"] = std::move(diff);
    emit(opt, "construct.json", out);
    std::ofstream csv((fs::path(opt.out_dir) / "matrix.csv"));
    csv << matrix_to_csv(computed);
    if (computed != closed) {
        std::cerr << "outertrack: transition matrix differs from the closed form\n";
        return 2;
    }
    return 0;
}

int cmd_game(const Options& opt) {
    Json config = load_config(opt.config_path, {"n", "m", "direction", "steps", "p",
                                                "with_morphisms", "emit_run"});
    int n = config.at("n").get<int>();
    std::size_t m = config.at("m").get<std::size_t>();
    Direction dir = parse_direction(config);
    std::size_t steps = config.at("steps").get<std::size_t>();
    Frac p = config.contains("p") ? Frac::from_rat(rat_from_string(config["p"].get<std::string>()))
                                  : Frac(2);
    try {
        GameResult res =
            run_game(n, m, dir, steps, config.value("with_morphisms", false), p, opt.jobs);
        emit(opt, "game_report.json", game_report_to_json(res.report));
        if (config.value("emit_run", false))
            emit(opt, "run.json", run_to_json(res.run));
        return res.report.all_pass ? 0 : 3;
    } catch (const CertificateViolation& ex) {
        std::cerr << "outertrack: " << ex.what() << "\n";
        return 3;
    }
}

int cmd_certify(const Options& opt) {
    Json config = load_config(opt.config_path, {"matrix", "m", "direction"});
    ExactMatrix mat = matrix_from_json(config.at("matrix"));
    std::size_t m = config.at("m").get<std::size_t>();
    Direction dir = parse_direction(config);
    Json out;
    if (dir == Direction::Folding)
        out["certificate"] = cert_to_json(certify_folding(mat.transpose(), m));
    else
        out["certificate"] = cert_to_json(certify_unfolding(mat, m));
    emit(opt, "certificate.json", out);
    return 0;
}

int cmd_estimate(const Options& opt) {
    Json config = load_config(opt.config_path, {"n", "m", "direction", "steps", "horizon"});
    int n = config.at("n").get<int>();
    std::size_t m = config.at("m").get<std::size_t>();
    Direction dir = parse_direction(config);
    std::size_t steps = config.at("steps").get<std::size_t>();
    std::size_t horizon = config.value("horizon", steps);
    GameResult res = run_game(n, m, dir, steps, false, Frac(2), opt.jobs);
    ErgodicBound eb = ergodic_lower_bound(res.run, m, horizon);
    Json out;
    out["rank"] = eb.rank;
    out["m"] = m;
    Json defects = Json::array();
    for (const Rat& d : eb.cauchy_defects) defects.push_back(rat_to_string(d));
    out["cauchy_defects"] = std::move(defects);
    out["defects_monotone"] = eb.defects_monotone;
    emit(opt, "estimate.json", out);
    if (eb.rank < m) return 3;
    return eb.defects_monotone ? 0 : 4;
}

int cmd_decompose(const Options& opt) {
    Json config = load_config(opt.config_path,
                              {"n", "m", "direction", "steps", "depth", "defect_bound", "tau_squared"});
    int n = config.at("n").get<int>();
    std::size_t m = config.at("m").get<std::size_t>();
    Direction dir = parse_direction(config);
    std::size_t steps = config.at("steps").get<std::size_t>();
    std::size_t depth = config.value("depth", steps);
    Rat bound = config.contains("defect_bound")
                    ? rat_from_string(config["defect_bound"].get<std::string>())
                    : Rat(1);
    Rat tau2 = config.contains("tau_squared")
                   ? rat_from_string(config["tau_squared"].get<std::string>())
                   : Rat(-1);
    GameResult res = run_game(n, m, dir, steps, false, Frac(2), opt.jobs);
    try {
        DecompositionReport rep = approximate_retraction(res.run, depth, bound, tau2);
        emit(opt, "decomposition.json", decomposition_to_json(rep, res.run.edge_labels()));
        return rep.unresolved.empty() ? 0 : 4;
    } catch (const InsufficientDepth& ex) {
        std::cerr << "outertrack: " << ex.what() << "\n";
        return 4;
    }
}

int cmd_monitor(const Options& opt) {
    Json config =
        load_config(opt.config_path, {"n", "steps", "alpha", "beta", "schedule", "subgroups",
                                      "policy", "random_subgroups", "seed", "generator_length"});
    int n = config.at("n").get<int>();
    std::size_t steps = config.value("steps", 8);
    GammaGraph gamma = build_gamma(n);
    auto schedule = schedule_from_config(n, steps, config);
    SequenceRun run = run_sequence(n, schedule, Direction::Folding, true);
    std::vector<std::vector<std::vector<HalfEdge>>> subgroups;
    if (config.contains("subgroups")) {
        for (const auto& gens : config.at("subgroups")) {
            std::vector<std::vector<HalfEdge>> words;
            for (const auto& w : gens) {
                EdgePath path = EdgePath::parse(*gamma.graph(), w.get<std::string>());
                words.push_back(path.expand());
            }
            subgroups.push_back(std::move(words));
        }
    }
    if (config.contains("random_subgroups")) {
        std::mt19937_64 rng(config.value("seed", 0));
        int len = config.value("generator_length", 5);
        const MarkedGraph& G = *gamma.graph();
        auto random_loop = [&]() {
            while (true) {
                std::vector<HalfEdge> w;
                int at = 0;
                for (int k = 0; k < len; ++k) {
                    std::vector<HalfEdge> options;
                    for (HalfEdge d : G.directions_at(at))
                        if (w.empty() || d != reversed(w.back())) options.push_back(d);
                    HalfEdge pick = options[rng() % options.size()];
                    w.push_back(pick);
                    at = G.term_vertex(pick);
                }
                if (at != 0 || w.back() == reversed(w.front())) continue;
                return w;
            }
        };
        for (int i = 0; i < config["random_subgroups"].get<int>(); ++i)
            subgroups.push_back({random_loop(), random_loop()});
    }
    MonitorPolicy policy =
        config.value("policy", "greedy") == std::string("manual") ? MonitorPolicy::Manual
                                                                  : MonitorPolicy::Greedy;
    try {
        MonitorReport rep = monitor(run, gamma, subgroups, policy, false);
        Json out;
        Json trajs = Json::array();
        bool all_zero = true, any_delta = false;
        for (const auto& traj : rep.trajectories) {
            Json t;
            t["counts"] = traj.counts;
            Json sizes = Json::array();
            for (const Int& s : traj.core_sizes) sizes.push_back(s.str());
            t["core_sizes"] = std::move(sizes);
            t["insertions"] = traj.insertions;
            t["reached_zero"] = traj.reached_zero;
            t["monotone"] = traj.monotone;
            t["delta_copy"] = traj.delta_copy;
            if (!traj.applied.empty()) {
                // splices perturb the matrices: rebuild and recertify
                SequenceRun spliced = run_with_insertions(run, gamma, traj);
                spliced.verify_cocycle();
                t["recertified"] =
                    Json{{"steps", spliced.size()},
                         {"deep_certificate", cert_to_json(spliced.folding_cert(0, spliced.size()))}};
            }
            if (!traj.reached_zero) all_zero = false;
            if (traj.delta_copy) any_delta = true;
            trajs.push_back(std::move(t));
        }
        out["trajectories"] = std::move(trajs);
        out["all_monotone"] = rep.all_monotone;
        emit(opt, "monitor.json", out);
        if (!rep.all_monotone) return 3;
        return (all_zero && !any_delta) ? 0 : 4;
    } catch (const MonotonicityViolation& ex) {
        std::cerr << "outertrack: " << ex.what() << "\n";
        return 3;
    }
}

int cmd_audit(const Options& opt) {
    Json config = load_config(opt.config_path,
                              {"n", "m", "direction", "steps", "depth", "margin", "graph",
                               "decomposition", "order"});
    Json out;
    try {
        if (config.contains("graph")) {
            // explicit mode: graph, decomposition and order given by labels
            MarkedGraph g = graph_from_json(config.at("graph"));
            auto id_of = [&](const std::string& label) {
                auto e = g.edge_by_label(label);
                if (!e) throw std::invalid_argument("unknown edge label: " + label);
                return *e;
            };
            std::vector<std::vector<int>> decomposition;
            for (const auto& part : config.at("decomposition")) {
                std::vector<int> edges;
                for (const auto& lab : part) edges.push_back(id_of(lab.get<std::string>()));
                decomposition.push_back(std::move(edges));
            }
            EdgeOrder order;
            for (const auto& cls : config.at("order")) {
                std::vector<std::size_t> edges;
                for (const auto& lab : cls)
                    edges.push_back(static_cast<std::size_t>(id_of(lab.get<std::string>())));
                order.classes.push_back(std::move(edges));
            }
            AuditReport rep = upper_bound_audit(g, decomposition, order);
            emit(opt, "audit.json", audit_to_json(rep, g));
            return rep.holds ? 0 : 3;
        }
        // run mode: derive the decomposition and order from a game run
        int n = config.at("n").get<int>();
        std::size_t m = config.at("m").get<std::size_t>();
        std::size_t steps = config.value("steps", 8);
        std::size_t depth = config.value("depth", steps);
        Rat margin = config.contains("margin")
                         ? rat_from_string(config["margin"].get<std::string>())
                         : Rat(2);
        GameResult res = run_game(n, m, parse_direction(config), steps, false, Frac(2), opt.jobs);
        DecompositionReport dec = approximate_retraction(res.run, depth, Rat(1));
        EdgeOrder order = estimate_edge_order(res.run, depth, margin, opt.stride);
        if (!order.complete()) {
            emit(opt, "audit.json",
                 Json{{"error", "edge order has unclassified pairs"},
                      {"order", edge_order_to_json(order, res.run.edge_labels())}});
            return 4;
        }
        GammaGraph gamma = build_gamma(n);
        auto order_edges = parse_direction(config) == Direction::Folding
                               ? folding_edge_order(gamma)
                               : unfolding_edge_order(gamma);
        std::vector<std::vector<int>> decomposition{{}};
        for (std::size_t e : dec.h0) decomposition[0].push_back(order_edges[e]);
        for (std::size_t e : dec.unresolved) decomposition[0].push_back(order_edges[e]);
        for (const auto& block : dec.blocks) {
            std::vector<int> part;
            for (std::size_t e : block) part.push_back(order_edges[e]);
            decomposition.push_back(std::move(part));
        }
        EdgeOrder mapped = order;
        for (auto& cls : mapped.classes)
            for (auto& e : cls) e = static_cast<std::size_t>(order_edges[e]);
        AuditReport rep = upper_bound_audit(*gamma.graph(), decomposition, mapped);
        Json report = audit_to_json(rep, *gamma.graph());
        report["decomposition"] = decomposition_to_json(dec, res.run.edge_labels());
        emit(opt, "audit.json", report);
        return rep.holds ? 0 : 3;
    } catch (const OrderViolation& ex) {
        std::cerr << "outertrack: " << ex.what() << "\n";
        return 3;
    }
}

int cmd_export(const Options& opt) {
    Json config = load_config(opt.config_path, {"n", "m", "direction", "steps", "horizon"});
    int n = config.at("n").get<int>();
    std::size_t m = config.at("m").get<std::size_t>();
    Direction dir = parse_direction(config);
    std::size_t steps = config.at("steps").get<std::size_t>();
    GameResult res = run_game(n, m, dir, steps, false, Frac(2), opt.jobs);
    fs::create_directories(opt.out_dir);
    for (std::size_t r = 0; r < res.run.size(); ++r)
        for (std::size_t s = r + 1; s <= res.run.size(); ++s) {
            std::string name = "M_" + std::to_string(r) + "_" + std::to_string(s) + ".csv";
            write_file_atomic((fs::path(opt.out_dir) / name).string(),
                              matrix_to_csv(res.run.cumulative(r, s)));
        }
    // normalized tier-1 columns per horizon for external plotting
    std::ostringstream cols;
    for (std::size_t s = 1; s <= res.run.size(); ++s) {
        auto columns = normalized_tier1_columns(res.run, 0, s, m);
        for (std::size_t j = 0; j < columns.size(); ++j) {
            cols << s << ',' << j;
            for (const Rat& v : columns[j]) cols << ',' << rat_to_string(v);
            cols << '\n';
        }
    }
    write_file_atomic((fs::path(opt.out_dir) / "normalized_columns.csv").string(), cols.str());
    emit(opt, "export.json", Json{{"pairs", res.run.size() * (res.run.size() + 1) / 2}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"outertrack: exact folding/unfolding sequence laboratory"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--jobs", opt.jobs, "worker cap for parallel certification");
    app.add_option("--stride", opt.stride, "checkpoint stride for limits");
    app.add_flag("--no-timestamp", opt.no_timestamp, "omit timestamps for byte-identical reports");

    std::map<std::string, std::function<int(const Options&)>> handlers{
        {"construct", cmd_construct}, {"game", cmd_game},       {"certify", cmd_certify},
        {"estimate", cmd_estimate},   {"decompose", cmd_decompose}, {"monitor", cmd_monitor},
        {"audit", cmd_audit},         {"export", cmd_export}};
    for (auto& [name, fn] : handlers) {
        CLI::App* sub = app.add_subcommand(name);
        sub->fallthrough();
        sub->add_option("--config", opt.config_path, "JSON config path")->required();
        sub->add_option("--out", opt.out_dir, "output directory");
    }
    CLI11_PARSE(app, argc, argv);
    std::string chosen = app.get_subcommands().front()->get_name();
    try {
        return handlers.at(chosen)(opt);
    } catch (const std::invalid_argument& ex) {
        std::cerr << "outertrack: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "outertrack: " << ex.what() << "\n";
        return 1;
    }
}
