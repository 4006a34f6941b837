#include <doctest.h>

#include "outertrack/serialize.hpp"

#include <fstream>

using namespace outertrack;

TEST_CASE("graph JSON round-trips bit-exactly") {
    GammaGraph g = build_gamma(6);
    Json j = graph_to_json(*g.graph());
    MarkedGraph back = graph_from_json(j);
    CHECK(back == *g.graph());
    CHECK(graph_to_json(back).dump() == j.dump());
}

TEST_CASE("train track JSON round-trips") {
    GammaGraph g = build_gamma(5);
    Json j = train_track_to_json(*g.graph(), g.train_track());
    TrainTrack back = train_track_from_json(*g.graph(), j);
    CHECK(illegal_turn_count(*g.graph(), back) == 2);
    CHECK(train_track_to_json(*g.graph(), back).dump() == j.dump());
}

TEST_CASE("morphism JSON round-trips with power notation") {
    GammaGraph g = build_gamma(5);
    ConstructionParams params = ConstructionParams::uniform(5, Int("123456789123456789"), 7);
    Morphism F = big_F(g, params);
    Json j = morphism_to_json(F);
    Morphism back = morphism_from_json(g.graph(), g.graph(), j);
    for (int e = 0; e < g.graph()->edge_count(); ++e)
        CHECK(back.forward_image(e) == F.forward_image(e));
    CHECK(morphism_to_json(back).dump() == j.dump());
    CHECK(transition_matrix(back) == transition_matrix(F));
}

TEST_CASE("matrix JSON and CSV") {
    ConstructionParams params = ConstructionParams::uniform(6, Int("99999999999999999999"), 3);
    ExactMatrix m = closed_form_M(params, Direction::Unfolding);
    ExactMatrix back = matrix_from_json(matrix_to_json(m));
    CHECK(back == m);
    std::string csv = matrix_to_csv(m);
    CHECK(csv.find("199999999999999999998") != std::string::npos);  // 2 alpha
}

TEST_CASE("certificates serialize exact rationals") {
    ExactMatrix a(2, 2);
    a.at(0, 0) = 3;
    a.at(0, 1) = 1;
    a.at(1, 0) = 2;
    a.at(1, 1) = 7;
    FoldingCert c = certify_folding(a, 2);
    Json j = cert_to_json(c);
    CHECK(j["eps"] == "2/3");
    CHECK(rat_from_string(j["eps"].get<std::string>()) == Rat(2, 3));
}

TEST_CASE("rational string forms") {
    CHECK(rat_to_string(Rat(22, 4)) == "11/2");
    CHECK(rat_to_string(Rat(5)) == "5");
    CHECK(rat_from_string("11/2") == Rat(11, 2));
    CHECK(rat_from_string("-3/9") == Rat(-1, 3));
    CHECK(frac_to_string(Frac(Int(22), Int(4))) == "11/2");
}

TEST_CASE("run JSON carries steps and cumulative matrices") {
    std::vector<ConstructionParams> schedule(2, ConstructionParams::uniform(4, 2, 3));
    SequenceRun run = run_sequence(4, schedule, Direction::Folding, true);
    Json j = run_to_json(run);
    CHECK(j["steps"].size() == 2);
    CHECK(j["cumulative"].size() == 3);
    CHECK(j["direction"] == "folding");
    for (const auto& entry : j["cumulative"]) {
        ExactMatrix back = matrix_from_json(entry["matrix"]);
        CHECK(back == run.cumulative(entry["r"].get<std::size_t>(), entry["s"].get<std::size_t>()));
    }
}

TEST_CASE("atomic writes land complete") {
    std::string path = "/tmp/outertrack_serialize_test.json";
    write_file_atomic(path, "{\"ok\": true}");
    std::ifstream in(path);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content == "{\"ok\": true}");
    std::remove(path.c_str());
}
