#include <doctest.h>

#include "depinsim/io.hpp"

using namespace depinsim;

TEST_SUITE("io") {

TEST_CASE("scenario parsing applies defaults") {
    const std::string text = R"({
        // comments are allowed in scenario files
        "seed": 7,
        "processors": [
            { "processor_id": "p1",
              "exec_model": { "kind": "constant", "mean_ms": 100 } },
            { "processor_id": "p2", "refusal_probability": 0.25,
              "exec_model": { "kind": "normal", "mean_ms": 100, "std_ms": 5 } }
        ],
        "jobs": [
            { "spec": {
                "consumer_id": "alice",
                "schedule": { "start_ms": 0, "end_ms": 1000, "duration_ms": 1000 },
                "mode": { "kind": "personal" }
            } }
        ]
    })";
    auto scenario = scenario_from_json(text);
    REQUIRE(scenario);
    const auto& s = scenario.value();
    CHECK(s.seed == 7);
    CHECK(s.match_tick_ms == 1000);
    REQUIRE(s.processors.size() == 2);
    CHECK(s.processors[0].capacity == 1);
    CHECK(s.processors[0].reliability == 1.0);
    CHECK(s.processors[0].refusal_probability == 0.0);
    CHECK(s.processors[1].refusal_probability == 0.25);
    CHECK(s.processors[1].exec_model.kind == ExecutionTimeModel::Kind::Normal);
    CHECK(s.processors[1].exec_model.std_ms == 5.0);
    REQUIRE(s.jobs.size() == 1);
    CHECK(s.jobs[0].spec.schedule.interval_ms == 1);
    CHECK(s.jobs[0].spec.reward == 0);
    CHECK(s.jobs[0].spec.mode.kind == AssignmentKind::Personal);
}

TEST_CASE("scenario parse errors carry the line") {
    auto broken = scenario_from_json("{\n  \"seed\": 1,\n  oops\n}");
    REQUIRE(!broken);
    CHECK(broken.error().find("line 3") != std::string::npos);
}

TEST_CASE("scenario field errors carry the path") {
    auto missing = scenario_from_json(
        R"({"jobs": [ { "spec": { "consumer_id": "a",
            "mode": {"kind": "public"} } } ]})");
    REQUIRE(!missing);
    CHECK(missing.error().find("jobs[0].spec.schedule") != std::string::npos);

    auto wrong_kind = scenario_from_json(
        R"({"processors": [ { "processor_id": "p",
            "exec_model": { "kind": "exotic", "mean_ms": 5 } } ]})");
    REQUIRE(!wrong_kind);
    CHECK(wrong_kind.error().find("exec_model.kind") != std::string::npos);

    auto bad_mode = scenario_from_json(
        R"({"jobs": [ { "spec": { "consumer_id": "a",
            "schedule": { "start_ms": 0, "end_ms": 10, "duration_ms": 5 },
            "mode": {"kind": "selected"} } } ]})");
    REQUIRE(!bad_mode);
    CHECK(bad_mode.error().find("mode.processors") != std::string::npos);
}

TEST_CASE("repeat stamps copies of a job entry") {
    const std::string text = R"({
        "jobs": [
            { "registration_time_ms": 5, "repeat": 3, "spec": {
                "consumer_id": "alice",
                "schedule": { "start_ms": 0, "end_ms": 1000, "duration_ms": 1000 },
                "mode": { "kind": "public" }
            } }
        ]
    })";
    auto scenario = scenario_from_json(text);
    REQUIRE(scenario);
    REQUIRE(scenario.value().jobs.size() == 3);
    for (const auto& job : scenario.value().jobs) {
        CHECK(job.registration_time_ms == 5);
        CHECK(job.spec.consumer_id == "alice");
    }

    auto zero = scenario_from_json(
        R"({"jobs": [ { "repeat": 0, "spec": { "consumer_id": "a",
            "schedule": { "start_ms": 0, "end_ms": 10, "duration_ms": 5 },
            "mode": {"kind": "public"} } } ]})");
    REQUIRE(!zero);
    CHECK(zero.error().find("repeat") != std::string::npos);
}

TEST_CASE("shipped scenario fixtures load") {
    for (const char* name :
         {"scenario_example.json", "scenario_replay.json",
          "scenario_platforms.json"}) {
        auto scenario = load_scenario(std::string(DEPINSIM_FIXTURE_DIR) + "/" +
                                      name);
        REQUIRE_MESSAGE(scenario, name);
        CHECK(validate_scenario(scenario.value()).empty());
    }
    auto replay = load_scenario(std::string(DEPINSIM_FIXTURE_DIR) +
                                "/scenario_replay.json");
    REQUIRE(replay);
    CHECK(replay.value().jobs.size() == 121);
    CHECK(replay.value().processors.size() == 30);
}

TEST_CASE("missing files are reported") {
    auto missing = load_scenario("/nonexistent/path/scenario.json");
    REQUIRE(!missing);
    CHECK(missing.error().find("cannot open") != std::string::npos);
}

TEST_CASE("samples csv format") {
    std::map<std::string, std::vector<DurationMs>> samples = {
        {"Acurast", {2790, 2810}}, {"Azure", {6102}}};
    CHECK(samples_csv(samples) ==
          "platform,iteration,duration_ms\n"
          "Acurast,0,2790\n"
          "Acurast,1,2810\n"
          "Azure,0,6102\n");

    SampleSet set{"local", {1.5, 2.25}, 10};
    CHECK(samples_csv(set) ==
          "platform,iteration,duration_ms\n"
          "local,0,1.5\n"
          "local,1,2.25\n");
}

}  // TEST_SUITE
