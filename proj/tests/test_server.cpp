#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "wristlog/rng.hpp"
#include "wristlog/server.hpp"
#include "wristlog/session_io.hpp"
#include "wristlog/synthgen.hpp"

using namespace wristlog;
using nlohmann::json;

namespace {

std::filesystem::path temp_dir(const char* name) {
    const auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

bool acked_ok(const std::string& ack) { return json::parse(ack).at("ok").get<bool>(); }

json event_json(const SensorEvent& e) {
    return {{"t", e.t}, {"x", e.x}, {"y", e.y}, {"z", e.z}};
}

std::string batch_message(const std::string& id, SensorKind sensor, const json& events) {
    const json msg{{"kind", "sensor_batch"},
                   {"session", id},
                   {"sensor", to_string(sensor)},
                   {"events", events}};
    return msg.dump();
}

}  // namespace

TEST_CASE("session lifecycle over the line protocol") {
    ServerState state;
    state.output_dir = temp_dir("wristlog_proto_lifecycle");

    CHECK(acked_ok(handle_tcp_message(state, R"({"kind":"start_session","session":"s1"})")));
    CHECK_FALSE(acked_ok(handle_tcp_message(state, R"({"kind":"start_session","session":"s1"})")));
    CHECK_FALSE(acked_ok(handle_tcp_message(state, R"({"kind":"sensor_batch","session":"nope","sensor":"gyroscope","events":[]})")));
    CHECK_FALSE(acked_ok(handle_tcp_message(state, "this is not json")));
    CHECK_FALSE(acked_ok(handle_tcp_message(state, R"({"kind":"start_session","session":"../evil"})")));

    CHECK(acked_ok(handle_tcp_message(
        state, batch_message("s1", SensorKind::Gyroscope,
                             json::array({event_json({100, 1, 2, 3})})))));
    CHECK(handle_label_post(state, "s1", R"({"t":100,"l":"7"})").status == 200);
    CHECK(handle_label_post(state, "missing", R"({"t":100,"l":"7"})").status == 404);
    CHECK(handle_label_post(state, "s1", R"({"t":100})").status == 400);

    CHECK(acked_ok(handle_tcp_message(state, R"({"kind":"end_session","session":"s1"})")));
    const RecordingSession stored = read_session(state.output_dir / "s1");
    CHECK(stored.gyroscope.size() == 1);
    CHECK(stored.labels == std::vector<LabelEvent>{{100, "7"}});

    std::filesystem::remove_all(state.output_dir);
}

TEST_CASE("a bad event leaves the batch unapplied") {
    ServerState state;
    state.output_dir = temp_dir("wristlog_proto_atomic");
    handle_tcp_message(state, R"({"kind":"start_session","session":"s"})");

    json events = json::array({event_json({1, 0, 0, 0}), {{"t", 2}, {"x", "broken"}}});
    CHECK_FALSE(acked_ok(handle_tcp_message(
        state, batch_message("s", SensorKind::Gyroscope, events))));
    CHECK(state.open_sessions.at("s").gyroscope.size() == 0);
    std::filesystem::remove_all(state.output_dir);
}

TEST_CASE("the time endpoint reports the injected clock") {
    ServerState state;
    state.clock = [] { return std::int64_t{1700000000123}; };
    CHECK(handle_time_request(state) == "1700000000123");
    state.clock = [] { return std::int64_t{42}; };
    CHECK(handle_time_request(state) == "0000000000042");  // padded to 13 digits
}

TEST_CASE("randomized batches and interleavings reproduce the session exactly") {
    SynthConfig synth;
    synth.alphabet = LabelCodebook({"1", "2", "3", "4"});
    synth.instances_per_key = 5;
    RecordingSession session = generate_session(synth);
    session.id = "interleaved";

    Rng rng(314159);
    for (int round = 0; round < 5; ++round) {
        ServerState state;
        state.output_dir = temp_dir("wristlog_proto_interleave");
        REQUIRE(acked_ok(handle_tcp_message(
            state, json{{"kind", "start_session"}, {"session", session.id}}.dump())));

        // Random walk over the three streams, sending random-size batches
        // until everything has been delivered.
        std::size_t gi = 0, ai = 0, li = 0;
        while (gi < session.gyroscope.size() || ai < session.accelerometer.size() ||
               li < session.labels.size()) {
            switch (rng.next_below(3)) {
                case 0: {
                    if (gi == session.gyroscope.size()) break;
                    const std::size_t n = std::min(session.gyroscope.size() - gi,
                                                   1 + rng.next_below(97));
                    json events = json::array();
                    for (std::size_t i = 0; i < n; ++i)
                        events.push_back(event_json(session.gyroscope.event_at(gi + i)));
                    REQUIRE(acked_ok(handle_tcp_message(
                        state, batch_message(session.id, SensorKind::Gyroscope, events))));
                    gi += n;
                    break;
                }
                case 1: {
                    if (ai == session.accelerometer.size()) break;
                    const std::size_t n = std::min(session.accelerometer.size() - ai,
                                                   1 + rng.next_below(97));
                    json events = json::array();
                    for (std::size_t i = 0; i < n; ++i)
                        events.push_back(event_json(session.accelerometer.event_at(ai + i)));
                    REQUIRE(acked_ok(handle_tcp_message(
                        state, batch_message(session.id, SensorKind::Accelerometer, events))));
                    ai += n;
                    break;
                }
                default: {
                    if (li == session.labels.size()) break;
                    const json body{{"t", session.labels[li].t}, {"l", session.labels[li].label}};
                    REQUIRE(handle_label_post(state, session.id, body.dump()).status == 200);
                    ++li;
                    break;
                }
            }
        }
        REQUIRE(acked_ok(handle_tcp_message(
            state, json{{"kind", "end_session"}, {"session", session.id}}.dump())));

        RecordingSession stored = read_session(state.output_dir / session.id);
        CHECK(stored.gyroscope.timestamps == session.gyroscope.timestamps);
        CHECK(stored.accelerometer.timestamps == session.accelerometer.timestamps);
        CHECK(stored.labels == session.labels);
        std::filesystem::remove_all(state.output_dir);
    }
}

TEST_CASE("a live replay reproduces the stored session") {
    SynthConfig synth;
    synth.alphabet = LabelCodebook({"1", "2"});
    synth.instances_per_key = 5;
    RecordingSession session = generate_session(synth);
    session.id = "live-replay";

    const auto source = temp_dir("wristlog_replay_src");
    const auto sink = temp_dir("wristlog_replay_dst");
    write_session(session, source / session.id);

    AcquisitionServer server(sink, 0, 0);
    server.start();
    REQUIRE(server.tcp_port() > 0);
    REQUIRE(server.http_port() > 0);

    replay_session(source / session.id, "127.0.0.1", server.tcp_port(), server.http_port(), 37);
    server.stop();

    const RecordingSession original = read_session(source / session.id);
    const RecordingSession stored = read_session(sink / session.id);
    CHECK(stored.gyroscope == original.gyroscope);
    CHECK(stored.accelerometer == original.accelerometer);
    CHECK(stored.labels == original.labels);

    std::filesystem::remove_all(source);
    std::filesystem::remove_all(sink);
}
