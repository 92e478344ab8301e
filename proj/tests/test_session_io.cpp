#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "wristlog/rng.hpp"
#include "wristlog/session_io.hpp"
#include "wristlog/synthgen.hpp"

using namespace wristlog;

namespace {

std::filesystem::path temp_dir(const char* name) {
    const auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("event sorting is stable and ascending") {
    std::vector<SensorEvent> events{{30, 1, 0, 0}, {10, 2, 0, 0}, {20, 3, 0, 0}, {10, 4, 0, 0}};
    const auto sorted = sort_events(events);
    REQUIRE(sorted.size() == 4);
    CHECK(sorted[0].t == 10);
    CHECK(sorted[0].x == 2.0);  // first of the duplicates keeps its slot
    CHECK(sorted[1].t == 10);
    CHECK(sorted[1].x == 4.0);
    CHECK(sorted[3].t == 30);
}

TEST_CASE("series construction drops duplicate timestamps, keeping the last") {
    const TriaxialSeries s = series_from_events(
        {{10, 1, 0, 0}, {20, 2, 0, 0}, {10, 3, 0, 0}}, SensorKind::Gyroscope);
    REQUIRE(s.size() == 2);
    CHECK(s.timestamps == std::vector<std::int64_t>{10, 20});
    CHECK(s.x == std::vector<double>{3.0, 2.0});
}

TEST_CASE("sessions round-trip through CSV") {
    const RecordingSession session = generate_session(SynthConfig{});
    const auto dir = temp_dir("wristlog_session_roundtrip");

    write_session(session, dir);
    CHECK(std::filesystem::exists(dir / "gyroscope.csv"));
    CHECK(std::filesystem::exists(dir / "accelerometer.csv"));
    CHECK(std::filesystem::exists(dir / "labels.csv"));

    RecordingSession back = read_session(dir);
    back.id = session.id;  // the id is the directory name, not stored in the files
    CHECK(back.gyroscope.timestamps == session.gyroscope.timestamps);
    CHECK(back.accelerometer.timestamps == session.accelerometer.timestamps);
    CHECK(back.labels == session.labels);
    // Values survive at 9 significant digits; a second round trip is exact.
    const auto dir2 = temp_dir("wristlog_session_roundtrip2");
    write_session(back, dir2);
    const RecordingSession twice = read_session(dir2);
    CHECK(twice.gyroscope == back.gyroscope);
    CHECK(twice.accelerometer == back.accelerometer);

    std::filesystem::remove_all(dir);
    std::filesystem::remove_all(dir2);
}

TEST_CASE("reading rejects malformed rows with a location") {
    const auto dir = temp_dir("wristlog_bad_session");
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "gyroscope.csv") << "t,x,y,z\n100,1.0,2.0\n";
    std::ofstream(dir / "accelerometer.csv") << "t,x,y,z\n";
    std::ofstream(dir / "labels.csv") << "t,label\n";
    try {
        read_session(dir);
        FAIL("expected a parse error");
    } catch (const std::exception& e) {
        const std::string what = e.what();
        CHECK(what.find("gyroscope.csv") != std::string::npos);
        CHECK(what.find("2") != std::string::npos);  // line number
    }
    std::filesystem::remove_all(dir);
}
