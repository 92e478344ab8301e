#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "wristlog/types.hpp"

namespace wristlog {

/// Milliseconds since the Unix epoch. Injectable for tests.
using ClockFn = std::function<std::int64_t()>;

ClockFn system_clock_ms();

/// In-progress sessions plus where to persist them. All mutations go through
/// the handlers below, which serialize on the internal mutex.
struct ServerState {
    std::filesystem::path output_dir;
    ClockFn clock = system_clock_ms();

    std::mutex mutex;
    std::map<std::string, RecordingSession> open_sessions;
};

/// Process one newline-delimited JSON message (without the newline) and
/// return the JSON acknowledgement: {"ok":true} or {"ok":false,"error":...}.
/// end_session persists the three CSVs before acknowledging.
std::string handle_tcp_message(ServerState& state, std::string_view line);

struct HttpResult {
    int status;
    std::string body;
};

/// POST /session/<id>/label with body {"t":<ms>,"l":"<symbol>"}.
HttpResult handle_label_post(ServerState& state, const std::string& session_id,
                             std::string_view body);

/// GET /time: current epoch milliseconds as a 13-digit decimal string.
std::string handle_time_request(const ServerState& state);

/// Maximum accepted TCP line length.
inline constexpr std::size_t kMaxLineBytes = 1 << 20;

/// Owns the listening sockets and worker threads for both channels.
/// Pass port 0 to bind an ephemeral port; the bound port is queryable.
class AcquisitionServer {
public:
    AcquisitionServer(std::filesystem::path output_dir, int tcp_port, int http_port,
                      ClockFn clock = system_clock_ms());
    ~AcquisitionServer();

    AcquisitionServer(const AcquisitionServer&) = delete;
    AcquisitionServer& operator=(const AcquisitionServer&) = delete;

    void start();
    void stop();

    int tcp_port() const;
    int http_port() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Stream a stored session through the live protocol: sensor batches over
/// TCP, labels over HTTP, then end_session. Throws on any failed ack.
void replay_session(const std::filesystem::path& session_dir, const std::string& host,
                    int tcp_port, int http_port, std::size_t batch_size = 64);

}  // namespace wristlog
