#include "wristlog/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <stdexcept>
#include <utility>

#include <httplib.h>
#include <json.hpp>

#include "wristlog/session_io.hpp"

namespace wristlog {

using nlohmann::json;

ClockFn system_clock_ms() {
    return [] {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::system_clock::now().time_since_epoch())
            .count();
    };
}

namespace {

std::string ok_ack() { return json{{"ok", true}}.dump(); }

std::string error_ack(const std::string& message) {
    return json{{"ok", false}, {"error", message}}.dump();
}

SensorKind sensor_from_tag(const std::string& tag) {
    if (tag == "gyroscope") return SensorKind::Gyroscope;
    if (tag == "accelerometer") return SensorKind::Accelerometer;
    throw std::invalid_argument("unknown sensor \"" + tag + "\"");
}

void append_batch(RecordingSession& session, SensorKind sensor, const json& events) {
    if (!events.is_array()) throw std::invalid_argument("events must be an array");
    TriaxialSeries& series =
        sensor == SensorKind::Gyroscope ? session.gyroscope : session.accelerometer;
    for (const json& e : events) {
        series.push_back({e.at("t").get<std::int64_t>(), e.at("x").get<double>(),
                          e.at("y").get<double>(), e.at("z").get<double>(), sensor});
    }
}

}  // namespace

std::string handle_tcp_message(ServerState& state, std::string_view line) {
    json msg;
    try {
        msg = json::parse(line);
    } catch (const json::exception& e) {
        return error_ack(std::string("malformed JSON: ") + e.what());
    }
    try {
        const std::string kind = msg.at("kind").get<std::string>();
        const std::string id = msg.at("session").get<std::string>();
        if (id.empty() || id.find('/') != std::string::npos ||
            id.find("..") != std::string::npos)
            return error_ack("invalid session id");

        std::lock_guard lock(state.mutex);
        if (kind == "start_session") {
            if (state.open_sessions.contains(id))
                return error_ack("session \"" + id + "\" already open");
            RecordingSession session;
            session.id = id;
            state.open_sessions.emplace(id, std::move(session));
            return ok_ack();
        }
        auto it = state.open_sessions.find(id);
        if (it == state.open_sessions.end())
            return error_ack("no open session \"" + id + "\"");
        if (kind == "sensor_batch") {
            const SensorKind sensor = sensor_from_tag(msg.at("sensor").get<std::string>());
            // Parse the whole batch before touching the buffers so a bad
            // event mid-batch leaves no partial state behind.
            RecordingSession staged;
            append_batch(staged, sensor, msg.at("events"));
            TriaxialSeries& dst = sensor == SensorKind::Gyroscope
                                      ? it->second.gyroscope
                                      : it->second.accelerometer;
            const TriaxialSeries& src =
                sensor == SensorKind::Gyroscope ? staged.gyroscope : staged.accelerometer;
            for (std::size_t i = 0; i < src.size(); ++i) dst.push_back(src.event_at(i));
            return ok_ack();
        }
        if (kind == "end_session") {
            sort_events(it->second);
            write_session(it->second, state.output_dir / id);
            state.open_sessions.erase(it);
            return ok_ack();
        }
        return error_ack("unknown message kind \"" + kind + "\"");
    } catch (const std::exception& e) {
        return error_ack(e.what());
    }
}

HttpResult handle_label_post(ServerState& state, const std::string& session_id,
                             std::string_view body) {
    json msg;
    try {
        msg = json::parse(body);
    } catch (const json::exception& e) {
        return {400, error_ack(std::string("malformed JSON: ") + e.what())};
    }
    try {
        const LabelEvent label{msg.at("t").get<std::int64_t>(),
                               msg.at("l").get<std::string>()};
        if (label.label.empty()) return {400, error_ack("empty label")};
        std::lock_guard lock(state.mutex);
        auto it = state.open_sessions.find(session_id);
        if (it == state.open_sessions.end())
            return {404, error_ack("no open session \"" + session_id + "\"")};
        it->second.labels.push_back(label);
        return {200, ok_ack()};
    } catch (const std::exception& e) {
        return {400, error_ack(e.what())};
    }
}

std::string handle_time_request(const ServerState& state) {
    std::string s = std::to_string(state.clock());
    while (s.size() < 13) s.insert(s.begin(), '0');
    return s;
}

// ---------------------------------------------------------------------------

struct AcquisitionServer::Impl {
    ServerState state;
    int requested_tcp_port;
    int requested_http_port;
    int bound_tcp_port = -1;
    int listen_fd = -1;
    std::atomic<bool> running{false};
    std::thread accept_thread;
    std::vector<std::thread> connection_threads;
    std::mutex connections_mutex;
    httplib::Server http;
    std::thread http_thread;

    void serve_connection(int fd);
};

namespace {

int open_listener(int port, int& bound_port) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw std::runtime_error("socket() failed");
    const int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(static_cast<std::uint16_t>(port));
    if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
        ::close(fd);
        throw std::runtime_error("bind() failed: " + std::string(std::strerror(errno)));
    }
    if (::listen(fd, 16) != 0) {
        ::close(fd);
        throw std::runtime_error("listen() failed");
    }
    socklen_t len = sizeof addr;
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
    bound_port = ntohs(addr.sin_port);
    return fd;
}

bool send_all(int fd, std::string_view data) {
    std::size_t sent = 0;
    while (sent < data.size()) {
        const ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
        if (n <= 0) return false;
        sent += static_cast<std::size_t>(n);
    }
    return true;
}

}  // namespace

void AcquisitionServer::Impl::serve_connection(int fd) {
    std::string buffer;
    char chunk[4096];
    while (running) {
        const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
        if (n <= 0) break;
        buffer.append(chunk, static_cast<std::size_t>(n));
        std::size_t pos;
        while ((pos = buffer.find('\n')) != std::string::npos) {
            std::string_view line(buffer.data(), pos);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            const std::string ack = handle_tcp_message(state, line);
            buffer.erase(0, pos + 1);
            if (!send_all(fd, ack + "\n")) {
                ::close(fd);
                return;
            }
        }
        if (buffer.size() > kMaxLineBytes) {
            send_all(fd, error_ack("line exceeds 1 MiB") + "\n");
            break;
        }
    }
    ::close(fd);
}

AcquisitionServer::AcquisitionServer(std::filesystem::path output_dir, int tcp_port,
                                     int http_port, ClockFn clock)
    : impl_(std::make_unique<Impl>()) {
    impl_->state.output_dir = std::move(output_dir);
    impl_->state.clock = std::move(clock);
    impl_->requested_tcp_port = tcp_port;
    impl_->requested_http_port = http_port;
}

AcquisitionServer::~AcquisitionServer() { stop(); }

void AcquisitionServer::start() {
    if (impl_->running) return;
    std::filesystem::create_directories(impl_->state.output_dir);
    impl_->listen_fd = open_listener(impl_->requested_tcp_port, impl_->bound_tcp_port);
    impl_->running = true;
    impl_->accept_thread = std::thread([this] {
        while (impl_->running) {
            const int fd = ::accept(impl_->listen_fd, nullptr, nullptr);
            if (fd < 0) {
                if (!impl_->running) break;
                continue;
            }
            std::lock_guard lock(impl_->connections_mutex);
            impl_->connection_threads.emplace_back(
                [this, fd] { impl_->serve_connection(fd); });
        }
    });

    impl_->http.Post(R"(/session/([^/]+)/label)",
                     [this](const httplib::Request& req, httplib::Response& res) {
                         const HttpResult r =
                             handle_label_post(impl_->state, req.matches[1], req.body);
                         res.status = r.status;
                         res.set_content(r.body, "application/json");
                     });
    impl_->http.Get("/time", [this](const httplib::Request&, httplib::Response& res) {
        res.set_content(handle_time_request(impl_->state), "text/plain");
    });
    if (impl_->requested_http_port == 0) {
        impl_->requested_http_port = impl_->http.bind_to_any_port("127.0.0.1");
    } else if (!impl_->http.bind_to_port("127.0.0.1", impl_->requested_http_port)) {
        throw std::runtime_error("HTTP bind failed");
    }
    impl_->http_thread = std::thread([this] { impl_->http.listen_after_bind(); });
    impl_->http.wait_until_ready();
}

void AcquisitionServer::stop() {
    if (!impl_->running) return;
    impl_->running = false;
    ::shutdown(impl_->listen_fd, SHUT_RDWR);
    ::close(impl_->listen_fd);
    impl_->http.stop();
    if (impl_->accept_thread.joinable()) impl_->accept_thread.join();
    if (impl_->http_thread.joinable()) impl_->http_thread.join();
    std::lock_guard lock(impl_->connections_mutex);
    for (std::thread& t : impl_->connection_threads)
        if (t.joinable()) t.join();
    impl_->connection_threads.clear();
}

int AcquisitionServer::tcp_port() const { return impl_->bound_tcp_port; }

int AcquisitionServer::http_port() const { return impl_->requested_http_port; }

// ---------------------------------------------------------------------------

namespace {

class TcpClient {
public:
    TcpClient(const std::string& host, int port) {
        fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
        if (fd_ < 0) throw std::runtime_error("socket() failed");
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_port = htons(static_cast<std::uint16_t>(port));
        if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
            throw std::runtime_error("bad host address \"" + host + "\"");
        if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0)
            throw std::runtime_error("connect() failed: " +
                                     std::string(std::strerror(errno)));
    }
    ~TcpClient() {
        if (fd_ >= 0) ::close(fd_);
    }

    json request(const json& message) {
        if (!send_all(fd_, message.dump() + "\n"))
            throw std::runtime_error("send failed");
        std::size_t pos;
        while ((pos = buffer_.find('\n')) == std::string::npos) {
            char chunk[4096];
            const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
            if (n <= 0) throw std::runtime_error("connection closed mid-reply");
            buffer_.append(chunk, static_cast<std::size_t>(n));
        }
        const json ack = json::parse(buffer_.substr(0, pos));
        buffer_.erase(0, pos + 1);
        return ack;
    }

private:
    int fd_ = -1;
    std::string buffer_;
};

void require_ok(const json& ack, const std::string& what) {
    if (!ack.value("ok", false))
        throw std::runtime_error(what + " rejected: " +
                                 ack.value("error", std::string("unknown error")));
}

json events_json(const TriaxialSeries& series, std::size_t begin, std::size_t end) {
    json events = json::array();
    for (std::size_t i = begin; i < end; ++i) {
        const SensorEvent e = series.event_at(i);
        events.push_back({{"t", e.t}, {"x", e.x}, {"y", e.y}, {"z", e.z}});
    }
    return events;
}

void stream_series(TcpClient& client, const std::string& id, const TriaxialSeries& series,
                   const char* tag, std::size_t batch_size) {
    for (std::size_t i = 0; i < series.size(); i += batch_size) {
        const std::size_t end = std::min(series.size(), i + batch_size);
        require_ok(client.request({{"kind", "sensor_batch"},
                                   {"session", id},
                                   {"sensor", tag},
                                   {"events", events_json(series, i, end)}}),
                   "sensor_batch");
    }
}

}  // namespace

void replay_session(const std::filesystem::path& session_dir, const std::string& host,
                    int tcp_port, int http_port, std::size_t batch_size) {
    if (batch_size == 0) throw std::invalid_argument("batch_size must be positive");
    const RecordingSession session = read_session(session_dir);

    TcpClient tcp(host, tcp_port);
    require_ok(tcp.request({{"kind", "start_session"}, {"session", session.id}}),
               "start_session");
    stream_series(tcp, session.id, session.gyroscope, "gyroscope", batch_size);
    stream_series(tcp, session.id, session.accelerometer, "accelerometer", batch_size);

    httplib::Client http(host, http_port);
    for (const LabelEvent& label : session.labels) {
        const json body = {{"t", label.t}, {"l", label.label}};
        auto res = http.Post("/session/" + session.id + "/label", body.dump(),
                             "application/json");
        if (!res || res->status != 200)
            throw std::runtime_error("label post failed for t=" + std::to_string(label.t));
    }

    require_ok(tcp.request({{"kind", "end_session"}, {"session", session.id}}),
               "end_session");
}

}  // namespace wristlog
