#include "swirl/runtime.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <cstring>
#include <deque>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "swirl/errors.hpp"

namespace swirl {

namespace {

using nlohmann::json;
using Clock = std::chrono::system_clock;

std::string iso_now() {
    auto now = Clock::now();
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  now.time_since_epoch()) %
              1000;
    std::time_t t = Clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%T", &tm);
    char out[48];
    std::snprintf(out, sizeof out, "%s.%03dZ", buf, int(ms.count()));
    return out;
}

std::string msg_key(const Id& port, const Id& src, const Id& dst) {
    return port + "|" + src + "|" + dst;
}

void collect_predicates(const TraceRef& t, std::vector<const Predicate*>& out) {
    switch (t->kind) {
        case Trace::Kind::Nil: return;
        case Trace::Kind::Act: out.push_back(&t->act); return;
        default:
            collect_predicates(t->left, out);
            collect_predicates(t->right, out);
    }
}

std::string hex_encode(const std::vector<uint8_t>& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (uint8_t b : bytes) {
        out += digits[b >> 4];
        out += digits[b & 0xf];
    }
    return out;
}

std::vector<uint8_t> hex_decode(const std::string& s) {
    auto val = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        return -1;
    };
    if (s.size() % 2) throw ParseError("odd hex payload");
    std::vector<uint8_t> out;
    for (size_t i = 0; i < s.size(); i += 2) {
        int hi = val(s[i]), lo = val(s[i + 1]);
        if (hi < 0 || lo < 0) throw ParseError("bad hex payload");
        out.push_back(uint8_t(hi << 4 | lo));
    }
    return out;
}

}  // namespace

std::vector<uint8_t> simulated_payload(const Id& step, const Id& datum) {
    // FNV-1a, re-keyed per output word
    std::vector<uint8_t> out;
    std::string seed = step + "\x1f" + datum;
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : seed) {
        h ^= c;
        h *= 1099511628211ull;
    }
    for (int word = 0; word < 4; ++word) {
        uint64_t v = h + uint64_t(word) * 0x9e3779b97f4a7c15ull;
        v ^= v >> 33;
        v *= 0xff51afd7ed558ccdull;
        v ^= v >> 33;
        for (int i = 0; i < 8; ++i) out.push_back(uint8_t(v >> (8 * i)));
    }
    return out;
}

Metadata parse_metadata(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("metadata: ") + e.what());
    }
    Metadata m;
    if (j.contains("mode")) {
        std::string mode = j["mode"].get<std::string>();
        if (mode == "simulate")
            m.mode = RunMode::Simulate;
        else if (mode == "shell")
            m.mode = RunMode::Shell;
        else
            throw ParseError("metadata mode must be 'simulate' or 'shell'");
    }
    if (j.contains("steps"))
        for (const auto& [s, v] : j["steps"].items())
            if (v.contains("command")) m.commands[s] = v["command"].get<std::string>();
    if (j.contains("data"))
        for (const auto& [d, v] : j["data"].items()) {
            if (v.contains("inline")) {
                std::string text = v["inline"].get<std::string>();
                m.inline_data[d].assign(text.begin(), text.end());
            } else if (v.contains("path")) {
                m.file_data[d] = v["path"].get<std::string>();
            }
        }
    if (j.contains("locations"))
        for (const auto& [l, v] : j["locations"].items())
            m.endpoints[l] = {v["host"].get<std::string>(),
                              uint16_t(v["port"].get<int>())};
    if (j.contains("connect_attempts")) m.connect_attempts = j["connect_attempts"].get<int>();
    if (j.contains("connect_backoff_ms"))
        m.connect_backoff = std::chrono::milliseconds(j["connect_backoff_ms"].get<int>());
    if (j.contains("idle_timeout_ms"))
        m.idle_timeout = std::chrono::milliseconds(j["idle_timeout_ms"].get<int>());
    return m;
}

Metadata load_metadata(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_metadata(buf.str());
}

Bundle compile(const WorkflowSystem& sys, const Metadata& meta) {
    WorkflowSystem canon = canonical(sys);
    Bundle bundle;
    bundle.meta = meta;
    for (const auto& cfg : canon.configs) {
        if (!meta.endpoints.empty() && !meta.endpoints.count(cfg.loc))
            throw MetadataMissing(cfg.loc);
        bundle.programs.push_back({cfg.loc, cfg.data, cfg.trace});
    }
    if (meta.mode == RunMode::Shell) {
        for (const auto& p : bundle.programs) {
            std::vector<const Predicate*> preds;
            collect_predicates(p.program, preds);
            for (const Predicate* pr : preds)
                if (const Exec* e = std::get_if<Exec>(pr))
                    if (!meta.commands.count(e->step))
                        throw MetadataMissing("command for step " + e->step);
        }
    }
    return bundle;
}

std::string format_report(const ExecutionReport& report) {
    std::ostringstream os;
    for (const auto& e : report.events) {
        os << "EVENT " << e.time << ' ' << e.loc << ' ' << e.kind;
        for (const auto& id : e.ids) os << ' ' << id;
        os << '\n';
    }
    for (const auto& [loc, data] : report.placement) {
        os << "PLACEMENT " << loc;
        for (const auto& d : data) os << ' ' << d;
        os << '\n';
    }
    for (const auto& [loc, pay] : report.payloads)
        for (const auto& [d, bytes] : pay)
            os << "PAYLOAD " << loc << ' ' << d << ' ' << hex_encode(bytes) << '\n';
    os << "STATUS " << report.exit_status << '\n';
    return os.str();
}

ExecutionReport parse_report(const std::string& text) {
    ExecutionReport rep;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "EVENT") {
            Event e;
            ls >> e.time >> e.loc >> e.kind;
            std::string id;
            while (ls >> id) e.ids.push_back(id);
            rep.events.push_back(std::move(e));
        } else if (tag == "PLACEMENT") {
            Id loc;
            ls >> loc;
            Id d;
            rep.placement[loc];
            while (ls >> d) rep.placement[loc].insert(d);
        } else if (tag == "PAYLOAD") {
            Id loc, d;
            std::string hex;
            ls >> loc >> d >> hex;
            rep.payloads[loc][d] = hex_decode(hex);
        } else if (tag == "STATUS") {
            ls >> rep.exit_status;
        } else {
            throw ParseError("bad report line: " + line);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// In-process runner
// ---------------------------------------------------------------------------

namespace {

struct Message {
    Id data;
    std::vector<uint8_t> payload;
};

// All shared state sits behind one mutex so global blocked-thread accounting
// can detect quiescent deadlock.
class InprocFabric {
public:
    std::mutex m;
    std::condition_variable cv;
    std::map<std::string, std::deque<Message>> queues;
    std::map<Id, std::map<Id, std::vector<uint8_t>>> stores;  // loc -> datum -> bytes
    std::map<std::string, size_t> barrier_arrived;            // step -> count
    std::vector<Event> events;
    bool deadlock = false;
    int total = 0;
    int blocked = 0;
    uint64_t progress = 0;  // bumped on every state mutation

    void register_thread() {
        std::lock_guard lk(m);
        ++total;
        ++progress;
        cv.notify_all();
    }
    void unregister_thread() {
        std::lock_guard lk(m);
        --total;
        ++progress;
        cv.notify_all();
    }

    template <class Pred>
    void wait(std::unique_lock<std::mutex>& lk, Pred pred) {
        ++blocked;
        while (!pred()) {
            if (deadlock) {
                --blocked;
                throw DeadlockError("all workers blocked");
            }
            if (blocked == total) {
                // deadlock is declared only after a full grace window with no
                // progress anywhere, so transient all-blocked snapshots (e.g.
                // a sibling between deregistering for a join and picking work
                // back up) cannot trip it
                uint64_t p0 = progress;
                auto until = std::chrono::steady_clock::now() + std::chrono::milliseconds(50);
                bool moved = cv.wait_until(
                    lk, until, [&] { return pred() || deadlock || progress != p0; });
                if (!moved && !pred() && !deadlock && blocked == total && progress == p0) {
                    deadlock = true;
                    cv.notify_all();
                    --blocked;
                    throw DeadlockError("all workers blocked");
                }
            } else {
                cv.wait(lk);
            }
        }
        --blocked;
    }

};

class InprocWorker {
public:
    InprocWorker(InprocFabric& fab, const Bundle& bundle, const LocationProgram& prog)
        : fab_(fab), bundle_(bundle), prog_(prog) {}

    void run() { exec_trace(prog_.program); }

private:
    void exec_trace(const TraceRef& t) {
        switch (t->kind) {
            case Trace::Kind::Nil:
                return;
            case Trace::Kind::Act:
                perform(t->act);
                return;
            case Trace::Kind::Seq:
                exec_trace(t->left);
                exec_trace(t->right);
                return;
            case Trace::Kind::Par: {
                std::exception_ptr err;
                fab_.register_thread();
                std::thread th([&] {
                    try {
                        exec_trace(t->right);
                    } catch (...) {
                        err = std::current_exception();
                    }
                    fab_.unregister_thread();
                });
                try {
                    exec_trace(t->left);
                } catch (...) {
                    // let the sibling finish or hit the deadlock flag
                    fab_.unregister_thread();
                    th.join();
                    fab_.register_thread();
                    throw;
                }
                fab_.unregister_thread();
                th.join();
                fab_.register_thread();
                if (err) std::rethrow_exception(err);
                return;
            }
        }
    }

    void perform(const Predicate& pred) {
        if (const Exec* e = std::get_if<Exec>(&pred)) {
            do_exec(*e);
        } else if (const Send* s = std::get_if<Send>(&pred)) {
            do_send(*s);
        } else {
            do_recv(std::get<Recv>(pred));
        }
    }

    void do_exec(const Exec& e) {
        {
            std::unique_lock lk(fab_.m);
            fab_.wait(lk, [&] {
                const auto& store = fab_.stores[prog_.loc];
                for (const auto& d : e.flow.inputs)
                    if (!store.count(d)) return false;
                return true;
            });
            // rendezvous across the step's location set
            std::string key = e.step;
            ++fab_.barrier_arrived[key];
            ++fab_.progress;
            fab_.cv.notify_all();
            fab_.wait(lk, [&] { return fab_.barrier_arrived[key] >= e.locs.size(); });
        }
        if (bundle_.meta.mode == RunMode::Shell) {
            auto it = bundle_.meta.commands.find(e.step);
            int rc = std::system(it->second.c_str());
            if (rc != 0)
                throw StepFailure("step " + e.step + " exited with " + std::to_string(rc));
        }
        {
            // event append and store update share the critical section so the
            // global event order is an admissible linearization
            std::lock_guard lk(fab_.m);
            fab_.events.push_back({iso_now(), prog_.loc, "EXEC", {e.step}});
            for (const auto& d : e.flow.outputs)
                fab_.stores[prog_.loc][d] = simulated_payload(e.step, d);
            ++fab_.progress;
            fab_.cv.notify_all();
        }
    }

    void do_send(const Send& s) {
        std::vector<uint8_t> payload;
        {
            std::unique_lock lk(fab_.m);
            fab_.wait(lk, [&] { return fab_.stores[prog_.loc].count(s.data) > 0; });
            payload = fab_.stores[prog_.loc][s.data];
            fab_.queues[msg_key(s.port, s.src, s.dst)].push_back({s.data, payload});
            fab_.events.push_back({iso_now(), prog_.loc, "SEND", {s.data, s.port, s.src, s.dst}});
            ++fab_.progress;
            fab_.cv.notify_all();
        }
    }

    void do_recv(const Recv& r) {
        Message msg;
        {
            std::unique_lock lk(fab_.m);
            auto& q = fab_.queues[msg_key(r.port, r.src, r.dst)];
            fab_.wait(lk, [&] { return !q.empty(); });
            msg = q.front();
            q.pop_front();
            fab_.stores[prog_.loc][msg.data] = msg.payload;
            fab_.events.push_back({iso_now(), prog_.loc, "RECV", {msg.data, r.port, r.src, r.dst}});
            ++fab_.progress;
            fab_.cv.notify_all();
        }
    }

    InprocFabric& fab_;
    const Bundle& bundle_;
    const LocationProgram& prog_;
};

std::vector<uint8_t> preload_payload(const Metadata& meta, const Id& datum) {
    auto it = meta.inline_data.find(datum);
    if (it != meta.inline_data.end()) return it->second;
    auto fit = meta.file_data.find(datum);
    if (fit != meta.file_data.end()) {
        std::ifstream in(fit->second, std::ios::binary);
        if (!in) throw MetadataMissing("payload file for " + datum + ": " + fit->second);
        std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
        return bytes;
    }
    return simulated_payload("__preload__", datum);
}

}  // namespace

ExecutionReport run_inproc(const Bundle& bundle) {
    InprocFabric fab;
    for (const auto& p : bundle.programs)
        for (const auto& d : p.preload)
            fab.stores[p.loc][d] = preload_payload(bundle.meta, d);
    for (const auto& p : bundle.programs) fab.stores[p.loc];  // empty store per loc

    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(bundle.programs.size());
    for (size_t i = 0; i < bundle.programs.size(); ++i) fab.register_thread();
    for (size_t i = 0; i < bundle.programs.size(); ++i) {
        threads.emplace_back([&, i] {
            try {
                InprocWorker(fab, bundle, bundle.programs[i]).run();
            } catch (...) {
                errors[i] = std::current_exception();
            }
            fab.unregister_thread();
        });
    }
    for (auto& th : threads) th.join();

    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);

    ExecutionReport rep;
    rep.events = fab.events;
    for (const auto& [loc, store] : fab.stores) {
        rep.placement[loc];
        for (const auto& [d, bytes] : store) {
            rep.placement[loc].insert(d);
            rep.payloads[loc][d] = bytes;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// TCP runner
// ---------------------------------------------------------------------------

namespace {

void write_all(int fd, const uint8_t* data, size_t n) {
    size_t off = 0;
    while (off < n) {
        ssize_t w = ::write(fd, data + off, n - off);
        if (w <= 0) throw ConnectionFailure("short write");
        off += size_t(w);
    }
}

bool read_all(int fd, uint8_t* data, size_t n) {
    size_t off = 0;
    while (off < n) {
        ssize_t r = ::read(fd, data + off, n - off);
        if (r == 0) return off == 0 ? false : throw FrameCorruption("truncated frame");
        if (r < 0) throw ConnectionFailure("read error");
        off += size_t(r);
    }
    return true;
}

struct Frame {
    Id port, data, src, dst;
    std::vector<uint8_t> payload;
};

void put_field(std::vector<uint8_t>& buf, const std::string& s) {
    if (s.size() > 0xffff) throw Error("field too long");
    buf.push_back(uint8_t(s.size() >> 8));
    buf.push_back(uint8_t(s.size() & 0xff));
    buf.insert(buf.end(), s.begin(), s.end());
}

std::vector<uint8_t> encode_frame(const Frame& f) {
    std::vector<uint8_t> body;
    put_field(body, f.port);
    put_field(body, f.data);
    put_field(body, f.src);
    put_field(body, f.dst);
    body.insert(body.end(), f.payload.begin(), f.payload.end());
    std::vector<uint8_t> out;
    uint32_t n = uint32_t(body.size());
    out.push_back(uint8_t(n >> 24));
    out.push_back(uint8_t(n >> 16));
    out.push_back(uint8_t(n >> 8));
    out.push_back(uint8_t(n));
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

std::optional<Frame> read_frame(int fd) {
    uint8_t hdr[4];
    if (!read_all(fd, hdr, 4)) return std::nullopt;
    uint32_t n = uint32_t(hdr[0]) << 24 | uint32_t(hdr[1]) << 16 | uint32_t(hdr[2]) << 8 |
                 uint32_t(hdr[3]);
    if (n > (64u << 20)) throw FrameCorruption("oversized frame");
    std::vector<uint8_t> body(n);
    if (n && !read_all(fd, body.data(), n)) throw FrameCorruption("truncated frame");
    Frame f;
    size_t off = 0;
    auto get_field = [&]() {
        if (off + 2 > body.size()) throw FrameCorruption("bad field header");
        size_t len = size_t(body[off]) << 8 | body[off + 1];
        off += 2;
        if (off + len > body.size()) throw FrameCorruption("bad field length");
        std::string s(body.begin() + off, body.begin() + off + len);
        off += len;
        return s;
    };
    f.port = get_field();
    f.data = get_field();
    f.src = get_field();
    f.dst = get_field();
    f.payload.assign(body.begin() + off, body.end());
    return f;
}

int connect_endpoint(const Endpoint& ep, int attempts, std::chrono::milliseconds backoff) {
    for (int i = 0; i < attempts; ++i) {
        addrinfo hints{};
        hints.ai_family = AF_INET;
        hints.ai_socktype = SOCK_STREAM;
        addrinfo* res = nullptr;
        std::string port = std::to_string(ep.port);
        if (getaddrinfo(ep.host.c_str(), port.c_str(), &hints, &res) == 0) {
            int fd = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
            if (fd >= 0) {
                if (::connect(fd, res->ai_addr, res->ai_addrlen) == 0) {
                    freeaddrinfo(res);
                    return fd;
                }
                ::close(fd);
            }
            freeaddrinfo(res);
        }
        std::this_thread::sleep_for(backoff);
    }
    throw ConnectionFailure("cannot connect to " + ep.host + ":" + std::to_string(ep.port));
}

const char* kBarrierPort = "__barrier__";

class TcpNode {
public:
    TcpNode(const Bundle& bundle, const LocationProgram& prog)
        : bundle_(bundle), prog_(prog) {
        auto it = bundle.meta.endpoints.find(prog.loc);
        if (it == bundle.meta.endpoints.end()) throw MetadataMissing(prog.loc);
        self_ = it->second;
        listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
        if (listen_fd_ < 0) throw ConnectionFailure("socket() failed");
        int one = 1;
        setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_addr.s_addr = INADDR_ANY;
        addr.sin_port = htons(self_.port);
        if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0)
            throw ConnectionFailure("bind failed on port " + std::to_string(self_.port));
        ::listen(listen_fd_, 64);
        accept_thread_ = std::thread([this] { accept_loop(); });
    }

    ~TcpNode() {
        ::shutdown(listen_fd_, SHUT_RDWR);
        ::close(listen_fd_);
        if (accept_thread_.joinable()) accept_thread_.join();
        for (auto& th : conn_threads_)
            if (th.joinable()) th.join();
    }

    ExecutionReport run() {
        for (const auto& d : prog_.preload)
            store_[d] = preload_payload(bundle_.meta, d);
        exec_trace(prog_.program);
        ExecutionReport rep;
        {
            std::lock_guard lk(m_);
            rep.events = events_;
            rep.placement[prog_.loc];
            for (const auto& [d, bytes] : store_) {
                rep.placement[prog_.loc].insert(d);
                rep.payloads[prog_.loc][d] = bytes;
            }
        }
        return rep;
    }

private:
    void accept_loop() {
        while (true) {
            int fd = ::accept(listen_fd_, nullptr, nullptr);
            if (fd < 0) return;
            std::lock_guard lk(m_);
            conn_threads_.emplace_back([this, fd] {
                try {
                    while (auto f = read_frame(fd)) deliver(*f);
                } catch (...) {
                    // drop the connection; the waiting side will time out
                }
                ::close(fd);
            });
        }
    }

    void deliver(const Frame& f) {
        std::lock_guard lk(m_);
        inbox_[msg_key(f.port, f.src, f.dst)].push_back(f);
        cv_.notify_all();
    }

    template <class Pred>
    void wait_for(std::unique_lock<std::mutex>& lk, Pred pred, const std::string& what) {
        if (!cv_.wait_for(lk, bundle_.meta.idle_timeout, pred))
            throw DeadlockError("idle timeout waiting for " + what + " at " + prog_.loc);
    }

    void send_frame_to(const Id& dst_loc, const Frame& f) {
        auto it = bundle_.meta.endpoints.find(dst_loc);
        if (it == bundle_.meta.endpoints.end()) throw MetadataMissing(dst_loc);
        int fd = connect_endpoint(it->second, bundle_.meta.connect_attempts,
                                  bundle_.meta.connect_backoff);
        auto bytes = encode_frame(f);
        write_all(fd, bytes.data(), bytes.size());
        ::close(fd);
    }

    // pops the first inbox frame under key satisfying pred
    Frame take(const std::string& key, const std::function<bool(const Frame&)>& match,
               const std::string& what) {
        std::unique_lock lk(m_);
        Frame out;
        wait_for(
            lk,
            [&] {
                auto& q = inbox_[key];
                for (auto it = q.begin(); it != q.end(); ++it) {
                    if (match(*it)) {
                        out = *it;
                        q.erase(it);
                        return true;
                    }
                }
                return false;
            },
            what);
        return out;
    }

    void exec_trace(const TraceRef& t) {
        switch (t->kind) {
            case Trace::Kind::Nil:
                return;
            case Trace::Kind::Act:
                perform(t->act);
                return;
            case Trace::Kind::Seq:
                exec_trace(t->left);
                exec_trace(t->right);
                return;
            case Trace::Kind::Par: {
                std::exception_ptr err;
                std::thread th([&] {
                    try {
                        exec_trace(t->right);
                    } catch (...) {
                        err = std::current_exception();
                    }
                });
                try {
                    exec_trace(t->left);
                } catch (...) {
                    th.join();
                    throw;
                }
                th.join();
                if (err) std::rethrow_exception(err);
                return;
            }
        }
    }

    void perform(const Predicate& pred) {
        if (const Exec* e = std::get_if<Exec>(&pred)) {
            do_exec(*e);
        } else if (const Send* s = std::get_if<Send>(&pred)) {
            do_send(*s);
        } else {
            do_recv(std::get<Recv>(pred));
        }
    }

    void do_exec(const Exec& e) {
        {
            std::unique_lock lk(m_);
            wait_for(
                lk,
                [&] {
                    for (const auto& d : e.flow.inputs)
                        if (!store_.count(d)) return false;
                    return true;
                },
                "inputs of " + e.step);
        }
        if (e.locs.size() > 1) barrier(e);
        if (bundle_.meta.mode == RunMode::Shell) {
            int rc = std::system(bundle_.meta.commands.at(e.step).c_str());
            if (rc != 0)
                throw StepFailure("step " + e.step + " exited with " + std::to_string(rc));
        }
        log("EXEC", {e.step});
        {
            std::lock_guard lk(m_);
            for (const auto& d : e.flow.outputs)
                store_[d] = simulated_payload(e.step, d);
            cv_.notify_all();
        }
    }

    // two-phase rendezvous: lowest location id coordinates
    void barrier(const Exec& e) {
        const Id& coord = *e.locs.begin();
        if (prog_.loc == coord) {
            for (const auto& l : e.locs) {
                if (l == coord) continue;
                take(msg_key(kBarrierPort, l, prog_.loc),
                     [&](const Frame& f) { return f.data == e.step; },
                     "barrier arrival of " + e.step);
            }
            for (const auto& l : e.locs) {
                if (l == coord) continue;
                send_frame_to(l, {kBarrierPort, e.step, prog_.loc, l, {}});
            }
        } else {
            send_frame_to(coord, {kBarrierPort, e.step, prog_.loc, coord, {}});
            take(msg_key(kBarrierPort, coord, prog_.loc),
                 [&](const Frame& f) { return f.data == e.step; },
                 "barrier release of " + e.step);
        }
    }

    void do_send(const Send& s) {
        std::vector<uint8_t> payload;
        {
            std::unique_lock lk(m_);
            wait_for(lk, [&] { return store_.count(s.data) > 0; }, "datum " + s.data);
            payload = store_[s.data];
        }
        send_frame_to(s.dst, {s.port, s.data, s.src, s.dst, payload});
        log("SEND", {s.data, s.port, s.src, s.dst});
    }

    void do_recv(const Recv& r) {
        Frame f = take(msg_key(r.port, r.src, r.dst), [](const Frame&) { return true; },
                       "message on " + r.port);
        {
            std::lock_guard lk(m_);
            store_[f.data] = f.payload;
            cv_.notify_all();
        }
        log("RECV", {f.data, r.port, r.src, r.dst});
    }

    void log(const std::string& kind, std::vector<std::string> ids) {
        std::lock_guard lk(m_);
        events_.push_back({iso_now(), prog_.loc, kind, std::move(ids)});
    }

    const Bundle& bundle_;
    const LocationProgram& prog_;
    Endpoint self_;
    int listen_fd_ = -1;
    std::thread accept_thread_;
    std::vector<std::thread> conn_threads_;
    std::mutex m_;
    std::condition_variable cv_;
    std::map<std::string, std::deque<Frame>> inbox_;
    std::map<Id, std::vector<uint8_t>> store_;
    std::vector<Event> events_;
};

}  // namespace

ExecutionReport run_location_tcp(const Bundle& bundle, const Id& loc) {
    const LocationProgram* prog = nullptr;
    for (const auto& p : bundle.programs)
        if (p.loc == loc) prog = &p;
    if (!prog) throw NotFound("no program for location " + loc);
    TcpNode node(bundle, *prog);
    return node.run();
}

}  // namespace swirl
