#include "pbb/transport.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>

namespace pbb {

namespace {

// ---------------------------------------------------------------- in-proc

struct InProcState {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::pair<int, std::vector<std::uint8_t>>> to_coord;
  struct Box {
    std::deque<std::vector<std::uint8_t>> q;
    bool worker_closed = false;
  };
  std::vector<Box> boxes;
  bool coord_closed = false;
};

class InProcWorker : public WorkerTransport {
 public:
  InProcWorker(std::shared_ptr<InProcState> st, int id) : st_(std::move(st)), id_(id) {}

  void send(const Message& msg) override {
    std::scoped_lock lk(st_->mu);
    if (st_->coord_closed) throw TransportError("coordinator is gone");
    st_->to_coord.emplace_back(id_, encode(msg));
    st_->cv.notify_all();
  }

  Message receive() override {
    std::unique_lock lk(st_->mu);
    auto& box = st_->boxes[static_cast<std::size_t>(id_)];
    st_->cv.wait(lk, [&] { return !box.q.empty() || st_->coord_closed; });
    if (box.q.empty()) throw TransportError("coordinator is gone");
    std::vector<std::uint8_t> frame = std::move(box.q.front());
    box.q.pop_front();
    return decode(frame, PeerRole::Coordinator);
  }

  void close() override {
    std::scoped_lock lk(st_->mu);
    st_->boxes[static_cast<std::size_t>(id_)].worker_closed = true;
    st_->cv.notify_all();
  }

 private:
  std::shared_ptr<InProcState> st_;
  int id_;
};

class InProcCoordinator : public CoordinatorTransport {
 public:
  explicit InProcCoordinator(std::shared_ptr<InProcState> st) : st_(std::move(st)) {}

  int worker_count() const override { return static_cast<int>(st_->boxes.size()); }

  std::pair<int, Message> receive() override {
    std::unique_lock lk(st_->mu);
    st_->cv.wait(lk, [&] {
      if (!st_->to_coord.empty() || st_->coord_closed) return true;
      for (const auto& b : st_->boxes) {
        if (!b.worker_closed) return false;
      }
      return true;  // every worker hung up
    });
    if (st_->coord_closed) throw TransportError("transport closed");
    if (st_->to_coord.empty()) throw TransportError("all workers disconnected");
    auto [src, frame] = std::move(st_->to_coord.front());
    st_->to_coord.pop_front();
    return {src, decode(frame, PeerRole::Worker)};
  }

  void send(int worker, const Message& msg) override {
    std::scoped_lock lk(st_->mu);
    auto& box = st_->boxes[static_cast<std::size_t>(worker)];
    if (box.worker_closed) throw TransportError("worker is gone");
    box.q.push_back(encode(msg));
    st_->cv.notify_all();
  }

  void close() override {
    std::scoped_lock lk(st_->mu);
    st_->coord_closed = true;
    st_->cv.notify_all();
  }

 private:
  std::shared_ptr<InProcState> st_;
};

// ------------------------------------------------------------------- tcp

void write_all(int fd, const std::uint8_t* data, std::size_t size) {
  while (size > 0) {
    const ssize_t w = ::send(fd, data, size, MSG_NOSIGNAL);
    if (w < 0) {
      if (errno == EINTR) continue;
      throw TransportError(std::string("send failed: ") + std::strerror(errno));
    }
    data += w;
    size -= static_cast<std::size_t>(w);
  }
}

// Reads exactly `size` bytes; false on clean EOF at a frame boundary.
bool read_exact(int fd, std::uint8_t* data, std::size_t size) {
  std::size_t got = 0;
  while (got < size) {
    const ssize_t r = ::recv(fd, data + got, size - got, 0);
    if (r < 0) {
      if (errno == EINTR) continue;
      throw TransportError(std::string("recv failed: ") + std::strerror(errno));
    }
    if (r == 0) {
      if (got == 0) return false;
      throw TransportError("peer closed mid-frame");
    }
    got += static_cast<std::size_t>(r);
  }
  return true;
}

std::vector<std::uint8_t> read_frame(int fd, bool& eof) {
  std::uint8_t head[4];
  if (!read_exact(fd, head, 4)) {
    eof = true;
    return {};
  }
  const std::uint32_t len = (static_cast<std::uint32_t>(head[0]) << 24) |
                            (static_cast<std::uint32_t>(head[1]) << 16) |
                            (static_cast<std::uint32_t>(head[2]) << 8) | head[3];
  if (len < 1 || len > (64u << 20)) throw TransportError("unreasonable frame length");
  std::vector<std::uint8_t> frame(static_cast<std::size_t>(len) + 4);
  std::memcpy(frame.data(), head, 4);
  if (!read_exact(fd, frame.data() + 4, len)) throw TransportError("peer closed mid-frame");
  eof = false;
  return frame;
}

// close() only shuts the socket down so a receive() blocked in another
// thread wakes up safely; the descriptor is released in the destructor.
class TcpWorker : public WorkerTransport {
 public:
  explicit TcpWorker(int fd) : fd_(fd) {}
  ~TcpWorker() override {
    if (fd_ >= 0) ::close(fd_);
  }

  void send(const Message& msg) override {
    const std::vector<std::uint8_t> frame = encode(msg);
    write_all(fd_, frame.data(), frame.size());
  }

  Message receive() override {
    bool eof = false;
    std::vector<std::uint8_t> frame = read_frame(fd_, eof);
    if (eof) throw TransportError("coordinator closed the connection");
    return decode(frame, PeerRole::Coordinator);
  }

  void close() override { ::shutdown(fd_, SHUT_RDWR); }

 private:
  int fd_;
};

class TcpCoordinator : public CoordinatorTransport {
 public:
  explicit TcpCoordinator(const std::vector<int>& fds) {
    for (int fd : fds) conns_.push_back(Conn{fd, false, false});
  }
  ~TcpCoordinator() override {
    for (Conn& c : conns_) ::close(c.fd);
  }

  int worker_count() const override { return static_cast<int>(conns_.size()); }

  std::pair<int, Message> receive() override {
    for (;;) {
      std::vector<pollfd> pfds;
      std::vector<int> idx;
      for (int i = 0; i < static_cast<int>(conns_.size()); ++i) {
        Conn& c = conns_[static_cast<std::size_t>(i)];
        if (!c.dead) {
          pfds.push_back(pollfd{c.fd, POLLIN, 0});
          idx.push_back(i);
        }
      }
      if (pfds.empty()) throw TransportError("all workers disconnected");
      const int rc = ::poll(pfds.data(), pfds.size(), -1);
      if (rc < 0) {
        if (errno == EINTR) continue;
        throw TransportError(std::string("poll failed: ") + std::strerror(errno));
      }
      for (std::size_t k = 0; k < pfds.size(); ++k) {
        if (!(pfds[k].revents & (POLLIN | POLLHUP | POLLERR))) continue;
        const int i = idx[k];
        Conn& c = conns_[static_cast<std::size_t>(i)];
        bool eof = false;
        std::vector<std::uint8_t> frame;
        try {
          frame = read_frame(c.fd, eof);
        } catch (const TransportError&) {
          c.dead = true;
          if (!c.ended) throw;
          continue;
        }
        if (eof) {
          c.dead = true;
          if (!c.ended) throw TransportError("worker disconnected before END");
          continue;
        }
        Message msg = decode(frame, PeerRole::Worker);
        if (std::holds_alternative<EndMsg>(msg)) c.ended = true;
        return {i, std::move(msg)};
      }
    }
  }

  void send(int worker, const Message& msg) override {
    Conn& c = conns_.at(static_cast<std::size_t>(worker));
    if (c.dead) throw TransportError("worker is gone");
    const std::vector<std::uint8_t> frame = encode(msg);
    write_all(c.fd, frame.data(), frame.size());
  }

  void close() override {
    for (Conn& c : conns_) ::shutdown(c.fd, SHUT_RDWR);
  }

 private:
  struct Conn {
    int fd;
    bool ended;
    bool dead;
  };
  std::vector<Conn> conns_;
};

int resolve_and_socket(const std::string& host, std::uint16_t port, bool listen_side,
                       sockaddr_in& addr) {
  addr = {};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (host.empty() || host == "*") {
    addr.sin_addr.s_addr = htonl(listen_side ? INADDR_ANY : INADDR_LOOPBACK);
  } else if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    hostent* he = ::gethostbyname(host.c_str());
    if (he == nullptr || he->h_addrtype != AF_INET) {
      throw TransportError("cannot resolve host: " + host);
    }
    std::memcpy(&addr.sin_addr, he->h_addr_list[0], sizeof(addr.sin_addr));
  }
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw TransportError(std::string("socket failed: ") + std::strerror(errno));
  return fd;
}

}  // namespace

InProcCluster make_inproc_cluster(int nworkers) {
  auto st = std::make_shared<InProcState>();
  st->boxes.resize(static_cast<std::size_t>(nworkers));
  InProcCluster cluster;
  cluster.coordinator = std::make_shared<InProcCoordinator>(st);
  for (int i = 0; i < nworkers; ++i) {
    cluster.workers.push_back(std::make_shared<InProcWorker>(st, i));
  }
  return cluster;
}

TcpListener::TcpListener(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  fd_ = resolve_and_socket(host, port, true, addr);
  const int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    const std::string err = std::strerror(errno);
    ::close(fd_);
    fd_ = -1;
    throw TransportError("bind failed: " + err);
  }
  if (::listen(fd_, 64) != 0) {
    const std::string err = std::strerror(errno);
    ::close(fd_);
    fd_ = -1;
    throw TransportError("listen failed: " + err);
  }
  sockaddr_in bound{};
  socklen_t blen = sizeof bound;
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &blen);
  port_ = ntohs(bound.sin_port);
}

TcpListener::~TcpListener() {
  if (fd_ >= 0) ::close(fd_);
}

std::shared_ptr<CoordinatorTransport> TcpListener::accept_workers(int n) {
  std::vector<int> fds;
  fds.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int fd = ::accept(fd_, nullptr, nullptr);
    if (fd < 0) {
      for (int f : fds) ::close(f);
      throw TransportError(std::string("accept failed: ") + std::strerror(errno));
    }
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    fds.push_back(fd);
  }
  return std::make_shared<TcpCoordinator>(fds);
}

std::shared_ptr<WorkerTransport> tcp_connect(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  const int fd = resolve_and_socket(host, port, false, addr);
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    const std::string err = std::strerror(errno);
    ::close(fd);
    throw TransportError("connect to coordinator failed: " + err);
  }
  const int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  return std::make_shared<TcpWorker>(fd);
}

}  // namespace pbb
