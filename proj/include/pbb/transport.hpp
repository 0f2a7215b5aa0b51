#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pbb/protocol.hpp"

namespace pbb {

// Peer loss, truncated stream, closed endpoint. Distinct from a clean END
// exchange, which is an ordinary message.
struct TransportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Worker side: one connection to the coordinator, FIFO both ways.
class WorkerTransport {
 public:
  virtual ~WorkerTransport() = default;
  virtual void send(const Message& msg) = 0;
  virtual Message receive() = 0;  // blocks
  virtual void close() = 0;
};

// Coordinator side: any-source blocking receive over all workers.
class CoordinatorTransport {
 public:
  virtual ~CoordinatorTransport() = default;
  virtual int worker_count() const = 0;
  virtual std::pair<int, Message> receive() = 0;  // blocks
  virtual void send(int worker, const Message& msg) = 0;
  virtual void close() = 0;
};

// Deterministic in-process transport for integration tests. Messages still
// travel as encoded frames so the wire codec is on the path.
struct InProcCluster {
  std::shared_ptr<CoordinatorTransport> coordinator;
  std::vector<std::shared_ptr<WorkerTransport>> workers;
};
InProcCluster make_inproc_cluster(int nworkers);

// TCP: the coordinator binds immediately (port 0 picks an ephemeral port),
// workers connect, accept_workers() completes the rendezvous.
class TcpListener {
 public:
  TcpListener(const std::string& host, std::uint16_t port);
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  std::uint16_t port() const { return port_; }
  std::shared_ptr<CoordinatorTransport> accept_workers(int n);

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

std::shared_ptr<WorkerTransport> tcp_connect(const std::string& host, std::uint16_t port);

}  // namespace pbb
