#include "pbb/protocol.hpp"

#include <stdexcept>

namespace pbb {

namespace {

void put_u16(std::vector<std::uint8_t>& buf, std::uint16_t v) {
  buf.push_back(static_cast<std::uint8_t>(v >> 8));
  buf.push_back(static_cast<std::uint8_t>(v));
}

void put_u32(std::vector<std::uint8_t>& buf, std::uint32_t v) {
  for (int i = 3; i >= 0; --i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& buf, std::uint64_t v) {
  for (int i = 7; i >= 0; --i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint16_t u16() { return static_cast<std::uint16_t>(take(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(take(4)); }
  std::uint64_t u64() { return take(8); }

  std::span<const std::uint8_t> bytes(std::size_t count) {
    need(count);
    auto out = data_.subspan(pos_, count);
    pos_ += count;
    return out;
  }

  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t count) const {
    if (pos_ + count > data_.size()) throw std::runtime_error("truncated frame");
  }
  std::uint64_t take(int nbytes) {
    need(static_cast<std::size_t>(nbytes));
    std::uint64_t v = 0;
    for (int i = 0; i < nbytes; ++i) v = (v << 8) | data_[pos_++];
    return v;
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

void put_bigcount(std::vector<std::uint8_t>& buf, const BigCount& v) {
  const std::vector<std::uint8_t> mag = v.to_bytes();
  if (mag.size() > UINT16_MAX) throw std::length_error("BigCount too large for the wire");
  put_u16(buf, static_cast<std::uint16_t>(mag.size()));
  buf.insert(buf.end(), mag.begin(), mag.end());
}

BigCount get_bigcount(Reader& r) {
  const std::uint16_t len = r.u16();
  return BigCount::from_bytes(r.bytes(len));
}

void put_intervals(std::vector<std::uint8_t>& buf, const std::vector<Interval>& ivs) {
  if (ivs.size() > UINT32_MAX) throw std::length_error("too many intervals");
  put_u32(buf, static_cast<std::uint32_t>(ivs.size()));
  for (const Interval& iv : ivs) {
    put_bigcount(buf, iv.a);
    put_bigcount(buf, iv.b);
  }
}

std::vector<Interval> get_intervals(Reader& r) {
  const std::uint32_t count = r.u32();
  std::vector<Interval> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    BigCount a = get_bigcount(r);
    BigCount b = get_bigcount(r);
    if (a >= b) throw std::runtime_error("malformed interval on the wire (a >= b)");
    out.emplace_back(std::move(a), std::move(b));
  }
  return out;
}

void put_solution(std::vector<std::uint8_t>& buf, std::uint64_t makespan,
                  const std::vector<std::uint32_t>& schedule) {
  put_u64(buf, makespan);
  put_u32(buf, static_cast<std::uint32_t>(schedule.size()));
  for (std::uint32_t j : schedule) put_u32(buf, j);
}

void get_solution(Reader& r, std::uint64_t& makespan, std::vector<std::uint32_t>& schedule) {
  makespan = r.u64();
  const std::uint32_t len = r.u32();
  schedule.resize(len);
  for (std::uint32_t i = 0; i < len; ++i) schedule[i] = r.u32();
}

}  // namespace

MsgTag message_tag(const Message& msg) {
  if (std::holds_alternative<WorkRequest>(msg) || std::holds_alternative<WorkReply>(msg)) {
    return MsgTag::Work;
  }
  return std::holds_alternative<BestMsg>(msg) ? MsgTag::Best : MsgTag::End;
}

std::vector<std::uint8_t> encode(const Message& msg) {
  std::vector<std::uint8_t> payload;
  std::visit(
      [&payload]<typename T>(const T& m) {
        if constexpr (std::is_same_v<T, WorkRequest>) {
          put_u32(payload, m.worker_id);
          put_u64(payload, m.nodes_since_checkpoint);
          put_u32(payload, m.kmax);
          put_intervals(payload, m.intervals);
        } else if constexpr (std::is_same_v<T, WorkReply>) {
          put_intervals(payload, m.intervals);
        } else {
          put_solution(payload, m.makespan, m.schedule);
        }
      },
      msg);
  std::vector<std::uint8_t> frame;
  frame.reserve(payload.size() + 5);
  put_u32(frame, static_cast<std::uint32_t>(payload.size() + 1));  // tag + payload
  frame.push_back(static_cast<std::uint8_t>(message_tag(msg)));
  frame.insert(frame.end(), payload.begin(), payload.end());
  return frame;
}

Message decode(std::span<const std::uint8_t> frame, PeerRole sender) {
  Reader header(frame);
  const std::uint32_t length = header.u32();
  if (frame.size() != static_cast<std::size_t>(length) + 4 || length < 1) {
    throw std::runtime_error("frame length mismatch");
  }
  const std::uint8_t tag = static_cast<std::uint8_t>(header.bytes(1)[0]);
  Reader r(frame.subspan(5));
  Message out;
  switch (tag) {
    case static_cast<std::uint8_t>(MsgTag::Work): {
      if (sender == PeerRole::Worker) {
        WorkRequest m;
        m.worker_id = r.u32();
        m.nodes_since_checkpoint = r.u64();
        m.kmax = r.u32();
        m.intervals = get_intervals(r);
        out = std::move(m);
      } else {
        WorkReply m;
        m.intervals = get_intervals(r);
        out = std::move(m);
      }
      break;
    }
    case static_cast<std::uint8_t>(MsgTag::Best): {
      BestMsg m;
      get_solution(r, m.makespan, m.schedule);
      out = std::move(m);
      break;
    }
    case static_cast<std::uint8_t>(MsgTag::End): {
      EndMsg m;
      get_solution(r, m.makespan, m.schedule);
      out = std::move(m);
      break;
    }
    default:
      throw std::runtime_error("unknown message tag " + std::to_string(tag));
  }
  if (!r.done()) throw std::runtime_error("trailing bytes in frame");
  return out;
}

}  // namespace pbb
