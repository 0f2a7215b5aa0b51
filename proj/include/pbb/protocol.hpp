#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "pbb/workunit.hpp"

namespace pbb {

// Coordinator-worker message schema. WORK frames differ by direction:
// worker->coordinator carries the checkpoint header, coordinator->worker
// only the interval list. BEST and END share one payload; END additionally
// signals that the sender is done.
enum class MsgTag : std::uint8_t { Work = 1, Best = 2, End = 3 };

inline constexpr std::uint64_t kNoMakespan = UINT64_MAX;

struct WorkRequest {  // worker -> coordinator checkpoint
  std::uint32_t worker_id = 0;
  std::uint64_t nodes_since_checkpoint = 0;
  std::uint32_t kmax = 0;
  std::vector<Interval> intervals;
};

struct WorkReply {  // coordinator -> worker
  std::vector<Interval> intervals;
};

struct BestMsg {
  std::uint64_t makespan = kNoMakespan;
  std::vector<std::uint32_t> schedule;  // may be empty
};

struct EndMsg {
  std::uint64_t makespan = kNoMakespan;
  std::vector<std::uint32_t> schedule;
};

using Message = std::variant<WorkRequest, WorkReply, BestMsg, EndMsg>;

enum class PeerRole : std::uint8_t { Worker, Coordinator };

// Frame layout: u32 big-endian length (tag byte + payload), u8 tag,
// payload. Intervals serialize as two BigCounts, each a u16 big-endian
// byte count followed by that many big-endian magnitude bytes (minimal,
// zero encodes as zero bytes).
std::vector<std::uint8_t> encode(const Message& msg);

// Decode one complete frame; `sender` disambiguates the two WORK layouts.
Message decode(std::span<const std::uint8_t> frame, PeerRole sender);

MsgTag message_tag(const Message& msg);

}  // namespace pbb
