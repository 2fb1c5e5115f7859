#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "geocollab/geodesy.hpp"
#include "geocollab/protocol.hpp"
#include "geocollab/session.hpp"

namespace geocollab {

/// Default room size of the relay service tier.
inline constexpr std::size_t kDefaultRoomCapacity = 20;

struct LinkParams {
  double base_latency_s = 0.05;
  double jitter_s = 0.0;  // uniform half-width
  double drop_prob = 0.0;  // applies to poses only

  /// Throws ArgumentError unless 0 <= jitter <= latency and drop in [0, 1].
  void validate() const;
};

struct DeliveredEvent {
  double t = 0.0;
  ClientId to;
  SessionMessage msg;
};

struct MessageStats {
  std::uint64_t sent = 0;       // one per broadcast
  std::uint64_t delivered = 0;  // one per receiver
  std::uint64_t dropped = 0;    // one per receiver
};

/// One delivered event as a JSON line (without LF):
/// {"t":<virtual s>,"to":<id>,"msg":<wire object>}
std::string event_log_line(const DeliveredEvent& e);

/// Relay room over virtual time. Broadcasts go to every other member with
/// per-link latency and jitter; per (sender, receiver) pair delivery is
/// FIFO. Ties in delivery time are broken by (sender, seq, receiver).
class Room {
 public:
  explicit Room(const LinkParams& link, std::uint64_t seed = 42,
                const MapOrigin& default_origin = MapOrigin(),
                std::size_t capacity = kDefaultRoomCapacity);

  /// Throws RoomFullError at capacity. The joiner's Join goes to existing
  /// members, and the joiner receives a Join from each existing member.
  ClientId join_room(Platform platform);
  ClientId join_room(Platform platform, const MapOrigin& local_origin);

  /// Broadcasts Leave and removes the member; undelivered messages addressed
  /// to it are discarded.
  void leave_room(ClientId id);

  /// `m.from` must equal `from`. Throws ArgumentError for unknown senders.
  void broadcast(ClientId from, const SessionMessage& m);

  /// Delivers every event due at or before `t` into the receivers' peer
  /// tables and advances the clock to `t`.
  std::vector<DeliveredEvent> run_until(double t);

  double clock() const { return clock_; }
  bool is_member(ClientId id) const { return members_.contains(id); }
  std::vector<ClientId> members() const;
  Platform platform(ClientId id) const;
  const PeerTable& peer_table(ClientId id) const;
  std::size_t pending() const { return queue_.size(); }

  const std::vector<DeliveredEvent>& log() const { return log_; }
  const std::map<std::string, MessageStats>& stats() const { return stats_; }

  /// Last pose from `from` that was scheduled (not dropped) towards `to`.
  std::optional<msg::Pose> last_scheduled_pose(ClientId from, ClientId to) const;

 private:
  struct Member {
    Platform platform;
    PeerTable table;
  };

  struct Pending {
    double deliver_at;
    ClientId from;
    std::uint64_t seq;
    ClientId to;
    SessionMessage msg;

    bool operator>(const Pending& o) const {
      if (deliver_at != o.deliver_at) return deliver_at > o.deliver_at;
      if (from != o.from) return from > o.from;
      if (seq != o.seq) return seq > o.seq;
      return to > o.to;
    }
  };

  using PairKey = std::pair<ClientId, ClientId>;

  struct PairState {
    std::uint64_t next_seq = 0;
    double last_deliver_at = 0.0;
  };

  const Member& member(ClientId id) const;
  void schedule(ClientId to, const SessionMessage& m);

  LinkParams link_;
  std::mt19937_64 rng_;
  MapOrigin default_origin_;
  std::size_t capacity_;
  double clock_ = 0.0;
  std::uint32_t next_id_ = 1;
  std::map<ClientId, Member> members_;
  std::map<PairKey, PairState> pairs_;
  std::map<PairKey, msg::Pose> last_pose_;
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> queue_;
  std::vector<DeliveredEvent> log_;
  std::map<std::string, MessageStats> stats_;
};

}  // namespace geocollab
