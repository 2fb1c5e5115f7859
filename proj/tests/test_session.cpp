#include <optional>
#include <random>

#include <gtest/gtest.h>

#include "geocollab/errors.hpp"
#include "geocollab/session.hpp"

using namespace geocollab;

namespace {

const GeoCoordinate kUcl{51.52279, -0.13175};
const ClientId kSelf{1}, kPeer{2};

SessionMessage from_peer(MessageBody body) { return {kPeer, std::move(body)}; }

PeerTable joined_table() {
  PeerTable table(kSelf, MapOrigin(kUcl));
  table.ingest(from_peer(msg::Join{Platform::kAr}));
  return table;
}

}  // namespace

TEST(PeerTable, JoinThenPose) {
  PeerTable table = joined_table();
  const GeoCoordinate g = quantize(local_to_geo(MapOrigin(kUcl), {10.0, 5.0, 0.0}), 5);
  table.ingest(from_peer(msg::Pose{1.0, g, 30.0}));
  const RemotePeer* p = table.find(kPeer);
  ASSERT_NE(p, nullptr);
  EXPECT_EQ(p->platform, Platform::kAr);
  ASSERT_TRUE(p->last_pose.has_value());
  const double bound = max_quantization_error(kUcl.lat_deg, kWireDecimals);
  EXPECT_LE((p->last_pose->position - LocalPosition(10.0, 5.0, 0.0)).norm(), bound);
  EXPECT_EQ(p->last_pose->heading_deg, 30.0);
}

TEST(PeerTable, Errors) {
  PeerTable table(kSelf, MapOrigin(kUcl));
  EXPECT_THROW(table.ingest(from_peer(msg::Pose{1.0, kUcl, 0.0})), ProtocolError);
  EXPECT_THROW(table.ingest({kSelf, msg::Join{}}), ProtocolError);
  table.ingest(from_peer(msg::Join{}));
  EXPECT_THROW(table.ingest(from_peer(msg::Join{})), ProtocolError);
  EXPECT_THROW(table.ingest(from_peer(msg::StrokePoint{1, {1, 0, 0}})), ProtocolError);
  EXPECT_THROW(table.ingest(from_peer(msg::StrokeEnd{1})), ProtocolError);
  table.ingest(from_peer(msg::Pose{2.0, kUcl, 0.0}));
  EXPECT_THROW(table.ingest(from_peer(msg::Pose{1.0, kUcl, 0.0})), ProtocolError);
  table.ingest(from_peer(msg::StrokeStart{1, kUcl, {}}));
  EXPECT_THROW(table.ingest(from_peer(msg::StrokeStart{1, kUcl, {}})), ProtocolError);
  table.ingest(from_peer(msg::StrokeEnd{1}));
  EXPECT_THROW(table.ingest(from_peer(msg::StrokePoint{1, {1, 0, 0}})), ProtocolError);
}

TEST(PeerTable, StrokeLifecycle) {
  PeerTable table = joined_table();
  table.ingest(from_peer(msg::StrokeStart{7, kUcl, {}}));
  for (int i = 1; i <= 3; ++i) table.ingest(from_peer(msg::StrokePoint{7, {double(i), 0, 0}}));
  table.ingest(from_peer(msg::StrokeEnd{7}));
  const Stroke& s = table.find(kPeer)->strokes.at(7);
  EXPECT_TRUE(s.complete);
  ASSERT_EQ(s.points.size(), 4u);
  EXPECT_EQ(s.points[0], Eigen::Vector3d::Zero());
  EXPECT_EQ(s.points[3], Eigen::Vector3d(3, 0, 0));
}

TEST(PeerTable, AvatarVoiceAndLeave) {
  PeerTable table = joined_table();
  EXPECT_EQ(table.find(kPeer)->voice, VoiceMode::k3d);
  table.ingest(from_peer(msg::Avatar{AvatarState::kWalking}));
  table.ingest(from_peer(msg::Voice{VoiceMode::k2d}));
  EXPECT_EQ(table.find(kPeer)->avatar, AvatarState::kWalking);
  EXPECT_EQ(table.find(kPeer)->voice, VoiceMode::k2d);
  table.ingest(from_peer(msg::Leave{}));
  EXPECT_EQ(table.find(kPeer), nullptr);
  EXPECT_THROW(table.ingest(from_peer(msg::Avatar{})), ProtocolError);
}

TEST(ReconstructStroke, AnchorAtOrigin) {
  Stroke s;
  s.anchor = kUcl;
  s.points = {Eigen::Vector3d::Zero(), Eigen::Vector3d(1, 0, 0)};
  s.complete = true;
  const auto pts = reconstruct_stroke(s, MapOrigin(kUcl));
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0], LocalPosition(0, 0, 0));
  EXPECT_EQ(pts[1], LocalPosition(1, 0, 0));
}

TEST(ReconstructStroke, IncompleteIsStateError) {
  Stroke s;
  s.anchor = kUcl;
  s.points = {Eigen::Vector3d::Zero()};
  EXPECT_THROW(reconstruct_stroke(s, MapOrigin(kUcl)), StateError);
}

TEST(ReconstructStroke, ShapePreservedAcrossOrigins) {
  LocalClient author(kPeer, Platform::kVr, MapOrigin(kUcl));
  PeerTable near(kSelf, MapOrigin(kUcl));
  PeerTable far(ClientId{3}, MapOrigin(local_to_geo(MapOrigin(kUcl), {37.0, -21.0, 0.0})));
  const std::vector<LocalPosition> drawn{{1.234567, 2.345678, 1.1}, {1.5, 2.1, 1.2}, {2.0, 2.9, 1.3}};
  std::vector<SessionMessage> sent{author.join_message(), author.begin_stroke(drawn[0], {})};
  for (std::size_t i = 1; i < drawn.size(); ++i) sent.push_back(author.add_stroke_point(drawn[i]));
  sent.push_back(author.end_stroke());
  for (const auto& m : sent) {
    near.ingest(decode(encode(m)));
    far.ingest(decode(encode(m)));
  }
  const auto a = reconstruct_stroke(near.find(kPeer)->strokes.at(1), near.local_origin());
  const auto b = reconstruct_stroke(far.find(kPeer)->strokes.at(1), far.local_origin());
  const double bound = max_quantization_error(kUcl.lat_deg, kWireDecimals);
  for (std::size_t i = 0; i < drawn.size(); ++i) {
    EXPECT_LE((a[i] - drawn[i]).head<2>().norm(), bound);
    for (std::size_t j = 0; j < drawn.size(); ++j) {
      EXPECT_NEAR((b[i] - b[j]).norm(), (drawn[i] - drawn[j]).norm(), 1e-9);
    }
  }
}

TEST(LocalClient, ArNeedsCorrector) {
  EXPECT_THROW(LocalClient(kSelf, Platform::kAr, MapOrigin(kUcl)), ArgumentError);
  const std::vector<GpsFix> fixes{{0.0, kUcl}};
  LocalClient ar(kSelf, Platform::kAr, MapOrigin(kUcl), Corrector::init(fixes, SlamPose{}, {}));
  const SessionMessage m = ar.pose_from_slam({1.0, 10.0, 0.0, 0.0, 0.0});
  EXPECT_EQ(std::get<msg::Pose>(m.body).geo, quantize(local_to_geo(MapOrigin(kUcl), {10, 0, 0}), 5));
  EXPECT_THROW(ar.pose_from_virtual(1.0, LocalPosition::Zero(), 0.0), StateError);
}

TEST(LocalClient, VrPoses) {
  LocalClient vr(kSelf, Platform::kVr, MapOrigin(kUcl));
  EXPECT_EQ(std::get<msg::Pose>(vr.pose_from_virtual(0.0, LocalPosition::Zero(), 0.0).body).geo, kUcl);
  EXPECT_THROW(vr.pose_from_slam(SlamPose{}), StateError);
}

TEST(LocalClient, AvatarOnlyOnChange) {
  LocalClient vr(kSelf, Platform::kVr, MapOrigin(kUcl));
  EXPECT_FALSE(vr.update_speed(0.2).has_value());
  const auto walk = vr.update_speed(0.5);
  ASSERT_TRUE(walk.has_value());
  EXPECT_EQ(std::get<msg::Avatar>(walk->body).state, AvatarState::kWalking);
  EXPECT_FALSE(vr.update_speed(0.2).has_value());
  EXPECT_TRUE(vr.update_speed(0.1).has_value());
  EXPECT_EQ(vr.avatar(), AvatarState::kIdle);
}

TEST(LocalClient, StrokeAuthoring) {
  LocalClient vr(kSelf, Platform::kVr, MapOrigin(kUcl));
  EXPECT_THROW(vr.add_stroke_point(LocalPosition::Zero()), StateError);
  const SessionMessage start = vr.begin_stroke({3.0, 4.0, 1.0}, {});
  EXPECT_TRUE(vr.drawing());
  EXPECT_EQ(std::get<msg::StrokeStart>(start.body).stroke_id, 1u);
  EXPECT_THROW(vr.begin_stroke(LocalPosition::Zero(), {}), StateError);
  const SessionMessage pt = vr.add_stroke_point({3.5, 4.0, 1.25});
  EXPECT_EQ(std::get<msg::StrokePoint>(pt.body).rel, Eigen::Vector3d(0.5, 0.0, 0.25));
  vr.end_stroke();
  EXPECT_FALSE(vr.drawing());
  EXPECT_EQ(std::get<msg::StrokeStart>(vr.begin_stroke(LocalPosition::Zero(), {}).body).stroke_id, 2u);
}

TEST(PosePipeline, ReceiverErrorWithinQuantizationBoundProperty) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> v(-2000.0, 2000.0);
  LocalClient sender(kPeer, Platform::kVr, MapOrigin(kUcl));
  PeerTable receiver(kSelf, MapOrigin(kUcl));
  receiver.ingest(sender.join_message());
  const double bound = max_quantization_error(kUcl.lat_deg, kWireDecimals);
  for (int i = 0; i < 1000; ++i) {
    const LocalPosition truth(v(rng), v(rng), 0.0);
    receiver.ingest(decode(encode(sender.pose_from_virtual(i, truth, 0.0))));
    ASSERT_LE((receiver.find(kPeer)->last_pose->position - truth).norm(), bound);
  }
}

TEST(PeerTable, RandomFifoSequencesNeverErrorProperty) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> action(0, 5);
  std::uniform_real_distribution<double> v(-50.0, 50.0), speed(0.0, 0.6);
  for (int run = 0; run < 50; ++run) {
    LocalClient author(kPeer, Platform::kVr, MapOrigin(kUcl));
    PeerTable table(kSelf, MapOrigin(local_to_geo(MapOrigin(kUcl), {v(rng), v(rng), 0.0})));
    table.ingest(decode(encode(author.join_message())));
    double t = 0.0;
    for (int i = 0; i < 200; ++i) {
      std::optional<SessionMessage> m;
      switch (action(rng)) {
        case 0: m = author.pose_from_virtual(t += 0.1, {v(rng), v(rng), 0.0}, v(rng)); break;
        case 1: m = author.update_speed(speed(rng)); break;
        case 2: m = author.set_voice(i % 2 ? VoiceMode::k2d : VoiceMode::k3d); break;
        case 3:
          m = author.drawing() ? author.add_stroke_point({v(rng), v(rng), 1.0})
                               : author.begin_stroke({v(rng), v(rng), 1.0}, {});
          break;
        case 4:
          if (author.drawing()) m = author.end_stroke();
          break;
        default: break;
      }
      if (m) ASSERT_NO_THROW(table.ingest(decode(encode(*m))));
    }
    EXPECT_EQ(table.find(kPeer)->avatar, author.avatar());
    EXPECT_EQ(table.find(kPeer)->voice, author.voice());
  }
}
