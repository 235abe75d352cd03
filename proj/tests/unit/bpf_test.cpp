/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The ebpfsim Authors
 */
#include <gtest/gtest.h>

#include <map>

#include "ebpfsim/bpf/hook.hpp"
#include "ebpfsim/bpf/map.hpp"
#include "ebpfsim/bpf/program.hpp"
#include "ebpfsim/bpf/runtime.hpp"
#include "oracles.hpp"

namespace {

using namespace ebpfsim;
using namespace ebpfsim::bpf;

/// Minimal user memory: one buffer per address, no namespaces.
class FakeKernel final : public KernelServices {
 public:
  struct Buf {
    std::uint64_t capacity;
    Bytes contents;
    FillState fill = FillState::Empty;
  };

  Tick now() const override { return 1; }
  Expected<Bytes, HelperError> read_user(Pid, UserPtr p, std::uint64_t len) const override {
    auto it = bufs.find(p.addr);
    if (it == bufs.end()) return unexpected(HelperError::BadAddress);
    if (it->second.fill == FillState::Empty) return unexpected(HelperError::BufferEmpty);
    return it->second.contents.substr(0, len);
  }
  Expected<Bytes, HelperError> read_user_str(Pid, UserPtr p) const override {
    auto it = bufs.find(p.addr);
    if (it == bufs.end()) return unexpected(HelperError::BadAddress);
    return it->second.contents;
  }
  Expected<FillState, HelperError> write_user(Pid, UserPtr p, const Bytes &data) override {
    auto it = bufs.find(p.addr);
    if (it == bufs.end()) return unexpected(HelperError::BadAddress);
    if (data.size() > it->second.capacity) return unexpected(HelperError::TooBig);
    auto before = it->second.fill;
    it->second.contents.replace(0, std::min(data.size(), it->second.contents.size()), data);
    it->second.fill = FillState::Overwritten;
    return before;
  }
  void send_signal(Pid pid, int signo, const std::string &) override { signals.emplace_back(pid, signo); }

  std::map<std::uint64_t, Buf> bufs;
  std::vector<std::pair<Pid, int>> signals;
};

const OwnerInfo kPrivileged{"upf-a", {Capability::NetAdmin, Capability::SysAdmin}};

EbpfProgram make(std::string id, HookPoint hook, std::vector<Rule> rules) {
  EbpfProgram p{std::move(id), "", std::move(hook), std::move(rules), {}, {}};
  finalize(p);
  return p;
}

EventContext ctx_for(Phase phase, std::string syscall, std::string comm = "victim") {
  EventContext c;
  c.pid = Pid(42);
  c.tgid = 42;
  c.uid = 1000;
  c.gid = 100;
  c.comm = Comm(comm);
  c.container = "victim";
  c.syscall = std::move(syscall);
  c.phase = phase;
  return c;
}

// ---------------------------------------------------------------------------
// Hooks

TEST(HookPoint, CanonicalNamesRoundTrip) {
  for (const char *name : {"raw_tracepoint/sys_enter", "tracepoint/raw_syscalls/sys_exit",
                           "tracepoint/sys_exit_read", "kprobe/__x64_sys_read", "kretprobe/__x64_sys_openat",
                           "xdp"}) {
    auto h = HookPoint::parse(name);
    ASSERT_TRUE(h) << name;
    EXPECT_EQ(h->canonical_name(), name);
  }
}

TEST(HookPoint, CanonicalNameDeterminesKindAndTarget) {
  auto h = HookPoint::parse("kprobe/__x64_sys_read");
  ASSERT_TRUE(h);
  EXPECT_EQ(h->kind(), HookKind::Kprobe);
  EXPECT_EQ(h->target(), "read");
  EXPECT_EQ(*h, HookPoint::kprobe("read"));
  EXPECT_FALSE(HookPoint::parse("kprobe/not_a_syscall"));
  EXPECT_FALSE(HookPoint::parse("lsm/bpf"));
}

TEST(HookPoint, PhaseMatching) {
  EXPECT_TRUE(HookPoint::sys_enter().matches(Phase::Enter, "openat"));
  EXPECT_FALSE(HookPoint::sys_enter().matches(Phase::Exit, "openat"));
  EXPECT_TRUE(HookPoint::sys_exit().matches(Phase::Exit, "read"));
  EXPECT_TRUE(HookPoint::sys_exit("read").matches(Phase::Exit, "read"));
  EXPECT_FALSE(HookPoint::sys_exit("read").matches(Phase::Exit, "write"));
  EXPECT_TRUE(HookPoint::kretprobe("read").matches(Phase::Exit, "read"));
  EXPECT_FALSE(HookPoint::kprobe("read").matches(Phase::Exit, "read"));
  EXPECT_FALSE(HookPoint::xdp().matches(Phase::Enter, "read"));
}

// ---------------------------------------------------------------------------
// Maps

TEST(BpfMap, FullMapRejectsNewKeysWithoutEviction) {
  BpfMap m("s/m", MapSpec{"m", KeyType::U32, ValueType::U64, 2});
  ASSERT_TRUE(m.update(std::uint64_t{1}, std::uint64_t{10}));
  ASSERT_TRUE(m.update(std::uint64_t{2}, std::uint64_t{20}));
  auto full = m.update(std::uint64_t{3}, std::uint64_t{30});
  ASSERT_FALSE(full);
  EXPECT_EQ(full.error(), MapError::Full);
  EXPECT_EQ(m.size(), 2u);
  EXPECT_TRUE(m.lookup(std::uint64_t{1}));
  // Existing keys still update.
  ASSERT_TRUE(m.update(std::uint64_t{2}, std::uint64_t{21}));
  EXPECT_EQ(std::get<std::uint64_t>(*m.lookup(std::uint64_t{2})), 21u);
  ASSERT_TRUE(m.erase(std::uint64_t{1}));
  EXPECT_TRUE(m.update(std::uint64_t{3}, std::uint64_t{30}));
}

TEST(BpfMap, TypeChecks) {
  BpfMap m("s/m", MapSpec{"m", KeyType::U32, ValueType::U64, 4});
  EXPECT_FALSE(m.update(Bytes("k"), std::uint64_t{1}));
  EXPECT_FALSE(m.update(std::uint64_t{1}, Bytes("v")));
  auto miss = m.lookup(std::uint64_t{9});
  ASSERT_FALSE(miss);
  EXPECT_EQ(miss.error(), MapError::NotFound);
}

TEST(BpfMap, CapacityPropertyAgainstModel) {
  oracle::Gen g(3);
  for (int round = 0; round < 50; ++round) {
    std::size_t cap = 1 + g.below(16);
    BpfMap m("s/m", MapSpec{"m", KeyType::U64, ValueType::U64, cap});
    std::map<std::uint64_t, std::uint64_t> model;
    for (int op = 0; op < 200; ++op) {
      std::uint64_t k = g.below(32);
      switch (g.below(3)) {
        case 0: {
          bool expect_ok = model.contains(k) || model.size() < cap;
          EXPECT_EQ(static_cast<bool>(m.update(k, std::uint64_t{op + 0u})), expect_ok);
          if (expect_ok) model[k] = op;
          break;
        }
        case 1: {
          auto got = m.lookup(k);
          ASSERT_EQ(static_cast<bool>(got), model.contains(k));
          if (got) EXPECT_EQ(std::get<std::uint64_t>(*got), model[k]);
          break;
        }
        default:
          EXPECT_EQ(static_cast<bool>(m.erase(k)), model.erase(k) == 1);
      }
      ASSERT_LE(m.size(), cap);
      ASSERT_EQ(m.size(), model.size());
    }
  }
}

// ---------------------------------------------------------------------------
// Verifier

TEST(Verifier, ImpliedHelpersFromPredicates) {
  EXPECT_EQ(implied_helpers(Predicate::comm_equals("x")), HelperSet{Helper::GetCurrentComm});
  EXPECT_EQ(implied_helpers(Predicate::filename_ends_with("x")), HelperSet{Helper::ProbeReadUserStr});
  EXPECT_EQ(implied_helpers(Predicate::pid_in_map("m")),
            (HelperSet{Helper::GetCurrentPidTgid, Helper::MapLookup}));
  EXPECT_TRUE(implied_helpers(Predicate::syscall_equals("read")).empty());
}

TEST(Verifier, RejectsDeclaredHelperMismatch) {
  auto p = make("p", HookPoint::sys_enter(),
                {Rule{{}, {HelperCall{Helper::GetCurrentPidTgid, {}, std::nullopt}}, RuleFlow::Continue}});
  EXPECT_TRUE(verify(p, [](const std::string &) { return true; }));
  p.declared_helpers.insert(Helper::SendSignal);
  EXPECT_FALSE(verify(p, [](const std::string &) { return true; }));
}

TEST(Verifier, RejectsArityAndUnknownMaps) {
  auto bad_arity = make("p", HookPoint::sys_enter(),
                        {Rule{{}, {HelperCall{Helper::SendSignal, {}, std::nullopt}}, RuleFlow::Continue}});
  EXPECT_FALSE(verify(bad_arity, [](const std::string &) { return true; }));
  auto bad_map = make("p", HookPoint::sys_enter(),
                      {Rule{{Predicate::pid_in_map("ghost")}, {}, RuleFlow::Continue}});
  EXPECT_FALSE(verify(bad_map, [](const std::string &) { return false; }));
}

// ---------------------------------------------------------------------------
// Load and attach

TEST(Runtime, CapabilityGate) {
  EXPECT_TRUE(can_load_programs({Capability::SysAdmin}));
  EXPECT_TRUE(can_load_programs({Capability::Bpf}));
  EXPECT_FALSE(can_load_programs({Capability::NetAdmin}));
  EXPECT_FALSE(can_load_programs({}));

  EbpfRuntime rt;
  PermissiveGate gate;
  auto p = make("p", HookPoint::sys_enter(), {});
  auto denied = rt.load_program(OwnerInfo{"amf", {}}, p, gate);
  ASSERT_FALSE(denied);
  EXPECT_EQ(denied.error().to_string(), "CapabilityDenied");
  EXPECT_TRUE(rt.load_program(kPrivileged, p, gate));
}

TEST(Runtime, LoadRejectsForeignOwner) {
  EbpfRuntime rt;
  PermissiveGate gate;
  auto p = make("p", HookPoint::sys_enter(), {});
  p.owner = "upf-b";
  auto r = rt.load_program(kPrivileged, p, gate);
  ASSERT_FALSE(r);
  EXPECT_EQ(r.error().kind, LoadErrorKind::MalformedProgram);
}

TEST(Runtime, AttachErrors) {
  EbpfRuntime rt;
  PermissiveGate gate;
  auto id = rt.load_program(kPrivileged, make("p", HookPoint::kprobe("read"), {}), gate);
  ASSERT_TRUE(id);
  auto mismatch = rt.attach(*id, HookPoint::kprobe("write"));
  ASSERT_FALSE(mismatch);
  EXPECT_EQ(mismatch.error(), AttachError::HookMismatch);
  ASSERT_TRUE(rt.attach(*id, HookPoint::kprobe("read")));
  auto twice = rt.attach(*id, HookPoint::kprobe("read"));
  ASSERT_FALSE(twice);
  EXPECT_EQ(twice.error(), AttachError::AlreadyAttached);
  EXPECT_EQ(rt.attach(ProgId(99), HookPoint::kprobe("read")).error(), AttachError::NotLoaded);
  EXPECT_EQ(rt.attached_for(Phase::Enter, "read").size(), 1u);
  EXPECT_TRUE(rt.attached_for(Phase::Enter, "write").empty());
}

// ---------------------------------------------------------------------------
// Dispatch and helpers

struct Harness {
  EbpfRuntime rt;
  PermissiveGate gate;
  FakeKernel kernel;

  ProgId load(EbpfProgram p) {
    auto id = rt.load_program(kPrivileged, std::move(p), gate);
    EXPECT_TRUE(id) << (id ? "" : id.error().to_string());
    auto hook = rt.program(*id)->prog.hook;
    EXPECT_TRUE(rt.attach(*id, hook));
    return *id;
  }
  std::vector<HelperEffect> fire(EventContext &ctx) {
    auto progs = rt.attached_for(ctx.phase, ctx.syscall);
    return rt.dispatch(ctx, progs, kernel);
  }
};

TEST(Dispatch, PackingHelpers) {
  Harness h;
  h.load(make("p", HookPoint::sys_enter(),
              {Rule{{},
                    {HelperCall{Helper::GetCurrentPidTgid, {}, std::nullopt},
                     HelperCall{Helper::GetCurrentUidGid, {}, std::nullopt},
                     HelperCall{Helper::GetCurrentComm, {}, std::nullopt}},
                    RuleFlow::Continue}}));
  auto ctx = ctx_for(Phase::Enter, "getpid", "open5gs-amfd");
  auto fx = h.fire(ctx);
  ASSERT_EQ(fx.size(), 3u);
  EXPECT_EQ(std::get<std::uint64_t>(fx[0].result), (42ull << 32) | 42u);
  EXPECT_EQ(std::get<std::uint64_t>(fx[1].result), (100ull << 32) | 1000u);
  EXPECT_EQ(std::get<Bytes>(fx[2].result), Comm("open5gs-amfd").raw());
}

TEST(Dispatch, CommFilteredSignal) {
  Harness h;
  h.load(make("dos", HookPoint::kprobe("read"),
              {Rule{{Predicate::comm_equals("open5gs-amfd")},
                    {HelperCall{Helper::SendSignal, {Operand::u64(9)}, std::nullopt}},
                    RuleFlow::Continue}}));
  auto other = ctx_for(Phase::Enter, "read", "bash");
  EXPECT_TRUE(h.fire(other).empty());
  EXPECT_TRUE(h.kernel.signals.empty());
  auto target = ctx_for(Phase::Enter, "read", "open5gs-amfd");
  auto fx = h.fire(target);
  ASSERT_EQ(fx.size(), 1u);
  ASSERT_EQ(h.kernel.signals.size(), 1u);
  EXPECT_EQ(h.kernel.signals[0], std::make_pair(Pid(42), 9));
}

TEST(Dispatch, InvalidSignalIsPerCallError) {
  Harness h;
  h.load(make("p", HookPoint::sys_enter(),
              {Rule{{}, {HelperCall{Helper::SendSignal, {Operand::u64(3)}, std::nullopt}}, RuleFlow::Continue},
               Rule{{}, {HelperCall{Helper::GetCurrentPidTgid, {}, std::nullopt}}, RuleFlow::Continue}}));
  auto ctx = ctx_for(Phase::Enter, "read");
  auto fx = h.fire(ctx);
  ASSERT_EQ(fx.size(), 2u);
  EXPECT_EQ(fx[0].error, HelperError::InvalidSignal);
  EXPECT_TRUE(fx[1].ok());
}

TEST(Dispatch, ProbeReadUserOnEmptyBuffer) {
  Harness h;
  h.kernel.bufs[0x1000] = {64, "", FillState::Empty};
  h.load(make("p", HookPoint::kprobe("read"),
              {Rule{{},
                    {HelperCall{Helper::ProbeReadUser, {Operand::ctx(CtxField::UserBuffer), Operand::u64(8)},
                                std::nullopt}},
                    RuleFlow::Continue}}));
  auto ctx = ctx_for(Phase::Enter, "read");
  ctx.user_buffer = UserPtr{0x1000};
  auto fx = h.fire(ctx);
  ASSERT_EQ(fx.size(), 1u);
  EXPECT_EQ(fx[0].error, HelperError::BufferEmpty);
}

TEST(Dispatch, WriteThenOverrideAtExit) {
  Harness h;
  h.kernel.bufs[0x2000] = {4096, "echo backup-ok\n", FillState::Filled};
  h.load(make("inj", HookPoint::kretprobe("read"),
              {Rule{{},
                    {HelperCall{Helper::ProbeWriteUser,
                                {Operand::ctx(CtxField::UserBuffer), Operand::bytes("echo pwned")}, std::nullopt},
                     HelperCall{Helper::OverrideReturn, {Operand::u64(10)}, std::nullopt}},
                    RuleFlow::Continue}}));
  auto ctx = ctx_for(Phase::Exit, "read");
  ctx.user_buffer = UserPtr{0x2000};
  ctx.natural_retval = 15;
  auto fx = h.fire(ctx);
  ASSERT_EQ(fx.size(), 2u);
  EXPECT_TRUE(fx[0].ok());
  EXPECT_EQ(fx[0].fill_before, FillState::Filled);
  EXPECT_EQ(fx[0].phase, Phase::Exit);
  EXPECT_TRUE(fx[1].ok());
  EXPECT_EQ(ctx.posted_override, 10);
  EXPECT_EQ(h.kernel.bufs[0x2000].fill, FillState::Overwritten);
  EXPECT_EQ(h.kernel.bufs[0x2000].contents.substr(0, 10), "echo pwned");
}

TEST(Dispatch, WriteAndOverrideRefusedAtEnter) {
  Harness h;
  h.kernel.bufs[0x2000] = {4096, "", FillState::Empty};
  h.load(make("inj", HookPoint::kprobe("read"),
              {Rule{{}, {HelperCall{Helper::OverrideReturn, {Operand::u64(1)}, std::nullopt}}, RuleFlow::Continue},
               Rule{{},
                    {HelperCall{Helper::ProbeWriteUser,
                                {Operand::ctx(CtxField::UserBuffer), Operand::bytes("x")}, std::nullopt}},
                    RuleFlow::Continue}}));
  auto ctx = ctx_for(Phase::Enter, "read");
  ctx.user_buffer = UserPtr{0x2000};
  auto fx = h.fire(ctx);
  ASSERT_EQ(fx.size(), 2u);
  EXPECT_EQ(fx[0].error, HelperError::InvalidPhase);
  EXPECT_EQ(fx[1].error, HelperError::InvalidPhase);
  EXPECT_FALSE(ctx.posted_override);
  EXPECT_EQ(h.kernel.bufs[0x2000].fill, FillState::Empty);
}

TEST(Dispatch, SecondOverrideConflicts) {
  Harness h;
  auto overrider = [](std::string id, std::uint64_t v) {
    return make(std::move(id), HookPoint::sys_exit("read"),
                {Rule{{}, {HelperCall{Helper::OverrideReturn, {Operand::u64(v)}, std::nullopt}}, RuleFlow::Continue}});
  };
  h.load(overrider("first", 3));
  h.load(overrider("second", 7));
  auto ctx = ctx_for(Phase::Exit, "read");
  auto fx = h.fire(ctx);
  ASSERT_EQ(fx.size(), 2u);
  EXPECT_TRUE(fx[0].ok());
  EXPECT_EQ(fx[1].error, HelperError::OverrideConflict);
  EXPECT_EQ(ctx.posted_override, 3);
}

TEST(Dispatch, WriteTooBigFails) {
  Harness h;
  h.kernel.bufs[0x3000] = {4, "abcd", FillState::Filled};
  h.load(make("inj", HookPoint::kretprobe("read"),
              {Rule{{},
                    {HelperCall{Helper::ProbeWriteUser,
                                {Operand::ctx(CtxField::UserBuffer), Operand::bytes("too long")}, std::nullopt}},
                    RuleFlow::Continue}}));
  auto ctx = ctx_for(Phase::Exit, "read");
  ctx.user_buffer = UserPtr{0x3000};
  auto fx = h.fire(ctx);
  ASSERT_EQ(fx.size(), 1u);
  EXPECT_EQ(fx[0].error, HelperError::TooBig);
  EXPECT_EQ(h.kernel.bufs[0x3000].contents, "abcd");
}

TEST(Dispatch, MapStateIsPureFunctionOfDispatchSequence) {
  auto run = [](std::uint64_t seed) {
    Harness h;
    BpfObject obj{"obj", {MapSpec{"seen", KeyType::U64, ValueType::U64, 8}}, {}};
    obj.programs.push_back(make("mark", HookPoint::sys_enter(),
                                {Rule{{},
                                      {HelperCall{Helper::GetCurrentPidTgid, {}, "id"},
                                       HelperCall{Helper::MapUpdate,
                                                  {Operand::map("seen"), Operand::slot("id"), Operand::u64(1)},
                                                  std::nullopt}},
                                      RuleFlow::Continue}}));
    auto ids = h.rt.load_object(kPrivileged, obj, h.gate);
    EXPECT_TRUE(ids);
    for (auto id : *ids) EXPECT_TRUE(h.rt.attach(id, HookPoint::sys_enter()));
    oracle::Gen g(seed);
    std::vector<std::size_t> sizes;
    for (int i = 0; i < 40; ++i) {
      auto ctx = ctx_for(Phase::Enter, "getpid");
      ctx.pid = Pid(static_cast<std::uint32_t>(1 + g.below(12)));
      ctx.tgid = ctx.pid.value();
      h.fire(ctx);
      sizes.push_back(h.rt.find_map("obj/seen")->size());
    }
    return std::make_pair(sizes, h.rt.find_map("obj/seen")->entries());
  };
  auto a = run(17), b = run(17);
  EXPECT_EQ(a, b);
  for (auto s : a.first) EXPECT_LE(s, 8u);
}

TEST(Dispatch, StopEndsProgram) {
  Harness h;
  h.load(make("p", HookPoint::sys_enter(),
              {Rule{{}, {HelperCall{Helper::GetCurrentPidTgid, {}, std::nullopt}}, RuleFlow::Stop},
               Rule{{}, {HelperCall{Helper::GetCurrentUidGid, {}, std::nullopt}}, RuleFlow::Continue}}));
  auto ctx = ctx_for(Phase::Enter, "read");
  EXPECT_EQ(h.fire(ctx).size(), 1u);
}

TEST(Dispatch, EmitRecordAppendsToChannel) {
  Harness h;
  auto id = h.load(make("p", HookPoint::sys_enter(),
                        {Rule{{},
                              {HelperCall{Helper::GetCurrentComm, {}, "comm"},
                               HelperCall{Helper::EmitRecord, {Operand::bytes("ProcessInfo"), Operand::slot("comm")},
                                          std::nullopt}},
                              RuleFlow::Continue}}));
  auto ctx = ctx_for(Phase::Enter, "read", "sshd");
  h.fire(ctx);
  const auto &ch = h.rt.program(id)->channel;
  ASSERT_EQ(ch.size(), 1u);
  EXPECT_EQ(ch[0].kind, "ProcessInfo");
  EXPECT_EQ(to_json(ch[0].fields.at(0)), "sshd");
}

}  // namespace
