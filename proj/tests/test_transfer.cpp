#include <gtest/gtest.h>

#include <random>

#include "dronecan/error.hpp"
#include "dronecan/transfer.hpp"
#include "oracles.hpp"

using namespace dronecan;

namespace {

const std::vector<std::uint8_t> kListing1Frame1{0xA6, 0x35, 0, 0, 0, 0, 0, 0x80};
const std::vector<std::uint8_t> kListing1Frame2{0, 0, 0, 0, 0, 0, 0x60};

std::vector<CanFrame> listing1_pair(std::uint8_t second_tail = 0x60)
{
    auto f2 = kListing1Frame2;
    f2.back() = second_tail;
    return {make_frame(kRawCommandCanId, kListing1Frame1, Micros{0}), make_frame(kRawCommandCanId, f2, Micros{0})};
}

std::vector<std::uint8_t> random_payload(std::mt19937_64& rng, std::size_t n)
{
    std::vector<std::uint8_t> p(n);
    for (auto& b : p) {
        b = static_cast<std::uint8_t>(rng());
    }
    return p;
}

std::vector<Transfer> transfers_of(const std::vector<ReassemblyEvent>& events)
{
    std::vector<Transfer> out;
    for (const auto& e : events) {
        if (const auto* t = std::get_if<Transfer>(&e)) {
            out.push_back(*t);
        }
    }
    return out;
}

}  // namespace

TEST(TailByte, EncodeExamples)
{
    EXPECT_EQ(encode_tail({true, false, false, 0}), 0x80);
    EXPECT_EQ(encode_tail({false, true, true, 0}), 0x60);
    EXPECT_EQ(encode_tail({true, true, false, 3}), 0xC3);
}

TEST(TailByte, DecodeExamples)
{
    EXPECT_EQ(decode_tail(0x80), (TailByte{true, false, false, 0}));
    EXPECT_EQ(decode_tail(0x60), (TailByte{false, true, true, 0}));
    EXPECT_EQ(decode_tail(0xC3), (TailByte{true, true, false, 3}));
}

TEST(TailByte, EveryByteRoundTrips)
{
    for (int b = 0; b < 256; ++b) {
        EXPECT_EQ(encode_tail(decode_tail(static_cast<std::uint8_t>(b))), b);
    }
}

TEST(TransferCrc, ReproducesListingBytes)
{
    const std::array<std::uint8_t, 11> zeros{};
    const auto crc = compute_transfer_crc(kRawCommandSignature, zeros);
    EXPECT_EQ(crc & 0xFF, 0xA6);
    EXPECT_EQ(crc >> 8, 0x35);
    EXPECT_EQ(crc, oracle::TableCrc16{}.transfer_crc(kRawCommandSignature.value, zeros));
}

TEST(TransferCrc, EmptyPayloadMatchesOracle)
{
    // Frozen from the table-driven oracle.
    constexpr std::uint16_t kV0 = 0xE4B8;
    EXPECT_EQ(oracle::TableCrc16{}.transfer_crc(kRawCommandSignature.value, {}), kV0);
    EXPECT_EQ(compute_transfer_crc(kRawCommandSignature, {}), kV0);
}

TEST(TransferCrc, CheckValueAndDeterminism)
{
    // CRC-16/CCITT-FALSE catalogue check value.
    const std::string check = "123456789";
    TransferCrc crc;
    crc.add(std::span(reinterpret_cast<const std::uint8_t*>(check.data()), check.size()));
    EXPECT_EQ(crc.value(), 0x29B1);

    std::mt19937_64 rng(3);
    const oracle::TableCrc16 table;
    for (int i = 0; i < 500; ++i) {
        const auto p = random_payload(rng, rng() % 300);
        const DsdlSignature sig{rng()};
        const auto a = compute_transfer_crc(sig, p);
        EXPECT_EQ(a, compute_transfer_crc(sig, p));
        EXPECT_EQ(a, table.transfer_crc(sig.value, p));
    }
}

TEST(SplitTransfer, ListingPair)
{
    const std::vector<std::uint8_t> zeros(11, 0);
    const auto frames = split_transfer(MessageId{5, 1030, 1}, zeros, 0, kRawCommandSignature, Micros{0});
    ASSERT_EQ(frames.size(), 2u);
    EXPECT_EQ(std::vector<std::uint8_t>(frames[0].data().begin(), frames[0].data().end()), kListing1Frame1);
    EXPECT_EQ(std::vector<std::uint8_t>(frames[1].data().begin(), frames[1].data().end()), kListing1Frame2);
    EXPECT_EQ(frames[0].id(), kRawCommandCanId);
}

TEST(SplitTransfer, SingleFrame)
{
    const std::vector<std::uint8_t> p{1, 2, 3};
    const auto frames = split_transfer(MessageId{5, 1030, 1}, p, 7, kRawCommandSignature, Micros{42});
    ASSERT_EQ(frames.size(), 1u);
    EXPECT_EQ(frames[0].dlc(), 4);
    EXPECT_EQ(frames[0].data().back(), 0xC7);
    EXPECT_EQ(frames[0].timestamp(), Micros{42});
}

TEST(SplitTransfer, Errors)
{
    const std::vector<std::uint8_t> nine(9, 0);
    try {
        (void)split_transfer(AnonymousMessageId{0, 0, 0}, nine, 0, kRawCommandSignature, Micros{0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::WrongFrameKind);
    }
    EXPECT_NO_THROW((void)split_transfer(AnonymousMessageId{0, 0, 0}, std::span(nine).first(7), 0,
                                         kRawCommandSignature, Micros{0}));
    const std::vector<std::uint8_t> big(257, 0);
    EXPECT_THROW((void)split_transfer(MessageId{5, 1030, 1}, big, 0, kRawCommandSignature, Micros{0}), Error);
    EXPECT_THROW((void)split_transfer(MessageId{5, 1030, 1}, nine, 32, kRawCommandSignature, Micros{0}), Error);
}

TEST(SplitTransferProperty, FrameSizingAndTailAlternation)
{
    std::mt19937_64 rng(11);
    for (std::size_t len = 0; len <= 256; ++len) {
        const auto p = random_payload(rng, len);
        const auto tid = static_cast<std::uint8_t>(len % 32);
        const auto frames = split_transfer(ServiceId{3, 9, true, 4, 5}, p, tid, DsdlSignature{rng()}, Micros{9});
        ASSERT_EQ(frames.size(), frames_for_payload(len));
        if (len > 7) {
            ASSERT_EQ(frames.size(), 1 + (len - 5 + 6) / 7);
        }
        for (std::size_t i = 0; i < frames.size(); ++i) {
            ASSERT_LE(frames[i].dlc(), 8);
            const auto t = decode_tail(frames[i].data().back());
            EXPECT_EQ(t.start_of_transfer, i == 0);
            EXPECT_EQ(t.end_of_transfer, i + 1 == frames.size());
            EXPECT_EQ(t.toggle, i % 2 == 1);
            EXPECT_EQ(t.transfer_id, tid);
        }
    }
}

TEST(Reassembler, ListingPairYieldsValidTransfer)
{
    const auto events = reassemble(listing1_pair());
    ASSERT_EQ(events.size(), 1u);
    const auto& t = std::get<Transfer>(events[0]);
    EXPECT_EQ(std::get<MessageId>(t.frame_id).message_type_id, 1030);
    EXPECT_EQ(t.payload, std::vector<std::uint8_t>(11, 0));
    EXPECT_TRUE(t.multi_frame);
    EXPECT_TRUE(t.crc_ok);
}

TEST(Reassembler, SingleFrameEmittedImmediately)
{
    Reassembler r;
    const std::vector<std::uint8_t> d{0x11, 0x22, 0xC0};
    const auto events = r.push(make_frame(0x05040601, d, Micros{5}));
    ASSERT_EQ(events.size(), 1u);
    const auto& t = std::get<Transfer>(events[0]);
    EXPECT_EQ(t.payload, (std::vector<std::uint8_t>{0x11, 0x22}));
    EXPECT_FALSE(t.multi_frame);
    EXPECT_EQ(r.open_assemblies(), 0u);
}

TEST(Reassembler, ToggleMismatch)
{
    // Hand trace: 0x80 opens tid 0 expecting toggle 1 next; 0x40 has toggle 0.
    const auto events = reassemble(listing1_pair(0x40));
    ASSERT_EQ(events.size(), 1u);
    EXPECT_EQ(std::get<ReassemblyDiagnostic>(events[0]).kind, ReassemblyErrc::ToggleMismatch);
}

TEST(Reassembler, TransferIdMismatchAndOrphan)
{
    auto events = reassemble(listing1_pair(0x61));
    ASSERT_EQ(events.size(), 1u);
    EXPECT_EQ(std::get<ReassemblyDiagnostic>(events[0]).kind, ReassemblyErrc::TransferIdMismatch);

    const std::vector<CanFrame> orphan{listing1_pair()[1]};
    events = reassemble(orphan);
    ASSERT_EQ(events.size(), 1u);
    EXPECT_EQ(std::get<ReassemblyDiagnostic>(events[0]).kind, ReassemblyErrc::OrphanContinuation);
}

TEST(Reassembler, ErrorsDoNotHaltTheStream)
{
    auto frames = listing1_pair(0x40);  // toggle error
    const auto good = listing1_pair();
    frames.insert(frames.end(), good.begin(), good.end());
    const auto events = reassemble(frames);
    ASSERT_EQ(events.size(), 2u);
    EXPECT_TRUE(std::holds_alternative<ReassemblyDiagnostic>(events[0]));
    EXPECT_TRUE(std::get<Transfer>(events[1]).crc_ok);
}

TEST(Reassembler, CrcMismatchReportsBoth)
{
    auto frames = listing1_pair();
    std::vector<std::uint8_t> d(frames[1].data().begin(), frames[1].data().end());
    d[0] ^= 0x01;
    frames[1] = make_frame(frames[1].id(), d, frames[1].timestamp());
    const auto events = reassemble(frames);
    ASSERT_EQ(events.size(), 2u);
    EXPECT_FALSE(std::get<Transfer>(events[0]).crc_ok);
    EXPECT_EQ(std::get<ReassemblyDiagnostic>(events[1]).kind, ReassemblyErrc::CrcMismatch);
}

TEST(Reassembler, UnknownSignatureStillEmitsTransfer)
{
    const std::vector<std::uint8_t> p(20, 0x5A);
    const auto frames = split_transfer(MessageId{16, 1034, 20}, p, 0, DsdlSignature{1}, Micros{0});
    const auto events = reassemble(frames);
    ASSERT_EQ(events.size(), 2u);
    EXPECT_EQ(std::get<Transfer>(events[0]).payload, p);
    EXPECT_EQ(std::get<ReassemblyDiagnostic>(events[1]).kind, ReassemblyErrc::UnknownSignature);
}

TEST(Reassembler, StrictTransferIdOrdering)
{
    const std::vector<std::uint8_t> p{1};
    std::vector<CanFrame> frames;
    for (std::uint8_t tid : {0, 1, 3}) {
        auto f = split_transfer(MessageId{5, 1030, 1}, p, tid, kRawCommandSignature, Micros{0});
        frames.insert(frames.end(), f.begin(), f.end());
    }
    EXPECT_EQ(reassemble(frames).size(), 3u);

    ReassemblerOptions strict;
    strict.strict_transfer_id = true;
    const auto events = reassemble(frames, strict);
    ASSERT_EQ(events.size(), 4u);
    EXPECT_EQ(std::get<ReassemblyDiagnostic>(events[2]).kind, ReassemblyErrc::OutOfOrderTransferId);
}

TEST(Reassembler, AnonymousAndMalformedStarts)
{
    const std::vector<std::uint8_t> start{0xAA, 0xBB, 1, 2, 3, 4, 5, 0x80};
    auto events = reassemble(std::vector{make_frame(0x00000100, start, Micros{0})});
    ASSERT_EQ(events.size(), 1u);
    EXPECT_EQ(std::get<ReassemblyDiagnostic>(events[0]).kind, ReassemblyErrc::AnonymousMultiFrame);

    const std::vector<std::uint8_t> short_start{0xAA, 0x80};
    events = reassemble(std::vector{make_frame(kRawCommandCanId, short_start, Micros{0})});
    EXPECT_EQ(std::get<ReassemblyDiagnostic>(events[0]).kind, ReassemblyErrc::MalformedStart);

    events = reassemble(std::vector{make_frame(kRawCommandCanId, {}, Micros{0})});
    EXPECT_EQ(std::get<ReassemblyDiagnostic>(events[0]).kind, ReassemblyErrc::EmptyFrame);
}

TEST(TransferProperty, SplitThenReassembleIsIdentity)
{
    std::mt19937_64 rng(2024);
    SignatureRegistry reg;
    for (int i = 0; i < 2'000; ++i) {
        const auto len = static_cast<std::size_t>(rng() % 257);
        const auto p = random_payload(rng, len);
        const auto tid = static_cast<std::uint8_t>(rng() % 32);
        const auto type = static_cast<std::uint16_t>(rng());
        const DsdlSignature sig{rng()};
        reg.messages[type] = sig;
        ReassemblerOptions opts;
        opts.signatures = reg;
        const auto frames = split_transfer(MessageId{5, type, 9}, p, tid, sig, Micros{0});
        const auto got = transfers_of(reassemble(frames, opts));
        ASSERT_EQ(got.size(), 1u);
        EXPECT_EQ(got[0].payload, p);
        EXPECT_EQ(got[0].transfer_id, tid);
        EXPECT_TRUE(got[0].crc_ok);
    }
}

TEST(TransferProperty, SinglePayloadBitFlipBreaksCrc)
{
    std::mt19937_64 rng(99);
    for (int i = 0; i < 1'000; ++i) {
        const auto len = 8 + static_cast<std::size_t>(rng() % 249);
        const auto p = random_payload(rng, len);
        auto frames = split_transfer(MessageId{5, 1030, 1}, p, 0, kRawCommandSignature, Micros{0});
        // Flip one payload bit (never the CRC prefix or a tail byte).
        const std::size_t bit = rng() % (len * 8);
        const std::size_t byte = bit / 8;
        const std::size_t frame = byte < 5 ? 0 : 1 + (byte - 5) / 7;
        const std::size_t offset = byte < 5 ? 2 + byte : (byte - 5) % 7;
        std::vector<std::uint8_t> d(frames[frame].data().begin(), frames[frame].data().end());
        d[offset] ^= static_cast<std::uint8_t>(1U << (bit % 8));
        frames[frame] = make_frame(frames[frame].id(), d, Micros{0});
        const auto got = transfers_of(reassemble(frames));
        ASSERT_EQ(got.size(), 1u);
        EXPECT_FALSE(got[0].crc_ok) << "len=" << len << " bit=" << bit;
    }
}
