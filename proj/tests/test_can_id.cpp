#include <gtest/gtest.h>

#include <random>

#include "dronecan/can_frame.hpp"
#include "dronecan/can_id.hpp"
#include "dronecan/error.hpp"
#include "oracles.hpp"

using namespace dronecan;

namespace {

template <class F>
Errc error_code_of(F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected dronecan::Error";
    return Errc::InvalidConfig;
}

}  // namespace

TEST(CanFrame, MakeFrameSetsDlcFromData)
{
    const std::array<std::uint8_t, 8> data{0xA6, 0x35, 0, 0, 0, 0, 0, 0x80};
    const auto f = make_frame(0x05040601, data, Micros{0});
    EXPECT_EQ(f.dlc(), 8);
    EXPECT_EQ(f.id(), 0x05040601u);
    EXPECT_TRUE(std::equal(data.begin(), data.end(), f.data().begin(), f.data().end()));
}

TEST(CanFrame, EmptyData)
{
    const auto f = make_frame(0, {}, Micros{0});
    EXPECT_EQ(f.dlc(), 0);
    EXPECT_TRUE(f.data().empty());
}

TEST(CanFrame, Rejections)
{
    const std::array<std::uint8_t, 9> nine{};
    EXPECT_EQ(error_code_of([] { (void)make_frame(0x2000'0000, {}, Micros{0}); }), Errc::IdOutOfRange);
    EXPECT_EQ(error_code_of([&] { (void)make_frame(1, nine, Micros{0}); }), Errc::DataTooLong);
    EXPECT_EQ(error_code_of([] { (void)make_frame(1, {}, Micros{-1}); }), Errc::InvalidTimestamp);
    EXPECT_NO_THROW((void)make_frame(0x1FFF'FFFF, std::span(nine).first(8), Micros{0}));
}

TEST(CanFrame, SecondsRoundToMicros)
{
    EXPECT_EQ(seconds_to_micros(1.5), Micros{1'500'000});
    EXPECT_EQ(seconds_to_micros(0.0015), Micros{1'500});
    EXPECT_EQ(seconds_to_micros(0.0000004), Micros{0});
}

TEST(CanId, DecodeRawCommand)
{
    const auto fid = decode_can_id(0x05040601);
    ASSERT_TRUE(std::holds_alternative<MessageId>(fid));
    const auto m = std::get<MessageId>(fid);
    EXPECT_EQ(m.message_type_id, 1030);
    EXPECT_EQ(m.source_node_id, 1);
    EXPECT_EQ(m.priority, 5);
    EXPECT_EQ(oracle::message_id(5, 1030, 1), 0x05040601u);
}

TEST(CanId, DecodeAllZeroIsAnonymous)
{
    const auto fid = decode_can_id(0);
    ASSERT_TRUE(std::holds_alternative<AnonymousMessageId>(fid));
    EXPECT_EQ(std::get<AnonymousMessageId>(fid), (AnonymousMessageId{0, 0, 0}));
}

TEST(CanId, DecodeService)
{
    ASSERT_EQ(oracle::service_id(0, 1, 1, 2, 1), 0x00018281u);
    const auto fid = decode_can_id(0x00018281);
    ASSERT_TRUE(std::holds_alternative<ServiceId>(fid));
    EXPECT_EQ(std::get<ServiceId>(fid), (ServiceId{0, 1, true, 2, 1}));
}

TEST(CanId, DecodeRejectsWideIds)
{
    EXPECT_EQ(error_code_of([] { (void)decode_can_id(1U << 29); }), Errc::IdOutOfRange);
}

TEST(CanId, EncodeExamples)
{
    EXPECT_EQ(encode_can_id(MessageId{5, 1030, 1}), 0x05040601u);
    EXPECT_EQ(encode_can_id(AnonymousMessageId{0, 0, 0}), 0u);
    EXPECT_EQ(error_code_of([] { (void)encode_can_id(MessageId{0, 0, 0}); }), Errc::InvalidSource);
}

TEST(CanId, WidthEnforcementAtBoundaries)
{
    EXPECT_NO_THROW((void)encode_can_id(MessageId{31, 0xFFFF, 127}));
    EXPECT_EQ(error_code_of([] { (void)encode_can_id(MessageId{32, 1, 1}); }), Errc::FieldOverflow);
    EXPECT_EQ(error_code_of([] { (void)encode_can_id(MessageId{0, 1, 128}); }), Errc::FieldOverflow);

    EXPECT_NO_THROW((void)encode_can_id(AnonymousMessageId{31, 16383, 3}));
    EXPECT_EQ(error_code_of([] { (void)encode_can_id(AnonymousMessageId{0, 16384, 0}); }), Errc::FieldOverflow);
    EXPECT_EQ(error_code_of([] { (void)encode_can_id(AnonymousMessageId{0, 0, 4}); }), Errc::FieldOverflow);

    EXPECT_NO_THROW((void)encode_can_id(ServiceId{31, 255, true, 127, 127}));
    EXPECT_EQ(error_code_of([] { (void)encode_can_id(ServiceId{0, 1, false, 128, 1}); }), Errc::FieldOverflow);
    EXPECT_EQ(error_code_of([] { (void)encode_can_id(ServiceId{0, 1, false, 1, 128}); }), Errc::FieldOverflow);
}

TEST(CanIdProperty, EveryIdRoundTripsAndPartitions)
{
    std::mt19937_64 rng(0xC0FFEE);
    for (int i = 0; i < 200'000; ++i) {
        const auto id = static_cast<std::uint32_t>(rng() & 0x1FFF'FFFF);
        const FrameId fid = decode_can_id(id);
        ASSERT_EQ(encode_can_id(fid), id);
        const bool snm = (id >> 7) & 1U;
        const bool src0 = (id & 0x7F) == 0;
        ASSERT_EQ(fid.index(), snm ? 2u : (src0 ? 1u : 0u)) << std::hex << id;
    }
}

TEST(CanIdProperty, FieldValuesRoundTripAgainstOracle)
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20'000; ++i) {
        const auto prio = static_cast<std::uint8_t>(rng() % 32);
        const auto src = static_cast<std::uint8_t>(1 + rng() % 127);
        const MessageId m{prio, static_cast<std::uint16_t>(rng()), src};
        ASSERT_EQ(encode_can_id(m), oracle::message_id(m.priority, m.message_type_id, m.source_node_id));
        ASSERT_EQ(decode_can_id(encode_can_id(m)), FrameId{m});

        const AnonymousMessageId a{prio, static_cast<std::uint16_t>(rng() % 16384), static_cast<std::uint8_t>(rng() % 4)};
        ASSERT_EQ(encode_can_id(a), oracle::anonymous_id(a.priority, a.discriminator, a.message_type_low));
        ASSERT_EQ(decode_can_id(encode_can_id(a)), FrameId{a});

        const ServiceId s{prio, static_cast<std::uint8_t>(rng()), (rng() & 1) != 0,
                          static_cast<std::uint8_t>(rng() % 128), static_cast<std::uint8_t>(rng() % 128)};
        ASSERT_EQ(encode_can_id(s),
                  oracle::service_id(s.priority, s.service_type_id, s.request_not_response, s.destination_node_id,
                                     s.source_node_id));
        ASSERT_EQ(decode_can_id(encode_can_id(s)), FrameId{s});
    }
}

TEST(CanId, Describe)
{
    EXPECT_EQ(describe(decode_can_id(0x05040601)), "Message{prio=5 type=1030 src=1}");
    EXPECT_EQ(describe(decode_can_id(0x00018281)), "Service{prio=0 type=1 rnr=1 dst=2 src=1}");
}
