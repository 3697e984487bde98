#include <gtest/gtest.h>

#include <cmath>

#include "dronecan/analysis.hpp"
#include "dronecan/error.hpp"

using namespace dronecan;

namespace {

DatasetRecord rec(Label label, std::int64_t us, std::uint32_t id = kRawCommandCanId)
{
    return {label, make_frame(id, {}, Micros{us}), "can0"};
}

const ScenarioRun& scenario_one()
{
    static const ScenarioRun run = [] {
        auto spec = builtin_scenario(1);
        return run_scenario(spec, TrafficProfile::default_profile(), 7);
    }();
    return run;
}

}  // namespace

TEST(Summary, SingleRecordHasZeroStats)
{
    const std::vector<DatasetRecord> rs{rec(Label::Attack, 5)};
    const auto s = summarize(rs);
    EXPECT_EQ(s.total_time, Micros{0});
    EXPECT_EQ(s.attack_frames, 1u);
    EXPECT_EQ(s.overall.samples, 0u);
    EXPECT_EQ(s.overall.mean, 0.0);
    EXPECT_EQ(s.overall.stddev, 0.0);
}

TEST(Summary, EmptyThrows)
{
    try {
        (void)summarize({});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::EmptyDataset);
    }
}

TEST(Summary, HandComputedStats)
{
    const std::vector<DatasetRecord> rs{rec(Label::Normal, 0), rec(Label::Attack, 1'000'000, 0x10),
                                        rec(Label::Normal, 3'000'000), rec(Label::Normal, 6'000'000, 0x10)};
    const auto s = summarize(rs);
    EXPECT_EQ(s.total_time, Micros{6'000'000});
    EXPECT_EQ(s.normal_frames, 3u);
    EXPECT_EQ(s.attack_frames, 1u);
    EXPECT_EQ(s.per_id_counts.at(0x10), 2u);
    EXPECT_EQ(s.per_id_counts.at(kRawCommandCanId), 2u);
    // gaps 1, 2, 3
    EXPECT_EQ(s.overall.samples, 3u);
    EXPECT_DOUBLE_EQ(s.overall.mean, 2.0);
    EXPECT_DOUBLE_EQ(s.overall.min, 1.0);
    EXPECT_DOUBLE_EQ(s.overall.max, 3.0);
    EXPECT_NEAR(s.overall.stddev, std::sqrt(2.0 / 3.0), 1e-12);
    // normal gaps 3, 3
    EXPECT_EQ(s.normal.samples, 2u);
    EXPECT_DOUBLE_EQ(s.normal.mean, 3.0);
    EXPECT_DOUBLE_EQ(s.normal.stddev, 0.0);
    EXPECT_EQ(s.attack.samples, 0u);
    const auto kv = format_summary_kv(s);
    EXPECT_NE(kv.find("normal_frames=3\n"), std::string::npos);
    EXPECT_NE(kv.find("attack_frames=1\n"), std::string::npos);
    EXPECT_NE(kv.find("id.00000010=2\n"), std::string::npos);
}

TEST(Detector, FlagsFloodingWindowsOfScenarioOne)
{
    const auto& run = scenario_one();
    const auto alarms = detect_frequency(run.records);
    const std::vector<AlarmWindow> expected{{Micros{50'000'000}, Micros{80'000'000}},
                                            {Micros{90'000'000}, Micros{120'000'000}},
                                            {Micros{130'000'000}, Micros{160'000'000}}};
    EXPECT_EQ(alarms, expected);
    const auto score = evaluate_detection(run.records, alarms);
    EXPECT_GE(score.precision, 0.95);
    EXPECT_GE(score.recall, 0.95);
}

TEST(Detector, QuietOnBenignTraffic)
{
    auto spec = builtin_scenario(1);
    spec.attacks.clear();
    const auto run = run_scenario(spec, TrafficProfile::default_profile(), 1);
    EXPECT_TRUE(detect_frequency(run.records).empty());
    EXPECT_TRUE(detect_frequency({}).empty());
}

TEST(Detector, DefaultThresholdIsTwiceNormalRate)
{
    EXPECT_DOUBLE_EQ(default_detection_threshold(TrafficProfile::default_profile()), 400.0);
    EXPECT_DOUBLE_EQ(DetectorConfig{}.threshold, 400.0);
}

TEST(Detector, RejectsBadConfig)
{
    DetectorConfig c;
    c.window = Micros{0};
    EXPECT_THROW((void)detect_frequency({}, c), Error);
    c = {};
    c.threshold = 0;
    EXPECT_THROW((void)detect_frequency({}, c), Error);
}

TEST(Detector, HigherThresholdNeverAddsAlarmTime)
{
    const auto& run = scenario_one();
    auto covered = [](const std::vector<AlarmWindow>& ws) {
        Micros total{0};
        for (const auto& w : ws) {
            total += w.end - w.start;
        }
        return total;
    };
    Micros previous = Micros::max();
    for (double th : {100.0, 200.0, 300.0, 400.0, 1000.0, 3000.0, 10000.0}) {
        DetectorConfig c;
        c.threshold = th;
        const auto cov = covered(detect_frequency(run.records, c));
        EXPECT_LE(cov, previous) << th;
        previous = cov;
    }
    EXPECT_EQ(previous, Micros{0});
}

TEST(Detector, WindowBoundaryIsStrictlyAboveThreshold)
{
    std::vector<DatasetRecord> rs;
    for (int i = 0; i < 10; ++i) {
        rs.push_back(rec(Label::Attack, i * 100'000));
    }
    DetectorConfig c;
    c.threshold = 10.0;
    EXPECT_TRUE(detect_frequency(rs, c).empty());
    c.threshold = 9.0;
    const auto a = detect_frequency(rs, c);
    ASSERT_EQ(a.size(), 1u);
    EXPECT_EQ(a[0], (AlarmWindow{Micros{0}, Micros{1'000'000}}));
}

TEST(Evaluation, ExactWindowsArePerfect)
{
    std::vector<DatasetRecord> rs;
    for (int i = 0; i < 100; ++i) {
        rs.push_back(rec(i >= 40 && i < 60 ? Label::Attack : Label::Normal, i * 10'000));
    }
    const std::vector<AlarmWindow> exact{{Micros{400'000}, Micros{600'000}}};
    const auto s = evaluate_detection(rs, exact);
    EXPECT_EQ(s.precision, 1.0);
    EXPECT_EQ(s.recall, 1.0);
    EXPECT_EQ(s.true_positives, 20u);
    EXPECT_EQ(s.true_negatives, 80u);

    const auto none = evaluate_detection(rs, {});
    EXPECT_EQ(none.precision, 1.0);
    EXPECT_EQ(none.recall, 0.0);
    EXPECT_EQ(none.false_negatives, 20u);

    const std::vector<AlarmWindow> all{{Micros{0}, Micros{1'000'000}}};
    const auto everything = evaluate_detection(rs, all);
    EXPECT_EQ(everything.recall, 1.0);
    EXPECT_DOUBLE_EQ(everything.precision, 0.2);
}

TEST(Evaluation, UnsortedOverlappingAlarms)
{
    std::vector<DatasetRecord> rs;
    for (int i = 0; i < 10; ++i) {
        rs.push_back(rec(Label::Attack, i * 1'000));
    }
    const std::vector<AlarmWindow> alarms{{Micros{5'000}, Micros{8'000}}, {Micros{0}, Micros{2'000}},
                                          {Micros{1'000}, Micros{6'000}}};
    const auto s = evaluate_detection(rs, alarms);
    EXPECT_EQ(s.true_positives, 8u);
    EXPECT_EQ(s.false_negatives, 2u);
}
