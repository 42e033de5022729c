#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "marketcast/market_data.hpp"
#include "marketcast/rng.hpp"

using namespace marketcast;

namespace {

std::filesystem::path write_temp_csv(const std::string& name, const std::string& content) {
    const std::filesystem::path path = std::filesystem::temp_directory_path() / name;
    std::ofstream file(path);
    file << content;
    return path;
}

PriceSeries daily_series(const std::string& id, Date start, const std::vector<double>& closes) {
    std::vector<Date> dates;
    Date d = start;
    for (std::size_t i = 0; i < closes.size(); ++i) {
        dates.push_back(d);
        d = next_day(d);
    }
    return PriceSeries(id, std::move(dates), closes);
}

}  // namespace

TEST_CASE("ingest reads a plain three-row csv") {
    const auto path = write_temp_csv("mc_ingest_plain.csv",
                                     "Date,Open,High,Low,Close,Adj Close,Volume\n"
                                     "2020-01-02,1,1,1,100.5,100.5,10\n"
                                     "2020-01-03,1,1,1,101.25,101.25,10\n"
                                     "2020-01-06,1,1,1,99.75,99.75,10\n");
    const IngestResult result = ingest_csv(path, "TEST");
    CHECK(result.series.size() == 3);
    CHECK(result.dropped_rows == 0);
    CHECK(result.series.closes()[0] == doctest::Approx(100.5));
    CHECK(result.series.closes()[2] == doctest::Approx(99.75));
    CHECK(result.series.dates()[1] == Date{2020, 1, 3});
}

TEST_CASE("ingest drops a row with an empty close and counts it") {
    const auto path = write_temp_csv("mc_ingest_gap.csv",
                                     "Date,Close\n"
                                     "2020-01-02,100\n"
                                     "2020-01-03,\n"
                                     "2020-01-06,99\n");
    const IngestResult result = ingest_csv(path, "TEST");
    CHECK(result.series.size() == 2);
    CHECK(result.dropped_rows == 1);
}

TEST_CASE("ingest rejects duplicate dates") {
    const auto path = write_temp_csv("mc_ingest_dup.csv",
                                     "Date,Close\n"
                                     "2020-03-10,10\n"
                                     "2020-03-11,11\n"
                                     "2020-03-11,12\n");
    CHECK_THROWS_AS(ingest_csv(path, "TEST"), std::runtime_error);
}

TEST_CASE("ingest errors: missing file, malformed header, too few rows") {
    CHECK_THROWS_AS(ingest_csv("/nonexistent/file.csv", "x"), std::runtime_error);
    const auto bad_header = write_temp_csv("mc_ingest_hdr.csv", "Time,Price\n2020-01-01,5\n");
    CHECK_THROWS_AS(ingest_csv(bad_header, "x"), std::runtime_error);
    const auto short_file = write_temp_csv("mc_ingest_short.csv", "Date,Close\n2020-01-01,5\n");
    CHECK_THROWS_AS(ingest_csv(short_file, "x"), std::runtime_error);
}

TEST_CASE("ingest falls back to Adj Close and honors the preference flag") {
    const auto path = write_temp_csv("mc_ingest_adj.csv",
                                     "Date,Adj Close\n"
                                     "2020-01-02,50\n"
                                     "2020-01-03,51\n");
    CHECK(ingest_csv(path, "x").series.closes()[0] == doctest::Approx(50));

    const auto both = write_temp_csv("mc_ingest_both.csv",
                                     "Date,Close,Adj Close\n"
                                     "2020-01-02,10,9\n"
                                     "2020-01-03,11,10\n");
    CHECK(ingest_csv(both, "x").series.closes()[0] == doctest::Approx(10));
    IngestOptions prefer_adj;
    prefer_adj.use_adj_close = true;
    CHECK(ingest_csv(both, "x", prefer_adj).series.closes()[0] == doctest::Approx(9));
}

TEST_CASE("ingest sorts rows by date") {
    const auto path = write_temp_csv("mc_ingest_sort.csv",
                                     "Date,Close\n"
                                     "2020-01-06,99\n"
                                     "2020-01-02,100\n");
    const IngestResult result = ingest_csv(path, "TEST");
    CHECK(result.series.dates()[0] == Date{2020, 1, 2});
}

TEST_CASE("price series invariants are enforced") {
    CHECK_THROWS(PriceSeries("x", {Date{2020, 1, 2}, Date{2020, 1, 2}}, {1.0, 2.0}));
    CHECK_THROWS(PriceSeries("x", {Date{2020, 1, 2}, Date{2020, 1, 3}}, {1.0, -2.0}));
    CHECK_THROWS(PriceSeries("x", {Date{2020, 1, 2}}, {1.0}));
}

TEST_CASE("slice_period keeps exactly the in-range observations") {
    PriceSeries series = daily_series("x", Date{2019, 12, 28}, {1, 2, 3, 4, 5, 6, 7, 8});
    const PeriodSpec period{"jan", Date{2020, 1, 1}, Date{2020, 1, 3}};
    const PriceSeries slice = slice_period(series, period);
    CHECK(slice.size() == 3);
    CHECK(slice.front_date() == Date{2020, 1, 1});
    CHECK(slice.back_date() == Date{2020, 1, 3});

    SUBCASE("full-range slice is the identity") {
        const PeriodSpec all{"all", Date{2019, 1, 1}, Date{2021, 1, 1}};
        const PriceSeries whole = slice_period(series, all);
        CHECK(whole.size() == series.size());
        CHECK(whole.closes() == series.closes());
    }
    SUBCASE("slice is idempotent") {
        const PriceSeries twice = slice_period(slice, period);
        CHECK(twice.dates() == slice.dates());
        CHECK(twice.closes() == slice.closes());
    }
    SUBCASE("out-of-range slice errors") {
        const PeriodSpec outside{"none", Date{1999, 1, 1}, Date{1999, 12, 31}};
        CHECK_THROWS_AS(slice_period(series, outside), std::invalid_argument);
    }
}

TEST_CASE("split_train_test obeys the rounding rule") {
    SUBCASE("n=100 ratio=0.8") {
        PriceSeries series = daily_series("x", Date{2020, 1, 1}, std::vector<double>(100, 5.0));
        const TrainTestSplit split = split_train_test(series, 0.8);
        CHECK(split.train.size() == 80);
        CHECK(split.test.size() == 20);
    }
    SUBCASE("n=101 rounds half up") {
        PriceSeries series = daily_series("x", Date{2020, 1, 1}, std::vector<double>(101, 5.0));
        const TrainTestSplit split = split_train_test(series, 0.8);
        CHECK(split.train.size() == 81);
        CHECK(split.test.size() == 20);
    }
    SUBCASE("degenerate split errors") {
        PriceSeries series = daily_series("x", Date{2020, 1, 1}, {1, 2, 3});
        CHECK_THROWS_AS(split_train_test(series, 0.5), std::invalid_argument);
    }
}

TEST_CASE("split concatenation reproduces the source series") {
    Rng rng(7);
    std::vector<double> closes;
    for (int i = 0; i < 57; ++i) closes.push_back(100.0 + rng.uniform());
    PriceSeries series = daily_series("x", Date{2020, 1, 1}, closes);
    for (double ratio : {0.5, 0.8, 0.9}) {
        const TrainTestSplit split = split_train_test(series, ratio);
        std::vector<double> glued = split.train.closes();
        glued.insert(glued.end(), split.test.closes().begin(), split.test.closes().end());
        CHECK(glued == series.closes());
        CHECK(split.train.back_date() < split.test.front_date());
    }
}

TEST_CASE("align_series inner-joins calendars") {
    // weekday calendar vs all-days calendar
    std::vector<Date> weekdays, all_days;
    Date d{2020, 1, 1};
    while (weekdays.size() < 10) {
        all_days.push_back(d);
        if (!d.is_weekend()) weekdays.push_back(d);
        d = next_day(d);
    }
    while (all_days.size() < 14) {
        all_days.push_back(d);
        d = next_day(d);
    }
    PriceSeries equity("EQ", weekdays, std::vector<double>(weekdays.size(), 10.0));
    PriceSeries crypto("CR", all_days, std::vector<double>(all_days.size(), 20.0));

    std::vector<PriceSeries> inputs{equity, crypto};
    const auto aligned = align_series(inputs);
    REQUIRE(aligned.size() == 2);
    CHECK(aligned[0].dates() == aligned[1].dates());
    CHECK(aligned[0].size() == weekdays.size());
    for (const Date& day : aligned[1].dates()) CHECK_FALSE(day.is_weekend());

    SUBCASE("identical series pass through") {
        std::vector<PriceSeries> same{equity, equity};
        const auto out = align_series(same);
        CHECK(out[0].dates() == equity.dates());
        CHECK(out[1].closes() == equity.closes());
    }
    SUBCASE("aligned lengths never exceed the shortest input") {
        CHECK(aligned[0].size() <= std::min(equity.size(), crypto.size()));
    }
    SUBCASE("disjoint ranges error") {
        PriceSeries later = daily_series("LT", Date{2021, 1, 1}, {1, 2, 3});
        std::vector<PriceSeries> disjoint{equity, later};
        CHECK_THROWS_AS(align_series(disjoint), std::invalid_argument);
    }
}

TEST_CASE("standard periods cover the benchmark windows") {
    const auto periods = standard_periods();
    REQUIRE(periods.size() == 5);
    CHECK(periods[0].label == "full");
    CHECK(period_by_label("2020").start == Date{2020, 1, 1});
    CHECK_THROWS_AS(period_by_label("1999"), std::invalid_argument);
}

TEST_CASE("date parsing and validation") {
    CHECK(Date::parse("2020-02-29") == Date{2020, 2, 29});
    CHECK_THROWS_AS(Date::parse("2021-02-29"), std::invalid_argument);
    CHECK_THROWS_AS(Date::parse("2020/01/01"), std::invalid_argument);
    CHECK(Date{2020, 3, 12}.weekday() == 4);  // Thursday
    CHECK(Date::from_serial(Date{2021, 9, 20}.serial()) == Date{2021, 9, 20});
    CHECK(Date{2021, 9, 20}.weekday() == 1);  // Monday
}
