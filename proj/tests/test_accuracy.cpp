#include <doctest.h>

#include "regime/accuracy.hpp"
#include "regime/measures.hpp"

using namespace regime;

namespace {

RegimeSchedule make_schedule(long total, std::vector<std::pair<long, long>> intervals) {
    RegimeSchedule s;
    s.total_steps = total;
    s.intervals = std::move(intervals);
    s.validate();
    return s;
}

}  // namespace

TEST_CASE("membership vectors count covering windows per label") {
    // Two overlapping windows of length 4 with stride 2 over 6 returns.
    std::vector<IndexRange> windows = {{0, 4}, {2, 6}};
    std::vector<int> labels = {0, 1};
    auto counts = membership_vectors(windows, labels, 6, 2);
    REQUIRE(counts.size() == 6);
    CHECK(counts[0] == std::vector<int>{1, 0});
    CHECK(counts[1] == std::vector<int>{1, 0});
    CHECK(counts[2] == std::vector<int>{1, 1});
    CHECK(counts[3] == std::vector<int>{1, 1});
    CHECK(counts[4] == std::vector<int>{0, 1});
    CHECK(counts[5] == std::vector<int>{0, 1});
}

TEST_CASE("membership vectors leave trailing returns uncovered") {
    std::vector<IndexRange> windows = {{0, 3}};
    auto counts = membership_vectors(windows, {1}, 5, 2);
    CHECK(counts[3] == std::vector<int>{0, 0});
    CHECK(counts[4] == std::vector<int>{0, 0});
}

TEST_CASE("membership vectors validate input") {
    std::vector<IndexRange> windows = {{0, 3}};
    CHECK_THROWS_AS(membership_vectors(windows, {0, 1}, 5, 2), InvalidInput);
    CHECK_THROWS_AS(membership_vectors(windows, {2}, 5, 2), InvalidInput);
    CHECK_THROWS_AS(membership_vectors(windows, {-1}, 5, 2), InvalidInput);
}

TEST_CASE("accuracy scores on a hand-checked example") {
    // Returns 0-3 regime-off, 4-7 regime-on.
    auto sched = make_schedule(8, {{4, 4}});
    // Coverage counts: label 0 = standard, label 1 = regime change.
    std::vector<std::vector<int>> m = {
        {2, 0},  // off, fully correct (2 of 2)
        {1, 1},  // off, half correct
        {2, 0},  // off, correct
        {0, 0},  // uncovered
        {0, 2},  // on, correct
        {1, 1},  // on, half correct
        {2, 0},  // on, fully wrong
        {0, 2},  // on, correct
    };
    auto rep = accuracy_scores(m, sched);
    CHECK(rep.uncovered_returns == 1);
    // Off: correct 2 + 1 + 2 = 5 of 6.
    CHECK(rep.regime_off == doctest::Approx(5.0 / 6.0));
    // On: correct 2 + 1 + 0 + 2 = 5 of 8.
    CHECK(rep.regime_on == doctest::Approx(5.0 / 8.0));
    CHECK(rep.total == doctest::Approx(10.0 / 14.0));
}

TEST_CASE("perfect and inverted clusterings bracket the scores") {
    auto sched = make_schedule(6, {{3, 3}});
    std::vector<std::vector<int>> perfect = {{1, 0}, {1, 0}, {1, 0},
                                             {0, 1}, {0, 1}, {0, 1}};
    auto p = accuracy_scores(perfect, sched);
    CHECK(p.total == doctest::Approx(1.0));
    CHECK(p.regime_on == doctest::Approx(1.0));
    CHECK(p.regime_off == doctest::Approx(1.0));

    std::vector<std::vector<int>> inverted = {{0, 1}, {0, 1}, {0, 1},
                                              {1, 0}, {1, 0}, {1, 0}};
    auto q = accuracy_scores(inverted, sched);
    CHECK(q.total == doctest::Approx(0.0));
    CHECK(q.regime_on == doctest::Approx(0.0));
    CHECK(q.regime_off == doctest::Approx(0.0));
}

TEST_CASE("scores are count-weighted, not return-averaged") {
    auto sched = make_schedule(4, std::vector<std::pair<long, long>>{});
    // One heavily covered wrong return outweighs several lightly covered ones.
    std::vector<std::vector<int>> m = {{1, 0}, {1, 0}, {1, 0}, {0, 10}};
    auto rep = accuracy_scores(m, sched);
    CHECK(rep.regime_off == doctest::Approx(3.0 / 13.0));
    CHECK(rep.total == doctest::Approx(3.0 / 13.0));
    CHECK(rep.regime_on == doctest::Approx(0.0));
}

TEST_CASE("accuracy_scores rejects all-uncovered input") {
    auto sched = make_schedule(3, std::vector<std::pair<long, long>>{});
    std::vector<std::vector<int>> m = {{0, 0}, {0, 0}, {0, 0}};
    CHECK_THROWS_AS(accuracy_scores(m, sched), InvalidInput);
}

TEST_CASE("colouring series normalizes memberships") {
    std::vector<std::vector<int>> m = {{2, 2}, {3, 1}, {0, 0}};
    auto col = colouring_series(m);
    CHECK(col[0] == std::vector<double>{0.5, 0.5});
    CHECK(col[1] == std::vector<double>{0.75, 0.25});
    CHECK(col[2] == std::vector<double>{0.0, 0.0});
}

TEST_CASE("membership vectors compose with lift window geometry") {
    WindowConfig w{6, 4};  // stride 2
    ReturnStream returns(14, 0.0);
    auto windows = lift(returns, w);
    // Starts 0,2,4,6,8; window [8,14) is the last full one.
    REQUIRE(windows.size() == 5);
    std::vector<int> labels(windows.size(), 0);
    auto counts = membership_vectors(windows, labels, returns.size(), 2);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        std::size_t cover = static_cast<std::size_t>(counts[i][0]);
        CHECK(cover <= w.max_multiplicity());
        CHECK(cover >= 1);  // every return here is covered
    }
    CHECK(counts[0][0] == 1);
    CHECK(counts[5][0] == 3);  // covered by windows starting at 0, 2, 4
}
