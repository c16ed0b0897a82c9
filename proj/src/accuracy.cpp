#include "regime/accuracy.hpp"

namespace regime {

std::vector<std::vector<int>> membership_vectors(const std::vector<IndexRange>& windows,
                                                 const std::vector<int>& assignments,
                                                 std::size_t n_returns, int k) {
    if (windows.size() != assignments.size())
        throw InvalidInput("membership_vectors: window/assignment length mismatch");
    std::vector<std::vector<int>> counts(n_returns,
                                         std::vector<int>(static_cast<std::size_t>(k), 0));
    for (std::size_t w = 0; w < windows.size(); ++w) {
        const int label = assignments[w];
        if (label < 0 || label >= k) throw InvalidInput("membership_vectors: label out of range");
        for (std::size_t i = windows[w].begin; i < windows[w].end && i < n_returns; ++i)
            ++counts[i][static_cast<std::size_t>(label)];
    }
    return counts;
}

AccuracyReport accuracy_scores(const std::vector<std::vector<int>>& memberships,
                               const RegimeSchedule& schedule) {
    AccuracyReport rep;
    long off_correct = 0, off_total = 0;
    long on_correct = 0, on_total = 0;
    for (std::size_t i = 0; i < memberships.size(); ++i) {
        const auto& row = memberships[i];
        long cover = 0;
        for (int c : row) cover += c;
        if (cover == 0) {
            ++rep.uncovered_returns;
            continue;
        }
        if (schedule.on(static_cast<long>(i))) {
            on_total += cover;
            on_correct += row.size() > 1 ? row[1] : 0;
        } else {
            off_total += cover;
            off_correct += row[0];
        }
    }
    if (on_total + off_total == 0) throw InvalidInput("accuracy_scores: no covered returns");
    rep.regime_off = off_total > 0 ? static_cast<double>(off_correct) / off_total : 0.0;
    rep.regime_on = on_total > 0 ? static_cast<double>(on_correct) / on_total : 0.0;
    rep.total = static_cast<double>(off_correct + on_correct) /
                static_cast<double>(off_total + on_total);
    return rep;
}

std::vector<std::vector<double>> colouring_series(
    const std::vector<std::vector<int>>& memberships) {
    std::vector<std::vector<double>> out(memberships.size());
    for (std::size_t i = 0; i < memberships.size(); ++i) {
        long cover = 0;
        for (int c : memberships[i]) cover += c;
        out[i].assign(memberships[i].size(), 0.0);
        if (cover == 0) continue;
        for (std::size_t l = 0; l < memberships[i].size(); ++l)
            out[i][l] = static_cast<double>(memberships[i][l]) / static_cast<double>(cover);
    }
    return out;
}

}  // namespace regime
