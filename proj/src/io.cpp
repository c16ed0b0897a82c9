#include "regime/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace regime {

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

PriceStream read_price_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open CSV: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw InvalidInput("empty CSV: " + path.string());
    // Tolerate a UTF-8 BOM and trailing CR.
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "timestamp,price")
        throw InvalidInput("CSV header must be 'timestamp,price', got: " + line);

    PriceStream stream;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw InvalidInput("CSV row " + std::to_string(row) + ": missing comma");
        stream.timestamps.push_back(line.substr(0, comma));
        try {
            stream.prices.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw InvalidInput("CSV row " + std::to_string(row) + ": bad price");
        }
    }
    stream.validate();
    return stream;
}

void write_price_csv(const std::filesystem::path& path, const PriceStream& stream) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write CSV: " + path.string());
    out << "timestamp,price\n";
    for (std::size_t i = 0; i < stream.prices.size(); ++i)
        out << stream.timestamps[i] << ',' << fmt17(stream.prices[i]) << '\n';
}

PriceStream to_price_stream(const PathRecord& record) {
    PriceStream s;
    s.prices = record.prices;
    s.timestamps.reserve(record.prices.size());
    for (std::size_t i = 0; i < record.prices.size(); ++i)
        s.timestamps.push_back(std::to_string(i));
    return s;
}

nlohmann::json to_json(const RegimeSchedule& schedule) {
    nlohmann::json intervals = nlohmann::json::array();
    for (const auto& [s, l] : schedule.intervals)
        intervals.push_back({{"start", s}, {"length", l}});
    return {{"total_steps", schedule.total_steps}, {"intervals", intervals}};
}

RegimeSchedule schedule_from_json(const nlohmann::json& j) {
    RegimeSchedule s;
    s.total_steps = j.at("total_steps").get<long>();
    for (const auto& iv : j.at("intervals"))
        s.intervals.emplace_back(iv.at("start").get<long>(), iv.at("length").get<long>());
    s.validate();
    return s;
}

nlohmann::json to_json(const GaussianHmm& hmm) {
    return {{"k", hmm.k},
            {"initial", hmm.initial},
            {"transition", hmm.transition},
            {"mean", hmm.mean},
            {"variance", hmm.variance}};
}

namespace {

template <class Point>
nlohmann::json result_common(const KMeansResult<Point>& res) {
    return {{"assignments", res.assignments},
            {"loss_trace", res.loss_trace},
            {"total_variation_trace", res.tcv_trace},
            {"iterations", res.iterations},
            {"converged", res.converged}};
}

}  // namespace

nlohmann::json to_json(const KMeansResult<EmpiricalMeasure>& res) {
    nlohmann::json j = result_common(res);
    nlohmann::json centroids = nlohmann::json::array();
    for (const auto& c : res.centroids) centroids.push_back(c.atoms);
    j["centroids"] = centroids;
    j["centroid_type"] = "measure_atoms";
    return j;
}

nlohmann::json to_json(const KMeansResult<std::vector<double>>& res) {
    nlohmann::json j = result_common(res);
    j["centroids"] = res.centroids;
    j["centroid_type"] = "moment_vector";
    return j;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write JSON: " + path.string());
    out << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open JSON: " + path.string());
    return nlohmann::json::parse(in);
}

void write_value_csv(const std::filesystem::path& path, const std::string& header,
                     const std::vector<double>& values) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write CSV: " + path.string());
    out << header << '\n';
    for (double v : values) out << fmt17(v) << '\n';
}

}  // namespace regime
