#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fermentor::data {

class DataError : public std::runtime_error {
  public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// One fermentation record: cellar temperature, humidity, starch content,
/// acidity, and the alcohol yield. The yield is optional so prediction
/// queries can be carried in the same shape.
struct Sample {
    double cellar_temp = 0;
    double humidity = 0;
    double starch = 0;
    double acidity = 0;
    std::optional<double> alcohol;
};

inline constexpr const char* kCsvHeader = "cellar_temp,humidity,starch,acidity,alcohol";

struct CsvResult {
    std::vector<Sample> samples;
    std::vector<std::string> warnings;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

inline double parse_double(const std::string& s, int line_no, const char* field) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
        if (used != s.size()) throw std::invalid_argument("trailing");
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite");
        return v;
    } catch (const std::exception&) {
        throw DataError("csv line " + std::to_string(line_no) + ": bad value for " + field +
                        ": '" + s + "'");
    }
}

}  // namespace detail

/// Reads the record schema. The header is required; the alcohol column may be
/// absent (prediction inputs) or empty per row. Percent fields outside
/// [0, 100] are accepted with a warning.
inline CsvResult read_csv(std::istream& in) {
    CsvResult result;
    std::string line;
    if (!std::getline(in, line)) throw DataError("csv: empty input");
    auto header = detail::split_csv_line(line);
    bool with_alcohol = header.size() == 5;
    if (header.size() < 4 || header.size() > 5 || header[0] != "cellar_temp" ||
        header[1] != "humidity" || header[2] != "starch" || header[3] != "acidity" ||
        (with_alcohol && header[4] != "alcohol"))
        throw DataError("csv: expected header '" + std::string(kCsvHeader) +
                        "' (alcohol column optional)");

    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = detail::split_csv_line(line);
        if (fields.size() != header.size())
            throw DataError("csv line " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
        Sample s;
        s.cellar_temp = detail::parse_double(fields[0], line_no, "cellar_temp");
        s.humidity = detail::parse_double(fields[1], line_no, "humidity");
        s.starch = detail::parse_double(fields[2], line_no, "starch");
        s.acidity = detail::parse_double(fields[3], line_no, "acidity");
        if (with_alcohol && !fields[4].empty())
            s.alcohol = detail::parse_double(fields[4], line_no, "alcohol");

        auto warn_range = [&](double v, const char* name) {
            if (v < 0.0 || v > 100.0)
                result.warnings.push_back("line " + std::to_string(line_no) + ": " + name + " = " +
                                          std::to_string(v) + " outside [0,100]");
        };
        warn_range(s.humidity, "humidity");
        warn_range(s.starch, "starch");
        warn_range(s.acidity, "acidity");
        if (s.alcohol) warn_range(*s.alcohol, "alcohol");
        result.samples.push_back(s);
    }
    return result;
}

inline void write_csv(std::ostream& out, const std::vector<Sample>& samples) {
    out << kCsvHeader << '\n';
    char buf[160];
    for (const auto& s : samples) {
        if (s.alcohol)
            std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%.10g,%.10g,%.10g", s.cellar_temp,
                          s.humidity, s.starch, s.acidity, *s.alcohol);
        else
            std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%.10g,%.10g,", s.cellar_temp, s.humidity,
                          s.starch, s.acidity);
        out << buf << '\n';
    }
}

/// n x 5 matrix of full records (throws if any yield is missing).
inline Eigen::MatrixXd to_matrix(const std::vector<Sample>& samples) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(samples.size()), 5);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (!s.alcohol) throw DataError("sample " + std::to_string(i) + " has no alcohol value");
        m.row(static_cast<Eigen::Index>(i)) << s.cellar_temp, s.humidity, s.starch, s.acidity,
            *s.alcohol;
    }
    return m;
}

inline Eigen::MatrixXd to_input_matrix(const std::vector<Sample>& samples) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(samples.size()), 4);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        m.row(static_cast<Eigen::Index>(i)) << s.cellar_temp, s.humidity, s.starch, s.acidity;
    }
    return m;
}

inline std::vector<Sample> from_matrix(const Eigen::MatrixXd& m) {
    if (m.cols() != 5) throw DataError("from_matrix: expected 5 columns");
    std::vector<Sample> out(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        out[static_cast<std::size_t>(i)] = {m(i, 0), m(i, 1), m(i, 2), m(i, 3), m(i, 4)};
    return out;
}

}  // namespace fermentor::data
