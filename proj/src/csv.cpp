#include "mixfit/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mixfit/errors.hpp"

namespace mixfit {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

double parse_double_field(std::string_view field, const std::string& context) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError(context + ": cannot parse '" + std::string(field) + "' as a number");
    return v;
}

long long parse_int_field(std::string_view field, const std::string& context) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError(context + ": cannot parse '" + std::string(field) + "' as an integer");
    return v;
}

std::ifstream open_for_read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    return out;
}

}  // namespace

DataFormat data_format_from_name(const std::string& name) {
    if (name == "raw") return DataFormat::RawCSV;
    if (name == "freq") return DataFormat::FreqTable;
    throw ParseError("unknown data format '" + name + "' (expected raw or freq)");
}

Dataset read_raw_csv(const std::string& path) {
    auto in = open_for_read(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    Eigen::Index cols = -1;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (cols < 0) cols = static_cast<Eigen::Index>(fields.size());
        if (static_cast<Eigen::Index>(fields.size()) != cols)
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(cols) + " columns");
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields)
            row.push_back(parse_double_field(f, path + ":" + std::to_string(lineno)));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(path + ": no observations");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), cols);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return Dataset::from_matrix(std::move(m));
}

Dataset read_freq_table(const std::string& path) {
    auto in = open_for_read(path);
    std::vector<std::pair<long long, long long>> pairs;
    std::string line;
    std::size_t lineno = 0;
    long long prev_value = -1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        const std::string context = path + ":" + std::to_string(lineno);
        if (fields.size() != 2) throw ParseError(context + ": expected `value,count`");
        const long long value = parse_int_field(fields[0], context);
        const long long freq = parse_int_field(fields[1], context);
        if (value < 0 || freq < 0)
            throw ParseError(context + ": value and count must be non-negative");
        if (value <= prev_value) throw ParseError(context + ": values must be strictly increasing");
        prev_value = value;
        pairs.emplace_back(value, freq);
    }
    if (pairs.empty()) throw ParseError(path + ": no rows");
    Dataset d = Dataset::from_value_counts(pairs);
    if (d.empty()) throw ParseError(path + ": every count is zero");
    return d;
}

Dataset read_data_file(const std::string& path, DataFormat format) {
    return format == DataFormat::RawCSV ? read_raw_csv(path) : read_freq_table(path);
}

void write_raw_csv(const std::string& path, const Eigen::MatrixXd& points) {
    auto out = open_for_write(path);
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        for (Eigen::Index j = 0; j < points.cols(); ++j) {
            if (j > 0) out << ',';
            out << format_double(points(i, j));
        }
        out << '\n';
    }
}

void write_freq_table(const std::string& path,
                      const std::vector<std::pair<long long, long long>>& rows) {
    auto out = open_for_write(path);
    for (const auto& [value, freq] : rows) out << value << ',' << freq << '\n';
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace mixfit
