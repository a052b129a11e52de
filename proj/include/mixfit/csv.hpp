#pragma once

#include <string>
#include <vector>

#include "mixfit/dataset.hpp"

namespace mixfit {

enum class DataFormat { RawCSV, FreqTable };

DataFormat data_format_from_name(const std::string& name);

/// RawCSV: no header, one observation per line, comma-separated decimal
/// coordinates; every row must have the same column count.
Dataset read_raw_csv(const std::string& path);

/// FreqTable: two comma-separated non-negative integer columns `value,count`,
/// no header, values strictly increasing. Zero-count rows are legal in the
/// file and dropped from the dataset.
Dataset read_freq_table(const std::string& path);

Dataset read_data_file(const std::string& path, DataFormat format);

void write_raw_csv(const std::string& path, const Eigen::MatrixXd& points);
void write_freq_table(const std::string& path,
                      const std::vector<std::pair<long long, long long>>& rows);

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);

}  // namespace mixfit
