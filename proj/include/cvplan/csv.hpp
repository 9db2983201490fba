#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cvplan/errors.hpp"

namespace cvplan {

// Numeric CSV table: RFC-4180 subset (header row required, comma separated,
// decimal point, no locale handling).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    int rows() const {
        return columns.empty() ? 0 : static_cast<int>(columns.front().size());
    }
    int column_index(const std::string& name) const;
    const std::vector<double>& column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);

// Response vector plus the remaining columns as a design matrix with a
// leading intercept column.
struct DesignData {
    Eigen::MatrixXd x;  // [1, other columns...]
    Eigen::VectorXd y;
    std::vector<std::string> predictor_names;  // matches x columns 1..p-1
};

DesignData split_design(const CsvTable& table, const std::string& response);

}  // namespace cvplan
