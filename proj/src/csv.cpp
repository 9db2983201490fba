#include "cvplan/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace cvplan {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (char ch : line) {
        if (ch == '"') {
            quoted = !quoted;
        } else if (ch == ',' && !quoted) {
            fields.push_back(field);
            field.clear();
        } else if (ch != '\r') {
            field += ch;
        }
    }
    fields.push_back(field);
    return fields;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& field, int row, const std::string& col) {
    const std::string t = trim(field);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw InvalidConfig("csv: non-numeric value '" + t + "' in column " + col +
                            " row " + std::to_string(row));
    return value;
}

}  // namespace

int CsvTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    throw InvalidConfig("csv: no column named '" + name + "'");
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
    return columns[static_cast<std::size_t>(column_index(name))];
}

CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw InvalidConfig("csv: empty input");
    for (const std::string& name : split_line(line))
        table.header.push_back(trim(name));
    table.columns.resize(table.header.size());
    int row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        const auto fields = split_line(line);
        if (fields.size() != table.header.size())
            throw InvalidConfig("csv: row " + std::to_string(row) + " has " +
                                std::to_string(fields.size()) + " fields, expected " +
                                std::to_string(table.header.size()));
        for (std::size_t i = 0; i < fields.size(); ++i)
            table.columns[i].push_back(parse_number(fields[i], row, table.header[i]));
    }
    if (row == 0) throw InvalidConfig("csv: no data rows");
    return table;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidConfig("csv: cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_csv(buffer.str());
}

DesignData split_design(const CsvTable& table, const std::string& response) {
    const int y_col = table.column_index(response);
    const int n = table.rows();
    const int p = static_cast<int>(table.header.size());  // includes response
    if (p < 2) throw InvalidConfig("csv: need at least one predictor column");

    DesignData data;
    data.y.resize(n);
    for (int i = 0; i < n; ++i)
        data.y(i) = table.columns[static_cast<std::size_t>(y_col)][static_cast<std::size_t>(i)];
    data.x.resize(n, p);  // intercept + (p-1) predictors
    data.x.col(0).setOnes();
    int out = 1;
    for (int c = 0; c < p; ++c) {
        if (c == y_col) continue;
        for (int i = 0; i < n; ++i)
            data.x(i, out) = table.columns[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)];
        data.predictor_names.push_back(table.header[static_cast<std::size_t>(c)]);
        ++out;
    }
    return data;
}

}  // namespace cvplan
