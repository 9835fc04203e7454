#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace prop {

// Minimal CSV writing/reading with a header row and 17-significant-digit
// floating-point formatting.
std::string format_double(double x);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const;  // -1 when absent
    Eigen::VectorXd col(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& mat);

}  // namespace prop
