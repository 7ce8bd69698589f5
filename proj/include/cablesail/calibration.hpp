#pragma once

// Polynomial torque -> tip-deflection maps fitted from open-loop test data.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cablesail/error.hpp"
#include "cablesail/polynomial.hpp"

namespace cablesail {

inline constexpr int kMaxMapDegree = 3;
inline constexpr double kParsimonyThreshold = 0.05;

struct MeasurementSet {
    std::string torque_unit = "Nm";
    std::string deflection_unit = "mm";
    std::string source;
    std::vector<double> torque;
    std::vector<double> deflection;

    std::size_t size() const { return torque.size(); }

    std::size_t distinct_torques() const {
        std::vector<double> t = torque;
        std::sort(t.begin(), t.end());
        return static_cast<std::size_t>(std::unique(t.begin(), t.end()) - t.begin());
    }

    void validate() const {
        if (torque.size() != deflection.size()) throw InvalidArgument("torque and deflection columns differ in length");
        for (std::size_t i = 0; i < torque.size(); ++i)
            if (!std::isfinite(torque[i]) || !std::isfinite(deflection[i]))
                throw InvalidArgument("measurement row " + std::to_string(i + 1) + " is not finite");
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline std::string column_unit(const std::string& name, const std::string& prefix, int line) {
    if (name.rfind(prefix, 0) != 0 || name.size() == prefix.size())
        throw InvalidArgument("line " + std::to_string(line) + ": expected column '" + prefix + "<unit>', got '" + name +
                              "'");
    return name.substr(prefix.size());
}

inline double parse_cell(const std::string& cell, int line, const char* column) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(cell, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != cell.size() || !std::isfinite(v))
        throw InvalidArgument("line " + std::to_string(line) + ": " + column + " value '" + cell +
                              "' is not a finite number");
    return v;
}

}  // namespace detail

/// Reads `torque_<unit>,deflection_<unit>` followed by numeric rows. Blank
/// lines and lines starting with '#' are skipped.
inline MeasurementSet read_measurements(std::istream& in, std::string source = "") {
    MeasurementSet data;
    data.source = std::move(source);
    std::string line;
    int lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto cells = detail::split_csv_line(t);
        if (cells.size() != 2)
            throw InvalidArgument("line " + std::to_string(lineno) + ": expected 2 columns, found " +
                                  std::to_string(cells.size()));
        if (!header) {
            data.torque_unit = detail::column_unit(cells[0], "torque_", lineno);
            data.deflection_unit = detail::column_unit(cells[1], "deflection_", lineno);
            header = true;
            continue;
        }
        data.torque.push_back(detail::parse_cell(cells[0], lineno, "torque"));
        data.deflection.push_back(detail::parse_cell(cells[1], lineno, "deflection"));
    }
    if (!header) throw InvalidArgument("line " + std::to_string(lineno + 1) + ": missing CSV header");
    return data;
}

struct MapEvaluation {
    double value = 0.0;
    bool extrapolated = false;
};

struct TorqueDeflectionMap {
    Polynomial polynomial;                 // descending degree
    std::vector<double> standard_errors;   // aligned with the coefficients
    double rms_residual = 0.0;
    double torque_min = 0.0;
    double torque_max = 0.0;
    std::string torque_unit;
    std::string deflection_unit;
    std::size_t sample_count = 0;

    int degree() const { return polynomial.degree(); }
    const std::vector<double>& coefficients() const { return polynomial.coefficients; }

    bool in_range(double torque) const { return torque >= torque_min && torque <= torque_max; }

    MapEvaluation evaluate(double torque) const { return {polynomial(torque), !in_range(torque)}; }
};

/// Ordinary least squares on monomials of torque. Torques are mapped to
/// s = (T - T_min) / (T_max - T_min) before the QR solve and the coefficients
/// are expanded back to powers of T.
inline TorqueDeflectionMap fit_map(const MeasurementSet& data, int degree) {
    if (degree < 1 || degree > kMaxMapDegree) throw InvalidArgument("map degree must be 1, 2 or 3");
    data.validate();
    const std::size_t distinct = data.distinct_torques();
    if (distinct <= static_cast<std::size_t>(degree))
        throw RankDeficient("degree-" + std::to_string(degree) + " fit needs more than " + std::to_string(degree) +
                            " distinct torques, got " + std::to_string(distinct));

    const Eigen::Index m = static_cast<Eigen::Index>(data.size());
    const Eigen::Index p = degree + 1;
    const auto [lo_it, hi_it] = std::minmax_element(data.torque.begin(), data.torque.end());
    const double lo = *lo_it;
    const double width = *hi_it - lo;

    Eigen::MatrixXd v(m, p);  // ascending powers of s
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double s = (data.torque[static_cast<std::size_t>(i)] - lo) / width;
        double pw = 1.0;
        for (Eigen::Index j = 0; j < p; ++j, pw *= s) v(i, j) = pw;
        y(i) = data.deflection[static_cast<std::size_t>(i)];
    }

    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(v);
    const Eigen::VectorXd cs = qr.solve(y);
    const Eigen::VectorXd resid = y - v * cs;
    const double rss = resid.squaredNorm();

    // s^k = sum_j C(k, j) T^j (-lo)^(k-j) / width^k
    Eigen::MatrixXd to_t = Eigen::MatrixXd::Zero(p, p);  // column k: s^k in ascending powers of T
    for (Eigen::Index k = 0; k < p; ++k) {
        double binom = 1.0;
        for (Eigen::Index j = 0; j <= k; ++j) {
            to_t(j, k) = binom * std::pow(-lo, static_cast<double>(k - j)) / std::pow(width, static_cast<double>(k));
            binom = binom * static_cast<double>(k - j) / static_cast<double>(j + 1);
        }
    }
    const Eigen::VectorXd ct = to_t * cs;

    // Cov(c_s) = sigma^2 (R^T R)^-1
    const Eigen::MatrixXd r = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv = r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
    const double sigma2 = m > p ? rss / static_cast<double>(m - p) : 0.0;
    const Eigen::MatrixXd cov_t = to_t * (sigma2 * r_inv * r_inv.transpose()) * to_t.transpose();

    TorqueDeflectionMap map;
    for (Eigen::Index j = p - 1; j >= 0; --j) {
        map.polynomial.coefficients.push_back(ct(j));
        map.standard_errors.push_back(std::sqrt(std::max(0.0, cov_t(j, j))));
    }
    map.rms_residual = std::sqrt(rss / static_cast<double>(m));
    map.torque_min = lo;
    map.torque_max = *hi_it;
    map.torque_unit = data.torque_unit;
    map.deflection_unit = data.deflection_unit;
    map.sample_count = data.size();
    return map;
}

struct DegreeSelection {
    int best_degree = 1;
    std::array<double, kMaxMapDegree> rms_residuals{};  // index d - 1
    std::vector<TorqueDeflectionMap> fits;              // degrees 1..3

    const TorqueDeflectionMap& best() const { return fits[static_cast<std::size_t>(best_degree - 1)]; }
};

/// Fits degrees 1..3 and walks upward, accepting a higher degree only when it
/// lowers the RMS residual by at least 5%. Residuals at roundoff level
/// (relative to the data scale) count as an exact fit and stop the walk.
inline DegreeSelection select_degree(const MeasurementSet& data) {
    if (data.distinct_torques() < 4) throw RankDeficient("degree selection needs at least 4 distinct torques");
    DegreeSelection sel;
    for (int d = 1; d <= kMaxMapDegree; ++d) {
        sel.fits.push_back(fit_map(data, d));
        sel.rms_residuals[static_cast<std::size_t>(d - 1)] = sel.fits.back().rms_residual;
    }
    double scale = 0.0;
    for (double v : data.deflection) scale = std::max(scale, std::abs(v));
    const double floor = 1e-10 * std::max(scale, 1e-300);

    for (int d = 2; d <= kMaxMapDegree; ++d) {
        const double current = sel.rms_residuals[static_cast<std::size_t>(sel.best_degree - 1)];
        if (current <= floor) break;
        if (sel.rms_residuals[static_cast<std::size_t>(d - 1)] < (1.0 - kParsimonyThreshold) * current)
            sel.best_degree = d;
    }
    return sel;
}

}  // namespace cablesail
