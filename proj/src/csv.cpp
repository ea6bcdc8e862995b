#include "cavity_cs/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace cavity_cs::io {

namespace fs = std::filesystem;

void atomic_write(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("rename failed: " + path.string() + ": " + ec.message());
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (const char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("malformed number '" + s + "' in " + where);
    }
}

long parse_long(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("malformed integer '" + s + "' in " + where);
    }
}

std::vector<std::string> read_lines(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

}  // namespace

std::string series_csv(const ComplexSeries& s) {
    std::string out = "n,t,re,im\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += format_double(s.grid.time_at(static_cast<int>(i) + 1));
        out += ',';
        out += format_double(s.values[i].real());
        out += ',';
        out += format_double(s.values[i].imag());
        out += '\n';
    }
    return out;
}

void save_series(const fs::path& path, const ComplexSeries& s) {
    atomic_write(path, series_csv(s));
}

std::string matrix_csv(const SensingMatrix& a) {
    std::string out;
    for (Eigen::Index m = 0; m < a.rows(); ++m) {
        for (Eigen::Index n = 0; n < a.cols(); ++n) {
            if (n > 0) out += ',';
            out += (a.entries(m, n) > 0.0) ? "1" : "-1";
        }
        out += '\n';
    }
    return out;
}

std::string schedules_csv(const SensingMatrix& a) {
    std::string out;
    for (const FlipSchedule& s : a.schedules) {
        out += std::to_string(s.label);
        for (const int k : s.flips) {
            out += ',';
            out += std::to_string(k);
        }
        out += '\n';
    }
    return out;
}

void save_matrix(const fs::path& entries_path, const fs::path& schedules_path,
                 const SensingMatrix& a) {
    atomic_write(entries_path, matrix_csv(a));
    atomic_write(schedules_path, schedules_csv(a));
}

SensingMatrix load_matrix(const fs::path& entries_path, const fs::path& schedules_path) {
    const auto entry_lines = read_lines(entries_path);
    const auto sched_lines = read_lines(schedules_path);
    if (entry_lines.empty()) throw std::runtime_error("empty matrix file: " + entries_path.string());
    if (entry_lines.size() != sched_lines.size())
        throw std::runtime_error("matrix and schedule files disagree on row count");

    SensingMatrix a;
    const auto m_count = static_cast<Eigen::Index>(entry_lines.size());
    const auto first = split_line(entry_lines[0]);
    const auto n_count = static_cast<Eigen::Index>(first.size());
    a.entries.resize(m_count, n_count);
    for (Eigen::Index m = 0; m < m_count; ++m) {
        const auto fields = split_line(entry_lines[static_cast<std::size_t>(m)]);
        if (static_cast<Eigen::Index>(fields.size()) != n_count)
            throw std::runtime_error("ragged matrix row " + std::to_string(m));
        for (Eigen::Index n = 0; n < n_count; ++n) {
            const long v = parse_long(fields[static_cast<std::size_t>(n)], entries_path.string());
            if (v != 1 && v != -1)
                throw std::runtime_error("matrix entries must be +-1 in " + entries_path.string());
            a.entries(m, n) = static_cast<double>(v);
        }
    }
    a.schedules.reserve(static_cast<std::size_t>(m_count));
    for (Eigen::Index m = 0; m < m_count; ++m) {
        const auto fields = split_line(sched_lines[static_cast<std::size_t>(m)]);
        FlipSchedule s;
        s.label = static_cast<int>(parse_long(fields[0], schedules_path.string()));
        for (std::size_t j = 1; j < fields.size(); ++j) {
            if (fields[j].empty()) continue;
            s.flips.push_back(static_cast<int>(parse_long(fields[j], schedules_path.string())));
        }
        a.schedules.push_back(std::move(s));
    }
    // integrity: rows must equal the rows their schedules generate
    for (Eigen::Index m = 0; m < m_count; ++m) {
        const Eigen::RowVectorXd expect =
            build_row(a.schedules[static_cast<std::size_t>(m)], static_cast<int>(n_count));
        if ((expect - a.entries.row(m)).cwiseAbs().maxCoeff() != 0.0)
            throw std::runtime_error("matrix row " + std::to_string(m) +
                                     " does not match its schedule");
    }
    return a;
}

std::string measurements_csv(const MeasurementVector& v) {
    std::string out = "m,re,im,provenance\n";
    const char* tag =
        v.provenance == MeasurementVector::Provenance::matrix ? "matrix" : "simulated";
    for (Eigen::Index m = 0; m < v.values.size(); ++m) {
        out += std::to_string(m + 1);
        out += ',';
        out += format_double(v.values(m).real());
        out += ',';
        out += format_double(v.values(m).imag());
        out += ',';
        out += tag;
        out += '\n';
    }
    return out;
}

void save_measurements(const fs::path& path, const MeasurementVector& v) {
    atomic_write(path, measurements_csv(v));
}

MeasurementVector load_measurements(const fs::path& path) {
    const auto lines = read_lines(path);
    if (lines.empty() || split_line(lines[0]).size() != 4 || split_line(lines[0])[0] != "m")
        throw std::runtime_error("missing measurements header in " + path.string());
    MeasurementVector v;
    v.values.resize(static_cast<Eigen::Index>(lines.size()) - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_line(lines[i]);
        if (fields.size() != 4)
            throw std::runtime_error("malformed measurement row in " + path.string());
        v.values(static_cast<Eigen::Index>(i - 1)) = {parse_double(fields[1], path.string()),
                                                      parse_double(fields[2], path.string())};
        v.provenance = fields[3] == "simulated" ? MeasurementVector::Provenance::simulated
                                                : MeasurementVector::Provenance::matrix;
    }
    return v;
}

std::string recovery_csv(const ComplexSeries& beta, const ComplexSeries& alpha) {
    if (beta.size() != alpha.size())
        throw std::invalid_argument("recovery_csv: series length mismatch");
    std::string out = "n,beta_re,beta_im,alpha_re,alpha_im\n";
    for (std::size_t i = 0; i < beta.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += format_double(beta.values[i].real());
        out += ',';
        out += format_double(beta.values[i].imag());
        out += ',';
        out += format_double(alpha.values[i].real());
        out += ',';
        out += format_double(alpha.values[i].imag());
        out += '\n';
    }
    return out;
}

std::string recovery_diagnostics(const ExperimentResult& r) {
    std::ostringstream out;
    out << "support_size_re = " << r.recovery.support_re.size() << '\n';
    out << "support_size_im = " << r.recovery.support_im.size() << '\n';
    out << "residual_re = " << format_double(r.recovery.residual_re) << '\n';
    out << "residual_im = " << format_double(r.recovery.residual_im) << '\n';
    out << "residual_tol_re = " << format_double(r.residual_tol_re) << '\n';
    out << "residual_tol_im = " << format_double(r.residual_tol_im) << '\n';
    out << "max_support = " << r.max_support_used << '\n';
    out << "rank_deficient = " << (r.recovery.rank_deficient ? "true" : "false") << '\n';
    out << "mse_beta_re = " << format_double(r.mse_beta_re) << '\n';
    out << "mse_beta_im = " << format_double(r.mse_beta_im) << '\n';
    out << "mse_alpha_re = " << format_double(r.mse_alpha_re) << '\n';
    out << "mse_alpha_im = " << format_double(r.mse_alpha_im) << '\n';
    out << "mse_beta_re_measured = " << format_double(r.mse_beta_re_measured) << '\n';
    out << "mse_beta_im_measured = " << format_double(r.mse_beta_im_measured) << '\n';
    out << "mse_alpha_re_measured = " << format_double(r.mse_alpha_re_measured) << '\n';
    out << "mse_alpha_im_measured = " << format_double(r.mse_alpha_im_measured) << '\n';
    out << "max_alpha_sq = " << format_double(r.max_alpha_sq) << '\n';
    out << "summed_beta_mse = " << format_double(r.summed_beta_mse()) << '\n';
    return out.str();
}

std::string sweep_csv(const SweepReport& r) {
    std::string out = "m,k,trials,successes,probability,mean_mse\n";
    for (const SweepCell& c : r.cells) {
        out += std::to_string(c.measurements);
        out += ',';
        out += std::to_string(c.flips);
        out += ',';
        out += std::to_string(c.trials);
        out += ',';
        out += std::to_string(c.successes);
        out += ',';
        out += format_double(c.probability);
        out += ',';
        out += format_double(c.mean_summed_mse);
        out += '\n';
    }
    return out;
}

std::string drive_csv(const DrivingProtocol& p, const TimeGrid& grid) {
    std::string out = "t,f\n";
    // sampled at step boundaries, dense enough for plotting and reimport
    for (int n = 0; n <= grid.steps; ++n) {
        const double t = grid.time_at(n);
        out += format_double(t);
        out += ',';
        out += format_double(eval_drive(p, std::min(t, grid.t_end)));
        out += '\n';
    }
    return out;
}

Tabulated load_tabulated(const fs::path& path) {
    const auto lines = read_lines(path);
    std::vector<double> ts;
    std::vector<double> fs_vals;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto fields = split_line(lines[i]);
        if (fields.size() != 2)
            throw std::runtime_error("drive table needs two columns in " + path.string());
        if (i == 0 && fields[0] == "t") continue;  // optional header
        ts.push_back(parse_double(fields[0], path.string()));
        fs_vals.push_back(parse_double(fields[1], path.string()));
    }
    if (ts.size() < 2) throw std::runtime_error("drive table needs at least 2 samples");
    const double dt = ts[1] - ts[0];
    if (!(dt > 0.0)) throw std::runtime_error("drive table times must increase");
    for (std::size_t i = 1; i < ts.size(); ++i) {
        const double step = ts[i] - ts[i - 1];
        if (std::abs(step - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
            throw std::runtime_error("drive table spacing must be uniform");
    }
    Tabulated tab;
    tab.t_start = ts[0];
    tab.dt = dt;
    tab.values = std::move(fs_vals);
    return tab;
}

}  // namespace cavity_cs::io
