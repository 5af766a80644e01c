#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "tomoqa/experiment.hpp"

namespace tomoqa {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

constexpr const char* kCsvHeader =
    "experiment,phantom,size,views,method,seed,noise,rmse,ssim,residual,wall_time";

struct Series {
    std::vector<double> xs;
    std::vector<double> means;
    std::vector<double> variances;
};

// Sample variance (n - 1 denominator); 0 for singleton groups.
void mean_and_variance(const std::vector<double>& values, double& mean, double& variance) {
    mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    variance = 0.0;
    if (values.size() > 1) {
        for (double v : values) variance += (v - mean) * (v - mean);
        variance /= static_cast<double>(values.size() - 1);
    }
}

const char* method_color(const std::string& method) {
    if (method == "qa") return "#b03030";
    if (method == "hybrid") return "#d08020";
    if (method == "fbp") return "#3060b0";
    if (method == "sart") return "#308050";
    return "#707070";  // pinv
}

void write_svg_plot(const std::string& path, const std::string& x_label,
                    const std::string& y_label,
                    const std::map<std::string, Series>& by_method) {
    const double width = 640.0, height = 440.0;
    const double ml = 70.0, mr = 160.0, mt = 30.0, mb = 50.0;

    std::set<double> xs_set;
    double y_max = 0.0;
    for (const auto& [method, series] : by_method) {
        for (std::size_t i = 0; i < series.xs.size(); ++i) {
            xs_set.insert(series.xs[i]);
            y_max = std::max(y_max, series.means[i] + series.variances[i]);
        }
    }
    if (xs_set.empty()) return;
    if (y_max <= 0.0) y_max = 1.0;
    y_max *= 1.05;
    const double x_min = *xs_set.begin(), x_max = *xs_set.rbegin();
    const double x_span = x_max > x_min ? x_max - x_min : 1.0;

    const auto sx = [&](double x) { return ml + (x - x_min) / x_span * (width - ml - mr); };
    const auto sy = [&](double y) { return height - mb - y / y_max * (height - mt - mb); };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n";
    // axes
    out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
        << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << height - mb << "\" stroke=\"black\"/>\n";
    for (double x : xs_set) {
        out << "<text x=\"" << sx(x) << "\" y=\"" << height - mb + 18
            << "\" font-size=\"11\" text-anchor=\"middle\">" << x << "</text>\n";
    }
    for (int i = 0; i <= 4; ++i) {
        const double y = y_max * i / 4.0;
        out << "<text x=\"" << ml - 6 << "\" y=\"" << sy(y) + 4
            << "\" font-size=\"11\" text-anchor=\"end\">" << fmt17(std::round(y * 1000.0) / 1000.0)
            << "</text>\n";
    }
    out << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
        << "\" font-size=\"12\" text-anchor=\"middle\">" << x_label << "</text>\n";
    out << "<text x=\"16\" y=\"" << (mt + height - mb) / 2
        << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << (mt + height - mb) / 2 << ")\">" << y_label << "</text>\n";

    double legend_y = mt + 10.0;
    for (const auto& [method, series] : by_method) {
        const char* color = method_color(method);
        out << "<g stroke=\"" << color << "\" fill=\"none\">\n";
        out << "<polyline points=\"";
        for (std::size_t i = 0; i < series.xs.size(); ++i) {
            if (i) out << ' ';
            out << sx(series.xs[i]) << ',' << sy(series.means[i]);
        }
        out << "\"/>\n";
        for (std::size_t i = 0; i < series.xs.size(); ++i) {
            const double x = sx(series.xs[i]);
            const double lo = sy(std::max(0.0, series.means[i] - series.variances[i]));
            const double hi = sy(series.means[i] + series.variances[i]);
            out << "<line x1=\"" << x << "\" y1=\"" << lo << "\" x2=\"" << x << "\" y2=\"" << hi
                << "\"/>\n";
            out << "<circle cx=\"" << x << "\" cy=\"" << sy(series.means[i]) << "\" r=\"2.5\" fill=\""
                << color << "\"/>\n";
        }
        out << "</g>\n";
        out << "<line x1=\"" << width - mr + 14 << "\" y1=\"" << legend_y << "\" x2=\""
            << width - mr + 38 << "\" y2=\"" << legend_y << "\" stroke=\"" << color << "\"/>\n";
        out << "<text x=\"" << width - mr + 44 << "\" y=\"" << legend_y + 4
            << "\" font-size=\"12\">" << method << "</text>\n";
        legend_y += 18.0;
    }
    out << "</svg>\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

void emit_report(const ResultTable& table, const std::string& out_dir) {
    if (table.rows.empty()) throw std::invalid_argument("emit_report: empty table");
    std::filesystem::create_directories(out_dir);

    const std::string csv_path = out_dir + "/results.csv";
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot open " + csv_path + " for writing");
    csv << kCsvHeader << '\n';
    for (const ResultRow& r : table.rows) {
        csv << r.experiment << ',' << r.phantom << ',' << r.size << ',' << r.views << ','
            << r.method << ',' << r.seed << ',' << r.noise << ',' << fmt17(r.rmse) << ','
            << fmt17(r.ssim) << ',' << fmt17(r.residual) << ',' << fmt17(r.wall_time) << '\n';
    }
    if (!csv) throw std::runtime_error("write failed: " + csv_path);
    csv.close();

    // x axis: view count for the few-view study, image size otherwise
    const bool by_views = table.rows.front().experiment == "underdetermined";
    const auto x_of = [&](const ResultRow& r) {
        return static_cast<double>(by_views ? r.views : r.size);
    };

    for (const char* metric : {"rmse", "ssim"}) {
        std::map<std::string, std::map<double, std::vector<double>>> grouped;
        for (const ResultRow& r : table.rows)
            grouped[r.method][x_of(r)].push_back(std::string(metric) == "rmse" ? r.rmse : r.ssim);
        std::map<std::string, Series> by_method;
        for (const auto& [method, xs] : grouped) {
            Series s;
            for (const auto& [x, values] : xs) {
                double mean = 0.0, variance = 0.0;
                mean_and_variance(values, mean, variance);
                s.xs.push_back(x);
                s.means.push_back(mean);
                s.variances.push_back(variance);
            }
            by_method[method] = std::move(s);
        }
        write_svg_plot(out_dir + "/" + metric + ".svg", by_views ? "views" : "size",
                       std::string(metric) + " (mean, sample-variance bars)", by_method);
    }
}

ResultTable load_result_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ":1: empty file");
    if (line != kCsvHeader) throw std::runtime_error(path + ":1: unexpected header");
    ResultTable table;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() != 11)
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected 11 columns");
        try {
            ResultRow r;
            r.experiment = cells[0];
            r.phantom = cells[1];
            r.size = std::stoi(cells[2]);
            r.views = std::stoi(cells[3]);
            r.method = cells[4];
            r.seed = std::stoull(cells[5]);
            r.noise = std::stoi(cells[6]);
            r.rmse = std::stod(cells[7]);
            r.ssim = std::stod(cells[8]);
            r.residual = std::stod(cells[9]);
            r.wall_time = std::stod(cells[10]);
            table.rows.push_back(std::move(r));
        } catch (const std::exception&) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": malformed row");
        }
    }
    return table;
}

}  // namespace tomoqa
