#include "motif/curveset.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace motif {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_value(const std::string& tok) {
    if (tok == "NaN" || tok == "nan" || tok.empty()) return kNaN;
    size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("bad numeric field '" + tok + "'");
    return v;
}

void mask_missing_rows(Track& t) {
    const int n = t.points();
    const int d = t.dims();
    t.valid = BoolArray::Constant(n, true);
    for (int i = 0; i < n; ++i) {
        bool any_nan = false, all_nan = true;
        for (int j = 0; j < d; ++j) {
            if (std::isnan(t.values(i, j)))
                any_nan = true;
            else
                all_nan = false;
        }
        if (any_nan && !all_nan)
            throw std::invalid_argument("partially missing point: gaps must cover all components");
        if (any_nan) {
            t.valid[i] = false;
            t.values.row(i).setConstant(kNaN);
        }
    }
    t.deriv = Eigen::MatrixXd::Constant(n, d, kNaN);
    t.deriv_valid = BoolArray::Constant(n, false);
}

CurveSet load_csv_long(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "curve_id" || header[1] != "t")
        throw std::invalid_argument("csv_long header must be curve_id,t,v1,...,vd");
    const int d = static_cast<int>(header.size()) - 2;

    struct Raw {
        std::vector<double> t;
        std::vector<std::vector<double>> v;
    };
    std::vector<std::string> order;
    std::map<std::string, Raw> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != d + 2)
            throw std::invalid_argument("row with wrong number of components: " + line);
        const std::string& id = fields[0];
        if (rows.find(id) == rows.end()) order.push_back(id);
        Raw& r = rows[id];
        r.t.push_back(parse_value(fields[1]));
        std::vector<double> vals(d);
        for (int j = 0; j < d; ++j) vals[j] = parse_value(fields[2 + j]);
        r.v.push_back(std::move(vals));
    }
    if (order.empty()) throw std::invalid_argument("no data rows in " + path);

    CurveSet cs;
    bool have_grid = false;
    for (const auto& id : order) {
        const Raw& r = rows[id];
        const int n = static_cast<int>(r.t.size());
        if (n == 0) continue;
        double step = 1.0;
        if (n > 1) {
            step = r.t[1] - r.t[0];
            for (int i = 1; i + 1 < n; ++i) {
                double s = r.t[i + 1] - r.t[i];
                if (std::fabs(s - step) > 1e-9 * std::max(1.0, std::fabs(step)))
                    throw std::invalid_argument("non-uniform grid in curve '" + id + "'");
            }
            if (step <= 0) throw std::invalid_argument("non-increasing grid in curve '" + id + "'");
        }
        if (!have_grid) {
            cs.grid.step = step;
            cs.grid.origin = r.t[0];
            have_grid = true;
        } else {
            if (n > 1 && std::fabs(step - cs.grid.step) > 1e-9 * std::max(1.0, std::fabs(cs.grid.step)))
                throw std::invalid_argument("grid step of curve '" + id + "' differs from the set");
            if (std::fabs(r.t[0] - cs.grid.origin) > 1e-9)
                throw std::invalid_argument("grid origin of curve '" + id + "' differs from the set");
        }
        Curve c;
        c.id = id;
        c.track.values.resize(n, d);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < d; ++j) c.track.values(i, j) = r.v[i][j];
        mask_missing_rows(c.track);
        cs.curves.push_back(std::move(c));
    }
    return cs;
}

CurveSet load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    nlohmann::json j;
    in >> j;
    CurveSet cs;
    cs.grid.step = j.at("step").get<double>();
    if (cs.grid.step <= 0) throw std::invalid_argument("step must be positive");
    cs.grid.origin = j.value("origin", 0.0);
    int d = -1;
    for (const auto& jc : j.at("curves")) {
        Curve c;
        c.id = jc.at("id").get<std::string>();
        const auto& vals = jc.at("values");
        const int n = static_cast<int>(vals.size());
        if (n == 0) throw std::invalid_argument("curve '" + c.id + "' has no points");
        // points are arrays of d numbers, or null for a missing point
        int dc = -1;
        for (const auto& p : vals)
            if (!p.is_null()) {
                dc = static_cast<int>(p.size());
                break;
            }
        if (dc <= 0) throw std::invalid_argument("curve '" + c.id + "' has no valid points");
        if (d < 0) d = dc;
        if (dc != d) throw std::invalid_argument("mismatched dimension in curve '" + c.id + "'");
        c.track.values.resize(n, d);
        for (int i = 0; i < n; ++i) {
            const auto& p = vals[i];
            if (p.is_null()) {
                c.track.values.row(i).setConstant(kNaN);
            } else {
                if (static_cast<int>(p.size()) != d)
                    throw std::invalid_argument("mismatched dimension in curve '" + c.id + "'");
                for (int jj = 0; jj < d; ++jj)
                    c.track.values(i, jj) = p[jj].is_null() ? kNaN : p[jj].get<double>();
            }
        }
        mask_missing_rows(c.track);
        cs.curves.push_back(std::move(c));
    }
    if (cs.curves.empty()) throw std::invalid_argument("no curves in " + path);
    return cs;
}

}  // namespace

int CurveSet::index_of(const std::string& id) const {
    for (int i = 0; i < size(); ++i)
        if (curves[i].id == id) return i;
    return -1;
}

CurveSet load_curves(const std::string& path, CurveFormat format) {
    CurveSet cs = format == CurveFormat::csv_long ? load_csv_long(path) : load_json(path);
    const int d = cs.dims();
    for (const auto& c : cs.curves)
        if (c.dims() != d)
            throw std::invalid_argument("curve '" + c.id + "' has mismatched dimension");
    return cs;
}

void save_curves(const CurveSet& cs, const std::string& path, CurveFormat format) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    if (format == CurveFormat::csv_long) {
        out << "curve_id,t";
        for (int j = 0; j < cs.dims(); ++j) out << ",v" << (j + 1);
        out << "\n";
        out.precision(17);
        for (const auto& c : cs.curves) {
            for (int i = 0; i < c.points(); ++i) {
                out << c.id << ',' << (cs.grid.origin + i * cs.grid.step);
                for (int j = 0; j < c.dims(); ++j) {
                    if (c.track.valid[i])
                        out << ',' << c.track.values(i, j);
                    else
                        out << ",NaN";
                }
                out << "\n";
            }
        }
    } else {
        nlohmann::json j;
        j["step"] = cs.grid.step;
        j["origin"] = cs.grid.origin;
        j["curves"] = nlohmann::json::array();
        for (const auto& c : cs.curves) {
            nlohmann::json jc;
            jc["id"] = c.id;
            nlohmann::json vals = nlohmann::json::array();
            for (int i = 0; i < c.points(); ++i) {
                if (!c.track.valid[i]) {
                    vals.push_back(nullptr);
                } else {
                    nlohmann::json p = nlohmann::json::array();
                    for (int jj = 0; jj < c.dims(); ++jj) p.push_back(c.track.values(i, jj));
                    vals.push_back(std::move(p));
                }
            }
            jc["values"] = std::move(vals);
            j["curves"].push_back(std::move(jc));
        }
        out << j.dump(2) << "\n";
    }
}

CurveSet fill_small_gaps(CurveSet cs, int max_gap) {
    if (max_gap < 0) throw std::invalid_argument("max_gap must be >= 0");
    if (max_gap == 0) return cs;
    for (auto& c : cs.curves) {
        Track& t = c.track;
        const int n = t.points();
        int i = 0;
        while (i < n) {
            if (t.valid[i]) {
                ++i;
                continue;
            }
            int run_start = i;
            while (i < n && !t.valid[i]) ++i;
            int run_end = i;  // one past
            const int run_len = run_end - run_start;
            const bool interior = run_start > 0 && run_end < n;
            if (interior && run_len <= max_gap) {
                const int lo = run_start - 1, hi = run_end;
                for (int u = run_start; u < run_end; ++u) {
                    double w = static_cast<double>(u - lo) / static_cast<double>(hi - lo);
                    t.values.row(u) = (1.0 - w) * t.values.row(lo) + w * t.values.row(hi);
                    t.valid[u] = true;
                }
            }
        }
    }
    return cs;
}

CurveSet estimate_derivatives(CurveSet cs) {
    const double h = cs.grid.step;
    for (auto& c : cs.curves) {
        Track& t = c.track;
        const int n = t.points();
        const int d = t.dims();
        t.deriv = Eigen::MatrixXd::Constant(n, d, kNaN);
        t.deriv_valid = BoolArray::Constant(n, false);
        for (int i = 0; i < n; ++i) {
            if (!t.valid[i]) continue;
            const bool prev_ok = i > 0 && t.valid[i - 1];
            const bool next_ok = i + 1 < n && t.valid[i + 1];
            if (prev_ok && next_ok)
                t.deriv.row(i) = (t.values.row(i + 1) - t.values.row(i - 1)) / (2.0 * h);
            else if (next_ok)
                t.deriv.row(i) = (t.values.row(i + 1) - t.values.row(i)) / h;
            else if (prev_ok)
                t.deriv.row(i) = (t.values.row(i) - t.values.row(i - 1)) / h;
            else
                continue;  // isolated valid point
            t.deriv_valid[i] = true;
        }
    }
    return cs;
}

Portion extract_portion(const Curve& c, int start, int length) {
    if (start < 0 || length < 1 || start + length > c.points())
        throw std::out_of_range("portion window out of range");
    return Portion{&c, start, length};
}

Track window_track(const Track& t, int start, int length) {
    const int n = t.points();
    const int d = t.dims();
    Track w;
    w.values = Eigen::MatrixXd::Constant(length, d, kNaN);
    w.deriv = Eigen::MatrixXd::Constant(length, d, kNaN);
    w.valid = BoolArray::Constant(length, false);
    w.deriv_valid = BoolArray::Constant(length, false);
    for (int i = 0; i < length; ++i) {
        const int u = start + i;
        if (u < 0 || u >= n) continue;
        if (t.valid[u]) {
            w.values.row(i) = t.values.row(u);
            w.valid[i] = true;
        }
        if (t.deriv_valid[u]) {
            w.deriv.row(i) = t.deriv.row(u);
            w.deriv_valid[i] = true;
        }
    }
    return w;
}

Track make_track(const Eigen::MatrixXd& values) {
    Track t;
    t.values = values;
    t.deriv = Eigen::MatrixXd::Constant(values.rows(), values.cols(), kNaN);
    t.valid = BoolArray::Constant(values.rows(), true);
    t.deriv_valid = BoolArray::Constant(values.rows(), false);
    return t;
}

}  // namespace motif
