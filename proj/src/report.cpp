#include "projfem/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace projfem {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string format_cell(double v) {
    return std::isnan(v) ? std::string() : format_g17(v);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

}  // namespace

std::string error_series_csv(const ErrorSeries& series) {
    std::string out = "step,time,u1_l2,u1_h1,u2_l2,u2_h1,p_l2\n";
    for (std::size_t m = 0; m < series.steps.size(); ++m) {
        const StepErrors& e = series.steps[m];
        out += std::to_string(m) + "," + format_g17(e.t) + "," +
               format_g17(e.u1_l2) + "," + format_g17(e.u1_h1) + "," +
               format_g17(e.u2_l2) + "," + format_g17(e.u2_h1) + "," +
               format_g17(e.p_l2) + "\n";
    }
    return out;
}

std::string diagnostics_csv(const std::vector<StepDiagnostics>& diags) {
    std::string out =
        "step,time,vel_iters,p_iters,proj_identity_rel,div_orthog_inf,"
        "energy,div_norm\n";
    for (const StepDiagnostics& d : diags) {
        out += std::to_string(d.step) + "," + format_g17(d.t) + "," +
               std::to_string(d.velocity_iterations) + "," +
               std::to_string(d.pressure_iterations) + "," +
               format_cell(d.proj_identity_rel) + "," +
               format_cell(d.div_orthog_inf) + "," + format_cell(d.energy) +
               "," + format_cell(d.div_norm) + "\n";
    }
    return out;
}

std::string convergence_csv(const ConvergenceReport& report) {
    std::string out = "scheme,pair,n,k,norm,value,order\n";
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
        const ConvergenceEntry& e = report.entries[i];
        for (const std::string& norm : SummaryNorms::names()) {
            out += report.scheme + "," + report.pair + "," +
                   std::to_string(report.n) + "," + format_g17(e.k) + "," +
                   norm + "," + format_g17(e.norms.get(norm)) + ",";
            if (i > 0) out += format_g17(report.orders[i - 1].get(norm));
            out += "\n";
        }
    }
    return out;
}

ConvergenceReport parse_convergence_csv(const std::string& csv) {
    std::stringstream ss(csv);
    std::string line;
    if (!std::getline(ss, line) ||
        line != "scheme,pair,n,k,norm,value,order") {
        throw std::invalid_argument("parse_convergence_csv: bad header");
    }
    ConvergenceReport report;
    auto set_norm = [](SummaryNorms& n, const std::string& name, double v) {
        if (name == "u1_linf_l2") n.u1_linf_l2 = v;
        else if (name == "u1_linf_h1") n.u1_linf_h1 = v;
        else if (name == "u2_linf_l2") n.u2_linf_l2 = v;
        else if (name == "u2_linf_h1") n.u2_linf_h1 = v;
        else if (name == "p_l2_l2") n.p_l2_l2 = v;
        else if (name == "p_linf_l2") n.p_linf_l2 = v;
        else throw std::invalid_argument("parse_convergence_csv: bad norm " + name);
    };
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 7) {
            throw std::invalid_argument("parse_convergence_csv: bad row");
        }
        report.scheme = cells[0];
        report.pair = cells[1];
        report.n = std::stoi(cells[2]);
        const double k = std::stod(cells[3]);
        if (report.entries.empty() || report.entries.back().k != k) {
            report.entries.push_back(ConvergenceEntry{});
            report.entries.back().k = k;
            if (report.entries.size() > 1) {
                report.orders.push_back(SummaryNorms{});
            }
        }
        set_norm(report.entries.back().norms, cells[4], std::stod(cells[5]));
        if (!cells[6].empty()) {
            if (report.orders.empty()) {
                throw std::invalid_argument(
                    "parse_convergence_csv: order on the coarsest rows");
            }
            set_norm(report.orders.back(), cells[4], std::stod(cells[6]));
        }
    }
    return report;
}

namespace {

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string format_fixed(double v, int precision) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

std::string format_sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4e", v);
    return buf;
}

}  // namespace

std::string convergence_table(const ConvergenceReport& report) {
    std::ostringstream out;
    out << "scheme=" << report.scheme << " pair=" << report.pair
        << " n=" << report.n << " diagonal=" << report.diagonal << "\n";
    const std::size_t name_w = 12, cell_w = 13;
    out << pad("norm", name_w);
    for (const auto& e : report.entries) {
        out << pad("k=" + format_fixed(e.k, 4), cell_w);
    }
    for (std::size_t i = 0; i + 1 < report.entries.size(); ++i) {
        out << pad(format_fixed(report.entries[i].k, 2) + "-" +
                       format_fixed(report.entries[i + 1].k, 3),
                   cell_w);
    }
    out << "\n";
    for (const std::string& norm : SummaryNorms::names()) {
        out << pad(norm, name_w);
        for (const auto& e : report.entries) {
            out << pad(format_sci(e.norms.get(norm)), cell_w);
        }
        for (const auto& o : report.orders) {
            out << pad(format_fixed(o.get(norm), 3), cell_w);
        }
        out << "\n";
    }
    return out.str();
}

std::string compare_csv(const CompareReport& report) {
    std::string out = "scheme,pair,n,k,metric,value\n";
    for (const CompareEntry& e : report.entries) {
        auto row = [&](const std::string& metric, double v) {
            out += e.scheme + "," + report.pair + "," + std::to_string(report.n) +
                   "," + format_g17(report.k) + "," + metric + "," +
                   format_g17(v) + "\n";
        };
        for (const std::string& norm : SummaryNorms::names()) {
            row(norm, e.norms.get(norm));
        }
        row("assembly_seconds", e.assembly_seconds);
        row("solve_seconds", e.solve_seconds);
        row("total_seconds", e.total_seconds);
        row("relative_cost", e.relative_cost);
    }
    return out;
}

std::string compare_table(const CompareReport& report) {
    std::ostringstream out;
    char kbuf[32];
    std::snprintf(kbuf, sizeof kbuf, "%g", report.k);
    out << "pair=" << report.pair << " n=" << report.n << " k=" << kbuf
        << "\n";
    const std::size_t name_w = 18, cell_w = 14;
    out << pad("metric", name_w);
    for (const auto& e : report.entries) out << pad(e.scheme, cell_w);
    out << "\n";
    auto row = [&](const std::string& label, auto getter) {
        out << pad(label, name_w);
        for (const auto& e : report.entries) out << pad(getter(e), cell_w);
        out << "\n";
    };
    for (const std::string& norm : SummaryNorms::names()) {
        row(norm, [&](const CompareEntry& e) { return format_sci(e.norms.get(norm)); });
    }
    row("assembly (s)", [](const CompareEntry& e) {
        return format_fixed(e.assembly_seconds, 3);
    });
    row("solve (s)", [](const CompareEntry& e) {
        return format_fixed(e.solve_seconds, 3);
    });
    row("total (s)", [](const CompareEntry& e) {
        return format_fixed(e.total_seconds, 3);
    });
    row("relative cost", [](const CompareEntry& e) {
        return format_fixed(e.relative_cost, 3);
    });
    return out.str();
}

std::string vtk_snapshot(const TriMesh& mesh, const Field& u1, const Field& u2,
                         const Field& p, const std::string& title) {
    std::ostringstream out;
    out << "# vtk DataFile Version 2.0\n" << title << "\nASCII\n";
    out << "DATASET UNSTRUCTURED_GRID\n";
    const int nv = mesh.n_vertices();
    out << "POINTS " << nv << " double\n";
    for (int v = 0; v < nv; ++v) {
        out << format_g17(mesh.vertex(v).x) << " " << format_g17(mesh.vertex(v).y)
            << " 0\n";
    }
    const int nt = mesh.n_triangles();
    out << "CELLS " << nt << " " << 4 * nt << "\n";
    for (int t = 0; t < nt; ++t) {
        const auto& tri = mesh.triangle(t);
        out << "3 " << tri[0] << " " << tri[1] << " " << tri[2] << "\n";
    }
    out << "CELL_TYPES " << nt << "\n";
    for (int t = 0; t < nt; ++t) out << "5\n";
    out << "POINT_DATA " << nv << "\n";
    out << "VECTORS velocity double\n";
    for (int v = 0; v < nv; ++v) {
        // vertex dofs come first in every supported space
        out << format_g17(u1.values[v]) << " " << format_g17(u2.values[v])
            << " 0\n";
    }
    out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
    for (int v = 0; v < nv; ++v) out << format_g17(p.values[v]) << "\n";
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace projfem
