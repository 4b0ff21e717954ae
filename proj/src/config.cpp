#include "projfem/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace projfem {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool parse_bool(const std::string& v) {
    if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "off" || v == "no") return false;
    throw std::invalid_argument("config: expected boolean, got '" + v + "'");
}

double parse_double(const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: expected number, got '" + v + "'");
    }
}

int parse_int(const std::string& v) {
    try {
        std::size_t pos = 0;
        int i = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: expected integer, got '" + v + "'");
    }
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (key == "scheme") {
        scheme.scheme = scheme_from_string(v);
    } else if (key == "pair") {
        scheme.pair = pair_from_string(v);
    } else if (key == "n") {
        scheme.n = parse_int(v);
    } else if (key == "k") {
        scheme.k = parse_double(v);
    } else if (key == "T") {
        scheme.T = parse_double(v);
    } else if (key == "nu") {
        scheme.nu = parse_double(v);
    } else if (key == "diagonal") {
        scheme.diagonal = diagonal_from_string(v);
    } else if (key == "vel_tol") {
        scheme.velocity_tol = parse_double(v);
    } else if (key == "p_tol") {
        scheme.pressure_tol = parse_double(v);
    } else if (key == "max_iter_factor") {
        scheme.max_iter_factor = parse_int(v);
    } else if (key == "convection") {
        scheme.with_convection = parse_bool(v);
    } else if (key == "out") {
        out_dir = v;
    } else if (key == "vtk") {
        emit_vtk = parse_bool(v);
    } else if (key == "vtk_every") {
        vtk_every = parse_int(v);
    } else if (key == "workers") {
        workers = parse_int(v);
    } else if (key == "seed") {
        seed = static_cast<std::uint64_t>(std::stoull(v));
    } else if (key == "format") {
        if (v == "csv") {
            format = ReportFormat::Csv;
        } else if (v == "pretty") {
            format = ReportFormat::Pretty;
        } else {
            throw std::invalid_argument("config: unknown format '" + v + "'");
        }
    } else if (key == "k_list") {
        std::vector<double> ks;
        std::stringstream ss(v);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = trim(tok);
            if (!tok.empty()) ks.push_back(parse_double(tok));
        }
        if (ks.empty()) throw std::invalid_argument("config: empty k_list");
        k_list = std::move(ks);
    } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
    }
}

std::string RunConfig::get(const std::string& key) const {
    if (key == "scheme") return to_string(scheme.scheme);
    if (key == "pair") return to_string(scheme.pair);
    if (key == "n") return std::to_string(scheme.n);
    if (key == "k") return format_double(scheme.k);
    if (key == "T") return format_double(scheme.T);
    if (key == "nu") return format_double(scheme.nu);
    if (key == "diagonal") return to_string(scheme.diagonal);
    if (key == "vel_tol") return format_double(scheme.velocity_tol);
    if (key == "p_tol") return format_double(scheme.pressure_tol);
    if (key == "max_iter_factor") return std::to_string(scheme.max_iter_factor);
    if (key == "convection") return scheme.with_convection ? "true" : "false";
    if (key == "out") return out_dir;
    if (key == "vtk") return emit_vtk ? "true" : "false";
    if (key == "vtk_every") return std::to_string(vtk_every);
    if (key == "workers") return std::to_string(workers);
    if (key == "seed") return std::to_string(seed);
    if (key == "format") return format == ReportFormat::Csv ? "csv" : "pretty";
    if (key == "k_list") {
        std::string out;
        for (std::size_t i = 0; i < k_list.size(); ++i) {
            if (i) out += ",";
            out += format_double(k_list[i]);
        }
        return out;
    }
    throw std::invalid_argument("config: unknown key '" + key + "'");
}

const std::vector<std::string>& RunConfig::keys() {
    static const std::vector<std::string> k = {
        "scheme", "pair",   "n",         "k",      "T",
        "nu",     "diagonal", "vel_tol", "p_tol",  "max_iter_factor",
        "convection", "out", "vtk",      "vtk_every", "workers",
        "seed",   "format", "k_list"};
    return k;
}

void RunConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: missing '=' at " + path + ":" +
                                        std::to_string(lineno));
        }
        set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

void RunConfig::validate() const {
    scheme.validate();
    if (vtk_every < 1) {
        throw std::invalid_argument("config: vtk_every must be >= 1");
    }
    if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
    if (k_list.empty()) throw std::invalid_argument("config: empty k_list");
    for (std::size_t i = 1; i < k_list.size(); ++i) {
        if (k_list[i] >= k_list[i - 1]) {
            throw std::invalid_argument("config: k_list must be descending");
        }
    }
}

}  // namespace projfem
