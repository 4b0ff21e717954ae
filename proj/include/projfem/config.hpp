#ifndef PROJFEM_CONFIG_HPP
#define PROJFEM_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "projfem/schemes.hpp"

namespace projfem {

enum class ReportFormat { Csv, Pretty };

/// Full run configuration: the scheme parameters plus I/O control.
/// Parsed from a flat `key = value` file; later assignments win, so
/// command-line overrides are just later set() calls.
struct RunConfig {
    SchemeConfig scheme;
    std::string out_dir;      // empty: no files written
    bool emit_vtk = false;
    int vtk_every = 1;
    int workers = 1;
    std::uint64_t seed = 12345;  // drives the randomized operator self-check
    ReportFormat format = ReportFormat::Csv;
    std::vector<double> k_list = {0.2, 0.1, 0.05, 0.025};

    void set(const std::string& key, const std::string& value);
    std::string get(const std::string& key) const;
    static const std::vector<std::string>& keys();

    void load_file(const std::string& path);
    void validate() const;
};

}  // namespace projfem

#endif
