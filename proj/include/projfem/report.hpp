#ifndef PROJFEM_REPORT_HPP
#define PROJFEM_REPORT_HPP

#include <string>
#include <vector>

#include "projfem/fem.hpp"
#include "projfem/schemes.hpp"
#include "projfem/verify.hpp"

namespace projfem {

/// Floats in reports are printed with %.17g so that emitted CSV parses
/// back to bit-identical doubles.
std::string format_g17(double v);

std::string error_series_csv(const ErrorSeries& series);
std::string diagnostics_csv(const std::vector<StepDiagnostics>& diags);

/// Tidy layout, one row per (k, norm):
/// scheme,pair,n,k,norm,value,order
/// The order cell pairs this k with the previous (coarser) one and is
/// empty on the coarsest rows.
std::string convergence_csv(const ConvergenceReport& report);
ConvergenceReport parse_convergence_csv(const std::string& csv);

/// Table-shaped pretty print: six norm rows, one value column per k,
/// one order column per consecutive pair.
std::string convergence_table(const ConvergenceReport& report);

struct CompareEntry {
    std::string scheme;
    SummaryNorms norms;
    double assembly_seconds = 0.0;
    double solve_seconds = 0.0;
    double total_seconds = 0.0;
    double relative_cost = 1.0;  // total normalized to the incremental scheme
};

struct CompareReport {
    std::string pair;
    int n = 0;
    double k = 0.0;
    std::vector<CompareEntry> entries;
};

std::string compare_csv(const CompareReport& report);
std::string compare_table(const CompareReport& report);

/// Legacy VTK 2.0 ASCII, unstructured grid: velocity as 3-component
/// VECTORS (zero z), pressure as SCALARS, higher-order fields sampled at
/// vertices only.
std::string vtk_snapshot(const TriMesh& mesh, const Field& u1, const Field& u2,
                         const Field& p, const std::string& title);

void write_file(const std::string& path, const std::string& content);

}  // namespace projfem

#endif
