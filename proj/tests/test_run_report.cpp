#include <doctest.h>

#include <stdexcept>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "projfem/config.hpp"
#include "projfem/report.hpp"
#include "projfem/run.hpp"

using namespace projfem;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig tiny_config() {
    RunConfig config;
    config.scheme.n = 4;
    config.scheme.k = 0.2;
    config.scheme.T = 0.4;
    return config;
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "projfem_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("config set/get round trip and file parsing") {
    RunConfig config;
    config.set("scheme", "rotational");
    config.set("n", "16");
    config.set("k", "0.05");
    config.set("pair", "mini");
    config.set("vtk", "true");
    config.set("k_list", "0.2, 0.1");
    CHECK(config.get("scheme") == "rotational");
    CHECK(config.scheme.n == 16);
    CHECK(config.scheme.pair == FePair::Mini);
    CHECK(config.emit_vtk);
    CHECK(config.k_list == std::vector<double>{0.2, 0.1});

    CHECK_THROWS_AS(config.set("bogus_key", "1"), std::invalid_argument);
    CHECK_THROWS_AS(config.set("scheme", "bogus"), std::invalid_argument);
    CHECK_THROWS_AS(config.set("n", "abc"), std::invalid_argument);

    const fs::path dir = fresh_dir("config");
    const fs::path file = dir / "run.cfg";
    write_file(file.string(),
               "# comment line\n"
               "scheme = penalty\n"
               "n = 8   # trailing comment\n"
               "\n"
               "k = 0.1\n");
    RunConfig loaded;
    loaded.load_file(file.string());
    CHECK(loaded.scheme.scheme == SchemeKind::Penalty);
    CHECK(loaded.scheme.n == 8);
    CHECK(loaded.scheme.k == 0.1);
    CHECK_THROWS(loaded.load_file((dir / "missing.cfg").string()));

    RunConfig bad;
    bad.vtk_every = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    RunConfig ascending;
    ascending.k_list = {0.1, 0.2};
    CHECK_THROWS_AS(ascending.validate(), std::invalid_argument);
}

TEST_CASE("stubbed linear errors give order 1 exactly") {
    ConvergenceReport report;
    report.scheme = "incremental";
    report.pair = "th";
    report.n = 8;
    report.diagonal = "right";
    for (double k : {0.2, 0.1}) {
        ConvergenceEntry e;
        e.k = k;
        e.norms.u1_linf_l2 = e.norms.u1_linf_h1 = e.norms.u2_linf_l2 =
            e.norms.u2_linf_h1 = e.norms.p_l2_l2 = e.norms.p_linf_l2 = 3.0 * k;
        report.entries.push_back(e);
    }
    compute_orders(report);
    REQUIRE(report.orders.size() == 1);
    for (const std::string& norm : SummaryNorms::names()) {
        CHECK(report.orders[0].get(norm) == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("convergence CSV round-trips byte-identically") {
    ConvergenceReport report;
    report.scheme = "incremental";
    report.pair = "th";
    report.n = 32;
    report.diagonal = "right";
    double value = 0.123456789012345678;
    for (double k : {0.2, 0.1, 0.05}) {
        ConvergenceEntry e;
        e.k = k;
        e.norms.u1_linf_l2 = value *= 1.7;
        e.norms.u1_linf_h1 = value *= 0.9;
        e.norms.u2_linf_l2 = value *= 1.1;
        e.norms.u2_linf_h1 = value *= 0.8;
        e.norms.p_l2_l2 = value *= 1.3;
        e.norms.p_linf_l2 = value *= 0.6;
        report.entries.push_back(e);
    }
    compute_orders(report);
    const std::string csv = convergence_csv(report);
    ConvergenceReport parsed = parse_convergence_csv(csv);
    CHECK(parsed.scheme == report.scheme);
    CHECK(parsed.entries.size() == report.entries.size());
    CHECK(convergence_csv(parsed) == csv);
}

TEST_CASE("pretty table carries six norm rows and the order columns") {
    ConvergenceReport report;
    report.scheme = "incremental";
    report.pair = "th";
    report.n = 8;
    report.diagonal = "right";
    for (double k : {0.2, 0.1, 0.05, 0.025}) {
        ConvergenceEntry e;
        e.k = k;
        e.norms.u1_linf_l2 = e.norms.u1_linf_h1 = e.norms.u2_linf_l2 =
            e.norms.u2_linf_h1 = e.norms.p_l2_l2 = e.norms.p_linf_l2 = k;
        report.entries.push_back(e);
    }
    compute_orders(report);
    CHECK(report.orders.size() == 3);
    const std::string table = convergence_table(report);
    for (const std::string& norm : SummaryNorms::names()) {
        CHECK(table.find(norm) != std::string::npos);
    }
    CHECK(table.find("0.20-0.100") != std::string::npos);
    CHECK(table.find("0.05-0.025") != std::string::npos);
}

TEST_CASE("run_single writes the error series and invariant log") {
    RunConfig config = tiny_config();
    const fs::path dir = fresh_dir("run_single");
    config.out_dir = dir.string();
    RunResult result = run_single(config);
    CHECK(result.series.steps.size() == 3);  // M = 2, plus t0
    CHECK(result.diagnostics.size() == 2);
    CHECK(result.norms.u1_linf_l2 > 0.0);
    CHECK(result.total_seconds > 0.0);

    const std::string errors = slurp(dir / "errors.csv");
    CHECK(errors.rfind("step,time,", 0) == 0);
    // header + 3 data rows
    CHECK(std::count(errors.begin(), errors.end(), '\n') == 4);
    const std::string invariants = slurp(dir / "invariants.csv");
    CHECK(std::count(invariants.begin(), invariants.end(), '\n') == 3);
}

TEST_CASE("identical configs reproduce bit-identical outputs") {
    RunConfig config = tiny_config();
    const fs::path dir1 = fresh_dir("det1");
    const fs::path dir2 = fresh_dir("det2");
    config.out_dir = dir1.string();
    run_single(config);
    config.out_dir = dir2.string();
    run_single(config);
    CHECK(slurp(dir1 / "errors.csv") == slurp(dir2 / "errors.csv"));
    CHECK(slurp(dir1 / "invariants.csv") == slurp(dir2 / "invariants.csv"));
}

TEST_CASE("vtk stride: M = 10 with stride 2 emits six snapshots") {
    RunConfig config;
    config.scheme.n = 2;
    config.scheme.k = 0.1;
    config.scheme.T = 1.0;
    config.emit_vtk = true;
    config.vtk_every = 2;
    const fs::path dir = fresh_dir("vtk");
    config.out_dir = dir.string();
    run_single(config);
    int count = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".vtk") ++count;
    }
    CHECK(count == 6);  // steps 0, 2, 4, 6, 8, 10

    const std::string vtk = slurp(dir / "fields_000000.vtk");
    CHECK(vtk.rfind("# vtk DataFile Version 2.0", 0) == 0);
    CHECK(vtk.find("DATASET UNSTRUCTURED_GRID") != std::string::npos);
    CHECK(vtk.find("POINTS 9 double") != std::string::npos);
    CHECK(vtk.find("CELLS 8 32") != std::string::npos);
    CHECK(vtk.find("VECTORS velocity double") != std::string::npos);
    CHECK(vtk.find("SCALARS pressure double 1") != std::string::npos);
}

TEST_CASE("run_convergence validates the ladder") {
    RunConfig config = tiny_config();
    config.scheme.T = 2.0;
    CHECK_THROWS_AS(run_convergence(config, {0.15}), std::invalid_argument);
    CHECK_THROWS_AS(run_convergence(config, {0.1, 0.2}), std::invalid_argument);
    CHECK_THROWS_AS(run_convergence(config, {}), std::invalid_argument);
}

TEST_CASE("run_convergence at desk scale fills entries and orders") {
    RunConfig config = tiny_config();
    config.scheme.T = 0.4;
    config.workers = 2;
    ConvergenceReport report = run_convergence(config, {0.2, 0.1});
    REQUIRE(report.entries.size() == 2);
    REQUIRE(report.orders.size() == 1);
    CHECK(report.entries[0].k == 0.2);
    CHECK(report.entries[1].k == 0.1);
    CHECK(report.entries[0].norms.p_linf_l2 > 0.0);
    // workers must not change the result
    config.workers = 1;
    ConvergenceReport serial = run_convergence(config, {0.2, 0.1});
    CHECK(convergence_csv(serial) == convergence_csv(report));
}

TEST_CASE("run_compare: identical schemes produce identical error columns") {
    RunConfig config = tiny_config();
    CompareReport report =
        run_compare(config, {"incremental", "incremental"});
    REQUIRE(report.entries.size() == 2);
    for (const std::string& norm : SummaryNorms::names()) {
        CHECK(report.entries[0].norms.get(norm) ==
              report.entries[1].norms.get(norm));
    }
    CHECK(report.entries[0].relative_cost == doctest::Approx(1.0));
    CHECK_THROWS_AS(run_compare(config, {"incremental"}),
                    std::invalid_argument);

    const std::string csv = compare_csv(report);
    CHECK(csv.rfind("scheme,pair,n,k,metric,value", 0) == 0);
    const std::string table = compare_table(report);
    CHECK(table.find("relative cost") != std::string::npos);
}

TEST_CASE("operator self-check passes on a sound operator set") {
    TriMesh mesh = TriMesh::structured(4);
    FeSpace vspace(mesh, FeKind::P2);
    FeSpace pspace(mesh, FeKind::P1);
    OperatorSet ops = assemble_operator_set(vspace, pspace);
    CHECK_NOTHROW(operator_self_check(ops, 12345));
}
