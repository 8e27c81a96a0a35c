#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "qjump/error.hpp"
#include "qjump/io/commands.hpp"
#include "qjump/io/csv.hpp"
#include "qjump/io/manifest.hpp"
#include "qjump/io/run_config.hpp"

using namespace qjump;
using namespace qjump::io;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

RunConfig tiny(int n = 6, double v = 0.5) {
    RunConfig c = default_run_config(n);
    c.model.n_excitations = 2;
    c.model.strength = v;
    c.trajectory.m = 4;
    c.trajectory.t_max = 2.0;
    c.trajectory.sample_every = 50;
    c.analysis.t_min = 1.0;
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST(Csv, ShortestRoundTripText) {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) EXPECT_EQ(parse_double(to_text(v), "v"), v);
    EXPECT_EQ(to_text(0.5), "0.5");
    EXPECT_THROW(parse_double("1.5x", "field"), ConfigError);
    EXPECT_THROW(parse_integer("3.2", "field"), ConfigError);
}

TEST(Csv, WriteThenRead) {
    TempDir dir("qjump_csv_test");
    const auto path = dir.path / "t.csv";
    {
        CsvWriter w(path, {"a", "b"});
        w << 1.5 << 2LL;
        w.end_row();
        w << 0.1 << -3LL;
        w.end_row();
        w.close();
    }
    const auto t = read_csv(path);
    EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(t.rows(), 2u);
    EXPECT_EQ(t.column("a")[1], 0.1);
    EXPECT_EQ(t.column("b")[1], -3.0);
    EXPECT_ANY_THROW(t.column("c"));
}

TEST(RunConfig, SerializeParseRoundTrip) {
    RunConfig c = default_run_config(16);
    c.model.hamiltonian = HamiltonianKind::NearestNeighbor;
    c.model.strength = 0.35;
    c.backend = Backend::Mps;
    c.mps.order = 4;
    c.trajectory.master_seed = 0xdeadbeefcafeULL;
    c.analysis.scan = true;
    c.analysis.sizes = {8, 12, 16};
    c.analysis.gamma_grid = {0.1, 0.2};
    c.output.directory = "elsewhere";
    EXPECT_EQ(parse_run_config(serialize_run_config(c)), c);
}

TEST(RunConfig, UnknownKeyIsNamed) {
    try {
        parse_run_config("[model]\nn_sites = 8\nstrenght = 0.5\n");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("model.strenght"), std::string::npos);
    }
    EXPECT_THROW(parse_run_config("[nonsense]\nx = 1\n"), ConfigError);
    EXPECT_THROW(parse_run_config("[model]\nn_sites = eight\n"), ConfigError);
    EXPECT_THROW(parse_run_config("[model]\nn_sites = 8\nn_excitations = 9\n"), ConfigError);
    EXPECT_THROW(parse_run_config("[trajectory]\nm = 0\n"), ConfigError);
}

TEST(RunConfig, SizeDependentDefaults) {
    const RunConfig c = parse_run_config("[model]\nn_sites = 24\n");
    EXPECT_EQ(c.model.n_excitations, 6);
    EXPECT_EQ(c.mps.max_bond, 30);
    EXPECT_EQ(c.trajectory.t_max, 100.0);
    EXPECT_EQ(c.trajectory.dt, 0.01);
    EXPECT_EQ(table_bond_dimension(24), 30);
    EXPECT_GT(table_bond_dimension(64), 30);
    EXPECT_EQ(table_t_max(48), 100.0);
    EXPECT_EQ(table_t_max(64), 150.0);
    const auto g = default_gamma_grid();
    EXPECT_EQ(g.size(), 23u);
    EXPECT_NEAR(g[19], 1.0, 1e-12);
    EXPECT_EQ(g.back(), 5.0);
}

TEST(Manifest, Sha256KnownAnswer) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Manifest, CellNames) {
    EXPECT_EQ(cell_directory_name({"staggered", 8, 2, 0.5, "dense"}), "staggered_N8_k2_g0.5");
}

TEST(Manifest, RoundTripAndVerification) {
    TempDir dir("qjump_manifest_test");
    {
        std::ofstream(dir.path / "a.csv") << "x\n1\n";
    }
    ResultManifest m;
    m.config_hash = sha256_hex("cfg");
    m.code_version = code_version();
    m.cell = {"nearest_neighbor", 12, 3, 0.25, "mps"};
    m.files["a.csv"] = sha256_file(dir.path / "a.csv");
    m.requested_m = 10;
    m.effective_m = 9;
    m.invalid_m = 1;
    m.master_seed = 1ULL << 63;
    write_manifest(m, dir.path / "manifest.json");
    const auto back = read_manifest(dir.path / "manifest.json");
    EXPECT_EQ(back.cell, m.cell);
    EXPECT_EQ(back.files, m.files);
    EXPECT_EQ(back.master_seed, m.master_seed);
    EXPECT_EQ(back.invalid_m, 1);
    EXPECT_TRUE(verify_manifest(back, dir.path));
    std::ofstream(dir.path / "a.csv") << "tampered\n";
    EXPECT_FALSE(verify_manifest(back, dir.path));
    EXPECT_THROW(read_manifest(dir.path / "missing.json"), IoError);
}

TEST(Cells, ScanExpansion) {
    RunConfig c = tiny(8);
    EXPECT_EQ(expand_cells(c).size(), 1u);
    c.analysis.scan = true;
    c.analysis.sizes = {8, 12};
    c.analysis.gamma_grid = {0.1, 0.5, 1.0};
    const auto cells = expand_cells(c);
    ASSERT_EQ(cells.size(), 6u);
    EXPECT_EQ(cells[3].model.n_sites, 12);
    EXPECT_EQ(cells[3].model.n_excitations, 3);
    EXPECT_NEAR(cells[4].model.strength, 0.5 * c.model.kappa, 1e-15);
    EXPECT_FALSE(cell_config(c, cells[4]).analysis.scan);
}

TEST(Cells, RunIsDeterministicAndResumable) {
    TempDir a("qjump_cell_a"), b("qjump_cell_b");
    const RunConfig c = tiny();
    const Cell cell = expand_cells(c).front();
    const auto first = run_cell(c, cell, a.path, 1);
    EXPECT_FALSE(first.skipped);
    const auto other = run_cell(c, cell, b.path, 2);
    for (const auto& [name, hash] : first.manifest.files) EXPECT_EQ(other.manifest.files.at(name), hash) << name;

    EXPECT_TRUE(run_cell(c, cell, a.path, 1).skipped);
    RunConfig reseeded = c;
    reseeded.trajectory.master_seed = 99;
    EXPECT_FALSE(run_cell(reseeded, cell, a.path, 1).skipped);

    // A damaged output forces a rerun.
    std::ofstream(first.directory / kJumpsCsv) << "broken\n";
    EXPECT_FALSE(run_cell(reseeded, cell, a.path, 1).skipped);
    EXPECT_FALSE(fs::exists(first.directory.string() + ".partial"));
}

TEST(Cells, OutputHeaders) {
    TempDir dir("qjump_cell_headers");
    const auto out = run_cell(tiny(), expand_cells(tiny()).front(), dir.path, 1);
    const auto series = read_csv(out.directory / kEntropySeriesCsv);
    EXPECT_EQ(series.header, (std::vector<std::string>{"time_kappa_t", "mean_entropy_bits", "std_entropy_bits",
                                                       "sem_entropy_bits"}));
    EXPECT_EQ(series.rows(), 201u);
    EXPECT_EQ(read_csv(out.directory / kJumpsCsv).header,
              (std::vector<std::string>{"trajectory", "time_kappa_t", "bond"}));
    EXPECT_TRUE(fs::exists(out.directory / kCellConfig));
    EXPECT_EQ(load_run_config(out.directory / kCellConfig), cell_config(tiny(), expand_cells(tiny()).front()));
}

TEST(Schedule, ReadsAndFiltersTrajectories) {
    TempDir dir("qjump_schedule_test");
    std::ofstream(dir.path / "j.csv") << "trajectory,time_kappa_t,bond\n0,0.5,2\n1,0.2,1\n0,0.1,4\n";
    const auto s = read_schedule(dir.path / "j.csv", 0);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0], (JumpEvent{0.1, 4}));
    EXPECT_EQ(s[1], (JumpEvent{0.5, 2}));
    EXPECT_EQ(read_schedule(dir.path / "j.csv", 1).size(), 1u);
}

TEST(Analysis, DarkDickeCellHasFiniteCharge) {
    TempDir dir("qjump_analysis_dark");
    RunConfig c = tiny(12, 0.0);
    c.model.n_excitations = 3;
    c.trajectory.t_max = 3.0;
    c.trajectory.m = 2;
    const auto out = run_cell(c, expand_cells(c).front(), dir.path, 1);
    const auto report = analyze_results(dir.path);
    ASSERT_EQ(report.cells.size(), 1u);
    const auto& cell = report.cells.front();
    EXPECT_FALSE(cell.steady.fallback);
    EXPECT_NEAR(cell.half_chain.mean, 1.8, 0.2);
    EXPECT_NEAR(cell.distribution.std, 0.0, 1e-12);
    EXPECT_GT(cell.cft.value("c_eff"), 2.0);
    EXPECT_LT(cell.cft.value("c_eff"), 4.0);
    ASSERT_EQ(report.transitions.size(), 1u);
    EXPECT_FALSE(report.transitions.front().sigma_peak.has_value());

    write_analysis(report, dir.path / "analysis");
    EXPECT_TRUE(fs::exists(dir.path / "analysis" / "analysis.json"));
    const std::string summary = slurp(dir.path / "analysis" / "transition_summary.csv");
    EXPECT_EQ(summary.rfind("quantity,model,n_sites,gamma,value,error,note", 0), 0u);
    EXPECT_NE(summary.find("c_eff,staggered,12,0"), std::string::npos);
    EXPECT_EQ(summary.find("gamma_c_sigma_peak"), std::string::npos);
}
