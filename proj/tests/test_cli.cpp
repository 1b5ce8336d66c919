#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "augmentor/manifest.hpp"
#include "augmentor/rng.hpp"
#include "augmentor/tabular_io.hpp"

#include "support/helpers.hpp"

using namespace augmentor;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("augmentor_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

RunResult run_cli(const std::string& args, const fs::path& dir) {
    fs::path so = dir / "_stdout.txt";
    fs::path se = dir / "_stderr.txt";
    std::string cmd = std::string(AUGMENTOR_CLI_PATH) + " " + args + " >" + so.string() +
                      " 2>" + se.string();
    int rc = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.out = slurp(so);
    r.err = slurp(se);
    return r;
}

// logistic labels over two informative numerics, saved as CSV + schema
void write_fixture(const fs::path& dir, std::size_t rows, std::uint64_t seed) {
    Schema schema{{testsupport::numeric_col("x1"), testsupport::numeric_col("x2"),
                   testsupport::outcome_col()}};
    DatasetBuilder b(schema);
    Rng rng(seed);
    for (std::size_t i = 0; i < rows; ++i) {
        double x1 = rng.normal(), x2 = rng.normal();
        b.set_numeric(0, x1);
        b.set_numeric(1, x2);
        double p = 1.0 / (1.0 + std::exp(-(1.8 * x1 + 1.2 * x2)));
        b.set_level(2, rng.bernoulli(p) ? 1 : 0);
        b.end_row();
    }
    save_csv(b.build(), dir / "data.csv");
    save_schema(schema, dir / "schema.json");
}

std::string q(const fs::path& p) { return p.string(); }

} // namespace

TEST_CASE("version and help exit cleanly") {
    fs::path dir = fresh_dir("meta");
    RunResult v = run_cli("--version", dir);
    CHECK(v.code == 0);
    CHECK(v.out.find(artifact_version()) != std::string::npos);
    RunResult h = run_cli("--help", dir);
    CHECK(h.code == 0);
    CHECK(h.out.find("sweep") != std::string::npos);
}

TEST_CASE("usage problems exit 2 with usage text on stderr") {
    fs::path dir = fresh_dir("usage");
    write_fixture(dir, 40, 1);
    RunResult unknown =
        run_cli("sweep --data x.csv --bad-flag 1 --out " + q(dir / "o"), dir);
    CHECK(unknown.code == 2);
    CHECK(unknown.err.find("Usage") != std::string::npos);
    CHECK(unknown.out.empty());

    RunResult none = run_cli("", dir);
    CHECK(none.code == 2);

    RunResult badvalue = run_cli("synth --data " + q(dir / "data.csv") + " --schema " +
                                     q(dir / "schema.json") + " --synth nosuch --nprime 3",
                                 dir);
    CHECK(badvalue.code == 2);

    RunResult incomplete = run_cli("evaluate --data " + q(dir / "data.csv") + " --schema " +
                                       q(dir / "schema.json") + " --synth seq",
                                   dir);
    CHECK(incomplete.code == 2);
    CHECK(incomplete.err.find("nprime") != std::string::npos);
}

TEST_CASE("domain problems exit 1") {
    fs::path dir = fresh_dir("domain");
    RunResult missing = run_cli("permtest --pairs " + q(dir / "nope.csv"), dir);
    CHECK(missing.code == 1);
    CHECK(missing.err.find("error:") != std::string::npos);

    // single-class data cannot be screened
    std::ofstream(dir / "one.csv") << "x1,x2,y\n1,2,1\n3,4,1\n5,6,1\n";
    write_fixture(dir, 10, 2);  // for the schema file
    RunResult degenerate =
        run_cli("recommend --data " + q(dir / "one.csv") + " --schema " +
                    q(dir / "schema.json") + " --baseline-auc 0.7",
                dir);
    CHECK(degenerate.code == 1);
}

TEST_CASE("paired scores reproduce the archived significance test") {
    fs::path dir = fresh_dir("permtest");
    std::ofstream(dir / "pairs.csv") << "augmented,baseline\n"
                                     << "0.7668,0.7161\n0.778,0.7171\n0.8722,0.7392\n"
                                     << "0.7451,0.7143\n0.7341,0.5125\n0.7974,0.74\n"
                                     << "0.67,0.5584\n";
    RunResult r = run_cli("permtest --pairs " + q(dir / "pairs.csv") + " --tail greater --out " +
                              q(dir / "perm.json"),
                          dir);
    REQUIRE(r.code == 0);
    nlohmann::json doc = nlohmann::json::parse(slurp(dir / "perm.json"));
    CHECK(doc["p_value"].get<double>() == 1.0 / 128.0);
    CHECK(doc["favorable"].get<int>() == 1);
    CHECK(r.err.find("0.0078") != std::string::npos);

    // 25 pairs overflow exact enumeration; Monte Carlo still runs
    std::ofstream big(dir / "big.csv");
    big << "a,b\n";
    for (int i = 0; i < 25; ++i) big << 2.0 + i << ",1.0\n";
    big.close();
    RunResult refuse = run_cli("permtest --pairs " + q(dir / "big.csv"), dir);
    CHECK(refuse.code == 1);
    CHECK(refuse.err.find("Monte Carlo") != std::string::npos);
    RunResult mc = run_cli("permtest --pairs " + q(dir / "big.csv") + " --mc 2000 --seed 4", dir);
    CHECK(mc.code == 0);
    nlohmann::json mcdoc = nlohmann::json::parse(mc.out);
    CHECK(mcdoc["p_value"].get<double>() > 0.0);
    CHECK(mcdoc["p_value"].get<double>() < 0.05);
    CHECK(mcdoc["assignments"].get<long long>() == 2001);
}

TEST_CASE("the screen matches its hand-computed probability") {
    // 360 rows at 178 positives with 20 numeric predictors: the profile the
    // published coefficients were exercised on, probability near 0.7736
    fs::path dir = fresh_dir("recommend");
    std::vector<ColumnSpec> cols;
    for (int c = 0; c < 20; ++c)
        cols.push_back(testsupport::numeric_col("x" + std::to_string(c)));
    cols.push_back(testsupport::outcome_col());
    Schema schema{cols};
    DatasetBuilder b(schema);
    Rng rng(3);
    for (std::size_t i = 0; i < 360; ++i) {
        for (std::size_t c = 0; c < 20; ++c) b.set_numeric(c, rng.normal());
        b.set_level(20, i < 178 ? 1 : 0);
        b.end_row();
    }
    save_csv(b.build(), dir / "data.csv");
    save_schema(schema, dir / "schema.json");

    RunResult r = run_cli("recommend --data " + q(dir / "data.csv") + " --schema " +
                              q(dir / "schema.json") + " --baseline-auc 0.7161",
                          dir);
    REQUIRE(r.code == 0);
    nlohmann::json doc = nlohmann::json::parse(r.out);
    CHECK(doc["recommend"].get<bool>() == true);
    CHECK(doc["probability"].get<double>() == doctest::Approx(0.7736).epsilon(2e-3));
    CHECK(doc["features"]["dof"].get<double>() == 20.0);
    CHECK(doc["features"]["n_train"].get<double>() == 360.0);
}

TEST_CASE("augmenting with zero rows returns the input rows") {
    fs::path dir = fresh_dir("identity");
    write_fixture(dir, 80, 5);
    RunResult r = run_cli("augment --data " + q(dir / "data.csv") + " --schema " +
                              q(dir / "schema.json") + " --synth seq --nprime 0 --out " +
                              q(dir / "out.csv"),
                          dir);
    REQUIRE(r.code == 0);
    Schema schema = load_schema(dir / "schema.json");
    Dataset in = load_csv(dir / "data.csv", schema).data;
    Dataset out = load_csv(dir / "out.csv", schema).data;
    CHECK(csv_text(in) == csv_text(out));
}

TEST_CASE("generation is deterministic in the seed") {
    fs::path dir = fresh_dir("determinism");
    write_fixture(dir, 60, 7);
    std::string base = "synth --data " + q(dir / "data.csv") + " --schema " +
                       q(dir / "schema.json") + " --synth seq --nprime 25";
    REQUIRE(run_cli(base + " --seed 9 --out " + q(dir / "a.csv"), dir).code == 0);
    REQUIRE(run_cli(base + " --seed 9 --out " + q(dir / "b.csv"), dir).code == 0);
    REQUIRE(run_cli(base + " --seed 10 --out " + q(dir / "c.csv"), dir).code == 0);
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
    CHECK(slurp(dir / "a.csv") != slurp(dir / "c.csv"));
    Schema schema = load_schema(dir / "schema.json");
    CHECK(load_csv(dir / "a.csv", schema).data.rows() == 25);
}

TEST_CASE("a config file fills in defaults but loses to flags") {
    fs::path dir = fresh_dir("config");
    write_fixture(dir, 50, 11);
    std::ofstream(dir / "conf.ini") << "[synth]\nnprime=3\nseed=42\n";
    std::string common = " synth --data " + q(dir / "data.csv") + " --schema " +
                         q(dir / "schema.json");
    RunResult from_config = run_cli("--config " + q(dir / "conf.ini") + common + " --out " +
                                        q(dir / "three.csv") + " --manifest " +
                                        q(dir / "m.json"),
                                    dir);
    REQUIRE(from_config.code == 0);
    Schema schema = load_schema(dir / "schema.json");
    CHECK(load_csv(dir / "three.csv", schema).data.rows() == 3);
    RunManifest m = read_manifest(dir / "m.json");
    CHECK(m.settings.at("nprime") == "3");
    CHECK(m.settings.at("seed") == "42");
    CHECK(m.settings.at("config") == q(dir / "conf.ini"));
    bool digested = false;
    for (const auto& [key, value] : m.inputs)
        if (key.rfind("config:", 0) == 0 && value == file_digest_hex(dir / "conf.ini"))
            digested = true;
    CHECK(digested);

    RunResult flag_wins = run_cli("--config " + q(dir / "conf.ini") + common +
                                      " --nprime 6 --out " + q(dir / "six.csv"),
                                  dir);
    REQUIRE(flag_wins.code == 0);
    CHECK(load_csv(dir / "six.csv", schema).data.rows() == 6);
}

TEST_CASE("the thread count can come from the environment") {
    fs::path dir = fresh_dir("env");
    write_fixture(dir, 50, 13);
    setenv("AUGMENTOR_THREADS", "3", 1);
    RunResult r = run_cli("recommend --data " + q(dir / "data.csv") + " --schema " +
                              q(dir / "schema.json") + " --baseline-auc 0.6 --out " +
                              q(dir / "rec.json"),
                          dir);
    unsetenv("AUGMENTOR_THREADS");
    REQUIRE(r.code == 0);
    RunManifest m = read_manifest(dir / "rec.json.manifest.json");
    CHECK(m.settings.at("threads") == "3");
}

TEST_CASE("a small sweep writes its reports and resumes cleanly") {
    fs::path dir = fresh_dir("sweep");
    write_fixture(dir, 90, 17);
    std::string cmd = "sweep --data " + q(dir / "data.csv") + " --schema " +
                      q(dir / "schema.json") +
                      " --synth bootstrap --max-nprime 12 --folds 3 --seed 3 --out " +
                      q(dir / "run");
    RunResult first = run_cli(cmd, dir);
    REQUIRE(first.code == 0);
    for (const char* name :
         {"cells.csv", "summary.json", "models.txt", "curve_best.csv", "curve_resample.csv",
          "manifest.json"})
        CHECK(fs::exists(dir / "run" / name));

    nlohmann::json summary = nlohmann::json::parse(slurp(dir / "run" / "summary.json"));
    CHECK(summary["baseline_auc"].get<double>() > 0.0);
    CHECK(summary["models"].size() == 1);
    CHECK(first.out.find("baseline_auc") != std::string::npos);

    // the cell log makes the rerun a replay with identical outputs
    std::string cells_before = slurp(dir / "run" / "cells.csv");
    RunResult second = run_cli(cmd, dir);
    REQUIRE(second.code == 0);
    CHECK(slurp(dir / "run" / "cells.csv") == cells_before);
    CHECK(slurp(dir / "run" / "summary.json") == summary.dump(2) + "\n");
    CHECK(second.out == first.out);
}

TEST_CASE("no subcommand rewrites its inputs") {
    fs::path dir = fresh_dir("inputs");
    write_fixture(dir, 70, 19);
    std::string data_digest = file_digest_hex(dir / "data.csv");
    std::string schema_digest = file_digest_hex(dir / "schema.json");
    std::string common = " --data " + q(dir / "data.csv") + " --schema " + q(dir / "schema.json");
    REQUIRE(run_cli("profile" + common, dir).code == 0);
    REQUIRE(run_cli("recommend" + common + " --baseline-auc 0.7", dir).code == 0);
    REQUIRE(run_cli("synth" + common + " --nprime 4 --out " + q(dir / "s.csv"), dir).code == 0);
    REQUIRE(run_cli("augment" + common + " --nprime 4 --out " + q(dir / "a.csv"), dir).code == 0);
    CHECK(file_digest_hex(dir / "data.csv") == data_digest);
    CHECK(file_digest_hex(dir / "schema.json") == schema_digest);

    RunResult clobber = run_cli("synth" + common + " --nprime 4 --out " + q(dir / "data.csv"), dir);
    CHECK(clobber.code == 2);
    CHECK(file_digest_hex(dir / "data.csv") == data_digest);
}

TEST_CASE("manifests record inputs, seeds, and resolved settings") {
    fs::path dir = fresh_dir("manifest");
    write_fixture(dir, 60, 23);
    RunResult r = run_cli("synth --data " + q(dir / "data.csv") + " --schema " +
                              q(dir / "schema.json") + " --nprime 5 --seed 77 --out " +
                              q(dir / "out.csv"),
                          dir);
    REQUIRE(r.code == 0);
    RunManifest m = read_manifest(dir / "out.csv.manifest.json");
    CHECK(m.version == artifact_version());
    CHECK(m.command_line.find("--seed 77") != std::string::npos);
    CHECK(m.seeds == std::vector<std::uint64_t>{77});
    CHECK(m.settings.at("synth") == "seq");
    CHECK(m.settings.at("nprime") == "5");
    CHECK(m.inputs.at("data:" + q(dir / "data.csv")) == file_digest_hex(dir / "data.csv"));
    CHECK(m.timings_ms.count("total") == 1);
}

TEST_CASE("diversity emits the scalar and the curve on request") {
    fs::path dir = fresh_dir("diversity");
    write_fixture(dir, 80, 29);
    REQUIRE(run_cli("synth --data " + q(dir / "data.csv") + " --schema " +
                        q(dir / "schema.json") + " --synth bootstrap --nprime 200 --out " +
                        q(dir / "boot.csv"),
                    dir)
                .code == 0);
    RunResult r = run_cli("diversity --base " + q(dir / "data.csv") + " --augmented " +
                              q(dir / "boot.csv") + " --schema " + q(dir / "schema.json") +
                              " --curve " + q(dir / "curve.csv"),
                          dir);
    REQUIRE(r.code == 0);
    nlohmann::json doc = nlohmann::json::parse(r.out);
    CHECK(doc["diversity"].get<double>() >= 0.0);
    CHECK(doc["diversity"].get<double>() <= 1.0);
    std::istringstream curve(slurp(dir / "curve.csv"));
    std::string line;
    std::getline(curve, line);
    CHECK(line == "threshold,base_rate,aug_rate,x_j");
    std::size_t rows = 0;
    while (std::getline(curve, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 100);
}

TEST_CASE("a tiny simulation writes consistent tables") {
    fs::path dir = fresh_dir("simulate");
    RunResult r = run_cli(
        "simulate --benchmark-rows 300 --n0 60 --series 1 --max-nprime 40 --synth bootstrap "
        "--seed 6 --out " +
            q(dir / "sim"),
        dir);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("baselines 1") != std::string::npos);
    std::istringstream cells(slurp(dir / "sim" / "cells.csv"));
    std::string line;
    std::getline(cells, line);
    CHECK(line == "n0,synthesizer,series,n_prime,auc");
    std::size_t rows = 0;
    while (std::getline(cells, line))
        if (!line.empty()) ++rows;
    CHECK(rows >= 4);  // schedule entries at or below the cap
    std::string records = slurp(dir / "sim" / "records.csv");
    CHECK(records.find("n0,imbalance,dof,baseline_auc,augmentation_helped,group") == 0);
    CHECK(fs::exists(dir / "sim" / "manifest.json"));
}
