#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "augmentor/bayes_net.hpp"
#include "augmentor/discretize.hpp"
#include "augmentor/error.hpp"
#include "augmentor/external_synth.hpp"
#include "augmentor/rng.hpp"
#include "augmentor/seq_tree.hpp"
#include "augmentor/synthesizer.hpp"
#include "augmentor/tabular_io.hpp"

#include "support/helpers.hpp"

using namespace augmentor;
using namespace testsupport;
namespace fs = std::filesystem;

namespace {

// Total variation distance between level histograms (missing counted as its
// own symbol).
double level_tv(const Dataset& a, const Dataset& b, std::size_t col) {
    std::map<std::int32_t, double> pa, pb;
    for (std::int32_t v : a.level_column(col)) pa[v] += 1.0 / static_cast<double>(a.rows());
    for (std::int32_t v : b.level_column(col)) pb[v] += 1.0 / static_cast<double>(b.rows());
    double tv = 0.0;
    for (const auto& [k, p] : pa) tv += std::abs(p - (pb.count(k) ? pb[k] : 0.0));
    for (const auto& [k, p] : pb)
        if (!pa.count(k)) tv += p;
    return tv / 2.0;
}

// TV over equal-frequency bins of the reference column (plus a missing bin).
double numeric_tv(const Dataset& ref, const Dataset& other, std::size_t col,
                  std::size_t bins = 10) {
    Discretizer d = Discretizer::fit(ref.numeric_column(col), bins, true);
    std::vector<double> pa(d.bin_count(), 0.0), pb(d.bin_count(), 0.0);
    for (double v : ref.numeric_column(col))
        pa[d.bin(v)] += 1.0 / static_cast<double>(ref.rows());
    for (double v : other.numeric_column(col))
        pb[d.bin(v)] += 1.0 / static_cast<double>(other.rows());
    double tv = 0.0;
    for (std::size_t i = 0; i < pa.size(); ++i) tv += std::abs(pa[i] - pb[i]);
    return tv / 2.0;
}

// Two correlated categoricals plus a dependent outcome, with missingness in
// the numeric column.
Dataset mixed_fixture(std::size_t rows, std::uint64_t seed) {
    Rng rng(seed);
    DatasetBuilder b(Schema{{
        categorical_col("color", {"red", "green", "blue"}),
        numeric_col("size"),
        outcome_col(),
    }});
    for (std::size_t i = 0; i < rows; ++i) {
        auto color = static_cast<std::int32_t>(rng.uniform_index(3));
        b.set_level(0, color);
        if (rng.bernoulli(0.2)) {
            b.set_missing(1);
        } else {
            b.set_numeric(1, rng.normal(static_cast<double>(color) * 2.0, 0.5));
        }
        double p = color == 0 ? 0.8 : (color == 1 ? 0.5 : 0.2);
        b.set_level(2, rng.bernoulli(p) ? 1 : 0);
        b.end_row();
    }
    return b.build();
}

Dataset copycat_fixture(std::size_t rows, std::uint64_t seed) {
    Rng rng(seed);
    DatasetBuilder b(Schema{{
        categorical_col("x1", {"a", "b"}),
        categorical_col("x2", {"a", "b"}),
        outcome_col(),
    }});
    for (std::size_t i = 0; i < rows; ++i) {
        auto v = static_cast<std::int32_t>(rng.uniform_index(2));
        b.set_level(0, v);
        b.set_level(1, v);  // exact copy of x1
        b.set_level(2, rng.bernoulli(0.5) ? 1 : 0);
        b.end_row();
    }
    return b.build();
}

// All labeled DAGs on `n` nodes (n <= 3 keeps this tiny), as parent lists.
std::vector<std::vector<std::vector<std::size_t>>> all_dags(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> arcs;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
            if (u != v) arcs.emplace_back(u, v);
    std::vector<std::vector<std::vector<std::size_t>>> out;
    for (std::size_t mask = 0; mask < (1u << arcs.size()); ++mask) {
        std::vector<std::vector<std::size_t>> parents(n);
        for (std::size_t i = 0; i < arcs.size(); ++i) {
            if (!(mask & (1u << i))) continue;
            auto [u, v] = arcs[i];
            parents[v].push_back(u);
        }
        // reject pairs wired in both directions and cycles
        bool ok = true;
        for (std::size_t v = 0; v < n && ok; ++v)
            for (std::size_t u : parents[v])
                for (std::size_t w : parents[u])
                    if (w == v) ok = false;
        if (n == 3 && ok) {
            // 3-cycles
            auto has = [&](std::size_t u, std::size_t v) {
                for (std::size_t w : parents[v])
                    if (w == u) return true;
                return false;
            };
            for (std::size_t a = 0; a < 3 && ok; ++a)
                for (std::size_t b2 = 0; b2 < 3 && ok; ++b2)
                    for (std::size_t c = 0; c < 3 && ok; ++c) {
                        if (a == b2 || b2 == c || a == c) continue;
                        if (has(a, b2) && has(b2, c) && has(c, a)) ok = false;
                    }
        }
        if (ok) out.push_back(std::move(parents));
    }
    return out;
}

fs::path make_temp_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("augmentor_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

// Resamples train.csv rows cyclically; honors request.json row count.
const char* kResamplerScript = R"PY(
import csv, json, sys, os
job = sys.argv[1]
with open(os.path.join(job, "request.json")) as f:
    req = json.load(f)
with open(os.path.join(job, "train.csv")) as f:
    rows = list(csv.reader(f))
header, body = rows[0], rows[1:]
out = [header] + [body[i % len(body)] for i in range(req["n_prime"])]
with open(os.path.join(job, "synthetic.csv"), "w", newline="") as f:
    csv.writer(f).writerows(out)
)PY";

} // namespace

TEST_CASE("bootstrap resamples training rows verbatim") {
    Dataset train = mixed_fixture(80, 1);
    BootstrapSynthesizer synth;
    synth.fit(train);
    Dataset out = synth.generate(500, 42);
    REQUIRE(out.rows() == 500);
    CHECK(out.provenance() == Provenance::resampled);
    CHECK(out.schema() == train.schema());

    // every generated row equals some training row
    auto row_key = [](const Dataset& ds, std::size_t r) {
        std::string key;
        for (std::size_t c = 0; c < ds.cols(); ++c) {
            if (ds.schema().at(c).kind == ColumnKind::numeric) {
                double v = ds.numeric_at(r, c);
                key += std::isnan(v) ? std::string("NA") : std::to_string(v);
            } else {
                key += std::to_string(ds.level_at(r, c));
            }
            key += "|";
        }
        return key;
    };
    std::map<std::string, int> train_keys;
    for (std::size_t r = 0; r < train.rows(); ++r) train_keys[row_key(train, r)]++;
    for (std::size_t r = 0; r < out.rows(); ++r)
        CHECK(train_keys.count(row_key(out, r)) == 1);

    Dataset again = synth.generate(500, 42);
    CHECK(csv_text(out) == csv_text(again));
    Dataset other = synth.generate(500, 43);
    CHECK(csv_text(out) != csv_text(other));
}

TEST_CASE("seq reproduces a deterministic column copy") {
    Dataset train = copycat_fixture(300, 2);
    SeqSynthesizer synth{SeqConfig{}};
    synth.fit(train);
    Dataset out = synth.generate(10000, 7);
    std::size_t agree = 0;
    for (std::size_t r = 0; r < out.rows(); ++r)
        if (out.level_at(r, 0) == out.level_at(r, 1)) ++agree;
    CHECK(static_cast<double>(agree) / static_cast<double>(out.rows()) >= 0.99);
}

TEST_CASE("seq with min_leaf at the sample size degenerates to marginals") {
    Dataset train = mixed_fixture(200, 3);
    SeqConfig cfg;
    cfg.min_leaf = 200;
    SeqSynthesizer synth{cfg};
    synth.fit(train);
    for (std::size_t pos = 0; pos < 3; ++pos)
        CHECK(synth.node_count(pos) <= 1);
    Dataset out = synth.generate(8000, 11);
    CHECK(level_tv(train, out, 0) < 0.05);
}

TEST_CASE("seq marginals and dependence stay close to training data") {
    Dataset train = mixed_fixture(1500, 4);
    SeqSynthesizer synth{SeqConfig{}};
    synth.fit(train);
    Dataset out = synth.generate(10000, 13);
    REQUIRE(out.rows() == 10000);
    CHECK(out.provenance() == Provenance::synthetic);

    CHECK(level_tv(train, out, 0) < 0.05);
    CHECK(numeric_tv(train, out, 1) < 0.05);
    CHECK(level_tv(train, out, 2) < 0.05);

    // joint over (color, outcome)
    auto joint = [](const Dataset& ds) {
        std::map<std::pair<std::int32_t, std::int32_t>, double> j;
        for (std::size_t r = 0; r < ds.rows(); ++r)
            j[{ds.level_at(r, 0), ds.outcome_at(r)}] += 1.0 / static_cast<double>(ds.rows());
        return j;
    };
    auto ja = joint(train), jb = joint(out);
    double tv = 0.0;
    for (const auto& [k, p] : ja) tv += std::abs(p - (jb.count(k) ? jb[k] : 0.0));
    for (const auto& [k, p] : jb)
        if (!ja.count(k)) tv += p;
    CHECK(tv / 2.0 < 0.05);

    // missingness rate of the numeric column carries over
    auto missing_rate = [](const Dataset& ds, std::size_t col) {
        std::size_t m = 0;
        for (std::size_t r = 0; r < ds.rows(); ++r)
            if (ds.is_missing(r, col)) ++m;
        return static_cast<double>(m) / static_cast<double>(ds.rows());
    };
    CHECK(missing_rate(out, 1) == doctest::Approx(missing_rate(train, 1)).epsilon(0.2));

    // numeric draws are training values (hot deck)
    std::map<double, int> pool;
    for (double v : train.numeric_column(1))
        if (!std::isnan(v)) pool[v]++;
    for (double v : out.numeric_column(1))
        if (!std::isnan(v)) CHECK(pool.count(v) == 1);
}

TEST_CASE("seq leaf pools respect the minimum leaf size") {
    Dataset train = mixed_fixture(20, 50);
    SeqSynthesizer synth{SeqConfig{}};
    synth.fit(train);
    CHECK(synth.smallest_leaf_pool() >= 5);

    Dataset big = mixed_fixture(500, 51);
    SeqConfig cfg;
    cfg.min_leaf = 17;
    SeqSynthesizer synth17{cfg};
    synth17.fit(big);
    CHECK(synth17.smallest_leaf_pool() >= 17);
}

TEST_CASE("seq models an outcome-only dataset as its marginal") {
    DatasetBuilder b(Schema{{outcome_col()}});
    for (int i = 0; i < 500; ++i) {
        b.set_level(0, i % 5 == 0 ? 0 : 1);  // exactly 0.8 positive
        b.end_row();
    }
    Dataset train = b.build();
    SeqSynthesizer synth{SeqConfig{}};
    synth.fit(train);
    CHECK(synth.node_count(0) == 0);  // marginal pool, no tree
    Dataset out = synth.generate(10000, 53);
    double pos = out.positive_fraction();
    CHECK(pos > 0.78);
    CHECK(pos < 0.82);
}

TEST_CASE("generators honor n_prime zero") {
    Dataset train = mixed_fixture(60, 54);
    for (SynthKind kind : {SynthKind::seq, SynthKind::bn, SynthKind::bootstrap}) {
        SynthesizerSpec spec;
        spec.kind = kind;
        if (kind == SynthKind::bn) spec.config = BnConfig{};
        if (kind == SynthKind::bootstrap) spec.config = BootstrapConfig{};
        auto synth = make_synthesizer(spec);
        synth->fit(train);
        Dataset out = synth->generate(0, 1);
        CHECK(out.rows() == 0);
        CHECK(out.schema().same_shape(train.schema()));
        CHECK(concat(train, out).rows() == train.rows());
    }
}

TEST_CASE("bn leaves independent columns unconnected") {
    Rng rng(55);
    DatasetBuilder b(Schema{{categorical_col("coin", {"h", "t"}), outcome_col()}});
    for (int i = 0; i < 1000; ++i) {
        b.set_level(0, rng.bernoulli(0.5) ? 0 : 1);
        b.set_level(1, rng.bernoulli(0.5) ? 1 : 0);
        b.end_row();
    }
    Dataset train = b.build();
    BayesNetSynthesizer synth{BnConfig{}, 13};
    synth.fit(train);
    CHECK(synth.parents()[0].empty());
    CHECK(synth.parents()[1].empty());

    Dataset out = synth.generate(10000, 3);
    double pos = out.positive_fraction();
    CHECK(pos > 0.45);
    CHECK(pos < 0.55);
}

TEST_CASE("seq generation is deterministic in the seed") {
    Dataset train = mixed_fixture(300, 5);
    SeqSynthesizer a{SeqConfig{}};
    a.fit(train);
    SeqSynthesizer b{SeqConfig{}};
    b.fit(train);
    CHECK(csv_text(a.generate(400, 9)) == csv_text(b.generate(400, 9)));
    CHECK(csv_text(a.generate(400, 9)) != csv_text(a.generate(400, 10)));
    CHECK_THROWS_AS(SeqSynthesizer{SeqConfig{}}.generate(5, 1), DataError);
}

TEST_CASE("seq honors a custom column order and rejects bad ones") {
    Dataset train = mixed_fixture(200, 6);
    SeqConfig cfg;
    cfg.column_order = {"y", "size", "color"};
    SeqSynthesizer synth{cfg};
    synth.fit(train);
    Dataset out = synth.generate(200, 3);
    CHECK(out.rows() == 200);

    SeqConfig missing_col;
    missing_col.column_order = {"color", "size"};
    SeqSynthesizer bad{missing_col};
    CHECK_THROWS_AS(bad.fit(train), DataError);

    SeqConfig dup;
    dup.column_order = {"color", "color", "y"};
    SeqSynthesizer bad2{dup};
    CHECK_THROWS_AS(bad2.fit(train), DataError);
}

TEST_CASE("bn recovers the best-scoring structure on two nodes") {
    Rng rng(21);
    DatasetBuilder b(Schema{{categorical_col("x", {"a", "b"}), outcome_col()}});
    for (int i = 0; i < 1000; ++i) {
        bool xa = rng.bernoulli(0.7);
        b.set_level(0, xa ? 0 : 1);
        b.set_level(1, rng.bernoulli(xa ? 0.8 : 0.2) ? 1 : 0);
        b.end_row();
    }
    Dataset train = b.build();
    BayesNetSynthesizer synth{BnConfig{}, 77};
    synth.fit(train);

    double best = -1e300;
    for (const auto& dag : all_dags(2)) best = std::max(best, synth.score_structure(dag));
    CHECK(synth.network_score() == doctest::Approx(best).epsilon(1e-9));
    // dependence is strong enough that the empty graph must lose
    CHECK(synth.network_score() > synth.score_structure({{}, {}}) + 10.0);
}

TEST_CASE("bn finds the global optimum over all three-node structures") {
    Rng rng(22);
    DatasetBuilder b(Schema{{
        categorical_col("x", {"a", "b"}),
        categorical_col("z", {"c", "d"}),
        outcome_col(),
    }});
    for (int i = 0; i < 800; ++i) {
        bool xa = rng.bernoulli(0.6);
        bool zc = rng.bernoulli(xa ? 0.85 : 0.15);
        bool y1 = rng.bernoulli(zc ? 0.9 : 0.1);
        b.set_level(0, xa ? 0 : 1);
        b.set_level(1, zc ? 0 : 1);
        b.set_level(2, y1 ? 1 : 0);
        b.end_row();
    }
    Dataset train = b.build();
    BayesNetSynthesizer synth{BnConfig{}, 5};
    synth.fit(train);

    auto dags = all_dags(3);
    CHECK(dags.size() == 25);
    double best = -1e300;
    for (const auto& dag : dags) best = std::max(best, synth.score_structure(dag));
    CHECK(synth.network_score() == doctest::Approx(best).epsilon(1e-9));
}

TEST_CASE("bn sampling matches the fitted joint distribution") {
    Rng rng(23);
    DatasetBuilder b(Schema{{categorical_col("x", {"a", "b"}), outcome_col()}});
    int n_xa = 0, n_xa_y1 = 0, n_xb_y1 = 0, n = 2000;
    for (int i = 0; i < n; ++i) {
        bool xa = rng.bernoulli(0.65);
        bool y1 = rng.bernoulli(xa ? 0.75 : 0.25);
        if (xa) ++n_xa;
        if (xa && y1) ++n_xa_y1;
        if (!xa && y1) ++n_xb_y1;
        b.set_level(0, xa ? 0 : 1);
        b.set_level(1, y1 ? 1 : 0);
        b.end_row();
    }
    Dataset train = b.build();
    BayesNetSynthesizer synth{BnConfig{}, 99};
    synth.fit(train);
    Dataset out = synth.generate(50000, 31);

    // empirical joint of the draws
    std::map<std::pair<std::int32_t, std::int32_t>, double> emp;
    for (std::size_t r = 0; r < out.rows(); ++r)
        emp[{out.level_at(r, 0), out.outcome_at(r)}] += 1.0 / 50000.0;

    // the joint implied by posterior-mean tables, for either learned
    // orientation of the single arc
    const auto& par = synth.parents();
    bool x_parent_of_y = !par[1].empty();
    double joint[2][2];
    auto lap = [](double num, double den, double k) { return (num + 1.0) / (den + k); };
    if (x_parent_of_y) {
        double px[2] = {lap(n_xa, n, 2.0), lap(n - n_xa, n, 2.0)};
        double py1[2] = {lap(n_xa_y1, n_xa, 2.0), lap(n_xb_y1, n - n_xa, 2.0)};
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                joint[x][y] = px[x] * (y == 1 ? py1[x] : 1.0 - py1[x]);
    } else {
        int n_y1 = n_xa_y1 + n_xb_y1;
        double py[2] = {lap(n - n_y1, n, 2.0), lap(n_y1, n, 2.0)};
        double pxa[2] = {lap(n_xa - n_xa_y1, n - n_y1, 2.0), lap(n_xa_y1, n_y1, 2.0)};
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                joint[x][y] = py[y] * (x == 0 ? pxa[y] : 1.0 - pxa[y]);
    }
    double tv = 0.0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            auto it = emp.find({x, y});
            tv += std::abs((it == emp.end() ? 0.0 : it->second) - joint[x][y]);
        }
    CHECK(tv / 2.0 < 0.02);
}

TEST_CASE("bn reconstructs numeric columns inside observed ranges") {
    Dataset train = mixed_fixture(1200, 24);
    BayesNetSynthesizer synth{BnConfig{}, 11};
    synth.fit(train);
    Dataset out = synth.generate(10000, 17);
    REQUIRE(out.rows() == 10000);
    CHECK(out.provenance() == Provenance::synthetic);

    double lo = 1e300, hi = -1e300;
    for (double v : train.numeric_column(1)) {
        if (std::isnan(v)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::size_t miss = 0;
    for (std::size_t r = 0; r < out.rows(); ++r) {
        if (out.is_missing(r, 1)) {
            ++miss;
            continue;
        }
        double v = out.numeric_at(r, 1);
        CHECK(v >= lo);
        CHECK(v <= hi);
    }
    double train_miss = 0.0;
    for (std::size_t r = 0; r < train.rows(); ++r)
        if (train.is_missing(r, 1)) train_miss += 1.0;
    train_miss /= static_cast<double>(train.rows());
    CHECK(static_cast<double>(miss) / 10000.0 ==
          doctest::Approx(train_miss).epsilon(0.2));

    CHECK(level_tv(train, out, 0) < 0.05);
    // tight at the model's own bin resolution, loose at a finer grid
    CHECK(numeric_tv(train, out, 1, 5) < 0.05);
    CHECK(numeric_tv(train, out, 1, 10) < 0.2);
    CHECK(level_tv(train, out, 2) < 0.05);
}

TEST_CASE("bn handles high-cardinality columns through encoding pools") {
    Rng rng(25);
    std::vector<std::string> levels;
    for (int i = 0; i < 60; ++i) levels.push_back("id" + std::to_string(i));
    DatasetBuilder b(Schema{{categorical_col("id", levels), outcome_col()}});
    for (int i = 0; i < 1200; ++i) {
        auto lvl = static_cast<std::int32_t>(rng.uniform_index(60));
        b.set_level(0, lvl);
        b.set_level(1, rng.bernoulli(lvl < 30 ? 0.85 : 0.15) ? 1 : 0);
        b.end_row();
    }
    Dataset train = b.build();
    BayesNetSynthesizer synth{BnConfig{}, 3};
    synth.fit(train);
    Dataset out = synth.generate(20000, 19);

    double low_pos = 0, low_n = 0, high_pos = 0, high_n = 0;
    for (std::size_t r = 0; r < out.rows(); ++r) {
        std::int32_t lvl = out.level_at(r, 0);
        REQUIRE(lvl >= 0);
        REQUIRE(lvl < 60);
        if (lvl < 30) {
            ++low_n;
            low_pos += out.outcome_at(r);
        } else {
            ++high_n;
            high_pos += out.outcome_at(r);
        }
    }
    REQUIRE(low_n > 0);
    REQUIRE(high_n > 0);
    // association between the encoded group and the outcome survives
    CHECK(low_pos / low_n > high_pos / high_n + 0.3);
}

TEST_CASE("bn generation is deterministic in the seed") {
    Dataset train = mixed_fixture(400, 26);
    BayesNetSynthesizer a{BnConfig{}, 55};
    a.fit(train);
    BayesNetSynthesizer b{BnConfig{}, 55};
    b.fit(train);
    CHECK(csv_text(a.generate(300, 4)) == csv_text(b.generate(300, 4)));
    CHECK(csv_text(a.generate(300, 4)) != csv_text(a.generate(300, 5)));
    BayesNetSynthesizer unfitted{BnConfig{}, 55};
    CHECK_THROWS_AS(unfitted.generate(5, 1), DataError);
}

TEST_CASE("external adapter round-trips through a child process") {
    fs::path dir = make_temp_dir("external_ok");
    write_file(dir / "resample.py", kResamplerScript);

    ExternalConfig cfg;
    cfg.command = "python3 '" + (dir / "resample.py").string() + "'";
    cfg.workdir = (dir / "work").string();
    ExternalSynthesizer synth{cfg};

    Dataset train = mixed_fixture(50, 30);
    synth.fit(train);
    Dataset out = synth.generate(120, 8);
    REQUIRE(out.rows() == 120);
    CHECK(out.provenance() == Provenance::synthetic);
    CHECK(out.schema() == train.schema());
    // cyclic resampler: row i equals train row i % 50
    for (std::size_t r = 0; r < out.rows(); ++r) {
        std::size_t s = r % train.rows();
        CHECK(out.level_at(r, 0) == train.level_at(s, 0));
        CHECK(out.outcome_at(r) == train.outcome_at(s));
    }
}

TEST_CASE("external adapter reports generator failures with stderr") {
    fs::path dir = make_temp_dir("external_fail");
    write_file(dir / "boom.py", "import sys\nsys.stderr.write('generator exploded')\nsys.exit(3)\n");
    ExternalConfig cfg;
    cfg.command = "python3 '" + (dir / "boom.py").string() + "'";
    cfg.workdir = (dir / "work").string();
    ExternalSynthesizer synth{cfg};
    Dataset train = mixed_fixture(30, 31);
    synth.fit(train);
    try {
        synth.generate(10, 1);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        std::string msg = e.what();
        CHECK(msg.find("generator exploded") != std::string::npos);
    }
}

TEST_CASE("external adapter validates row counts and levels") {
    fs::path dir = make_temp_dir("external_rows");
    // Emits one row fewer than requested.
    write_file(dir / "short.py", R"PY(
import csv, json, sys, os
job = sys.argv[1]
req = json.load(open(os.path.join(job, "request.json")))
rows = list(csv.reader(open(os.path.join(job, "train.csv"))))
out = [rows[0]] + [rows[1 + (i % (len(rows) - 1))] for i in range(req["n_prime"] - 1)]
csv.writer(open(os.path.join(job, "synthetic.csv"), "w", newline="")).writerows(out)
)PY");
    ExternalConfig cfg;
    cfg.command = "python3 '" + (dir / "short.py").string() + "'";
    cfg.workdir = (dir / "work").string();
    ExternalSynthesizer synth{cfg};
    Dataset train = mixed_fixture(30, 32);
    synth.fit(train);
    CHECK_THROWS_WITH_AS(synth.generate(10, 1), doctest::Contains("expected 10 rows"),
                         DataError);

    // Emits an undeclared categorical level.
    fs::path dir2 = make_temp_dir("external_levels");
    write_file(dir2 / "newlevel.py", R"PY(
import csv, json, sys, os
job = sys.argv[1]
req = json.load(open(os.path.join(job, "request.json")))
rows = list(csv.reader(open(os.path.join(job, "train.csv"))))
header = rows[0]
row = rows[1][:]
row[0] = "ultraviolet"
out = [header] + [row for _ in range(req["n_prime"])]
csv.writer(open(os.path.join(job, "synthetic.csv"), "w", newline="")).writerows(out)
)PY");
    ExternalConfig strict_cfg;
    strict_cfg.command = "python3 '" + (dir2 / "newlevel.py").string() + "'";
    strict_cfg.workdir = (dir2 / "work").string();
    strict_cfg.strict = true;
    ExternalSynthesizer strict_synth{strict_cfg};
    strict_synth.fit(train);
    CHECK_THROWS_AS(strict_synth.generate(5, 1), DataError);

    ExternalConfig lenient_cfg = strict_cfg;
    lenient_cfg.strict = false;
    ExternalSynthesizer lenient{lenient_cfg};
    lenient.fit(train);
    Dataset out = lenient.generate(5, 1);
    CHECK(out.rows() == 5);
    CHECK(out.schema().at(0).levels.back() == "ultraviolet");
}

TEST_CASE("synthesizer factory wires kinds, names and validation") {
    CHECK(to_string(SynthKind::seq) == "seq");
    CHECK(synth_kind_from_string("bn") == SynthKind::bn);
    CHECK_THROWS_AS(synth_kind_from_string("diffusion"), UsageError);

    SynthesizerSpec seq_spec;
    seq_spec.kind = SynthKind::seq;
    CHECK(make_synthesizer(seq_spec)->name() == "seq");

    SynthesizerSpec bn_spec;
    bn_spec.kind = SynthKind::bn;
    bn_spec.config = BnConfig{};
    CHECK(make_synthesizer(bn_spec)->name() == "bn");

    SynthesizerSpec boot_spec;
    boot_spec.kind = SynthKind::bootstrap;
    boot_spec.config = BootstrapConfig{};
    CHECK(make_synthesizer(boot_spec)->name() == "bootstrap");

    SynthesizerSpec ext_spec;
    ext_spec.kind = SynthKind::external;
    ext_spec.config = ExternalConfig{"true", "/tmp/x", false};
    CHECK(make_synthesizer(ext_spec)->name() == "external");

    SynthesizerSpec mismatched;
    mismatched.kind = SynthKind::bn;
    mismatched.config = SeqConfig{};
    CHECK_THROWS_AS(make_synthesizer(mismatched), DataError);
}

TEST_CASE("all in-process synthesizers keep the schema and fill every row") {
    Dataset train = mixed_fixture(250, 40);
    for (SynthKind kind : {SynthKind::seq, SynthKind::bn, SynthKind::bootstrap}) {
        SynthesizerSpec spec;
        spec.kind = kind;
        spec.seed = 9;
        if (kind == SynthKind::bn) spec.config = BnConfig{};
        if (kind == SynthKind::bootstrap) spec.config = BootstrapConfig{};
        auto synth = make_synthesizer(spec);
        synth->fit(train);
        Dataset out = synth->generate(600, 77);
        REQUIRE(out.rows() == 600);
        CHECK(out.schema().same_shape(train.schema()));
        for (std::size_t r = 0; r < out.rows(); ++r) {
            std::int32_t y = out.outcome_at(r);
            CHECK(y >= 0);
            CHECK(y <= 1);
        }
    }
}
