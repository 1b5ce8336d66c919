#include "augmentor/external_synth.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "augmentor/error.hpp"
#include "augmentor/tabular_io.hpp"

namespace augmentor {

namespace fs = std::filesystem;

namespace {

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
    if (!out) throw DataError("write failed for " + path.string());
}

std::string stderr_excerpt(const fs::path& path) {
    std::error_code ec;
    if (!fs::exists(path, ec)) return "";
    std::string text = read_text_file(path);
    constexpr std::size_t kMax = 2000;
    if (text.size() > kMax) text = "..." + text.substr(text.size() - kMax);
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    return text;
}

} // namespace

ExternalSynthesizer::ExternalSynthesizer(ExternalConfig config)
    : config_(std::move(config)) {
    if (config_.command.empty()) throw DataError("external: command must not be empty");
    if (config_.workdir.empty()) throw DataError("external: workdir must not be empty");
}

void ExternalSynthesizer::fit(const Dataset& train) {
    if (train.rows() == 0) throw DataError("external: empty training data");
    train_ = train;
    fitted_ = true;
}

Dataset ExternalSynthesizer::generate(std::size_t n, std::uint64_t seed) const {
    if (!fitted_) throw DataError("external: generate before fit");

    fs::path job = fs::path(config_.workdir) /
                   ("job_" + std::to_string(n) + "_" + std::to_string(seed));
    std::error_code ec;
    fs::remove_all(job, ec);
    fs::create_directories(job);

    write_text_file(job / "train.csv", csv_text(train_));
    write_text_file(job / "schema.json", schema_to_json_text(train_.schema()));
    nlohmann::json request{{"n_prime", n}, {"seed", seed}};
    write_text_file(job / "request.json", request.dump(2) + "\n");

    fs::path errfile = job / "stderr.txt";
    std::string cmd = config_.command + " '" + job.string() + "' 2> '" +
                      errfile.string() + "'";
    int status = std::system(cmd.c_str());
    if (status != 0) {
        std::string detail = stderr_excerpt(errfile);
        throw DataError("external: generator exited with status " +
                        std::to_string(status) +
                        (detail.empty() ? "" : ("\n" + detail)));
    }

    fs::path out = job / "synthetic.csv";
    if (!fs::exists(out))
        throw DataError("external: generator produced no synthetic.csv in " + job.string());

    LoadOptions options;
    options.strict = config_.strict;
    LoadReport report = load_csv_text(read_text_file(out), train_.schema(),
                                      options, out.string());
    if (report.dropped_missing_outcome > 0)
        throw DataError("external: synthetic rows with missing outcome");
    if (report.data.rows() != n)
        throw DataError("external: expected " + std::to_string(n) + " rows, got " +
                        std::to_string(report.data.rows()));
    report.data.set_provenance(Provenance::synthetic);
    return report.data;
}

} // namespace augmentor
