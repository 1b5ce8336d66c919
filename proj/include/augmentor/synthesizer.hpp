#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "augmentor/tabular.hpp"

namespace augmentor {

struct SeqConfig {
    int max_depth = 8;
    int min_leaf = 5;
    // empty: schema order with the outcome moved last
    std::vector<std::string> column_order;
};

struct BnConfig {
    std::size_t numeric_bins = 5;
    int max_parents = 3;
    int restarts = 3;
    double dirichlet_alpha = 1.0;
    double encoder_smoothing = 20.0;  // high-cardinality columns
};

struct BootstrapConfig {};

struct ExternalConfig {
    std::string command;   // invoked as: <command> <workdir>
    std::string workdir;   // scratch root; a fresh subdirectory is used per call
    bool strict = false;   // reject synthetic rows with undeclared levels
};

enum class SynthKind { seq, bn, bootstrap, external };

std::string to_string(SynthKind kind);
SynthKind synth_kind_from_string(const std::string& s);

struct SynthesizerSpec {
    SynthKind kind = SynthKind::seq;
    std::uint64_t seed = 0;  // used by fit (e.g. structure-search restarts)
    std::variant<SeqConfig, BnConfig, BootstrapConfig, ExternalConfig> config = SeqConfig{};

    void validate() const;  // kind must match the held config alternative
    std::string tag() const { return to_string(kind); }
};

class Synthesizer {
public:
    virtual ~Synthesizer() = default;
    virtual void fit(const Dataset& train) = 0;
    // Generates n rows under the training schema; deterministic in
    // (fit data, config, seed, n).
    virtual Dataset generate(std::size_t n, std::uint64_t seed) const = 0;
    virtual std::string name() const = 0;
};

std::unique_ptr<Synthesizer> make_synthesizer(const SynthesizerSpec& spec);

// i.i.d. resampling with replacement; provenance `resampled`.
class BootstrapSynthesizer final : public Synthesizer {
public:
    void fit(const Dataset& train) override;
    Dataset generate(std::size_t n, std::uint64_t seed) const override;
    std::string name() const override { return "bootstrap"; }

private:
    Dataset train_;
    bool fitted_ = false;
};

} // namespace augmentor
