#include "augmentor/synthesizer.hpp"

#include "augmentor/bayes_net.hpp"
#include "augmentor/error.hpp"
#include "augmentor/external_synth.hpp"
#include "augmentor/rng.hpp"
#include "augmentor/seq_tree.hpp"

namespace augmentor {

std::string to_string(SynthKind kind) {
    switch (kind) {
        case SynthKind::seq: return "seq";
        case SynthKind::bn: return "bn";
        case SynthKind::bootstrap: return "bootstrap";
        case SynthKind::external: return "external";
    }
    throw DataError("unknown synthesizer kind");
}

SynthKind synth_kind_from_string(const std::string& s) {
    if (s == "seq") return SynthKind::seq;
    if (s == "bn") return SynthKind::bn;
    if (s == "bootstrap") return SynthKind::bootstrap;
    if (s == "external") return SynthKind::external;
    throw UsageError("unknown synthesizer: " + s +
                     " (expected seq, bn, bootstrap or external)");
}

void SynthesizerSpec::validate() const {
    auto held = [&]() -> SynthKind {
        if (std::holds_alternative<SeqConfig>(config)) return SynthKind::seq;
        if (std::holds_alternative<BnConfig>(config)) return SynthKind::bn;
        if (std::holds_alternative<BootstrapConfig>(config)) return SynthKind::bootstrap;
        return SynthKind::external;
    }();
    if (held != kind)
        throw DataError("synthesizer spec: config does not match kind " + to_string(kind));
}

std::unique_ptr<Synthesizer> make_synthesizer(const SynthesizerSpec& spec) {
    spec.validate();
    switch (spec.kind) {
        case SynthKind::seq:
            return std::make_unique<SeqSynthesizer>(std::get<SeqConfig>(spec.config));
        case SynthKind::bn:
            return std::make_unique<BayesNetSynthesizer>(std::get<BnConfig>(spec.config),
                                                         spec.seed);
        case SynthKind::bootstrap:
            return std::make_unique<BootstrapSynthesizer>();
        case SynthKind::external:
            return std::make_unique<ExternalSynthesizer>(std::get<ExternalConfig>(spec.config));
    }
    throw DataError("unknown synthesizer kind");
}

void BootstrapSynthesizer::fit(const Dataset& train) {
    if (train.rows() == 0) throw DataError("bootstrap: empty training data");
    train_ = train;
    fitted_ = true;
}

Dataset BootstrapSynthesizer::generate(std::size_t n, std::uint64_t seed) const {
    if (!fitted_) throw DataError("bootstrap: generate before fit");
    Rng rng(derive_seed(seed, hash_string_seed("bootstrap_generate")));
    std::vector<std::size_t> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = rng.uniform_index(train_.rows());
    return train_.select(rows, Provenance::resampled);
}

} // namespace augmentor
