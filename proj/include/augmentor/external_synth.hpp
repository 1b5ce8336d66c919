#pragma once

#include <cstdint>
#include <string>

#include "augmentor/synthesizer.hpp"
#include "augmentor/tabular.hpp"

namespace augmentor {

// Bridges to an out-of-process generator. Each generate() call prepares a
// job directory containing train.csv, schema.json and request.json, runs
//
//   <command> <jobdir>
//
// through the shell with stderr captured to <jobdir>/stderr.txt, then loads
// <jobdir>/synthetic.csv back under the training schema. The adapter checks
// the exit status, the row count, and (in strict mode) rejects rows whose
// categorical values were never declared.
class ExternalSynthesizer final : public Synthesizer {
public:
    explicit ExternalSynthesizer(ExternalConfig config);

    void fit(const Dataset& train) override;
    Dataset generate(std::size_t n, std::uint64_t seed) const override;
    std::string name() const override { return "external"; }

private:
    ExternalConfig config_;
    Dataset train_;
    bool fitted_ = false;
};

} // namespace augmentor
