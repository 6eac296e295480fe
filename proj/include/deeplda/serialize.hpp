#pragma once

#include <filesystem>
#include <string>

#include "deeplda/lda.hpp"
#include "deeplda/network.hpp"
#include "deeplda/pipeline.hpp"
#include "deeplda/train.hpp"

namespace deeplda {

// Models are stored as JSON. Doubles are written in shortest round-trip form,
// so save followed by load reproduces every weight exactly. Adam moments are
// not stored; a loaded network starts with a fresh optimizer state.

std::string network_to_json(const Network& net, const TrainConfig* config = nullptr);
Network network_from_json(const std::string& text);

std::string train_config_to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const std::string& text);

std::string lda_to_json(const LdaModel& model);
LdaModel lda_from_json(const std::string& text);

/// Writes `dir/phase1.json`, `dir/phase2.json` and `dir/manifest.json`.
/// `extra_manifest` (a JSON object, may be "{}") is merged into the manifest.
void save_two_phase(const TwoPhaseModel& model, const std::filesystem::path& dir,
                    const std::string& extra_manifest = "{}");
TwoPhaseModel load_two_phase(const std::filesystem::path& dir);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace deeplda
