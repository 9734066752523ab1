#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "senc/csv.hpp"
#include "senc/stream.hpp"

namespace senc {

/// Versioned JSON persistence. Doubles round-trip exactly (shortest
/// round-trip formatting), so save -> load -> save is byte-stable.
///
/// A model file holds a ForestManager plus the textual label names; an
/// engine file additionally holds the stream state (buffer, counters, random
/// generator states) so a run can pause and resume deterministically.

struct SavedModel {
    ForestManager manager;
    std::vector<std::string> label_names; // [id-1]; may be empty
};

void save_model(std::ostream& out, const ForestManager& manager,
                const std::vector<std::string>& label_names = {});
void save_model_file(const std::string& path, const ForestManager& manager,
                     const std::vector<std::string>& label_names = {});

/// Throws std::runtime_error on unknown format tags or versions.
SavedModel load_model(std::istream& in);
SavedModel load_model_file(const std::string& path);

void save_engine(std::ostream& out, const StreamEngine& engine,
                 const std::vector<std::string>& label_names = {});
struct SavedEngine {
    StreamEngine engine;
    std::vector<std::string> label_names;
};
SavedEngine load_engine(std::istream& in);

} // namespace senc
