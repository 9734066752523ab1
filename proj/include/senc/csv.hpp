#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "senc/core.hpp"

namespace senc {

/// Dense class ids 1..m handed out in order of first appearance, with the
/// reverse mapping kept for reporting.
class LabelInterner {
public:
    ClassLabel intern(const std::string& name);
    std::optional<ClassLabel> find(const std::string& name) const;
    /// Throws std::out_of_range for ids never handed out.
    const std::string& name(ClassLabel id) const;
    int size() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; } // [id-1]

private:
    std::vector<std::string> names_;
    std::map<std::string, ClassLabel> ids_;
};

struct LabeledCsv {
    Dataset data;
    LabelInterner labels;
};

/// Parse comma-separated rows: every column but the last is a finite number,
/// the last is the class label (any text). Numbers are parsed
/// locale-independently. Rows must agree on column count; blank lines are
/// skipped. Throws std::runtime_error naming the offending line.
LabeledCsv read_labeled_csv(std::istream& in, bool has_header);
LabeledCsv read_labeled_csv_file(const std::string& path, bool has_header);

/// Same, but all columns are features and no labels are produced.
std::vector<Instance> read_unlabeled_csv(std::istream& in, bool has_header);
std::vector<Instance> read_unlabeled_csv_file(const std::string& path,
                                              bool has_header);

} // namespace senc
