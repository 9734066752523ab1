#include "senc/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <stdexcept>

namespace senc {

ClassLabel LabelInterner::intern(const std::string& name) {
    auto [it, inserted] =
        ids_.try_emplace(name, static_cast<ClassLabel>(names_.size() + 1));
    if (inserted) names_.push_back(name);
    return it->second;
}

std::optional<ClassLabel> LabelInterner::find(const std::string& name) const {
    auto it = ids_.find(name);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

const std::string& LabelInterner::name(ClassLabel id) const {
    if (id < 1 || id > size())
        throw std::out_of_range("LabelInterner::name: unknown id " +
                                std::to_string(id));
    return names_[static_cast<std::size_t>(id - 1)];
}

namespace {

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            cells.push_back(strip(line.substr(start)));
            break;
        }
        cells.push_back(strip(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return cells;
}

double parse_number(const std::string& cell, long line_no) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value))
        throw std::runtime_error("csv line " + std::to_string(line_no) +
                                 ": bad number '" + cell + "'");
    return value;
}

template <typename RowFn>
void for_each_row(std::istream& in, bool has_header, RowFn&& fn) {
    std::string line;
    long line_no = 0;
    bool skipped_header = !has_header;
    while (std::getline(in, line)) {
        ++line_no;
        if (strip(line).empty()) continue;
        if (!skipped_header) {
            skipped_header = true;
            continue;
        }
        fn(split_row(line), line_no);
    }
}

} // namespace

LabeledCsv read_labeled_csv(std::istream& in, bool has_header) {
    LabeledCsv out;
    for_each_row(in, has_header, [&](const std::vector<std::string>& cells,
                                     long line_no) {
        if (cells.size() < 2)
            throw std::runtime_error("csv line " + std::to_string(line_no) +
                                     ": need at least one feature and a label");
        if (out.data.dimension == 0)
            out.data.dimension = cells.size() - 1;
        else if (cells.size() - 1 != out.data.dimension)
            throw std::runtime_error("csv line " + std::to_string(line_no) +
                                     ": inconsistent column count");
        Instance x(out.data.dimension);
        for (std::size_t i = 0; i < out.data.dimension; ++i)
            x[i] = parse_number(cells[i], line_no);
        out.data.items.push_back(
            {std::move(x), out.labels.intern(cells.back())});
    });
    if (out.data.empty()) throw std::runtime_error("csv: no data rows");
    return out;
}

LabeledCsv read_labeled_csv_file(const std::string& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("csv: cannot open " + path);
    return read_labeled_csv(in, has_header);
}

std::vector<Instance> read_unlabeled_csv(std::istream& in, bool has_header) {
    std::vector<Instance> items;
    std::size_t dimension = 0;
    for_each_row(in, has_header, [&](const std::vector<std::string>& cells,
                                     long line_no) {
        if (dimension == 0)
            dimension = cells.size();
        else if (cells.size() != dimension)
            throw std::runtime_error("csv line " + std::to_string(line_no) +
                                     ": inconsistent column count");
        Instance x(dimension);
        for (std::size_t i = 0; i < dimension; ++i)
            x[i] = parse_number(cells[i], line_no);
        items.push_back(std::move(x));
    });
    if (items.empty()) throw std::runtime_error("csv: no data rows");
    return items;
}

std::vector<Instance> read_unlabeled_csv_file(const std::string& path,
                                              bool has_header) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("csv: cannot open " + path);
    return read_unlabeled_csv(in, has_header);
}

} // namespace senc
