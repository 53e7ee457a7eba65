#pragma once

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "uqt/types.hpp"

namespace uqt {

struct Dataset {
    SampleSet samples;
    LabelVector labels;
};

namespace detail {

/// 17 significant digits: lossless round-trip for doubles.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace detail

/// Writes the prediction CSV: header `input_id,sample_idx,label,p0,p1[,...]`,
/// one row per (input, sample), inputs in set order.
inline void write_prediction_file(std::ostream& out, const SampleSet& set,
                                  const LabelVector& labels) {
    if (labels.size() != set.n_inputs()) {
        throw ValidationError("LengthMismatch: labels vs sample set");
    }
    out << "input_id,sample_idx,label";
    for (std::size_t c = 0; c < set.n_classes(); ++c) out << ",p" << c;
    out << "\n";
    for (std::size_t i = 0; i < set.n_inputs(); ++i) {
        for (std::size_t t = 0; t < set.n_samples(); ++t) {
            out << set.input_ids()[i] << ',' << t << ',' << labels.labels[i];
            for (std::size_t c = 0; c < set.n_classes(); ++c) {
                out << ',' << detail::format_double(set.prob(i, t, c));
            }
            out << "\n";
        }
    }
}

inline void write_prediction_file(const std::string& path, const SampleSet& set,
                                  const LabelVector& labels) {
    std::ofstream out(path);
    if (!out) throw IoError("IoError: cannot open '" + path + "' for writing");
    write_prediction_file(out, set, labels);
    out.flush();
    if (!out) throw IoError("IoError: write failed for '" + path + "'");
}

/// Parses the prediction CSV back into a validated SampleSet plus labels.
/// Inputs appear in first-occurrence order; every input must have exactly T
/// rows with sample_idx 0..T-1 and a constant label.
inline Dataset read_prediction_file(std::istream& in, const std::string& origin = "<stream>") {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) {
        throw ParseError("ParseError: " + origin + " is empty");
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = detail::split_csv_line(line);
    if (header.size() < 5 || header[0] != "input_id" || header[1] != "sample_idx" ||
        header[2] != "label") {
        throw ParseError("ParseError: " + origin + " line 1: bad header '" + line + "'");
    }
    const std::size_t n_classes = header.size() - 3;
    for (std::size_t c = 0; c < n_classes; ++c) {
        if (header[3 + c] != "p" + std::to_string(c)) {
            throw ParseError("ParseError: " + origin + " line 1: expected column p" +
                             std::to_string(c));
        }
    }

    struct InputRows {
        int label = -1;
        std::vector<std::vector<double>> rows;        // indexed by sample_idx
        std::vector<bool> seen;
    };
    std::vector<std::string> order;
    std::map<std::string, InputRows> inputs;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        const std::string where = origin + " line " + std::to_string(line_no);
        if (fields.size() != 3 + n_classes) {
            throw ParseError("ParseError: " + where + ": expected " +
                             std::to_string(3 + n_classes) + " fields, got " +
                             std::to_string(fields.size()));
        }
        char* end = nullptr;
        errno = 0;
        const long sample_idx = std::strtol(fields[1].c_str(), &end, 10);
        if (errno != 0 || end == fields[1].c_str() || *end != '\0' || sample_idx < 0) {
            throw ParseError("ParseError: " + where + ": bad sample_idx '" + fields[1] + "'");
        }
        const long label = std::strtol(fields[2].c_str(), &end, 10);
        if (end == fields[2].c_str() || *end != '\0' || (label != 0 && label != 1)) {
            throw ParseError("ParseError: " + where + ": label must be 0 or 1, got '" +
                             fields[2] + "'");
        }
        std::vector<double> row(n_classes);
        for (std::size_t c = 0; c < n_classes; ++c) {
            errno = 0;
            row[c] = std::strtod(fields[3 + c].c_str(), &end);
            if (errno != 0 || end == fields[3 + c].c_str() || *end != '\0') {
                throw ParseError("ParseError: " + where + ": bad probability '" +
                                 fields[3 + c] + "'");
            }
        }
        auto [it, inserted] = inputs.try_emplace(fields[0]);
        if (inserted) order.push_back(fields[0]);
        InputRows& rec = it->second;
        if (rec.label == -1) {
            rec.label = static_cast<int>(label);
        } else if (rec.label != label) {
            throw ParseError("ParseError: " + where + ": label changes within input '" +
                             fields[0] + "'");
        }
        const auto idx = static_cast<std::size_t>(sample_idx);
        if (idx >= rec.rows.size()) {
            rec.rows.resize(idx + 1);
            rec.seen.resize(idx + 1, false);
        }
        if (rec.seen[idx]) {
            throw ParseError("ParseError: " + where + ": duplicate sample_idx " +
                             std::to_string(idx) + " for input '" + fields[0] + "'");
        }
        rec.rows[idx] = std::move(row);
        rec.seen[idx] = true;
    }
    if (order.empty()) throw ValidationError("EmptyInput: " + origin + " has no data rows");

    const std::size_t t_samples = inputs.at(order.front()).rows.size();
    std::vector<double> probs;
    probs.reserve(order.size() * t_samples * n_classes);
    LabelVector labels;
    labels.labels.reserve(order.size());
    for (const auto& id : order) {
        const InputRows& rec = inputs.at(id);
        if (rec.rows.size() != t_samples) {
            throw ValidationError("ValidationError: input '" + id + "' has " +
                                  std::to_string(rec.rows.size()) + " samples, expected " +
                                  std::to_string(t_samples));
        }
        for (std::size_t k = 0; k < t_samples; ++k) {
            if (!rec.seen[k]) {
                throw ValidationError("ValidationError: input '" + id + "' missing sample_idx " +
                                      std::to_string(k));
            }
            probs.insert(probs.end(), rec.rows[k].begin(), rec.rows[k].end());
        }
        labels.labels.push_back(rec.label);
    }
    const std::size_t n_inputs = order.size();
    SampleSet set = validate_sample_set(std::move(probs), n_inputs, t_samples, n_classes,
                                        std::move(order));
    return {std::move(set), std::move(labels)};
}

inline Dataset read_prediction_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("IoError: cannot open '" + path + "' for reading");
    return read_prediction_file(in, path);
}

}  // namespace uqt
