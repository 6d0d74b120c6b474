#include "trialset.hpp"

#include <algorithm>
#include <string>

#include "error.hpp"

namespace fz {

std::size_t TrialSet::sample_count() const {
    return trials.empty() ? 0 : trials.front().data.cols();
}

void TrialSet::validate() const {
    const std::size_t samples = sample_count();
    for (std::size_t i = 0; i < trials.size(); ++i) {
        const Trial& t = trials[i];
        if (t.data.rows() != channel_count) {
            throw ShapeError("trial " + std::to_string(i) + " has " +
                             std::to_string(t.data.rows()) + " channels, set declares " +
                             std::to_string(channel_count));
        }
        if (t.data.cols() != samples) {
            throw ShapeError("trial " + std::to_string(i) + " has " +
                             std::to_string(t.data.cols()) + " samples, expected " +
                             std::to_string(samples));
        }
        if (t.label < 0 || static_cast<std::size_t>(t.label) >= class_names.size()) {
            throw DomainError("trial " + std::to_string(i) + " label " +
                              std::to_string(t.label) + " outside [0," +
                              std::to_string(class_names.size()) + ")");
        }
        if (!all_finite(t.data)) {
            throw NumericError("trial " + std::to_string(i) + " contains non-finite samples");
        }
    }
}

std::vector<std::string> TrialSet::subject_ids() const {
    std::vector<std::string> ids;
    for (const Trial& t : trials) {
        if (std::find(ids.begin(), ids.end(), t.subject_id) == ids.end()) {
            ids.push_back(t.subject_id);
        }
    }
    return ids;
}

std::vector<std::string> default_class_names(std::size_t n) {
    std::vector<std::string> names;
    names.reserve(n);
    for (std::size_t i = 0; i < n; ++i) names.push_back("class" + std::to_string(i));
    return names;
}

} // namespace fz
