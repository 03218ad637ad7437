#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rffp/errors.hpp"

namespace rffp {

enum class FeatureSource { HHT26, WPT16, HHT_WPT42, CWT_AVG, WST_AVG };

inline const char* to_string(FeatureSource s) {
    switch (s) {
        case FeatureSource::HHT26: return "HHT26";
        case FeatureSource::WPT16: return "WPT16";
        case FeatureSource::HHT_WPT42: return "HHT_WPT42";
        case FeatureSource::CWT_AVG: return "CWT_AVG";
        case FeatureSource::WST_AVG: return "WST_AVG";
    }
    return "?";
}

/// Named, ordered real features. Values are always finite; a statistic whose
/// defining formula breaks down (zero mean, zero energy, ...) is stored as 0
/// with its flag set. Name order is a frozen contract across runs.
struct FeatureVector {
    std::vector<std::string> names;
    std::vector<double> values;
    std::vector<bool> flags; // true = value substituted by the undefined-statistic policy
    FeatureSource source = FeatureSource::HHT26;

    std::size_t size() const { return values.size(); }
};

/// Concatenation helper preserving name and flag order.
inline FeatureVector concat_features(const FeatureVector& a, const FeatureVector& b, FeatureSource source) {
    if (a.names.size() != a.values.size() || b.names.size() != b.values.size())
        throw invalid_input("concat_features: malformed feature vector");
    FeatureVector out;
    out.source = source;
    out.names = a.names;
    out.names.insert(out.names.end(), b.names.begin(), b.names.end());
    out.values = a.values;
    out.values.insert(out.values.end(), b.values.begin(), b.values.end());
    out.flags = a.flags;
    out.flags.insert(out.flags.end(), b.flags.begin(), b.flags.end());
    return out;
}

} // namespace rffp
