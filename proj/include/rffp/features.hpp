#pragma once

#include <string>
#include <vector>

#include "rffp/errors.hpp"
#include "rffp/feature_vector.hpp"
#include "rffp/hht.hpp"
#include "rffp/stats.hpp"
#include "rffp/wavelet.hpp"

namespace rffp {

/// 16 features from the two-level packet tree: standard deviation, variance,
/// peak-to-peak and Shannon entropy of each of aa, ad, da, dd, in that order.
inline FeatureVector wpt_features(const WptPackets& packets) {
    const std::pair<const char*, const std::vector<double>*> parts[] = {
        {"aa", &packets.aa}, {"ad", &packets.ad}, {"da", &packets.da}, {"dd", &packets.dd}};
    // Positions of std, variance, peak-to-peak, entropy in stat_summary order.
    const std::size_t picks[] = {2, 3, 8, 10};

    FeatureVector out;
    out.source = FeatureSource::WPT16;
    for (const auto& [tag, seq] : parts) {
        if (seq->empty()) throw invalid_input("wpt_features: empty packet");
        const auto st = stat_summary(*seq);
        for (std::size_t p : picks) {
            out.names.push_back(std::string(tag) + "_" + st.names[p]);
            out.values.push_back(st.values[p]);
            out.flags.push_back(st.flags[p]);
        }
    }
    return out;
}

/// 42 features: the 26 HHT features followed by the 16 WPT features, in a
/// frozen global name order.
inline FeatureVector assemble_hht_wpt(const Signal& s, const EmdConfig& cfg = {}) {
    check_signal(s, "assemble_hht_wpt");
    if (s.samples.size() < 16) throw invalid_input("assemble_hht_wpt: need at least 16 samples");
    const auto hht = hht_features(s, cfg);
    const auto wpt = wpt_features(wpt_two_level(s));
    return concat_features(hht, wpt, FeatureSource::HHT_WPT42);
}

} // namespace rffp
