#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace phishgan {

enum class UrlLabel : int { Benign = 0, Malicious = 1 };

struct UrlRecord {
    std::string url;
    UrlLabel label = UrlLabel::Benign;
};

// Stratified fold assignment; deterministic per seed.
struct FoldPlan {
    int k = 5;
    std::uint64_t seed = 0;
    std::vector<int> assignments;  // record index -> fold id

    std::vector<std::size_t> fold_indices(int fold) const;
    std::vector<std::size_t> complement_indices(int fold) const;
};

// CSV with header `url,label`; labels are {benign,0}/{malicious,1},
// case-insensitive. Commas inside URLs must be percent-encoded.
std::vector<UrlRecord> load_csv(const std::string& path);
void write_csv(const std::string& path, const std::vector<UrlRecord>& records);

FoldPlan stratified_kfold(const std::vector<UrlRecord>& records, int k, std::uint64_t seed);

// Synthetic labeled corpus: n/2 benign, n/2 malicious. Malicious URLs carry at
// least one planted tell (an @ credential trick, an IP-literal host, a
// homoglyph brand token, or a host with 3+ hyphens), so a rule oracle can
// recompute every label.
std::vector<UrlRecord> synth_corpus(int n, std::uint64_t seed);

// The tell rule the synthetic generator plants; usable as a label oracle.
bool matches_malicious_rule(const std::string& url);

}  // namespace phishgan
