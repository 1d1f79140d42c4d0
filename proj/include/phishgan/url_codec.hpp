#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace phishgan {

inline constexpr int kUrlLen = 200;
inline constexpr int kVocabSize = 67;
inline constexpr int kPadIndex = 66;

// Fixed 67-symbol character dictionary: a-z (0-25), 0-9 (26-35), then 30
// URL punctuation symbols (36-65) and PAD (66).
class Vocabulary {
public:
    Vocabulary();
    int size() const { return kVocabSize; }
    // PAD index for characters outside the dictionary.
    int index_of(char c) const;
    char symbol(int index) const;

private:
    std::array<char, kVocabSize> symbols_;
    std::array<int, 256> index_;
};

const Vocabulary& vocabulary();

struct UrlMatrix {
    // Row-major [kUrlLen x kVocabSize]; every row one-hot.
    std::vector<double> data;
    std::optional<int> label;  // 0 = benign, 1 = malicious

    double at(int row, int col) const { return data[static_cast<size_t>(row) * kVocabSize + col]; }
};

// Lowercases, truncates at 200 characters, pads with PAD one-hots; characters
// outside the dictionary map to PAD. Empty input is rejected.
UrlMatrix encode_url(const std::string& url, const Vocabulary& vocab = vocabulary());

// Per-row argmax decode of any real-valued 200x67 matrix. Trailing PADs are
// stripped; interior PADs render as U+00B7.
std::string decode_matrix(const std::vector<double>& matrix,
                          const Vocabulary& vocab = vocabulary());

}  // namespace phishgan
