#include "phishgan/url_codec.hpp"

#include <cctype>
#include <stdexcept>

namespace phishgan {

namespace {
// 30 printable specials; index 66 is PAD and has no printable symbol.
constexpr const char kSpecials[] = "-._~:/?#[]@!$&'()*+,;=%\"<>\\^{}";
}  // namespace

Vocabulary::Vocabulary() {
    int i = 0;
    for (char c = 'a'; c <= 'z'; ++c) symbols_[i++] = c;
    for (char c = '0'; c <= '9'; ++c) symbols_[i++] = c;
    for (const char* p = kSpecials; *p; ++p) symbols_[i++] = *p;
    symbols_[kPadIndex] = '\0';
    if (i != kPadIndex) throw std::logic_error("vocabulary: bad symbol count");
    index_.fill(kPadIndex);
    for (int j = 0; j < kPadIndex; ++j)
        index_[static_cast<unsigned char>(symbols_[j])] = j;
}

int Vocabulary::index_of(char c) const { return index_[static_cast<unsigned char>(c)]; }

char Vocabulary::symbol(int index) const {
    if (index < 0 || index >= kVocabSize)
        throw std::out_of_range("vocabulary: index out of range");
    return symbols_[static_cast<size_t>(index)];
}

const Vocabulary& vocabulary() {
    static const Vocabulary v;
    return v;
}

UrlMatrix encode_url(const std::string& url, const Vocabulary& vocab) {
    if (url.empty()) throw std::invalid_argument("encode_url: empty URL");
    UrlMatrix m;
    m.data.assign(static_cast<size_t>(kUrlLen) * kVocabSize, 0.0);
    for (int row = 0; row < kUrlLen; ++row) {
        int col = kPadIndex;
        if (row < static_cast<int>(url.size())) {
            const char c =
                static_cast<char>(std::tolower(static_cast<unsigned char>(url[row])));
            col = vocab.index_of(c);
        }
        m.data[static_cast<size_t>(row) * kVocabSize + col] = 1.0;
    }
    return m;
}

std::string decode_matrix(const std::vector<double>& matrix, const Vocabulary& vocab) {
    if (matrix.size() != static_cast<size_t>(kUrlLen) * kVocabSize)
        throw std::invalid_argument("decode_matrix: expected a 200x67 matrix");
    std::vector<int> picks(kUrlLen);
    for (int row = 0; row < kUrlLen; ++row) {
        const double* r = matrix.data() + static_cast<size_t>(row) * kVocabSize;
        int best = 0;
        for (int c = 1; c < kVocabSize; ++c)
            if (r[c] > r[best]) best = c;  // ties keep the lowest index
        picks[row] = best;
    }
    int end = kUrlLen;
    while (end > 0 && picks[end - 1] == kPadIndex) --end;
    std::string out;
    for (int row = 0; row < end; ++row) {
        if (picks[row] == kPadIndex)
            out += "·";
        else
            out += vocab.symbol(picks[row]);
    }
    return out;
}

}  // namespace phishgan
