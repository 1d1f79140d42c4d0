#include "phishgan/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "phishgan/rng.hpp"

namespace phishgan {

std::vector<std::size_t> FoldPlan::fold_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
        if (assignments[i] == fold) out.push_back(i);
    return out;
}

std::vector<std::size_t> FoldPlan::complement_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
        if (assignments[i] != fold) out.push_back(i);
    return out;
}

namespace {

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

std::vector<UrlRecord> load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_csv: empty file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "url,label")
        throw std::runtime_error("load_csv: expected header `url,label` in " + path);

    std::vector<UrlRecord> records;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.rfind(',');
        if (comma == std::string::npos || comma == 0)
            throw std::runtime_error("load_csv: malformed row at line " +
                                     std::to_string(line_no));
        UrlRecord r;
        r.url = line.substr(0, comma);
        const std::string tok = lower(line.substr(comma + 1));
        if (tok == "benign" || tok == "0")
            r.label = UrlLabel::Benign;
        else if (tok == "malicious" || tok == "1")
            r.label = UrlLabel::Malicious;
        else
            throw std::runtime_error("load_csv: unknown label \"" + tok + "\" at line " +
                                     std::to_string(line_no));
        records.push_back(std::move(r));
    }
    return records;
}

void write_csv(const std::string& path, const std::vector<UrlRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out << "url,label\n";
    for (const auto& r : records) {
        std::string url;
        for (char c : r.url)
            if (c == ',')
                url += "%2c";
            else
                url += c;
        out << url << ',' << (r.label == UrlLabel::Benign ? "benign" : "malicious") << '\n';
    }
    if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

FoldPlan stratified_kfold(const std::vector<UrlRecord>& records, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("stratified_kfold: k must be >= 2");
    std::vector<std::size_t> benign, malicious;
    for (std::size_t i = 0; i < records.size(); ++i)
        (records[i].label == UrlLabel::Benign ? benign : malicious).push_back(i);
    if (static_cast<int>(benign.size()) < k || static_cast<int>(malicious.size()) < k)
        throw std::invalid_argument("stratified_kfold: each class needs at least k records");

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignments.assign(records.size(), -1);
    Rng rng(seed);
    // Round-robin after a shuffle keeps per-class fold counts within 1.
    int next = 0;
    for (auto* cls : {&benign, &malicious}) {
        rng.shuffle(*cls);
        for (std::size_t i : *cls) {
            plan.assignments[i] = next;
            next = (next + 1) % k;
        }
    }
    return plan;
}

bool matches_malicious_rule(const std::string& url) {
    const std::string u = lower(url);
    if (u.find('@') != std::string::npos) return true;

    // Host = text between "://" (or start) and the first '/'.
    std::size_t host_begin = 0;
    const auto scheme = u.find("://");
    if (scheme != std::string::npos) host_begin = scheme + 3;
    const auto host_end = u.find('/', host_begin);
    const std::string host =
        u.substr(host_begin, host_end == std::string::npos ? std::string::npos
                                                           : host_end - host_begin);

    // IP-literal host.
    bool ip_like = !host.empty();
    int dots = 0;
    for (char c : host) {
        if (c == '.')
            ++dots;
        else if (!std::isdigit(static_cast<unsigned char>(c)))
            ip_like = false;
    }
    if (ip_like && dots == 3) return true;

    static const char* kHomoglyphs[] = {"paypa1", "g00gle", "amaz0n", "micr0soft",
                                        "faceb00k", "app1e", "netf1ix", "tw1tter"};
    for (const char* t : kHomoglyphs)
        if (host.find(t) != std::string::npos) return true;

    return std::count(host.begin(), host.end(), '-') >= 3;
}

namespace {

const char* kCleanBrands[] = {"example", "mylibrary", "openmaps", "newsdaily", "shoponline",
                              "weatherhub", "travelplan", "codeforge", "artgallery",
                              "greenfarm", "bookclub", "musicbox", "photolab", "cityguide"};
const char* kCleanWords[] = {"home",  "login", "search", "account", "docs",   "blog",
                             "store", "view",  "item",   "update",  "images", "media",
                             "help",  "about", "news",   "files"};
const char* kTlds[] = {"com", "net", "org", "io", "info"};

std::string random_path(Rng& rng) {
    std::string path;
    const int segs = static_cast<int>(rng.below(3));
    for (int s = 0; s < segs; ++s) {
        path += '/';
        path += kCleanWords[rng.below(std::size(kCleanWords))];
    }
    if (rng.below(3) == 0) {
        path += "/page";
        path += std::to_string(rng.below(90) + 10);
    }
    if (path.empty()) path = "/";
    return path;
}

std::string benign_url(Rng& rng) {
    std::string host = kCleanBrands[rng.below(std::size(kCleanBrands))];
    if (rng.below(4) == 0) {
        host += '-';
        host += kCleanWords[rng.below(std::size(kCleanWords))];
    }
    host += '.';
    host += kTlds[rng.below(std::size(kTlds))];
    std::string url = rng.below(2) ? "https://" : "http://";
    url += host + random_path(rng);
    return url;
}

std::string malicious_url(Rng& rng) {
    const char* kHomoglyphs[] = {"paypa1", "g00gle", "amaz0n", "micr0soft",
                                 "faceb00k", "app1e", "netf1ix", "tw1tter"};
    std::string url = rng.below(2) ? "https://" : "http://";
    std::string host;
    switch (rng.below(4)) {
        case 0:  // credential trick: user@host
            url += kCleanBrands[rng.below(std::size(kCleanBrands))];
            url += ".com@";
            host = kCleanBrands[rng.below(std::size(kCleanBrands))];
            host += '.';
            host += kTlds[rng.below(std::size(kTlds))];
            break;
        case 1:  // IP-literal host
            for (int i = 0; i < 4; ++i) {
                if (i) host += '.';
                host += std::to_string(rng.below(254) + 1);
            }
            break;
        case 2:  // homoglyph brand token
            host = kHomoglyphs[rng.below(std::size(kHomoglyphs))];
            if (rng.below(2)) {
                host += '-';
                host += kCleanWords[rng.below(std::size(kCleanWords))];
            }
            host += '.';
            host += kTlds[rng.below(std::size(kTlds))];
            break;
        default:  // hyphen-stuffed host
            host = kCleanBrands[rng.below(std::size(kCleanBrands))];
            for (int i = 0; i < 3; ++i) {
                host += '-';
                host += kCleanWords[rng.below(std::size(kCleanWords))];
            }
            host += '.';
            host += kTlds[rng.below(std::size(kTlds))];
            break;
    }
    url += host + random_path(rng);
    return url;
}

}  // namespace

std::vector<UrlRecord> synth_corpus(int n, std::uint64_t seed) {
    if (n <= 0) throw std::invalid_argument("synth_corpus: n must be positive");
    if (n % 2 != 0) throw std::invalid_argument("synth_corpus: n must be even");
    Rng rng(seed);
    std::vector<UrlRecord> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n / 2; ++i) {
        std::string u = benign_url(rng);
        while (matches_malicious_rule(u)) u = benign_url(rng);
        out.push_back({std::move(u), UrlLabel::Benign});
    }
    for (int i = 0; i < n / 2; ++i) {
        std::string u = malicious_url(rng);
        while (!matches_malicious_rule(u)) u = malicious_url(rng);
        out.push_back({std::move(u), UrlLabel::Malicious});
    }
    rng.shuffle(out);
    return out;
}

}  // namespace phishgan
