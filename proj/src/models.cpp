#include "phishgan/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace phishgan {

namespace {

constexpr double kLeakySlope = 0.2;
constexpr double kInitStd = 0.02;

Tensor gaussian_init(std::vector<int> shape, Rng& rng) {
    std::int64_t n = 1;
    for (int d : shape) n *= d;
    std::vector<double> data(static_cast<size_t>(n));
    for (auto& v : data) v = rng.normal(0.0, kInitStd);
    Tensor t = Tensor::from(std::move(shape), std::move(data), true);
    return t;
}

ConvBlock make_conv_block(int c_in, int c_out, int stride, bool transposed, Rng& rng) {
    ConvBlock blk;
    blk.spec.kind = transposed ? LayerKind::Conv1dTransposed : LayerKind::Conv1d;
    blk.spec.kernel = 3;
    blk.spec.stride = stride;
    blk.spec.pad = 1;
    blk.spec.output_pad = transposed ? 1 : 0;
    blk.spec.in_features = c_in;
    blk.spec.out_features = c_out;
    blk.w = transposed ? gaussian_init({c_in, c_out, 3}, rng)
                       : gaussian_init({c_out, c_in, 3}, rng);
    blk.b = Tensor::zeros({c_out}, true);
    blk.gamma = Tensor::full({c_out}, 1.0, true);
    blk.beta = Tensor::zeros({c_out}, true);
    blk.stats.mean.assign(static_cast<size_t>(c_out), 0.0);
    blk.stats.var.assign(static_cast<size_t>(c_out), 1.0);
    return blk;
}

Tensor run_block(ConvBlock& blk, const Tensor& x, bool training, bool update_stats = true) {
    Tensor y = blk.spec.kind == LayerKind::Conv1dTransposed
                   ? conv1d_transposed(x, blk.w, blk.b, blk.spec.stride, blk.spec.pad,
                                       blk.spec.output_pad)
                   : conv1d(x, blk.w, blk.b, blk.spec.stride, blk.spec.pad);
    y = batchnorm(y, blk.gamma, blk.beta, blk.stats, training, 0.9, 1e-5, update_stats);
    return leaky_relu(y, kLeakySlope);
}

void collect_block(std::vector<Tensor>& out, ConvBlock& blk) {
    out.push_back(blk.w);
    out.push_back(blk.b);
    out.push_back(blk.gamma);
    out.push_back(blk.beta);
}

}  // namespace

Tensor GeneratorNet::forward(const Tensor& condition, bool training) {
    Tensor h = condition;
    for (auto& blk : encoder) h = run_block(blk, h, training);
    for (auto& blk : decoder) h = run_block(blk, h, training);
    h = conv1d(h, out_w, out_b, out_spec.stride, out_spec.pad);
    return sigmoid(h);
}

std::vector<Tensor> GeneratorNet::parameters() {
    std::vector<Tensor> out;
    for (auto& blk : encoder) collect_block(out, blk);
    for (auto& blk : decoder) collect_block(out, blk);
    out.push_back(out_w);
    out.push_back(out_b);
    return out;
}

std::int64_t GeneratorNet::parameter_count() {
    std::int64_t n = 0;
    for (auto& t : parameters()) n += t.size();
    return n;
}

DiscriminatorNet::Output DiscriminatorNet::forward(const Tensor& x, bool training,
                                                   bool update_stats) {
    Tensor h = x;
    for (auto& blk : conv) h = run_block(blk, h, training, update_stats);
    h = flatten(h);
    h = leaky_relu(dense(h, fc1_w, fc1_b), kLeakySlope);
    h = leaky_relu(dense(h, fc2_w, fc2_b), kLeakySlope);
    Output out;
    out.class_probs = softmax_rows(dense(h, class_w, class_b));
    out.adv_score = dense(h, adv_w, adv_b);
    return out;
}

std::vector<Tensor> DiscriminatorNet::parameters() {
    std::vector<Tensor> out;
    for (auto& blk : conv) collect_block(out, blk);
    for (Tensor* t : {&fc1_w, &fc1_b, &fc2_w, &fc2_b, &class_w, &class_b, &adv_w, &adv_b})
        out.push_back(*t);
    return out;
}

std::int64_t DiscriminatorNet::parameter_count() {
    std::int64_t n = 0;
    for (auto& t : parameters()) n += t.size();
    return n;
}

GeneratorNet build_generator(std::uint64_t seed) {
    Rng rng(seed);
    GeneratorNet g;
    const int enc[] = {32, 32, 64, 64, 128, 128};
    int c_in = kVocabSize + 3;  // 67 one-hot + 1 noise + 2 label channels
    for (int i = 0; i < 6; ++i) {
        g.encoder.push_back(make_conv_block(c_in, enc[i], i % 2 == 1 ? 2 : 1, false, rng));
        c_in = enc[i];
    }
    const int dec[] = {128, 64, 32};
    for (int i = 0; i < 3; ++i) {
        g.decoder.push_back(make_conv_block(c_in, dec[i], 2, true, rng));
        c_in = dec[i];
    }
    g.out_spec.kind = LayerKind::Conv1d;
    g.out_spec.kernel = 3;
    g.out_spec.stride = 1;
    g.out_spec.pad = 1;
    g.out_spec.in_features = c_in;
    g.out_spec.out_features = kVocabSize;
    g.out_w = gaussian_init({kVocabSize, c_in, 3}, rng);
    g.out_b = Tensor::zeros({kVocabSize}, true);
    return g;
}

DiscriminatorNet build_discriminator(std::uint64_t seed) {
    Rng rng(seed);
    DiscriminatorNet d;
    const int feats[] = {16, 16, 32, 32, 128, 128};
    int c_in = kVocabSize;
    for (int i = 0; i < 6; ++i) {
        d.conv.push_back(make_conv_block(c_in, feats[i], i % 2 == 1 ? 2 : 1, false, rng));
        c_in = feats[i];
    }
    const int flat = 128 * 25;
    d.fc1_w = gaussian_init({256, flat}, rng);
    d.fc1_b = Tensor::zeros({256}, true);
    d.fc2_w = gaussian_init({64, 256}, rng);
    d.fc2_b = Tensor::zeros({64}, true);
    d.class_w = gaussian_init({2, 64}, rng);
    d.class_b = Tensor::zeros({2}, true);
    d.adv_w = gaussian_init({1, 64}, rng);
    d.adv_b = Tensor::zeros({1}, true);
    return d;
}

std::vector<double> gaussian_smooth(const std::vector<double>& signal, double sigma) {
    const int radius = static_cast<int>(std::ceil(4.0 * sigma));
    std::vector<double> kernel(static_cast<size_t>(2 * radius + 1));
    for (int t = -radius; t <= radius; ++t)
        kernel[static_cast<size_t>(t + radius)] = std::exp(-0.5 * (t * t) / (sigma * sigma));
    const int n = static_cast<int>(signal.size());
    std::vector<double> out(signal.size());
    for (int i = 0; i < n; ++i) {
        double acc = 0.0, wsum = 0.0;
        for (int t = -radius; t <= radius; ++t) {
            const int j = i + t;
            if (j < 0 || j >= n) continue;  // renormalize at the edges
            const double w = kernel[static_cast<size_t>(t + radius)];
            acc += w * signal[static_cast<size_t>(j)];
            wsum += w;
        }
        out[static_cast<size_t>(i)] = acc / wsum;
    }
    return out;
}

Tensor batch_to_tensor(const std::vector<const UrlMatrix*>& batch) {
    const int b = static_cast<int>(batch.size());
    std::vector<double> data(static_cast<size_t>(b) * kVocabSize * kUrlLen);
    for (int i = 0; i < b; ++i)
        for (int c = 0; c < kVocabSize; ++c)
            for (int p = 0; p < kUrlLen; ++p)
                data[(static_cast<size_t>(i) * kVocabSize + c) * kUrlLen + p] =
                    batch[static_cast<size_t>(i)]->at(p, c);
    return Tensor::from({b, kVocabSize, kUrlLen}, std::move(data));
}

std::vector<double> tensor_to_matrix(const Tensor& t, int sample) {
    if (t.shape().size() != 3 || t.shape()[1] != kVocabSize || t.shape()[2] != kUrlLen)
        throw std::invalid_argument("tensor_to_matrix: expected [B, 67, 200]");
    std::vector<double> m(static_cast<size_t>(kUrlLen) * kVocabSize);
    for (int p = 0; p < kUrlLen; ++p)
        for (int c = 0; c < kVocabSize; ++c)
            m[static_cast<size_t>(p) * kVocabSize + c] =
                t.data()[(static_cast<size_t>(sample) * kVocabSize + c) * kUrlLen + p];
    return m;
}

Tensor make_condition_input(const std::vector<const UrlMatrix*>& batch,
                            const std::vector<int>& labels, Rng& noise_rng) {
    if (batch.empty()) throw std::invalid_argument("condition input: empty batch");
    if (labels.size() != batch.size())
        throw std::invalid_argument("condition input: label count mismatch");
    const int b = static_cast<int>(batch.size());
    Tensor x = batch_to_tensor(batch);

    std::vector<double> noise(static_cast<size_t>(b) * kUrlLen);
    for (int i = 0; i < b; ++i) {
        std::vector<double> raw(kUrlLen);
        for (auto& v : raw) v = noise_rng.uniform();
        auto smooth = gaussian_smooth(raw);
        std::copy(smooth.begin(), smooth.end(), noise.begin() + static_cast<long>(i) * kUrlLen);
    }
    Tensor zeta = Tensor::from({b, 1, kUrlLen}, std::move(noise));

    std::vector<double> lab(static_cast<size_t>(b) * 2 * kUrlLen, 0.0);
    for (int i = 0; i < b; ++i) {
        const int y = labels[static_cast<size_t>(i)];
        if (y != 0 && y != 1) throw std::invalid_argument("condition input: label not in {0,1}");
        std::fill_n(lab.begin() + (static_cast<long>(i) * 2 + y) * kUrlLen, kUrlLen, 1.0);
    }
    Tensor y = Tensor::from({b, 2, kUrlLen}, std::move(lab));

    return concat_channels({x, zeta, y});
}

std::vector<double> generate(GeneratorNet& g, const UrlMatrix& x, int label,
                             std::uint64_t seed) {
    NoGradGuard ng;
    Rng rng(seed);
    Tensor cond = make_condition_input({&x}, {label}, rng);
    Tensor out = g.forward(cond, /*training=*/false);
    return tensor_to_matrix(out, 0);
}

Detection detect(DiscriminatorNet& d, const std::vector<double>& matrix) {
    if (matrix.size() != static_cast<size_t>(kUrlLen) * kVocabSize)
        throw std::invalid_argument("detect: expected a 200x67 matrix");
    NoGradGuard ng;
    UrlMatrix m;
    m.data = matrix;
    Tensor x = batch_to_tensor({&m});
    auto out = d.forward(x, /*training=*/false);
    Detection det;
    det.p_benign = out.class_probs.data()[0];
    det.p_malicious = out.class_probs.data()[1];
    det.adv_score = out.adv_score.data()[0];
    det.realness = std::clamp((det.adv_score + 1.0) / 2.0, 0.0, 1.0);
    det.predicted_class = det.p_malicious > det.p_benign ? 1 : 0;
    det.predicted_real = det.adv_score >= 0.0;
    return det;
}

std::vector<Detection> detect_batch(DiscriminatorNet& d,
                                    const std::vector<const UrlMatrix*>& batch) {
    if (batch.empty()) return {};
    NoGradGuard ng;
    Tensor x = batch_to_tensor(batch);
    auto out = d.forward(x, /*training=*/false);
    std::vector<Detection> dets(batch.size());
    for (size_t i = 0; i < batch.size(); ++i) {
        Detection& det = dets[i];
        det.p_benign = out.class_probs.data()[2 * i];
        det.p_malicious = out.class_probs.data()[2 * i + 1];
        det.adv_score = out.adv_score.data()[i];
        det.realness = std::clamp((det.adv_score + 1.0) / 2.0, 0.0, 1.0);
        det.predicted_class = det.p_malicious > det.p_benign ? 1 : 0;
        det.predicted_real = det.adv_score >= 0.0;
    }
    return dets;
}

GanModel build_gan(std::uint64_t seed) {
    GanModel m;
    m.seed = seed;
    m.generator = build_generator(seed);
    m.discriminator = build_discriminator(seed + 1);
    return m;
}

namespace {

struct NamedBlob {
    std::string name;
    std::vector<int> shape;
    double* data;
    std::size_t count;
};

void collect_blobs(GanModel& m, std::vector<NamedBlob>& blobs) {
    auto add_tensor = [&](const std::string& name, Tensor& t) {
        blobs.push_back({name, t.shape(), t.mutable_data().data(), t.mutable_data().size()});
    };
    auto add_vec = [&](const std::string& name, std::vector<double>& v) {
        blobs.push_back({name, {static_cast<int>(v.size())}, v.data(), v.size()});
    };
    auto add_block = [&](const std::string& prefix, ConvBlock& blk) {
        add_tensor(prefix + ".w", blk.w);
        add_tensor(prefix + ".b", blk.b);
        add_tensor(prefix + ".gamma", blk.gamma);
        add_tensor(prefix + ".beta", blk.beta);
        add_vec(prefix + ".run_mean", blk.stats.mean);
        add_vec(prefix + ".run_var", blk.stats.var);
    };
    for (size_t i = 0; i < m.generator.encoder.size(); ++i)
        add_block("g.enc" + std::to_string(i), m.generator.encoder[i]);
    for (size_t i = 0; i < m.generator.decoder.size(); ++i)
        add_block("g.dec" + std::to_string(i), m.generator.decoder[i]);
    add_tensor("g.out.w", m.generator.out_w);
    add_tensor("g.out.b", m.generator.out_b);
    for (size_t i = 0; i < m.discriminator.conv.size(); ++i)
        add_block("d.conv" + std::to_string(i), m.discriminator.conv[i]);
    add_tensor("d.fc1.w", m.discriminator.fc1_w);
    add_tensor("d.fc1.b", m.discriminator.fc1_b);
    add_tensor("d.fc2.w", m.discriminator.fc2_w);
    add_tensor("d.fc2.b", m.discriminator.fc2_b);
    add_tensor("d.class.w", m.discriminator.class_w);
    add_tensor("d.class.b", m.discriminator.class_b);
    add_tensor("d.adv.w", m.discriminator.adv_w);
    add_tensor("d.adv.b", m.discriminator.adv_b);
}

}  // namespace

void save_checkpoint(const std::string& path, GanModel& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
    std::vector<NamedBlob> blobs;
    collect_blobs(model, blobs);
    out << "PHISHGAN-CHECKPOINT v1\n";
    out << "seed " << model.seed << "\n";
    for (const auto& b : blobs) {
        out << "tensor " << b.name;
        for (int d : b.shape) out << ' ' << d;
        out << '\n';
    }
    out << "DATA\n";
    for (const auto& b : blobs)
        out.write(reinterpret_cast<const char*>(b.data),
                  static_cast<std::streamsize>(b.count * sizeof(double)));
    if (!out) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

GanModel load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "PHISHGAN-CHECKPOINT v1")
        throw std::runtime_error("load_checkpoint: unsupported format version in " + path);
    if (!std::getline(in, line) || line.rfind("seed ", 0) != 0)
        throw std::runtime_error("load_checkpoint: missing seed line");
    const std::uint64_t seed = std::stoull(line.substr(5));

    struct Entry {
        std::string name;
        std::vector<int> shape;
    };
    std::vector<Entry> entries;
    while (std::getline(in, line)) {
        if (line == "DATA") break;
        std::istringstream ss(line);
        std::string tag;
        Entry e;
        ss >> tag >> e.name;
        if (tag != "tensor") throw std::runtime_error("load_checkpoint: bad header line");
        int d;
        while (ss >> d) e.shape.push_back(d);
        entries.push_back(std::move(e));
    }

    GanModel model = build_gan(seed);
    std::vector<NamedBlob> blobs;
    collect_blobs(model, blobs);
    if (blobs.size() != entries.size())
        throw std::runtime_error("load_checkpoint: tensor directory mismatch");
    for (size_t i = 0; i < blobs.size(); ++i) {
        if (entries[i].name != blobs[i].name || entries[i].shape != blobs[i].shape)
            throw std::runtime_error("load_checkpoint: tensor " + entries[i].name +
                                     " does not match the architecture");
        in.read(reinterpret_cast<char*>(blobs[i].data),
                static_cast<std::streamsize>(blobs[i].count * sizeof(double)));
        if (!in) throw std::runtime_error("load_checkpoint: truncated data section");
    }
    return model;
}

}  // namespace phishgan
