#include "phishgan/train.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace phishgan {

void TrainLog::write_csv(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("train log: cannot open " + path);
    out << "iter,epoch,l_adv_d,l_class_d,l_rec_g,total,seconds\n";
    char buf[256];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof buf, "%ld,%d,%.17g,%.17g,%.17g,%.17g,%.6f\n", r.iter,
                      r.epoch, r.l_adv_d, r.l_class_d, r.l_rec_g, r.total, r.seconds);
        out << buf;
    }
}

namespace {

double checked(const Tensor& loss, const char* term, long iter) {
    const double v = loss.scalar();
    if (!std::isfinite(v))
        throw NumericAbort(std::string("training aborted: ") + term +
                           " is non-finite at optimizer step " + std::to_string(iter));
    return v;
}

}  // namespace

TrainLog train(GanModel& model, const std::vector<UrlRecord>& data, const TrainConfig& cfg) {
    if (data.empty()) throw std::invalid_argument("train: empty dataset");
    bool has_benign = false, has_malicious = false;
    for (const auto& r : data) (r.label == UrlLabel::Benign ? has_benign : has_malicious) = true;
    if (!has_benign || !has_malicious)
        throw std::invalid_argument("train: both classes must be present");
    if (cfg.epochs < 1 || cfg.batch_size < 1 || cfg.max_d_iter < 1)
        throw std::invalid_argument("train: counts must be >= 1");

    GeneratorNet& g = model.generator;
    DiscriminatorNet& d = model.discriminator;
    auto g_params = g.parameters();
    auto d_params = d.parameters();

    AdamState g_state, d_state;
    g_state.alpha = d_state.alpha = cfg.alpha;
    g_state.beta1 = d_state.beta1 = cfg.beta1;
    g_state.beta2 = d_state.beta2 = cfg.beta2;

    std::vector<UrlMatrix> encoded(data.size());
    std::vector<int> all_labels(data.size());
    for (size_t i = 0; i < data.size(); ++i) {
        encoded[i] = encode_url(data[i].url);
        all_labels[i] = static_cast<int>(data[i].label);
    }

    Rng rng(cfg.seed);
    TrainLog log;
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    long iter = 0;
    TrainLogRecord rec;
    auto log_step = [&](int epoch) {
        rec.iter = ++iter;
        rec.epoch = epoch;
        rec.total = cfg.weights.lambda_adv * rec.l_adv_d +
                    cfg.weights.lambda_rec * rec.l_rec_g +
                    cfg.weights.lambda_class * rec.l_class_d;
        rec.seconds = elapsed();
        log.records.push_back(rec);
    };

    std::vector<size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        for (size_t start = 0; start < order.size(); start += static_cast<size_t>(cfg.batch_size)) {
            const size_t end = std::min(order.size(), start + static_cast<size_t>(cfg.batch_size));
            std::vector<const UrlMatrix*> batch;
            std::vector<int> labels;
            for (size_t i = start; i < end; ++i) {
                batch.push_back(&encoded[order[i]]);
                labels.push_back(all_labels[order[i]]);
            }
            Tensor real = batch_to_tensor(batch);

            auto d_update = [&](const Tensor& fake) {
                auto real_out = d.forward(real, true);
                // Fake batches are normalized with their own batch statistics
                // but do not update the running stats: inference calibration
                // must track the real-URL distribution only.
                auto fake_out = d.forward(fake, true, /*update_stats=*/false);
                Tensor adv = adv_loss_d(real_out.adv_score, fake_out.adv_score);
                Tensor cls = add(class_loss(real_out.class_probs, labels),
                                 class_loss(fake_out.class_probs, labels));
                Tensor loss = add(adv, mul_scalar(cls, cfg.weights.lambda_class));
                rec.l_adv_d = checked(adv, "L_adv(D)", iter + 1);
                rec.l_class_d = checked(cls, "L_class(D)", iter + 1);
                loss.backward();
                adam_step(d_params, d_state);
            };

            // (1) Inner discriminator loop; the fake batch is synthesized once
            // without a graph and reused across the iterations.
            {
                Tensor fake;
                {
                    NoGradGuard ng;
                    fake = g.forward(make_condition_input(batch, labels, rng), true);
                }
                for (int di = 0; di < cfg.max_d_iter; ++di) {
                    d_update(fake);
                    log_step(epoch);
                }
            }

            // (2) Generator update with the discriminator frozen.
            for (auto& p : d_params) p.set_requires_grad(false);
            {
                Tensor fake = g.forward(make_condition_input(batch, labels, rng), true);
                auto fake_out = d.forward(fake, true, /*update_stats=*/false);
                Tensor adv_g = adv_loss_g(fake_out.adv_score);
                Tensor loss = add(mul_scalar(rec_loss(fake, real), cfg.weights.lambda_rec),
                                  mul_scalar(adv_g, cfg.weights.lambda_adv));
                if (cfg.g_class_loss) {
                    Tensor cls = class_loss(fake_out.class_probs, labels);
                    loss = add(loss, mul_scalar(cls, cfg.weights.lambda_class));
                }
                rec.l_rec_g = checked(rec_loss(fake, real), "L_rec(G)", iter + 1);
                checked(loss, "L(G)", iter + 1);
                loss.backward();
                adam_step(g_params, g_state);
            }
            for (auto& p : d_params) p.set_requires_grad(true);
            log_step(epoch);

            // (3) Joint fine-tune: fresh fake batch, one more D update.
            {
                Tensor fake;
                {
                    NoGradGuard ng;
                    fake = g.forward(make_condition_input(batch, labels, rng), true);
                }
                d_update(fake);
                log_step(epoch);
            }
        }
        if (cfg.checkpoint_every > 0 && !cfg.checkpoint_prefix.empty() &&
            (epoch + 1) % cfg.checkpoint_every == 0)
            save_checkpoint(cfg.checkpoint_prefix + "_epoch" + std::to_string(epoch + 1) +
                                ".ckpt",
                            model);
    }
    return log;
}

double class_accuracy(DiscriminatorNet& d, const std::vector<UrlRecord>& records) {
    if (records.empty()) throw std::invalid_argument("class_accuracy: empty set");
    std::vector<UrlMatrix> mats(records.size());
    for (size_t i = 0; i < records.size(); ++i) mats[i] = encode_url(records[i].url);
    size_t correct = 0;
    constexpr size_t kChunk = 64;
    for (size_t start = 0; start < mats.size(); start += kChunk) {
        const size_t end = std::min(mats.size(), start + kChunk);
        std::vector<const UrlMatrix*> batch;
        for (size_t i = start; i < end; ++i) batch.push_back(&mats[i]);
        auto dets = detect_batch(d, batch);
        for (size_t i = start; i < end; ++i)
            if (dets[i - start].predicted_class == static_cast<int>(records[i].label))
                ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(records.size());
}

}  // namespace phishgan
