// Command-line surface: data synthesis, training, detection, generation,
// evaluation, and the attacker/defender games.
#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <json.hpp>

#include "phishgan/game.hpp"
#include "phishgan/metrics.hpp"
#include "phishgan/train.hpp"

using namespace phishgan;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

struct TrainOptions {
    std::string data_path;
    std::string out_checkpoint = "model.ckpt";
    std::string log_path = "trainlog.csv";
    int folds = 5;
    TrainConfig cfg;
};

int run_synth(int n, std::uint64_t seed, const std::string& out) {
    auto records = synth_corpus(n, seed);
    write_csv(out, records);
    int benign = 0;
    for (const auto& r : records) benign += r.label == UrlLabel::Benign;
    std::cout << "wrote " << records.size() << " records to " << out << " (" << benign
              << " benign, " << records.size() - benign << " malicious)\n";
    return 0;
}

int run_train(const TrainOptions& opt) {
    auto records = load_csv(opt.data_path);
    auto plan = stratified_kfold(records, opt.folds, opt.cfg.seed);

    double best_acc = -1.0;
    int best_fold = -1;
    GanModel best_model;
    TrainLog best_log;
    for (int fold = 0; fold < opt.folds; ++fold) {
        std::vector<UrlRecord> train_set, val_set;
        for (std::size_t i : plan.complement_indices(fold)) train_set.push_back(records[i]);
        for (std::size_t i : plan.fold_indices(fold)) val_set.push_back(records[i]);

        GanModel model = build_gan(opt.cfg.seed);
        TrainLog log = train(model, train_set, opt.cfg);
        const double acc = class_accuracy(model.discriminator, val_set);
        std::cout << "fold " << fold << ": validation accuracy " << acc << "\n";
        if (acc > best_acc) {
            best_acc = acc;
            best_fold = fold;
            best_model = std::move(model);
            best_log = std::move(log);
        }
    }
    save_checkpoint(opt.out_checkpoint, best_model);
    best_log.write_csv(opt.log_path);
    std::cout << "selected fold " << best_fold << " (accuracy " << best_acc << "); saved "
              << opt.out_checkpoint << " and " << opt.log_path << "\n";
    return 0;
}

void print_detection(const std::string& url, const Detection& det, double ms, bool json) {
    if (json) {
        nlohmann::json j{{"url", url},
                         {"class", det.predicted_class == 1 ? "malicious" : "benign"},
                         {"class_probability",
                          det.predicted_class == 1 ? det.p_malicious : det.p_benign},
                         {"realness_probability", det.realness},
                         {"adv_score", det.adv_score},
                         {"latency_ms", ms}};
        std::cout << j.dump() << "\n";
    } else {
        std::printf("%s  class=%s p=%.4f realness=%.4f latency=%.3fms\n", url.c_str(),
                    det.predicted_class == 1 ? "malicious" : "benign",
                    det.predicted_class == 1 ? det.p_malicious : det.p_benign, det.realness,
                    ms);
    }
}

int run_detect(const std::string& checkpoint, const std::string& target, bool json) {
    GanModel model = load_checkpoint(checkpoint);
    std::vector<std::string> urls;
    if (std::filesystem::exists(target)) {
        std::ifstream in(target);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) urls.push_back(line);
        }
    } else {
        urls.push_back(target);
    }
    for (const auto& url : urls) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto det = detect(model.discriminator, encode_url(url).data);
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        print_detection(url, det, ms, json);
    }
    return 0;
}

int run_generate(const std::string& checkpoint, int n, const std::string& cls,
                 std::uint64_t seed, const std::string& data_path) {
    if (n <= 0) throw std::invalid_argument("generate: n must be positive");
    const UrlLabel want = cls == "malicious" ? UrlLabel::Malicious : UrlLabel::Benign;
    GanModel model = load_checkpoint(checkpoint);

    std::vector<UrlRecord> pool =
        data_path.empty() ? synth_corpus(std::max(2 * n, 64), seed) : load_csv(data_path);
    std::vector<UrlRecord> of_class;
    for (auto& r : pool)
        if (r.label == want) of_class.push_back(std::move(r));
    if (of_class.empty()) throw std::runtime_error("generate: no seed URLs of that class");

    Rng rng(seed);
    for (int i = 0; i < n; ++i) {
        const auto& rec = of_class[rng.below(of_class.size())];
        auto matrix = generate(model.generator, encode_url(rec.url),
                               static_cast<int>(rec.label), rng.next_u64());
        std::cout << decode_matrix(matrix) << "\n";
    }
    return 0;
}

int run_evaluate(const std::string& checkpoint, const std::string& test_csv,
                 const std::string& roc_path, std::uint64_t seed) {
    GanModel model = load_checkpoint(checkpoint);
    auto records = load_csv(test_csv);
    bool has_b = false, has_m = false;
    for (const auto& r : records)
        (r.label == UrlLabel::Benign ? has_b : has_m) = true;
    if (!has_b || !has_m)
        throw std::runtime_error("evaluate: test set must contain both classes");

    std::vector<UrlMatrix> mats(records.size());
    std::vector<const UrlMatrix*> ptrs(records.size());
    for (size_t i = 0; i < records.size(); ++i) {
        mats[i] = encode_url(records[i].url);
        ptrs[i] = &mats[i];
    }

    // Classification on real URLs (positive = malicious).
    std::vector<int> preds, labels;
    std::vector<double> scores;
    std::vector<Detection> real_dets;
    constexpr size_t kChunk = 64;
    for (size_t s = 0; s < ptrs.size(); s += kChunk) {
        const size_t e = std::min(ptrs.size(), s + kChunk);
        auto dets = detect_batch(model.discriminator,
                                 {ptrs.begin() + static_cast<long>(s),
                                  ptrs.begin() + static_cast<long>(e)});
        for (size_t i = 0; i < dets.size(); ++i) {
            preds.push_back(dets[i].predicted_class);
            labels.push_back(static_cast<int>(records[s + i].label));
            scores.push_back(dets[i].p_malicious);
            real_dets.push_back(dets[i]);
        }
    }
    auto cls_report = classification_report(preds, labels);
    auto [curve, auc] = roc_auc(scores, labels);

    std::printf("Phishing URL classification (%zu real URLs)\n", records.size());
    std::printf("%-10s %-12s %-10s %-9s %-8s\n", "ACC", "Sensitivity", "Precision",
                "F1-score", "AUC");
    std::printf("%-10.4f %-12.4f %-10.4f %-9.4f %-8.4f\n", cls_report.accuracy,
                cls_report.sensitivity, cls_report.precision, cls_report.f1, auc);

    // Adversarial-example detection on a 50/50 real + generated mix
    // (positive = adversarial) and generator similarity metrics.
    Rng rng(seed);
    std::vector<int> adv_preds, adv_labels;
    std::vector<double> adv_scores;
    double sum_mse = 0.0, sum_ssim = 0.0, sum_nrmse = 0.0;
    for (size_t i = 0; i < records.size(); ++i) {
        auto fake = generate(model.generator, mats[i], static_cast<int>(records[i].label),
                             rng.next_u64());
        const auto det = detect(model.discriminator, fake);
        adv_preds.push_back(det.predicted_real ? 0 : 1);
        adv_labels.push_back(1);
        adv_scores.push_back(-det.adv_score);
        adv_preds.push_back(real_dets[i].predicted_real ? 0 : 1);
        adv_labels.push_back(0);
        adv_scores.push_back(-real_dets[i].adv_score);
        sum_mse += mse(mats[i].data, fake);
        sum_ssim += ssim(mats[i].data, fake, kUrlLen, kVocabSize);
        sum_nrmse += nrmse(mats[i].data, fake);
    }
    auto adv_report = classification_report(adv_preds, adv_labels);
    auto [adv_curve, adv_auc] = roc_auc(adv_scores, adv_labels);
    std::printf("\nAdversarial example detection (%zu samples, 50%% adversarial)\n",
                adv_preds.size());
    std::printf("%-10s %-12s %-12s %-9s %-8s\n", "ACC", "Sensitivity", "Specificity",
                "F1-score", "AUC");
    std::printf("%-10.4f %-12.4f %-12.4f %-9.4f %-8.4f\n", adv_report.accuracy,
                adv_report.sensitivity, adv_report.specificity, adv_report.f1, adv_auc);

    const double n = static_cast<double>(records.size());
    std::printf("\nGenerator similarity (real vs adversarial, per-URL average)\n");
    std::printf("%-12s %-22s %-16s\n", "MSE", "Structural Similarity", "Normalized RMSE");
    std::printf("%-12.6f %-22.4f %-16.5f\n", sum_mse / n, sum_ssim / n, sum_nrmse / n);

    if (!roc_path.empty()) {
        curve.write_csv(roc_path);
        std::printf("\nwrote ROC curve to %s\n", roc_path.c_str());
    }
    return 0;
}

int run_game(const std::string& which, const std::string& true_class, LossWeights weights,
             bool json) {
    GameTree tree;
    if (which == "deployment")
        tree = deployment_game();
    else if (which == "training")
        tree = training_game(true_class == "benign" ? UrlLabel::Benign : UrlLabel::Malicious,
                             weights);
    else
        throw CLI::ValidationError("game", "unknown game: " + which);
    auto sol = solve_backward_induction(tree);
    std::cout << (json ? tree_to_json(tree, &sol) : render_tree(tree, &sol)) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conditional GAN for phishing URL generation and detection"};
    app.require_subcommand(1);

    // synth-data
    auto* synth = app.add_subcommand("synth-data", "Write a synthetic labeled URL corpus");
    int synth_n = 2000;
    std::uint64_t synth_seed = 0;
    std::string synth_out = "corpus.csv";
    synth->add_option("-n,--count", synth_n, "Number of URLs (even)");
    synth->add_option("--seed", synth_seed, "RNG seed");
    synth->add_option("-o,--out", synth_out, "Output CSV path");

    // train
    auto* tr = app.add_subcommand("train", "Train with stratified k-fold cross-validation");
    TrainOptions topt;
    tr->add_option("--data", topt.data_path, "Training CSV (url,label)")->required();
    tr->add_option("-o,--out", topt.out_checkpoint, "Checkpoint output path");
    tr->add_option("--log", topt.log_path, "Training log CSV path");
    tr->add_option("--folds", topt.folds, "Cross-validation folds");
    tr->add_option("--epochs", topt.cfg.epochs, "Training epochs");
    tr->add_option("--batch-size", topt.cfg.batch_size, "Mini-batch size");
    tr->add_option("--max-d-iter", topt.cfg.max_d_iter, "Inner discriminator iterations");
    tr->add_option("--alpha", topt.cfg.alpha, "Adam learning rate");
    tr->add_option("--beta1", topt.cfg.beta1, "Adam beta1");
    tr->add_option("--beta2", topt.cfg.beta2, "Adam beta2");
    tr->add_option("--lambda-adv", topt.cfg.weights.lambda_adv, "Adversarial loss weight");
    tr->add_option("--lambda-rec", topt.cfg.weights.lambda_rec, "Reconstruction loss weight");
    tr->add_option("--lambda-class", topt.cfg.weights.lambda_class, "Class loss weight");
    tr->add_option("--seed", topt.cfg.seed, "RNG seed");
    tr->add_option("--checkpoint-every", topt.cfg.checkpoint_every,
                   "Snapshot every N epochs (0 = final only)");
    tr->add_flag("--g-class-loss", topt.cfg.g_class_loss,
                 "Include the class term in the generator update");

    // detect
    auto* det = app.add_subcommand("detect", "Classify URLs and score realness");
    std::string det_ckpt, det_target;
    bool det_json = false;
    det->add_option("--checkpoint", det_ckpt, "Model checkpoint")->required();
    det->add_option("target", det_target, "URL or file of URLs (one per line)")->required();
    det->add_flag("--json", det_json, "Machine-readable output");

    // generate
    auto* gen = app.add_subcommand("generate", "Synthesize adversarial URLs");
    std::string gen_ckpt, gen_class = "malicious", gen_data;
    int gen_n = 5;
    std::uint64_t gen_seed = 0;
    gen->add_option("--checkpoint", gen_ckpt, "Model checkpoint")->required();
    gen->add_option("-n,--count", gen_n, "Number of URLs to synthesize");
    gen->add_option("--class", gen_class, "Seed class: benign or malicious")
        ->check(CLI::IsMember({"benign", "malicious"}));
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("--data", gen_data, "Seed-URL CSV (defaults to a synthetic pool)");

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "Classification, adversarial-detection and "
                                              "similarity reports");
    std::string ev_ckpt, ev_csv, ev_roc = "roc.csv";
    std::uint64_t ev_seed = 0;
    ev->add_option("--checkpoint", ev_ckpt, "Model checkpoint")->required();
    ev->add_option("--data", ev_csv, "Test CSV (url,label)")->required();
    ev->add_option("--roc", ev_roc, "ROC curve CSV output path");
    ev->add_option("--seed", ev_seed, "RNG seed for adversarial synthesis");

    // game
    auto* gm = app.add_subcommand("game", "Build and solve an attacker-defender game");
    std::string gm_which, gm_class = "malicious";
    LossWeights gm_weights;
    bool gm_json = false;
    gm->add_option("which", gm_which, "training or deployment")->required();
    gm->add_option("--true-class", gm_class, "Sample's true class (training game)")
        ->check(CLI::IsMember({"benign", "malicious"}));
    gm->add_option("--lambda-adv", gm_weights.lambda_adv, "Realness payoff weight");
    gm->add_option("--lambda-rec", gm_weights.lambda_rec, "Attacker payoff weight");
    gm->add_option("--lambda-class", gm_weights.lambda_class, "Class payoff weight");
    gm->add_flag("--json", gm_json, "Machine-readable output");

    try {
        app.parse(argc, argv);
        if (*synth) return run_synth(synth_n, synth_seed, synth_out);
        if (*tr) return run_train(topt);
        if (*det) return run_detect(det_ckpt, det_target, det_json);
        if (*gen) return run_generate(gen_ckpt, gen_n, gen_class, gen_seed, gen_data);
        if (*ev) return run_evaluate(ev_ckpt, ev_csv, ev_roc, ev_seed);
        if (*gm) return run_game(gm_which, gm_class, gm_weights, gm_json);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    } catch (const NumericAbort& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
