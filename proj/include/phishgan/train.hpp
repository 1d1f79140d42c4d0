#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phishgan/adam.hpp"
#include "phishgan/dataset.hpp"
#include "phishgan/losses.hpp"
#include "phishgan/models.hpp"

namespace phishgan {

struct TrainConfig {
    int epochs = 200;
    int batch_size = 64;
    int max_d_iter = 2;
    double alpha = 2e-4;
    double beta1 = 0.5;
    double beta2 = 0.999;
    std::uint64_t seed = 0;
    int checkpoint_every = 0;        // epochs between snapshots; 0 disables
    std::string checkpoint_prefix;   // snapshot path prefix
    bool g_class_loss = false;       // include the class term in the G update
    LossWeights weights;
};

struct TrainLogRecord {
    long iter = 0;  // optimizer step index
    int epoch = 0;
    double l_adv_d = 0.0;
    double l_class_d = 0.0;
    double l_rec_g = 0.0;
    double total = 0.0;
    double seconds = 0.0;
};

struct TrainLog {
    std::vector<TrainLogRecord> records;
    void write_csv(const std::string& path) const;
};

// Raised when a loss turns NaN; names the offending term and iteration.
struct NumericAbort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Algorithm: per batch, max_d_iter discriminator updates on real then fake
// samples, one generator update with the discriminator frozen, then a joint
// fine-tune discriminator update on real plus a fresh fake batch.
TrainLog train(GanModel& model, const std::vector<UrlRecord>& data, const TrainConfig& cfg);

// Fraction of records whose class-head prediction matches the label.
double class_accuracy(DiscriminatorNet& d, const std::vector<UrlRecord>& records);

}  // namespace phishgan
