#pragma once

#include <memory>
#include <string>
#include <vector>

#include "phishgan/dataset.hpp"
#include "phishgan/losses.hpp"
#include "phishgan/models.hpp"

namespace phishgan {

enum class Player { Attacker, Defender };

// Two-player extensive-form tree; leaves carry (attacker, defender) payoffs.
struct GameNode {
    bool is_leaf = false;
    Player owner = Player::Attacker;
    double u_attacker = 0.0;
    double u_defender = 0.0;
    std::vector<std::string> actions;
    std::vector<std::unique_ptr<GameNode>> children;
};

struct GameTree {
    std::string name;
    std::unique_ptr<GameNode> root;

    int leaf_count() const;
};

struct Solution {
    // Chosen action index per decision node, in preorder.
    std::vector<int> choices;
    double value_attacker = 0.0;
    double value_defender = 0.0;
    // Actions along the equilibrium path, e.g. {"Send", "Malicious"}.
    std::vector<std::string> path;
};

// Training-time game (attacker: adversarial/real; defender: four
// class-and-realness calls). Attacker is paid lambda_rec when the defender's
// realness judgment is wrong; defender earns lambda_class for a correct class
// call plus lambda_adv for a correct realness call.
GameTree training_game(UrlLabel true_class, const LossWeights& weights = {});

// Deployment game: Don't-Send -> (0,0); Send -> Benign (3,-3) / Malicious (1,3).
GameTree deployment_game();

// Subgame-perfect solution by backward induction; ties break toward the
// lowest action index.
Solution solve_backward_induction(const GameTree& tree);

std::string render_tree(const GameTree& tree, const Solution* solution = nullptr);
std::string tree_to_json(const GameTree& tree, const Solution* solution = nullptr);

struct UtilityReport {
    double u_adv = 0.0;
    double u_class = 0.0;
    double u_rec = 0.0;
    double u_total = 0.0;
    LossWeights lambdas;
};

// Empirical batch estimates of the utility functions; identical formulas to
// the training losses evaluated on the same batch.
UtilityReport empirical_utilities(GeneratorNet& g, DiscriminatorNet& d,
                                  const std::vector<UrlRecord>& batch,
                                  const LossWeights& weights, std::uint64_t seed);

}  // namespace phishgan
