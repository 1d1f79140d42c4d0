#include "phishgan/game.hpp"

#include <sstream>
#include <stdexcept>

#include "../vendor/json.hpp"

namespace phishgan {

namespace {

std::unique_ptr<GameNode> leaf(double ua, double ud) {
    auto n = std::make_unique<GameNode>();
    n->is_leaf = true;
    n->u_attacker = ua;
    n->u_defender = ud;
    return n;
}

int count_leaves(const GameNode& n) {
    if (n.is_leaf) return 1;
    int c = 0;
    for (const auto& ch : n.children) c += count_leaves(*ch);
    return c;
}

}  // namespace

int GameTree::leaf_count() const { return root ? count_leaves(*root) : 0; }

GameTree training_game(UrlLabel true_class, const LossWeights& weights) {
    const bool truth_malicious = true_class == UrlLabel::Malicious;
    GameTree tree;
    tree.name = "training";
    tree.root = std::make_unique<GameNode>();
    tree.root->owner = Player::Attacker;
    tree.root->actions = {"adversarial", "real"};

    const std::vector<std::pair<std::string, std::pair<bool, bool>>> defender_actions = {
        {"Benign-Fake", {false, true}},      // {says malicious, says fake}
        {"Malicious-Fake", {true, true}},
        {"Benign-Real", {false, false}},
        {"Malicious-Real", {true, false}},
    };

    for (bool played_fake : {true, false}) {
        auto def = std::make_unique<GameNode>();
        def->owner = Player::Defender;
        for (const auto& [name, call] : defender_actions) {
            def->actions.push_back(name);
            const bool class_correct = call.first == truth_malicious;
            const bool realness_correct = call.second == played_fake;
            const double ud = (class_correct ? weights.lambda_class : 0.0) +
                              (realness_correct ? weights.lambda_adv : 0.0);
            const double ua = realness_correct ? 0.0 : weights.lambda_rec;
            def->children.push_back(leaf(ua, ud));
        }
        tree.root->children.push_back(std::move(def));
    }
    return tree;
}

GameTree deployment_game() {
    GameTree tree;
    tree.name = "deployment";
    tree.root = std::make_unique<GameNode>();
    tree.root->owner = Player::Attacker;
    tree.root->actions = {"Don't-Send", "Send"};
    tree.root->children.push_back(leaf(0.0, 0.0));

    auto def = std::make_unique<GameNode>();
    def->owner = Player::Defender;
    def->actions = {"Benign", "Malicious"};
    def->children.push_back(leaf(3.0, -3.0));
    def->children.push_back(leaf(1.0, 3.0));
    tree.root->children.push_back(std::move(def));
    return tree;
}

namespace {

struct SolveResult {
    double ua, ud;
};

SolveResult solve_node(const GameNode& n, Solution& sol, std::vector<std::string>* path) {
    if (n.is_leaf) return {n.u_attacker, n.u_defender};
    // Reserve this node's slot before descending so choices are preorder.
    const size_t slot = sol.choices.size();
    sol.choices.push_back(-1);
    int best = 0;
    SolveResult best_val{};
    for (size_t i = 0; i < n.children.size(); ++i) {
        SolveResult v = solve_node(*n.children[i], sol, nullptr);
        const double own = n.owner == Player::Attacker ? v.ua : v.ud;
        const double cur = n.owner == Player::Attacker ? best_val.ua : best_val.ud;
        if (i == 0 || own > cur) {
            best = static_cast<int>(i);
            best_val = v;
        }
    }
    sol.choices[slot] = best;
    if (path) {
        path->push_back(n.actions[static_cast<size_t>(best)]);
        if (!n.children[static_cast<size_t>(best)]->is_leaf) {
            Solution scratch;
            solve_node(*n.children[static_cast<size_t>(best)], scratch, path);
        }
    }
    return best_val;
}

}  // namespace

Solution solve_backward_induction(const GameTree& tree) {
    if (!tree.root) throw std::invalid_argument("solve: empty tree");
    Solution sol;
    std::vector<std::string> path;
    SolveResult v = solve_node(*tree.root, sol, &path);
    sol.value_attacker = v.ua;
    sol.value_defender = v.ud;
    sol.path = std::move(path);
    return sol;
}

namespace {

void render_node(const GameNode& n, const Solution* sol, size_t& next_decision,
                 const std::string& indent, bool on_path, std::ostringstream& out) {
    if (n.is_leaf) {
        out << " -> (" << n.u_attacker << ", " << n.u_defender << ")";
        if (on_path) out << "  *";
        out << "\n";
        return;
    }
    const size_t slot = next_decision++;
    out << "\n";
    for (size_t i = 0; i < n.children.size(); ++i) {
        const bool chosen = sol && sol->choices[slot] == static_cast<int>(i);
        out << indent << (n.owner == Player::Attacker ? "[Attacker] " : "[Defender] ")
            << n.actions[i] << (chosen && on_path ? " *" : "");
        render_node(*n.children[i], sol, next_decision, indent + "  ", on_path && chosen,
                    out);
    }
}

nlohmann::json node_to_json(const GameNode& n, const Solution* sol, size_t& next_decision) {
    nlohmann::json j;
    if (n.is_leaf) {
        j["payoff"] = {{"attacker", n.u_attacker}, {"defender", n.u_defender}};
        return j;
    }
    const size_t slot = next_decision++;
    j["player"] = n.owner == Player::Attacker ? "attacker" : "defender";
    if (sol) j["chosen_action"] = n.actions[static_cast<size_t>(sol->choices[slot])];
    nlohmann::json actions = nlohmann::json::array();
    for (size_t i = 0; i < n.children.size(); ++i) {
        nlohmann::json a;
        a["action"] = n.actions[i];
        a["node"] = node_to_json(*n.children[i], sol, next_decision);
        actions.push_back(std::move(a));
    }
    j["actions"] = std::move(actions);
    return j;
}

}  // namespace

std::string render_tree(const GameTree& tree, const Solution* solution) {
    std::ostringstream out;
    out << "game: " << tree.name;
    size_t next = 0;
    render_node(*tree.root, solution, next, "  ", true, out);
    if (solution) {
        out << "equilibrium path:";
        for (const auto& a : solution->path) out << " " << a;
        out << "\npayoffs: (" << solution->value_attacker << ", "
            << solution->value_defender << ")\n";
    }
    return out.str();
}

std::string tree_to_json(const GameTree& tree, const Solution* solution) {
    nlohmann::json j;
    j["game"] = tree.name;
    size_t next = 0;
    j["tree"] = node_to_json(*tree.root, solution, next);
    if (solution) {
        j["equilibrium"] = {{"path", solution->path},
                            {"attacker_payoff", solution->value_attacker},
                            {"defender_payoff", solution->value_defender}};
    }
    return j.dump(2);
}

UtilityReport empirical_utilities(GeneratorNet& g, DiscriminatorNet& d,
                                  const std::vector<UrlRecord>& batch,
                                  const LossWeights& weights, std::uint64_t seed) {
    if (batch.empty()) throw std::invalid_argument("empirical_utilities: empty batch");
    NoGradGuard ng;
    std::vector<UrlMatrix> mats(batch.size());
    std::vector<const UrlMatrix*> ptrs(batch.size());
    std::vector<int> labels(batch.size());
    for (size_t i = 0; i < batch.size(); ++i) {
        mats[i] = encode_url(batch[i].url);
        ptrs[i] = &mats[i];
        labels[i] = static_cast<int>(batch[i].label);
    }
    Rng rng(seed);
    Tensor real = batch_to_tensor(ptrs);
    Tensor fake = g.forward(make_condition_input(ptrs, labels, rng), false);
    auto real_out = d.forward(real, false);
    auto fake_out = d.forward(fake, false);

    UtilityReport r;
    r.lambdas = weights;
    r.u_adv = adv_loss_d(real_out.adv_score, fake_out.adv_score).scalar();
    r.u_class = class_loss(real_out.class_probs, labels).scalar();
    r.u_rec = rec_loss(fake, real).scalar();
    r.u_total = weights.lambda_adv * r.u_adv + weights.lambda_rec * r.u_rec +
                weights.lambda_class * r.u_class;
    return r;
}

}  // namespace phishgan
