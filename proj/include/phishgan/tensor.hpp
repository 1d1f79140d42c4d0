#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace phishgan {

namespace detail {
struct Node {
    std::vector<int> shape;
    std::vector<double> value;
    std::vector<double> grad;
    bool requires_grad = false;
    std::vector<std::shared_ptr<Node>> parents;
    std::function<void(Node&)> backprop;  // accumulates node.grad into parents
    std::string name;
};

std::shared_ptr<Node> make_node(std::vector<int> shape, std::vector<double> data,
                                bool requires_grad);
void accumulate_grad(Node& parent, const std::vector<double>& g);
}  // namespace detail

// Value handle on a reverse-mode autodiff graph. Copies share the node.
class Tensor {
public:
    Tensor() = default;

    static Tensor zeros(std::vector<int> shape, bool requires_grad = false);
    static Tensor full(std::vector<int> shape, double v, bool requires_grad = false);
    static Tensor from(std::vector<int> shape, std::vector<double> data,
                       bool requires_grad = false);
    static Tensor scalar_value(double v);

    bool defined() const { return node_ != nullptr; }
    const std::vector<int>& shape() const { return node_->shape; }
    std::int64_t size() const { return static_cast<std::int64_t>(node_->value.size()); }
    const std::vector<double>& data() const { return node_->value; }
    std::vector<double>& mutable_data() { return node_->value; }
    const std::vector<double>& grad() const { return node_->grad; }
    bool requires_grad() const { return node_->requires_grad; }
    void set_requires_grad(bool b) { node_->requires_grad = b; }
    void set_name(std::string n) { node_->name = std::move(n); }
    const std::string& name() const { return node_->name; }
    double scalar() const;

    // Reverse pass from a scalar. Zeroes grads of every reachable node first.
    void backward() const;

    std::shared_ptr<detail::Node> node() const { return node_; }
    explicit Tensor(std::shared_ptr<detail::Node> n) : node_(std::move(n)) {}

private:
    std::shared_ptr<detail::Node> node_;
};

// Graph recording is disabled inside a NoGradGuard scope (inference).
struct NoGradGuard {
    NoGradGuard();
    ~NoGradGuard();
    NoGradGuard(const NoGradGuard&) = delete;
    NoGradGuard& operator=(const NoGradGuard&) = delete;

private:
    bool prev_;
};
bool grad_enabled();

// Elementwise / reduction ops.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor add_scalar(const Tensor& a, double c);
Tensor mul_scalar(const Tensor& a, double c);
Tensor square(const Tensor& a);
Tensor log_clamped(const Tensor& a, double floor_value);
Tensor sum(const Tensor& a);
Tensor mean(const Tensor& a);
Tensor leaky_relu(const Tensor& a, double negative_slope);
Tensor sigmoid(const Tensor& a);
// Softmax over the last axis of a 2-D tensor [rows, cols].
Tensor softmax_rows(const Tensor& a);

void check_finite(const Tensor& t, const std::string& where);

}  // namespace phishgan
