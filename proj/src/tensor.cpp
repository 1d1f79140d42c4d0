#include "phishgan/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace phishgan {

namespace {

thread_local bool g_grad_enabled = true;

std::int64_t numel(const std::vector<int>& shape) {
    std::int64_t n = 1;
    for (int d : shape) {
        if (d <= 0) throw std::invalid_argument("tensor: nonpositive dimension");
        n *= d;
    }
    return n;
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
    if (a.shape() != b.shape())
        throw std::invalid_argument(std::string(op) + ": shape mismatch");
}

bool track(std::initializer_list<Tensor> ins) {
    if (!g_grad_enabled) return false;
    for (const auto& t : ins)
        if (t.node()->requires_grad) return true;
    return false;
}

}  // namespace

namespace detail {
std::shared_ptr<Node> make_node(std::vector<int> shape, std::vector<double> data,
                                bool requires_grad) {
    auto n = std::make_shared<Node>();
    std::int64_t count = 1;
    for (int d : shape) {
        if (d <= 0) throw std::invalid_argument("tensor: nonpositive dimension");
        count *= d;
    }
    if (count != static_cast<std::int64_t>(data.size()))
        throw std::invalid_argument("tensor: shape/data length mismatch");
    n->shape = std::move(shape);
    n->value = std::move(data);
    n->requires_grad = requires_grad;
    return n;
}

void accumulate_grad(Node& parent, const std::vector<double>& g) {
    if (!parent.requires_grad) return;
    if (parent.grad.size() != parent.value.size()) parent.grad.assign(parent.value.size(), 0.0);
    for (size_t i = 0; i < g.size(); ++i) parent.grad[i] += g[i];
}
}  // namespace detail

bool grad_enabled() { return g_grad_enabled; }

NoGradGuard::NoGradGuard() : prev_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = prev_; }

Tensor Tensor::zeros(std::vector<int> shape, bool requires_grad) {
    auto n = numel(shape);
    return Tensor(detail::make_node(std::move(shape), std::vector<double>(static_cast<size_t>(n), 0.0),
                            requires_grad));
}

Tensor Tensor::full(std::vector<int> shape, double v, bool requires_grad) {
    auto n = numel(shape);
    return Tensor(detail::make_node(std::move(shape), std::vector<double>(static_cast<size_t>(n), v),
                            requires_grad));
}

Tensor Tensor::from(std::vector<int> shape, std::vector<double> data, bool requires_grad) {
    return Tensor(detail::make_node(std::move(shape), std::move(data), requires_grad));
}

Tensor Tensor::scalar_value(double v) { return from({1}, {v}); }

double Tensor::scalar() const {
    if (size() != 1) throw std::invalid_argument("tensor: scalar() on non-scalar");
    return node_->value[0];
}

void Tensor::backward() const {
    if (size() != 1) throw std::invalid_argument("backward: loss must be a scalar");
    // Iterative post-order DFS; reverse gives a valid topological order.
    std::vector<detail::Node*> order;
    std::unordered_set<detail::Node*> seen;
    std::vector<std::pair<detail::Node*, size_t>> stack;
    stack.emplace_back(node_.get(), 0);
    seen.insert(node_.get());
    while (!stack.empty()) {
        auto& [n, idx] = stack.back();
        if (idx < n->parents.size()) {
            detail::Node* p = n->parents[idx++].get();
            if (seen.insert(p).second) stack.emplace_back(p, 0);
        } else {
            order.push_back(n);
            stack.pop_back();
        }
    }
    for (detail::Node* n : order) n->grad.assign(n->value.size(), 0.0);
    node_->grad[0] = 1.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it)
        if ((*it)->backprop) (*it)->backprop(**it);
}

void check_finite(const Tensor& t, const std::string& where) {
    for (double v : t.data())
        if (!std::isfinite(v))
            throw std::runtime_error("non-finite value in " + where);
}

namespace {

Tensor unary_map(const Tensor& a, const std::function<double(double)>& f,
                 const std::function<double(double, double)>& df_times_g) {
    std::vector<double> out(a.data().size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = f(a.data()[i]);
    auto node = detail::make_node(a.shape(), std::move(out), false);
    if (track({a})) {
        node->requires_grad = true;
        node->parents = {a.node()};
        auto ap = a.node();
        node->backprop = [ap, df_times_g](detail::Node& self) {
            if (!ap->requires_grad) return;
            std::vector<double> g(self.grad.size());
            for (size_t i = 0; i < g.size(); ++i)
                g[i] = df_times_g(ap->value[i], self.value[i]) * self.grad[i];
            detail::accumulate_grad(*ap, g);
        };
    }
    return Tensor(node);
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "add");
    std::vector<double> out(a.data().size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] + b.data()[i];
    auto node = detail::make_node(a.shape(), std::move(out), false);
    if (track({a, b})) {
        node->requires_grad = true;
        node->parents = {a.node(), b.node()};
        auto ap = a.node(), bp = b.node();
        node->backprop = [ap, bp](detail::Node& self) {
            detail::accumulate_grad(*ap, self.grad);
            detail::accumulate_grad(*bp, self.grad);
        };
    }
    return Tensor(node);
}

Tensor sub(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "sub");
    std::vector<double> out(a.data().size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] - b.data()[i];
    auto node = detail::make_node(a.shape(), std::move(out), false);
    if (track({a, b})) {
        node->requires_grad = true;
        node->parents = {a.node(), b.node()};
        auto ap = a.node(), bp = b.node();
        node->backprop = [ap, bp](detail::Node& self) {
            detail::accumulate_grad(*ap, self.grad);
            if (bp->requires_grad) {
                std::vector<double> g(self.grad.size());
                for (size_t i = 0; i < g.size(); ++i) g[i] = -self.grad[i];
                detail::accumulate_grad(*bp, g);
            }
        };
    }
    return Tensor(node);
}

Tensor mul(const Tensor& a, const Tensor& b) {
    require_same_shape(a, b, "mul");
    std::vector<double> out(a.data().size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] * b.data()[i];
    auto node = detail::make_node(a.shape(), std::move(out), false);
    if (track({a, b})) {
        node->requires_grad = true;
        node->parents = {a.node(), b.node()};
        auto ap = a.node(), bp = b.node();
        node->backprop = [ap, bp](detail::Node& self) {
            if (ap->requires_grad) {
                std::vector<double> g(self.grad.size());
                for (size_t i = 0; i < g.size(); ++i) g[i] = bp->value[i] * self.grad[i];
                detail::accumulate_grad(*ap, g);
            }
            if (bp->requires_grad) {
                std::vector<double> g(self.grad.size());
                for (size_t i = 0; i < g.size(); ++i) g[i] = ap->value[i] * self.grad[i];
                detail::accumulate_grad(*bp, g);
            }
        };
    }
    return Tensor(node);
}

Tensor add_scalar(const Tensor& a, double c) {
    return unary_map(a, [c](double x) { return x + c; },
                     [](double, double) { return 1.0; });
}

Tensor mul_scalar(const Tensor& a, double c) {
    return unary_map(a, [c](double x) { return x * c; },
                     [c](double, double) { return c; });
}

Tensor square(const Tensor& a) {
    return unary_map(a, [](double x) { return x * x; },
                     [](double x, double) { return 2.0 * x; });
}

Tensor log_clamped(const Tensor& a, double floor_value) {
    // Gradient follows the clamped branch: zero where the floor is active.
    return unary_map(a,
                     [floor_value](double x) { return std::log(std::max(x, floor_value)); },
                     [floor_value](double x, double) {
                         return x > floor_value ? 1.0 / x : 0.0;
                     });
}

Tensor leaky_relu(const Tensor& a, double negative_slope) {
    return unary_map(a,
                     [negative_slope](double x) { return x >= 0 ? x : negative_slope * x; },
                     [negative_slope](double x, double) {
                         return x >= 0 ? 1.0 : negative_slope;
                     });
}

Tensor sigmoid(const Tensor& a) {
    return unary_map(a,
                     [](double x) { return 1.0 / (1.0 + std::exp(-x)); },
                     [](double, double y) { return y * (1.0 - y); });
}

Tensor sum(const Tensor& a) {
    double s = std::accumulate(a.data().begin(), a.data().end(), 0.0);
    auto node = detail::make_node({1}, {s}, false);
    if (track({a})) {
        node->requires_grad = true;
        node->parents = {a.node()};
        auto ap = a.node();
        node->backprop = [ap](detail::Node& self) {
            if (!ap->requires_grad) return;
            std::vector<double> g(ap->value.size(), self.grad[0]);
            detail::accumulate_grad(*ap, g);
        };
    }
    return Tensor(node);
}

Tensor mean(const Tensor& a) {
    return mul_scalar(sum(a), 1.0 / static_cast<double>(a.size()));
}

Tensor softmax_rows(const Tensor& a) {
    if (a.shape().size() != 2) throw std::invalid_argument("softmax: expected 2-D [rows, cols]");
    const int rows = a.shape()[0], cols = a.shape()[1];
    std::vector<double> out(a.data().size());
    for (int r = 0; r < rows; ++r) {
        const double* in = a.data().data() + static_cast<long>(r) * cols;
        double* o = out.data() + static_cast<long>(r) * cols;
        double m = *std::max_element(in, in + cols);
        double z = 0.0;
        for (int c = 0; c < cols; ++c) z += (o[c] = std::exp(in[c] - m));
        for (int c = 0; c < cols; ++c) o[c] /= z;
    }
    auto node = detail::make_node(a.shape(), std::move(out), false);
    if (track({a})) {
        node->requires_grad = true;
        node->parents = {a.node()};
        auto ap = a.node();
        node->backprop = [ap, rows, cols](detail::Node& self) {
            if (!ap->requires_grad) return;
            std::vector<double> g(self.grad.size());
            for (int r = 0; r < rows; ++r) {
                const double* y = self.value.data() + static_cast<long>(r) * cols;
                const double* dy = self.grad.data() + static_cast<long>(r) * cols;
                double dot = 0.0;
                for (int c = 0; c < cols; ++c) dot += y[c] * dy[c];
                for (int c = 0; c < cols; ++c)
                    g[static_cast<long>(r) * cols + c] = y[c] * (dy[c] - dot);
            }
            detail::accumulate_grad(*ap, g);
        };
    }
    return Tensor(node);
}

}  // namespace phishgan
