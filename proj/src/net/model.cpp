#include "mibci/net/model.hpp"

#include <algorithm>
#include <cmath>

#include "mibci/error.hpp"
#include "mibci/parallel.hpp"
#include "mibci/random.hpp"

namespace mibci::net {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

double to_f32(double v) { return static_cast<double>(static_cast<float>(v)); }

// ---- convolution -----------------------------------------------------------

Tensor conv_forward(const ConvLayer& c, const Tensor& x) {
    const std::size_t len_out = c.output_length(x.length);
    Tensor y(c.out_planes, len_out);
    const auto off_base = static_cast<std::ptrdiff_t>(c.pad_left);
    for (std::size_t o = 0; o < c.out_planes; ++o) {
        double* out = y.values.data() + o * len_out;
        std::fill(out, out + len_out, c.bias.empty() ? 0.0 : c.bias[o]);
        for (std::size_t i = 0; i < c.in_planes; ++i) {
            const double* in = x.values.data() + i * x.length;
            const double* w = c.weights.data() + (o * c.in_planes + i) * c.kernel;
            for (std::size_t k = 0; k < c.kernel; ++k) {
                // out[t] += w[k] * in[t + k - pad_left] where the index is in range
                const std::ptrdiff_t off = static_cast<std::ptrdiff_t>(k) - off_base;
                const std::ptrdiff_t t0 = std::max<std::ptrdiff_t>(0, -off);
                const std::ptrdiff_t t1 =
                    std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(len_out), static_cast<std::ptrdiff_t>(x.length) - off);
                const double wk = w[k];
                for (std::ptrdiff_t t = t0; t < t1; ++t) out[t] += wk * in[t + off];
            }
        }
    }
    return y;
}

void conv_backward(const ConvLayer& c, const std::vector<Tensor>& xs, const std::vector<Tensor>& gs,
                   std::vector<double>& dw, std::vector<double>& db, std::vector<Tensor>* dxs) {
    const auto off_base = static_cast<std::ptrdiff_t>(c.pad_left);
    const std::size_t len_in = xs.front().length;
    const std::size_t len_out = gs.front().length;

    // Weight gradients, one output plane per task; samples reduce in order.
    parallel_for(c.out_planes, [&](std::size_t o) {
        for (std::size_t s = 0; s < xs.size(); ++s) {
            const double* g = gs[s].values.data() + o * len_out;
            double bsum = 0.0;
            for (std::size_t t = 0; t < len_out; ++t) bsum += g[t];
            if (!db.empty()) db[o] += bsum;
            for (std::size_t i = 0; i < c.in_planes; ++i) {
                const double* in = xs[s].values.data() + i * len_in;
                double* w = dw.data() + (o * c.in_planes + i) * c.kernel;
                for (std::size_t k = 0; k < c.kernel; ++k) {
                    const std::ptrdiff_t off = static_cast<std::ptrdiff_t>(k) - off_base;
                    const std::ptrdiff_t t0 = std::max<std::ptrdiff_t>(0, -off);
                    const std::ptrdiff_t t1 = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(len_out),
                                                                       static_cast<std::ptrdiff_t>(len_in) - off);
                    double acc = 0.0;
                    for (std::ptrdiff_t t = t0; t < t1; ++t) acc += g[t] * in[t + off];
                    w[k] += acc;
                }
            }
        }
    });

    if (!dxs) return;
    dxs->assign(xs.size(), Tensor());
    parallel_for(xs.size(), [&](std::size_t s) {
        Tensor dx(c.in_planes, len_in);
        for (std::size_t o = 0; o < c.out_planes; ++o) {
            const double* g = gs[s].values.data() + o * len_out;
            for (std::size_t i = 0; i < c.in_planes; ++i) {
                double* d = dx.values.data() + i * len_in;
                const double* w = c.weights.data() + (o * c.in_planes + i) * c.kernel;
                for (std::size_t k = 0; k < c.kernel; ++k) {
                    const std::ptrdiff_t off = static_cast<std::ptrdiff_t>(k) - off_base;
                    const std::ptrdiff_t t0 = std::max<std::ptrdiff_t>(0, -off);
                    const std::ptrdiff_t t1 = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(len_out),
                                                                       static_cast<std::ptrdiff_t>(len_in) - off);
                    const double wk = w[k];
                    for (std::ptrdiff_t t = t0; t < t1; ++t) d[t + off] += wk * g[t];
                }
            }
        }
        (*dxs)[s] = std::move(dx);
    });
}

// ---- max-pool ----------------------------------------------------------------

Tensor pool_forward(const PoolLayer& p, const Tensor& x, std::vector<std::size_t>* argmax) {
    const std::size_t len_out = x.length / p.width;
    Tensor y(x.planes, len_out);
    if (argmax) argmax->assign(x.planes * len_out, 0);
    for (std::size_t c = 0; c < x.planes; ++c)
        for (std::size_t t = 0; t < len_out; ++t) {
            std::size_t best = t * p.width;
            for (std::size_t j = best + 1; j < (t + 1) * p.width; ++j)
                if (x.at(c, j) > x.at(c, best)) best = j;
            y.at(c, t) = x.at(c, best);
            if (argmax) (*argmax)[c * len_out + t] = best;
        }
    return y;
}

// ---- dense -------------------------------------------------------------------

Tensor dense_forward(const DenseLayer& d, const Tensor& x) {
    if (x.values.size() != d.in_total)
        throw ShapeError("dense layer expects " + std::to_string(d.in_total) + " inputs, got " +
                         std::to_string(x.values.size()));
    Tensor y(d.out_dim, 1);
    for (std::size_t m = 0; m < d.out_dim; ++m) {
        const double* w = d.weights.data() + m * d.in_total;
        double acc = d.bias[m];
        for (std::size_t j = 0; j < d.in_total; ++j) acc += w[j] * x.values[j];
        y.values[m] = acc;
    }
    return y;
}

}  // namespace

// ---- Model -------------------------------------------------------------------

std::vector<std::span<double>> Model::parameters() {
    std::vector<std::span<double>> out;
    for (auto& layer : layers_)
        std::visit(overloaded{[&](ConvLayer& c) {
                                  out.emplace_back(c.weights);
                                  out.emplace_back(c.bias);
                              },
                              [&](BatchNormLayer& b) {
                                  out.emplace_back(b.gain);
                                  out.emplace_back(b.shift);
                              },
                              [&](DenseLayer& d) {
                                  out.emplace_back(d.weights);
                                  out.emplace_back(d.bias);
                              },
                              [](auto&) {}},
                   layer);
    return out;
}

std::vector<std::span<const double>> Model::parameters() const {
    auto spans = const_cast<Model*>(this)->parameters();
    return {spans.begin(), spans.end()};
}

std::vector<std::span<double>> Model::buffers() {
    std::vector<std::span<double>> out;
    for (auto& layer : layers_)
        if (auto* b = std::get_if<BatchNormLayer>(&layer)) {
            out.emplace_back(b->running_mean);
            out.emplace_back(b->running_var);
        }
    return out;
}

std::vector<std::span<const double>> Model::buffers() const {
    auto spans = const_cast<Model*>(this)->buffers();
    return {spans.begin(), spans.end()};
}

std::size_t Model::parameter_count() const {
    std::size_t n = 0;
    for (const auto& p : parameters()) n += p.size();
    return n;
}

std::size_t Model::output_dim() const { return spec_.output_dim(); }

Gradients Model::zero_gradients() const {
    Gradients g;
    for (const auto& p : parameters()) g.emplace_back(p.size(), 0.0);
    return g;
}

void Model::round_to_f32() {
    for (auto p : parameters())
        for (double& v : p) v = to_f32(v);
    for (auto p : buffers())
        for (double& v : p) v = to_f32(v);
}

Model build_from_spec(const ArchitectureSpec& spec, std::uint64_t seed) {
    const auto chain = spec.expanded();
    Model m;
    m.spec_ = spec;
    Rng rng(derive_seed(seed, "init"));
    auto glorot = [&](std::vector<double>& w, std::size_t fan_in, std::size_t fan_out) {
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        std::uniform_real_distribution<double> u(-limit, limit);
        for (double& v : w) v = u(rng);
    };

    for (std::size_t li = 0; li < chain.size(); ++li) {
        const auto& l = chain[li];
        switch (l.kind) {
            case LayerKind::Conv1D: {
                ConvLayer c;
                c.in_planes = l.in_planes;
                c.kernel = l.kernel;
                c.out_planes = l.out_planes;
                c.same = spec.padding == Padding::Same;
                c.pad_left = c.same ? (l.kernel - 1) / 2 : 0;
                c.weights.resize(l.out_planes * l.in_planes * l.kernel);
                // A batch-norm downstream (pooling commutes with a per-plane
                // constant) cancels the bias, so the layer goes without one.
                std::size_t next = li + 1;
                while (next < chain.size() && chain[next].kind == LayerKind::MaxPool) ++next;
                if (next == chain.size() || chain[next].kind != LayerKind::BatchNorm) c.bias.assign(l.out_planes, 0.0);
                glorot(c.weights, l.in_planes * l.kernel, l.out_planes * l.kernel);
                m.layers_.emplace_back(std::move(c));
                break;
            }
            case LayerKind::MaxPool:
                m.layers_.emplace_back(PoolLayer{l.kernel});
                break;
            case LayerKind::BatchNorm: {
                BatchNormLayer b;
                b.planes = l.in_planes;
                b.gain.assign(b.planes, 1.0);
                b.shift.assign(b.planes, 0.0);
                b.running_mean.assign(b.planes, 0.0);
                b.running_var.assign(b.planes, 1.0);
                m.layers_.emplace_back(std::move(b));
                break;
            }
            case LayerKind::ReLU:
                m.layers_.emplace_back(ReluLayer{});
                break;
            case LayerKind::FlattenDense: {
                DenseLayer d;
                d.in_total = l.in_planes * l.kernel;
                d.out_dim = l.out_planes;
                d.weights.resize(d.out_dim * d.in_total);
                d.bias.assign(d.out_dim, 0.0);
                glorot(d.weights, d.in_total, d.out_dim);
                m.layers_.emplace_back(std::move(d));
                break;
            }
        }
    }
    m.round_to_f32();
    return m;
}

// ---- forward -----------------------------------------------------------------

std::vector<std::vector<double>> forward_batch(const Model& model, const std::vector<Tensor>& batch, Mode mode,
                                               ForwardCache* cache) {
    if (batch.empty()) throw InvalidArgument("forward pass on an empty batch");
    const auto& spec = model.spec();
    for (const auto& x : batch)
        if (x.planes != spec.input_channels || x.length != spec.input_samples)
            throw ShapeError("input is " + std::to_string(x.planes) + "x" + std::to_string(x.length) +
                             ", model expects " + std::to_string(spec.input_channels) + "x" +
                             std::to_string(spec.input_samples));
    if (cache) {
        cache->mode = mode;
        cache->layers.assign(model.layers().size(), LayerCache{});
    }

    std::vector<Tensor> acts = batch;
    for (std::size_t li = 0; li < model.layers().size(); ++li) {
        LayerCache* lc = cache ? &cache->layers[li] : nullptr;
        std::vector<Tensor> next(acts.size());
        std::visit(
            overloaded{
                [&](const ConvLayer& c) {
                    parallel_for(acts.size(), [&](std::size_t s) { next[s] = conv_forward(c, acts[s]); });
                },
                [&](const PoolLayer& p) {
                    if (lc) lc->argmax.resize(acts.size());
                    parallel_for(acts.size(), [&](std::size_t s) {
                        next[s] = pool_forward(p, acts[s], lc ? &lc->argmax[s] : nullptr);
                    });
                },
                [&](const BatchNormLayer& b) {
                    const std::size_t len = acts.front().length;
                    std::vector<double> mean(b.planes), var(b.planes), inv_std(b.planes);
                    if (mode == Mode::Train) {
                        const double n = static_cast<double>(acts.size() * len);
                        for (std::size_t c = 0; c < b.planes; ++c) {
                            double sum = 0.0;
                            for (const auto& x : acts)
                                for (double v : x.plane(c)) sum += v;
                            mean[c] = sum / n;
                            double sq = 0.0;
                            for (const auto& x : acts)
                                for (double v : x.plane(c)) sq += (v - mean[c]) * (v - mean[c]);
                            var[c] = sq / n;
                        }
                    } else {
                        mean = b.running_mean;
                        var = b.running_var;
                    }
                    for (std::size_t c = 0; c < b.planes; ++c) inv_std[c] = 1.0 / std::sqrt(var[c] + kBatchNormEps);
                    if (lc) lc->xhat.resize(acts.size());
                    for (std::size_t s = 0; s < acts.size(); ++s) {
                        Tensor xhat(b.planes, len);
                        Tensor y(b.planes, len);
                        for (std::size_t c = 0; c < b.planes; ++c)
                            for (std::size_t t = 0; t < len; ++t) {
                                const double h = (acts[s].at(c, t) - mean[c]) * inv_std[c];
                                xhat.at(c, t) = h;
                                y.at(c, t) = b.gain[c] * h + b.shift[c];
                            }
                        next[s] = std::move(y);
                        if (lc) lc->xhat[s] = std::move(xhat);
                    }
                    if (lc) {
                        lc->batch_mean = std::move(mean);
                        lc->batch_var = std::move(var);
                        lc->inv_std = std::move(inv_std);
                    }
                },
                [&](const ReluLayer&) {
                    for (std::size_t s = 0; s < acts.size(); ++s) {
                        next[s] = acts[s];
                        for (double& v : next[s].values) v = std::max(0.0, v);
                    }
                },
                [&](const DenseLayer& d) {
                    parallel_for(acts.size(), [&](std::size_t s) { next[s] = dense_forward(d, acts[s]); });
                },
            },
            model.layers()[li]);
        if (lc)
            lc->input = std::move(acts);
        acts = std::move(next);
    }

    std::vector<std::vector<double>> out;
    out.reserve(acts.size());
    for (auto& a : acts) out.push_back(std::move(a.values));
    return out;
}

std::vector<double> forward(const Model& model, const Tensor& input, Mode mode) {
    return forward_batch(model, {input}, mode).front();
}

std::vector<double> forward(const Model& model, const Epoch& epoch, Mode mode) {
    return forward(model, to_tensor(epoch), mode);
}

// ---- backward ----------------------------------------------------------------

Gradients backward(const Model& model, const ForwardCache& cache, const std::vector<std::vector<double>>& grad_output) {
    if (cache.layers.size() != model.layers().size()) throw InvalidArgument("forward cache does not match model");
    const std::size_t batch = cache.layers.front().input.size();
    if (grad_output.size() != batch) throw ShapeError("output gradient batch size mismatch");

    Gradients grads = model.zero_gradients();
    // Parameter tensors per layer are consecutive; find each layer's first slot.
    std::vector<std::size_t> slot(model.layers().size(), 0);
    {
        std::size_t next = 0;
        for (std::size_t li = 0; li < model.layers().size(); ++li) {
            slot[li] = next;
            const auto& layer = model.layers()[li];
            if (std::holds_alternative<ConvLayer>(layer) || std::holds_alternative<BatchNormLayer>(layer) ||
                std::holds_alternative<DenseLayer>(layer))
                next += 2;
        }
    }

    std::vector<Tensor> g(batch);
    for (std::size_t s = 0; s < batch; ++s) {
        g[s] = Tensor(grad_output[s].size(), 1);
        g[s].values = grad_output[s];
    }

    for (std::size_t li = model.layers().size(); li-- > 0;) {
        const LayerCache& lc = cache.layers[li];
        const auto& xs = lc.input;
        const bool need_dx = li > 0;
        std::vector<Tensor> dx;
        std::visit(
            overloaded{
                [&](const ConvLayer& c) {
                    conv_backward(c, xs, g, grads[slot[li]], grads[slot[li] + 1], need_dx ? &dx : nullptr);
                },
                [&](const PoolLayer&) {
                    dx.resize(batch);
                    for (std::size_t s = 0; s < batch; ++s) {
                        dx[s] = Tensor(xs[s].planes, xs[s].length);
                        const std::size_t len_out = g[s].length;
                        for (std::size_t c = 0; c < xs[s].planes; ++c)
                            for (std::size_t t = 0; t < len_out; ++t)
                                dx[s].at(c, lc.argmax[s][c * len_out + t]) += g[s].at(c, t);
                    }
                },
                [&](const BatchNormLayer& b) {
                    auto& dgain = grads[slot[li]];
                    auto& dshift = grads[slot[li] + 1];
                    const std::size_t len = xs.front().length;
                    dx.resize(batch);
                    for (std::size_t s = 0; s < batch; ++s) dx[s] = Tensor(b.planes, len);
                    const double n = static_cast<double>(batch * len);
                    for (std::size_t c = 0; c < b.planes; ++c) {
                        double sum_g = 0.0, sum_gh = 0.0;
                        for (std::size_t s = 0; s < batch; ++s)
                            for (std::size_t t = 0; t < len; ++t) {
                                sum_g += g[s].at(c, t);
                                sum_gh += g[s].at(c, t) * lc.xhat[s].at(c, t);
                            }
                        dshift[c] += sum_g;
                        dgain[c] += sum_gh;
                        const double gamma = b.gain[c];
                        const double inv = lc.inv_std[c];
                        for (std::size_t s = 0; s < batch; ++s)
                            for (std::size_t t = 0; t < len; ++t) {
                                if (cache.mode == Mode::Train) {
                                    // d/dx of gamma * (x - mean) / sqrt(var + eps) with batch statistics
                                    dx[s].at(c, t) = gamma * inv / n *
                                                     (n * g[s].at(c, t) - sum_g - lc.xhat[s].at(c, t) * sum_gh);
                                } else {
                                    dx[s].at(c, t) = gamma * inv * g[s].at(c, t);
                                }
                            }
                    }
                },
                [&](const ReluLayer&) {
                    dx.resize(batch);
                    for (std::size_t s = 0; s < batch; ++s) {
                        dx[s] = g[s];
                        for (std::size_t j = 0; j < dx[s].values.size(); ++j)
                            if (!(xs[s].values[j] > 0.0)) dx[s].values[j] = 0.0;
                    }
                },
                [&](const DenseLayer& d) {
                    auto& dw = grads[slot[li]];
                    auto& db = grads[slot[li] + 1];
                    parallel_for(d.out_dim, [&](std::size_t m) {
                        double* w = dw.data() + m * d.in_total;
                        for (std::size_t s = 0; s < batch; ++s) {
                            const double gm = g[s].values[m];
                            db[m] += gm;
                            const double* x = xs[s].values.data();
                            for (std::size_t j = 0; j < d.in_total; ++j) w[j] += gm * x[j];
                        }
                    });
                    if (!need_dx) return;
                    dx.resize(batch);
                    parallel_for(batch, [&](std::size_t s) {
                        Tensor t(xs[s].planes, xs[s].length);
                        for (std::size_t m = 0; m < d.out_dim; ++m) {
                            const double gm = g[s].values[m];
                            const double* w = d.weights.data() + m * d.in_total;
                            for (std::size_t j = 0; j < d.in_total; ++j) t.values[j] += gm * w[j];
                        }
                        dx[s] = std::move(t);
                    });
                },
            },
            model.layers()[li]);
        if (!need_dx) break;
        g = std::move(dx);
    }
    return grads;
}

void update_running_stats(Model& model, const ForwardCache& cache) {
    if (cache.mode != Mode::Train) return;
    for (std::size_t li = 0; li < model.layers().size(); ++li) {
        auto* b = std::get_if<BatchNormLayer>(&model.layers()[li]);
        if (!b) continue;
        const auto& lc = cache.layers[li];
        const double n = static_cast<double>(lc.input.size() * lc.input.front().length);
        const double unbias = n > 1.0 ? n / (n - 1.0) : 1.0;
        for (std::size_t c = 0; c < b->planes; ++c) {
            b->running_mean[c] =
                to_f32((1.0 - kBatchNormMomentum) * b->running_mean[c] + kBatchNormMomentum * lc.batch_mean[c]);
            b->running_var[c] =
                to_f32((1.0 - kBatchNormMomentum) * b->running_var[c] + kBatchNormMomentum * lc.batch_var[c] * unbias);
        }
    }
}

double mse_loss(const std::vector<std::vector<double>>& outputs, const std::vector<std::vector<double>>& targets,
                std::vector<std::vector<double>>* grad) {
    if (outputs.size() != targets.size() || outputs.empty()) throw ShapeError("loss needs one target per output");
    const double batch = static_cast<double>(outputs.size());
    double loss = 0.0;
    if (grad) grad->assign(outputs.size(), {});
    for (std::size_t s = 0; s < outputs.size(); ++s) {
        const auto& o = outputs[s];
        const auto& h = targets[s];
        if (o.size() != h.size()) throw ShapeError("target length differs from output length");
        const double m = static_cast<double>(o.size());
        double sum = 0.0;
        if (grad) (*grad)[s].resize(o.size());
        for (std::size_t j = 0; j < o.size(); ++j) {
            const double e = o[j] - h[j];
            sum += e * e;
            if (grad) (*grad)[s][j] = 2.0 * e / (m * batch);
        }
        loss += sum / m;
    }
    return loss / batch;
}

}  // namespace mibci::net
