/*
 * Copyright 2026 The Artic Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ARTIC_NN_OPS_HPP_
#define ARTIC_NN_OPS_HPP_

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "artic/nn/autograd.hpp"

namespace artic::nn {

struct ConvOptions {
  Index stride = 1;
  Index dilation = 1;
  Index padding = 0;
};

inline Index conv_output_length(Index length, Index kernel, const ConvOptions& opt) {
  return (length + 2 * opt.padding - opt.dilation * (kernel - 1) - 1) / opt.stride + 1;
}

namespace detail {

// Row c*K + k of the result holds x(c, t*stride + k*dilation - padding).
template <typename Scalar>
Tensor<Scalar> im2col(const Tensor<Scalar>& x, Index kernel, const ConvOptions& opt, Index lout) {
  const Index cin = x.rows();
  const Index len = x.cols();
  Tensor<Scalar> cols = Tensor<Scalar>::Zero(cin * kernel, lout);
  for (Index k = 0; k < kernel; ++k) {
    const Index offset = k * opt.dilation - opt.padding;
    // valid t: 0 <= t*stride + offset < len
    Index t0 = offset >= 0 ? 0 : (-offset + opt.stride - 1) / opt.stride;
    Index t1 = len - offset <= 0 ? 0 : std::min(lout, (len - offset + opt.stride - 1) / opt.stride);
    if (t1 <= t0) continue;
    for (Index c = 0; c < cin; ++c) {
      auto row = cols.row(c * kernel + k);
      if (opt.stride == 1) {
        row.segment(t0, t1 - t0) = x.row(c).segment(t0 + offset, t1 - t0);
      } else {
        for (Index t = t0; t < t1; ++t) row(t) = x(c, t * opt.stride + offset);
      }
    }
  }
  return cols;
}

template <typename Scalar>
Tensor<Scalar> col2im(const Tensor<Scalar>& cols, Index cin, Index len, Index kernel,
                      const ConvOptions& opt) {
  const Index lout = cols.cols();
  Tensor<Scalar> x = Tensor<Scalar>::Zero(cin, len);
  for (Index k = 0; k < kernel; ++k) {
    const Index offset = k * opt.dilation - opt.padding;
    Index t0 = offset >= 0 ? 0 : (-offset + opt.stride - 1) / opt.stride;
    Index t1 = len - offset <= 0 ? 0 : std::min(lout, (len - offset + opt.stride - 1) / opt.stride);
    if (t1 <= t0) continue;
    for (Index c = 0; c < cin; ++c) {
      const auto row = cols.row(c * kernel + k);
      if (opt.stride == 1) {
        x.row(c).segment(t0 + offset, t1 - t0) += row.segment(t0, t1 - t0);
      } else {
        for (Index t = t0; t < t1; ++t) x(c, t * opt.stride + offset) += row(t);
      }
    }
  }
  return x;
}

template <typename Scalar, typename F, typename DF>
Var<Scalar> unary(const Var<Scalar>& x, F f, DF df) {
  Tensor<Scalar> y = x.value().unaryExpr(f);
  return make_result<Scalar>(y, {x}, [x, y, df](const Tensor<Scalar>& g) {
    x.accumulate(g.cwiseProduct(x.value().binaryExpr(y, df)));
  });
}

inline void check_same_shape(Index ar, Index ac, Index br, Index bc, const char* op) {
  if (ar != br || ac != bc) {
    throw ShapeError(std::string(op) + ": shape mismatch " + std::to_string(ar) + "x" +
                     std::to_string(ac) + " vs " + std::to_string(br) + "x" + std::to_string(bc));
  }
}

}  // namespace detail

// x: [Cin x L]; weight: [Cout x Cin*K] (PyTorch [Cout, Cin, K] order);
// bias: [Cout x 1] or undefined.
template <typename Scalar>
Var<Scalar> conv1d(const Var<Scalar>& x, const Var<Scalar>& weight, const Var<Scalar>& bias,
                   Index kernel, const ConvOptions& opt = {}) {
  const Index cin = x.rows();
  const Index len = x.cols();
  if (weight.cols() != cin * kernel) {
    throw ShapeError("conv1d: weight expects " + std::to_string(weight.cols() / kernel) +
                     " input channels, got " + std::to_string(cin));
  }
  const Index lout = conv_output_length(len, kernel, opt);
  if (lout <= 0) throw ShapeError("conv1d: input too short (" + std::to_string(len) + ")");
  Tensor<Scalar> cols = detail::im2col(x.value(), kernel, opt, lout);
  Tensor<Scalar> y = weight.value() * cols;
  if (bias.defined()) y.colwise() += bias.value().col(0);
  if (!grad_enabled()) return Var<Scalar>(std::move(y));
  return make_result<Scalar>(std::move(y), {x, weight, bias},
                             [x, weight, bias, cols = std::move(cols), cin, len, kernel, opt](
                                 const Tensor<Scalar>& g) {
                               if (weight.requires_grad()) weight.accumulate(g * cols.transpose());
                               if (bias.requires_grad()) bias.accumulate(g.rowwise().sum());
                               if (x.requires_grad()) {
                                 const Tensor<Scalar> dcols = weight.value().transpose() * g;
                                 x.accumulate(detail::col2im(dcols, cin, len, kernel, opt));
                               }
                             });
}

struct ConvTransposeOptions {
  Index stride = 1;
  Index padding = 0;
  Index output_padding = 0;
  Index dilation = 1;
};

// x: [Cin x L]; weight: [Cin x Cout*K] (PyTorch [Cin, Cout, K] order).
template <typename Scalar>
Var<Scalar> conv_transpose1d(const Var<Scalar>& x, const Var<Scalar>& weight, const Var<Scalar>& bias,
                             Index kernel, const ConvTransposeOptions& opt) {
  const Index cin = x.rows();
  const Index lin = x.cols();
  if (weight.rows() != cin) throw ShapeError("conv_transpose1d: input channel mismatch");
  const Index cout = weight.cols() / kernel;
  const Index lout = (lin - 1) * opt.stride - 2 * opt.padding + opt.dilation * (kernel - 1) +
                     opt.output_padding + 1;
  if (lout <= 0) throw ShapeError("conv_transpose1d: empty output");
  const Tensor<Scalar> z = weight.value().transpose() * x.value();
  Tensor<Scalar> y = Tensor<Scalar>::Zero(cout, lout);
  for (Index o = 0; o < cout; ++o) {
    for (Index k = 0; k < kernel; ++k) {
      const auto row = z.row(o * kernel + k);
      const Index offset = k * opt.dilation - opt.padding;
      for (Index t = 0; t < lin; ++t) {
        const Index j = t * opt.stride + offset;
        if (j >= 0 && j < lout) y(o, j) += row(t);
      }
    }
  }
  if (bias.defined()) y.colwise() += bias.value().col(0);
  return make_result<Scalar>(std::move(y), {x, weight, bias},
                             [x, weight, bias, kernel, opt, cout, lin, lout](const Tensor<Scalar>& g) {
                               Tensor<Scalar> dz = Tensor<Scalar>::Zero(cout * kernel, lin);
                               for (Index o = 0; o < cout; ++o) {
                                 for (Index k = 0; k < kernel; ++k) {
                                   auto row = dz.row(o * kernel + k);
                                   const Index offset = k * opt.dilation - opt.padding;
                                   for (Index t = 0; t < lin; ++t) {
                                     const Index j = t * opt.stride + offset;
                                     if (j >= 0 && j < lout) row(t) = g(o, j);
                                   }
                                 }
                               }
                               if (x.requires_grad()) x.accumulate(weight.value() * dz);
                               if (weight.requires_grad()) weight.accumulate(x.value() * dz.transpose());
                               if (bias.requires_grad()) bias.accumulate(g.rowwise().sum());
                             });
}

template <typename Scalar>
Var<Scalar> leaky_relu(const Var<Scalar>& x, Scalar slope) {
  return detail::unary(
      x, [slope](Scalar v) { return v > 0 ? v : slope * v; },
      [slope](Scalar v, Scalar) { return v > 0 ? Scalar(1) : slope; });
}

template <typename Scalar>
Var<Scalar> relu(const Var<Scalar>& x) {
  return detail::unary(
      x, [](Scalar v) { return v > 0 ? v : Scalar(0); },
      [](Scalar v, Scalar) { return v > 0 ? Scalar(1) : Scalar(0); });
}

template <typename Scalar>
Var<Scalar> tanh(const Var<Scalar>& x) {
  return detail::unary(
      x, [](Scalar v) { return std::tanh(v); }, [](Scalar, Scalar y) { return Scalar(1) - y * y; });
}

template <typename Scalar>
Var<Scalar> sigmoid(const Var<Scalar>& x) {
  return detail::unary(
      x, [](Scalar v) { return Scalar(1) / (Scalar(1) + std::exp(-v)); },
      [](Scalar, Scalar y) { return y * (Scalar(1) - y); });
}

// log(max(x, floor)); zero gradient where the floor is active.
template <typename Scalar>
Var<Scalar> log_clamp(const Var<Scalar>& x, Scalar floor) {
  return detail::unary(
      x, [floor](Scalar v) { return std::log(std::max(v, floor)); },
      [floor](Scalar v, Scalar) { return v > floor ? Scalar(1) / v : Scalar(0); });
}

template <typename Scalar>
Var<Scalar> operator+(const Var<Scalar>& a, const Var<Scalar>& b) {
  detail::check_same_shape(a.rows(), a.cols(), b.rows(), b.cols(), "add");
  return make_result<Scalar>(a.value() + b.value(), {a, b}, [a, b](const Tensor<Scalar>& g) {
    a.accumulate(g);
    b.accumulate(g);
  });
}

template <typename Scalar>
Var<Scalar> operator-(const Var<Scalar>& a, const Var<Scalar>& b) {
  detail::check_same_shape(a.rows(), a.cols(), b.rows(), b.cols(), "sub");
  return make_result<Scalar>(a.value() - b.value(), {a, b}, [a, b](const Tensor<Scalar>& g) {
    a.accumulate(g);
    b.accumulate(-g);
  });
}

// Elementwise product.
template <typename Scalar>
Var<Scalar> operator*(const Var<Scalar>& a, const Var<Scalar>& b) {
  detail::check_same_shape(a.rows(), a.cols(), b.rows(), b.cols(), "mul");
  return make_result<Scalar>(a.value().cwiseProduct(b.value()), {a, b},
                             [a, b](const Tensor<Scalar>& g) {
                               a.accumulate(g.cwiseProduct(b.value()));
                               b.accumulate(g.cwiseProduct(a.value()));
                             });
}

template <typename Scalar>
Var<Scalar> scale(const Var<Scalar>& x, Scalar s) {
  return make_result<Scalar>(x.value() * s, {x}, [x, s](const Tensor<Scalar>& g) { x.accumulate(g * s); });
}

template <typename Scalar>
Var<Scalar> matmul(const Var<Scalar>& a, const Var<Scalar>& b) {
  if (a.cols() != b.rows()) throw ShapeError("matmul: inner dimensions differ");
  return make_result<Scalar>(a.value() * b.value(), {a, b}, [a, b](const Tensor<Scalar>& g) {
    if (a.requires_grad()) a.accumulate(g * b.value().transpose());
    if (b.requires_grad()) b.accumulate(a.value().transpose() * g);
  });
}

template <typename Scalar>
Var<Scalar> transpose(const Var<Scalar>& x) {
  return make_result<Scalar>(x.value().transpose(), {x},
                             [x](const Tensor<Scalar>& g) { x.accumulate(g.transpose()); });
}

template <typename Scalar>
Var<Scalar> sum(const Var<Scalar>& x) {
  Tensor<Scalar> y(1, 1);
  y(0, 0) = x.value().sum();
  return make_result<Scalar>(std::move(y), {x}, [x](const Tensor<Scalar>& g) {
    x.accumulate(Tensor<Scalar>::Constant(x.rows(), x.cols(), g(0, 0)));
  });
}

template <typename Scalar>
Var<Scalar> mean(const Var<Scalar>& x) {
  const Scalar n = static_cast<Scalar>(x.value().size());
  Tensor<Scalar> y(1, 1);
  y(0, 0) = x.value().sum() / n;
  return make_result<Scalar>(std::move(y), {x}, [x, n](const Tensor<Scalar>& g) {
    x.accumulate(Tensor<Scalar>::Constant(x.rows(), x.cols(), g(0, 0) / n));
  });
}

// mean(|a - b|)
template <typename Scalar>
Var<Scalar> l1_loss(const Var<Scalar>& a, const Var<Scalar>& b) {
  detail::check_same_shape(a.rows(), a.cols(), b.rows(), b.cols(), "l1_loss");
  const Tensor<Scalar> diff = a.value() - b.value();
  const Scalar n = static_cast<Scalar>(diff.size());
  Tensor<Scalar> y(1, 1);
  y(0, 0) = diff.cwiseAbs().sum() / n;
  return make_result<Scalar>(std::move(y), {a, b}, [a, b, diff, n](const Tensor<Scalar>& g) {
    const Tensor<Scalar> d = diff.unaryExpr([](Scalar v) {
      return v > 0 ? Scalar(1) : (v < 0 ? Scalar(-1) : Scalar(0));
    }) * (g(0, 0) / n);
    a.accumulate(d);
    b.accumulate(-d);
  });
}

// mean((x - target)^2) for a scalar target.
template <typename Scalar>
Var<Scalar> mse_to(const Var<Scalar>& x, Scalar target) {
  const Tensor<Scalar> diff = x.value().array() - target;
  const Scalar n = static_cast<Scalar>(diff.size());
  Tensor<Scalar> y(1, 1);
  y(0, 0) = diff.squaredNorm() / n;
  return make_result<Scalar>(std::move(y), {x}, [x, diff, n](const Tensor<Scalar>& g) {
    x.accumulate(diff * (Scalar(2) * g(0, 0) / n));
  });
}

template <typename Scalar>
Var<Scalar> concat_rows(const std::vector<Var<Scalar>>& parts) {
  if (parts.empty()) throw ShapeError("concat_rows: no inputs");
  const Index cols = parts.front().cols();
  Index rows = 0;
  for (const auto& p : parts) {
    if (p.cols() != cols) throw ShapeError("concat_rows: column mismatch");
    rows += p.rows();
  }
  Tensor<Scalar> y(rows, cols);
  Index r = 0;
  for (const auto& p : parts) {
    y.middleRows(r, p.rows()) = p.value();
    r += p.rows();
  }
  return make_result<Scalar>(std::move(y), parts, [parts](const Tensor<Scalar>& g) {
    Index r0 = 0;
    for (const auto& p : parts) {
      p.accumulate(g.middleRows(r0, p.rows()));
      r0 += p.rows();
    }
  });
}

template <typename Scalar>
Var<Scalar> concat_cols(const std::vector<Var<Scalar>>& parts) {
  if (parts.empty()) throw ShapeError("concat_cols: no inputs");
  const Index rows = parts.front().rows();
  Index cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != rows) throw ShapeError("concat_cols: row mismatch");
    cols += p.cols();
  }
  Tensor<Scalar> y(rows, cols);
  Index c = 0;
  for (const auto& p : parts) {
    y.middleCols(c, p.cols()) = p.value();
    c += p.cols();
  }
  return make_result<Scalar>(std::move(y), parts, [parts](const Tensor<Scalar>& g) {
    Index c0 = 0;
    for (const auto& p : parts) {
      p.accumulate(g.middleCols(c0, p.cols()));
      c0 += p.cols();
    }
  });
}

template <typename Scalar>
Var<Scalar> slice_rows(const Var<Scalar>& x, Index start, Index count) {
  if (start < 0 || count < 0 || start + count > x.rows()) throw ShapeError("slice_rows: out of range");
  return make_result<Scalar>(x.value().middleRows(start, count), {x},
                             [x, start, count](const Tensor<Scalar>& g) {
                               if (!x.requires_grad()) return;
                               Tensor<Scalar> d = Tensor<Scalar>::Zero(x.rows(), x.cols());
                               d.middleRows(start, count) = g;
                               x.accumulate(d);
                             });
}

template <typename Scalar>
Var<Scalar> slice_cols(const Var<Scalar>& x, Index start, Index count) {
  if (start < 0 || count < 0 || start + count > x.cols()) throw ShapeError("slice_cols: out of range");
  return make_result<Scalar>(x.value().middleCols(start, count), {x},
                             [x, start, count](const Tensor<Scalar>& g) {
                               if (!x.requires_grad()) return;
                               Tensor<Scalar> d = Tensor<Scalar>::Zero(x.rows(), x.cols());
                               d.middleCols(start, count) = g;
                               x.accumulate(d);
                             });
}

// Columns offset, offset + step, offset + 2*step, ...
template <typename Scalar>
Var<Scalar> stride_cols(const Var<Scalar>& x, Index offset, Index step) {
  const Index n = offset < x.cols() ? (x.cols() - offset + step - 1) / step : 0;
  Tensor<Scalar> y(x.rows(), n);
  for (Index j = 0; j < n; ++j) y.col(j) = x.value().col(offset + j * step);
  return make_result<Scalar>(std::move(y), {x}, [x, offset, step, n](const Tensor<Scalar>& g) {
    Tensor<Scalar> d = Tensor<Scalar>::Zero(x.rows(), x.cols());
    for (Index j = 0; j < n; ++j) d.col(offset + j * step) = g.col(j);
    x.accumulate(d);
  });
}

template <typename Scalar>
Var<Scalar> repeat_cols(const Var<Scalar>& x, Index n) {
  if (x.cols() != 1) throw ShapeError("repeat_cols: expects a single column");
  return make_result<Scalar>(x.value().replicate(1, n), {x},
                             [x](const Tensor<Scalar>& g) { x.accumulate(g.rowwise().sum()); });
}

template <typename Scalar>
Var<Scalar> mean_cols(const Var<Scalar>& x) {
  const Scalar n = static_cast<Scalar>(x.cols());
  return make_result<Scalar>(x.value().rowwise().mean(), {x}, [x, n](const Tensor<Scalar>& g) {
    x.accumulate(g.replicate(1, x.cols()) / n);
  });
}

// Mirror padding along time (repeated reflection, so any pad length works).
template <typename Scalar>
Var<Scalar> reflect_pad_cols(const Var<Scalar>& x, Index left, Index right) {
  const Index len = x.cols();
  const Index out_len = len + left + right;
  std::vector<Index> src(static_cast<std::size_t>(out_len));
  for (Index j = 0; j < out_len; ++j) {
    Index i = j - left;
    if (len == 1) {
      i = 0;
    } else {
      const Index period = 2 * (len - 1);
      i %= period;
      if (i < 0) i += period;
      if (i >= len) i = period - i;
    }
    src[static_cast<std::size_t>(j)] = i;
  }
  Tensor<Scalar> y(x.rows(), out_len);
  for (Index j = 0; j < out_len; ++j) y.col(j) = x.value().col(src[static_cast<std::size_t>(j)]);
  return make_result<Scalar>(std::move(y), {x}, [x, src](const Tensor<Scalar>& g) {
    Tensor<Scalar> d = Tensor<Scalar>::Zero(x.rows(), x.cols());
    for (std::size_t j = 0; j < src.size(); ++j) d.col(src[j]) += g.col(static_cast<Index>(j));
    x.accumulate(d);
  });
}

// Average pooling with zero padding counted in the denominator.
template <typename Scalar>
Var<Scalar> avg_pool1d(const Var<Scalar>& x, Index kernel, Index stride, Index padding) {
  const Index len = x.cols();
  const Index lout = (len + 2 * padding - kernel) / stride + 1;
  if (lout <= 0) throw ShapeError("avg_pool1d: input too short");
  Tensor<Scalar> y = Tensor<Scalar>::Zero(x.rows(), lout);
  for (Index t = 0; t < lout; ++t) {
    for (Index k = 0; k < kernel; ++k) {
      const Index i = t * stride + k - padding;
      if (i >= 0 && i < len) y.col(t) += x.value().col(i);
    }
  }
  y /= static_cast<Scalar>(kernel);
  return make_result<Scalar>(std::move(y), {x}, [x, kernel, stride, padding, lout](const Tensor<Scalar>& g) {
    Tensor<Scalar> d = Tensor<Scalar>::Zero(x.rows(), x.cols());
    for (Index t = 0; t < lout; ++t) {
      for (Index k = 0; k < kernel; ++k) {
        const Index i = t * stride + k - padding;
        if (i >= 0 && i < x.cols()) d.col(i) += g.col(t) / static_cast<Scalar>(kernel);
      }
    }
    x.accumulate(d);
  });
}

// Non-overlapping max pooling in ceil mode: output length ceil(L / size).
template <typename Scalar>
Var<Scalar> max_pool1d(const Var<Scalar>& x, Index size) {
  const Index len = x.cols();
  const Index lout = (len + size - 1) / size;
  Tensor<Scalar> y(x.rows(), lout);
  std::vector<Index> arg(static_cast<std::size_t>(x.rows() * lout));
  for (Index c = 0; c < x.rows(); ++c) {
    for (Index t = 0; t < lout; ++t) {
      Index best = t * size;
      for (Index i = t * size + 1; i < std::min(len, (t + 1) * size); ++i) {
        if (x.value()(c, i) > x.value()(c, best)) best = i;
      }
      y(c, t) = x.value()(c, best);
      arg[static_cast<std::size_t>(c * lout + t)] = best;
    }
  }
  return make_result<Scalar>(std::move(y), {x}, [x, arg, lout](const Tensor<Scalar>& g) {
    Tensor<Scalar> d = Tensor<Scalar>::Zero(x.rows(), x.cols());
    for (Index c = 0; c < x.rows(); ++c) {
      for (Index t = 0; t < lout; ++t) d(c, arg[static_cast<std::size_t>(c * lout + t)]) += g(c, t);
    }
    x.accumulate(d);
  });
}

template <typename Scalar>
Var<Scalar> upsample_nearest(const Var<Scalar>& x, Index factor) {
  Tensor<Scalar> y(x.rows(), x.cols() * factor);
  for (Index t = 0; t < y.cols(); ++t) y.col(t) = x.value().col(t / factor);
  return make_result<Scalar>(std::move(y), {x}, [x, factor](const Tensor<Scalar>& g) {
    Tensor<Scalar> d = Tensor<Scalar>::Zero(x.rows(), x.cols());
    for (Index t = 0; t < g.cols(); ++t) d.col(t / factor) += g.col(t);
    x.accumulate(d);
  });
}

// Dense real DFT bases and mel projection shared by the spectral ops.
template <typename Scalar>
struct SpectralBasis {
  Index n_fft = 0;
  Index hop = 0;
  Scalar log_floor = Scalar(1e-10);
  Tensor<Scalar> window;     // [1 x n_fft]
  Tensor<Scalar> cosine;     // [n_fft x bins]
  Tensor<Scalar> sine;       // [n_fft x bins]
  Tensor<Scalar> mel_basis;  // [bins x n_mels], transposed filterbank
};

template <typename Scalar, typename WindowVec, typename FilterBank>
std::shared_ptr<const SpectralBasis<Scalar>> make_spectral_basis(Index n_fft, Index hop, Scalar log_floor,
                                                                 const WindowVec& window,
                                                                 const FilterBank& filterbank) {
  auto basis = std::make_shared<SpectralBasis<Scalar>>();
  basis->n_fft = n_fft;
  basis->hop = hop;
  basis->log_floor = log_floor;
  const Index bins = n_fft / 2 + 1;
  basis->window = window.transpose().template cast<Scalar>();
  basis->cosine.resize(n_fft, bins);
  basis->sine.resize(n_fft, bins);
  for (Index j = 0; j < n_fft; ++j) {
    for (Index k = 0; k < bins; ++k) {
      const double phase = 2.0 * std::numbers::pi * static_cast<double>((j * k) % n_fft) / n_fft;
      basis->cosine(j, k) = static_cast<Scalar>(std::cos(phase));
      basis->sine(j, k) = static_cast<Scalar>(-std::sin(phase));
    }
  }
  basis->mel_basis = filterbank.transpose().template cast<Scalar>();
  return basis;
}

// Windowed power spectrum of `frames` hops over a padded [1 x L] signal:
// [frames x bins].
template <typename Scalar>
Var<Scalar> frame_power(const Var<Scalar>& x, const std::shared_ptr<const SpectralBasis<Scalar>>& basis,
                        Index frames) {
  const Index n_fft = basis->n_fft;
  const Index hop = basis->hop;
  if (x.rows() != 1 || (frames - 1) * hop + n_fft > x.cols()) throw ShapeError("frame_power: signal too short");
  Tensor<Scalar> framed(frames, n_fft);
  for (Index t = 0; t < frames; ++t) {
    framed.row(t) = x.value().row(0).segment(t * hop, n_fft).cwiseProduct(basis->window);
  }
  Tensor<Scalar> re = framed * basis->cosine;
  Tensor<Scalar> im = framed * basis->sine;
  Tensor<Scalar> power = re.cwiseAbs2() + im.cwiseAbs2();
  if (!grad_enabled()) return Var<Scalar>(std::move(power));
  return make_result<Scalar>(std::move(power), {x},
                             [x, basis, frames, re = std::move(re), im = std::move(im)](const Tensor<Scalar>& g) {
                               const Tensor<Scalar> dre = Scalar(2) * re.cwiseProduct(g);
                               const Tensor<Scalar> dim = Scalar(2) * im.cwiseProduct(g);
                               const Tensor<Scalar> dframed =
                                   dre * basis->cosine.transpose() + dim * basis->sine.transpose();
                               Tensor<Scalar> d = Tensor<Scalar>::Zero(1, x.cols());
                               for (Index t = 0; t < frames; ++t) {
                                 d.row(0).segment(t * basis->hop, basis->n_fft) +=
                                     dframed.row(t).cwiseProduct(basis->window);
                               }
                               x.accumulate(d);
                             });
}

// Log mel power [n_mels x ceil(N / hop)] of a [1 x N] signal; centred frames
// with reflection padding, matching artic::log_mel.
template <typename Scalar>
Var<Scalar> log_mel_spectrogram(const Var<Scalar>& x, const std::shared_ptr<const SpectralBasis<Scalar>>& basis) {
  const Index n = x.cols();
  const Index frames = (n + basis->hop - 1) / basis->hop;
  const Index half = basis->n_fft / 2;
  const Var<Scalar> padded = reflect_pad_cols(x, half, half);
  const Var<Scalar> power = frame_power(padded, basis, frames);
  const Var<Scalar> mel = matmul(power, Var<Scalar>(basis->mel_basis));
  return transpose(log_clamp(mel, basis->log_floor));
}

}  // namespace artic::nn

#endif  // ARTIC_NN_OPS_HPP_
