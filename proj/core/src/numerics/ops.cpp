// Copyright 2026 The canex Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "canex/numerics/ops.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "canex/error.hpp"

namespace canex::numerics {
namespace {

std::string shape_str(const Tensor& t) {
  return "(" + std::to_string(t.rows()) + "x" + std::to_string(t.cols()) + ")";
}

void require_same_shape(const char* op, Var a, Var b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ContractViolation(std::string(op) + ": shape mismatch " + shape_str(a.value()) +
                            " vs " + shape_str(b.value()));
  }
}

void require_same_tape(const char* op, Var a, Var b) {
  if (&a.tape() != &b.tape()) throw ContractViolation(std::string(op) + ": vars on different tapes");
}

double stable_sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Var matmul(Var a, Var b) {
  require_same_tape("matmul", a, b);
  if (a.cols() != b.rows()) {
    throw ContractViolation("matmul: inner dimensions differ " + shape_str(a.value()) + " * " +
                            shape_str(b.value()));
  }
  const Tensor* av = &a.value();
  const Tensor* bv = &b.value();
  return a.tape().record((*av) * (*bv), {a, b},
                         [av, bv](const Tensor&, const Tensor& g, std::span<Tensor* const> gi) {
                           if (gi[0]) gi[0]->noalias() += g * bv->transpose();
                           if (gi[1]) gi[1]->noalias() += av->transpose() * g;
                         });
}

Var transpose(Var a) {
  return a.tape().record(a.value().transpose(), {a},
                         [](const Tensor&, const Tensor& g, std::span<Tensor* const> gi) {
                           if (gi[0]) *gi[0] += g.transpose();
                         });
}

Var add(Var a, Var b) {
  require_same_tape("add", a, b);
  require_same_shape("add", a, b);
  return a.tape().record(a.value() + b.value(), {a, b},
                         [](const Tensor&, const Tensor& g, std::span<Tensor* const> gi) {
                           if (gi[0]) *gi[0] += g;
                           if (gi[1]) *gi[1] += g;
                         });
}

Var sub(Var a, Var b) {
  require_same_tape("sub", a, b);
  require_same_shape("sub", a, b);
  return a.tape().record(a.value() - b.value(), {a, b},
                         [](const Tensor&, const Tensor& g, std::span<Tensor* const> gi) {
                           if (gi[0]) *gi[0] += g;
                           if (gi[1]) *gi[1] -= g;
                         });
}

Var add_bias(Var a, Var bias) {
  require_same_tape("add_bias", a, bias);
  if (bias.cols() != 1 || bias.rows() != a.rows()) {
    throw ContractViolation("add_bias: bias must be " + std::to_string(a.rows()) + "x1, got " +
                            shape_str(bias.value()));
  }
  Tensor out = a.value();
  out.colwise() += bias.value().col(0);
  return a.tape().record(std::move(out), {a, bias},
                         [](const Tensor&, const Tensor& g, std::span<Tensor* const> gi) {
                           if (gi[0]) *gi[0] += g;
                           if (gi[1]) gi[1]->col(0) += g.rowwise().sum();
                         });
}

Var scale(Var a, double factor) {
  return a.tape().record(a.value() * factor, {a},
                         [factor](const Tensor&, const Tensor& g, std::span<Tensor* const> gi) {
                           if (gi[0]) *gi[0] += g * factor;
                         });
}

Var hadamard(Var a, Var b) {
  require_same_tape("hadamard", a, b);
  require_same_shape("hadamard", a, b);
  const Tensor* av = &a.value();
  const Tensor* bv = &b.value();
  return a.tape().record(av->cwiseProduct(*bv), {a, b},
                         [av, bv](const Tensor&, const Tensor& g, std::span<Tensor* const> gi) {
                           if (gi[0]) *gi[0] += g.cwiseProduct(*bv);
                           if (gi[1]) *gi[1] += g.cwiseProduct(*av);
                         });
}

Var sigmoid(Var a) {
  Tensor out = a.value().unaryExpr([](double x) { return stable_sigmoid(x); });
  return a.tape().record(std::move(out), {a},
                         [](const Tensor& y, const Tensor& g, std::span<Tensor* const> gi) {
                           if (gi[0]) {
                             *gi[0] += g.cwiseProduct(y.cwiseProduct((1.0 - y.array()).matrix()));
                           }
                         });
}

Var tanh(Var a) {
  Tensor out = a.value().array().tanh().matrix();
  return a.tape().record(std::move(out), {a},
                         [](const Tensor& y, const Tensor& g, std::span<Tensor* const> gi) {
                           if (gi[0]) *gi[0] += (g.array() * (1.0 - y.array().square())).matrix();
                         });
}

Var sum_all(Var a) {
  Tensor out(1, 1);
  out(0, 0) = a.value().sum();
  return a.tape().record(std::move(out), {a},
                         [](const Tensor&, const Tensor& g, std::span<Tensor* const> gi) {
                           if (gi[0]) gi[0]->array() += g(0, 0);
                         });
}

Var concat_rows(const std::vector<Var>& parts) {
  if (parts.empty()) throw ContractViolation("concat_rows: no inputs");
  Eigen::Index rows = 0;
  const Eigen::Index cols = parts.front().cols();
  for (const Var& p : parts) {
    require_same_tape("concat_rows", parts.front(), p);
    if (p.cols() != cols) throw ContractViolation("concat_rows: column counts differ");
    rows += p.rows();
  }
  Tensor out(rows, cols);
  std::vector<Eigen::Index> offsets;
  Eigen::Index r = 0;
  for (const Var& p : parts) {
    offsets.push_back(r);
    out.middleRows(r, p.rows()) = p.value();
    r += p.rows();
  }
  return parts.front().tape().record(
      std::move(out), parts,
      [offsets](const Tensor&, const Tensor& g, std::span<Tensor* const> gi) {
        for (std::size_t k = 0; k < gi.size(); ++k) {
          if (gi[k]) *gi[k] += g.middleRows(offsets[k], gi[k]->rows());
        }
      });
}

Var concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) throw ContractViolation("concat_cols: no inputs");
  Eigen::Index cols = 0;
  const Eigen::Index rows = parts.front().rows();
  for (const Var& p : parts) {
    require_same_tape("concat_cols", parts.front(), p);
    if (p.rows() != rows) throw ContractViolation("concat_cols: row counts differ");
    cols += p.cols();
  }
  Tensor out(rows, cols);
  std::vector<Eigen::Index> offsets;
  Eigen::Index c = 0;
  for (const Var& p : parts) {
    offsets.push_back(c);
    out.middleCols(c, p.cols()) = p.value();
    c += p.cols();
  }
  return parts.front().tape().record(
      std::move(out), parts,
      [offsets](const Tensor&, const Tensor& g, std::span<Tensor* const> gi) {
        for (std::size_t k = 0; k < gi.size(); ++k) {
          if (gi[k]) *gi[k] += g.middleCols(offsets[k], gi[k]->cols());
        }
      });
}

Var slice_rows(Var a, Eigen::Index start, Eigen::Index count) {
  if (start < 0 || count < 0 || start + count > a.rows()) {
    throw ContractViolation("slice_rows: range out of bounds");
  }
  return a.tape().record(a.value().middleRows(start, count), {a},
                         [start, count](const Tensor&, const Tensor& g,
                                        std::span<Tensor* const> gi) {
                           if (gi[0]) gi[0]->middleRows(start, count) += g;
                         });
}

Var slice_cols(Var a, Eigen::Index start, Eigen::Index count) {
  if (start < 0 || count < 0 || start + count > a.cols()) {
    throw ContractViolation("slice_cols: range out of bounds");
  }
  return a.tape().record(a.value().middleCols(start, count), {a},
                         [start, count](const Tensor&, const Tensor& g,
                                        std::span<Tensor* const> gi) {
                           if (gi[0]) gi[0]->middleCols(start, count) += g;
                         });
}

Var gather_rows_as_cols(Var table, std::span<const int> indices) {
  const Tensor& tv = table.value();
  Tensor out(tv.cols(), static_cast<Eigen::Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j) {
    const int idx = indices[j];
    if (idx < 0 || idx >= tv.rows()) {
      throw ContractViolation("gather_rows_as_cols: index " + std::to_string(idx) +
                              " out of range for table with " + std::to_string(tv.rows()) +
                              " rows");
    }
    out.col(static_cast<Eigen::Index>(j)) = tv.row(idx).transpose();
  }
  std::vector<int> idx(indices.begin(), indices.end());
  return table.tape().record(std::move(out), {table},
                             [idx = std::move(idx)](const Tensor&, const Tensor& g,
                                                    std::span<Tensor* const> gi) {
                               if (!gi[0]) return;
                               for (std::size_t j = 0; j < idx.size(); ++j) {
                                 gi[0]->row(idx[j]) +=
                                     g.col(static_cast<Eigen::Index>(j)).transpose();
                               }
                             });
}

Var unfold_windows(Var a, int width) {
  if (width < 1) throw ContractViolation("unfold_windows: width must be >= 1");
  const Tensor& av = a.value();
  const Eigen::Index c = av.rows();
  const Eigen::Index len = av.cols();
  const Eigen::Index left = (width - 1) / 2;
  Tensor out = Tensor::Zero(c * width, len);
  for (Eigen::Index t = 0; t < len; ++t) {
    for (int k = 0; k < width; ++k) {
      const Eigen::Index src = t - left + k;
      if (src >= 0 && src < len) out.block(k * c, t, c, 1) = av.col(src);
    }
  }
  return a.tape().record(std::move(out), {a},
                         [width, c, len, left](const Tensor&, const Tensor& g,
                                               std::span<Tensor* const> gi) {
                           if (!gi[0]) return;
                           for (Eigen::Index t = 0; t < len; ++t) {
                             for (int k = 0; k < width; ++k) {
                               const Eigen::Index src = t - left + k;
                               if (src >= 0 && src < len) gi[0]->col(src) += g.block(k * c, t, c, 1);
                             }
                           }
                         });
}

Var rowwise_max(Var a) {
  const Tensor& av = a.value();
  if (av.cols() == 0) throw ContractViolation("rowwise_max: no columns");
  Tensor out(av.rows(), 1);
  std::vector<Eigen::Index> arg(static_cast<std::size_t>(av.rows()));
  for (Eigen::Index r = 0; r < av.rows(); ++r) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < av.cols(); ++c) {
      if (av(r, c) > av(r, best)) best = c;
    }
    arg[static_cast<std::size_t>(r)] = best;
    out(r, 0) = av(r, best);
  }
  return a.tape().record(std::move(out), {a},
                         [arg = std::move(arg)](const Tensor&, const Tensor& g,
                                                std::span<Tensor* const> gi) {
                           if (!gi[0]) return;
                           for (std::size_t r = 0; r < arg.size(); ++r) {
                             const auto row = static_cast<Eigen::Index>(r);
                             (*gi[0])(row, arg[r]) += g(row, 0);
                           }
                         });
}

Var softmax_rows(Var logits, double temperature) {
  if (!(temperature > 0.0)) throw InvalidArgument("softmax_rows: temperature must be > 0");
  const Tensor& z = logits.value();
  if (!z.allFinite()) throw InvalidArgument("softmax_rows: non-finite logits");
  Tensor out(z.rows(), z.cols());
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    const double m = z.row(r).maxCoeff();
    out.row(r) = ((z.row(r).array() - m) / temperature).exp().matrix();
    out.row(r) /= out.row(r).sum();
  }
  return logits.tape().record(
      std::move(out), {logits},
      [temperature](const Tensor& a, const Tensor& g, std::span<Tensor* const> gi) {
        if (!gi[0]) return;
        // d a_v / d z_u = a_v (delta_uv - a_u) / T
        for (Eigen::Index r = 0; r < a.rows(); ++r) {
          const double dot = a.row(r).dot(g.row(r));
          gi[0]->row(r) += (a.row(r).array() * (g.row(r).array() - dot) / temperature).matrix();
        }
      });
}

Var cross_entropy(Var logits, int label) {
  const Tensor& z = logits.value();
  if (z.cols() != 1) throw ContractViolation("cross_entropy: logits must be a column vector");
  if (label < 0 || label >= z.rows()) {
    throw ContractViolation("cross_entropy: label " + std::to_string(label) + " out of range");
  }
  const double m = z.maxCoeff();
  const double lse = m + std::log((z.array() - m).exp().sum());
  Tensor out(1, 1);
  out(0, 0) = lse - z(label, 0);
  const Tensor* zv = &z;
  return logits.tape().record(
      std::move(out), {logits},
      [zv, lse, label](const Tensor&, const Tensor& g, std::span<Tensor* const> gi) {
        if (!gi[0]) return;
        Tensor p = (zv->array() - lse).exp().matrix();
        p(label, 0) -= 1.0;
        *gi[0] += g(0, 0) * p;
      });
}

Var lstm_sequence(Var input_proj, Var recurrent, bool reverse) {
  require_same_tape("lstm_sequence", input_proj, recurrent);
  const Tensor& xp = input_proj.value();
  const Tensor& wh = recurrent.value();
  const Eigen::Index h = wh.cols();
  const Eigen::Index len = xp.cols();
  if (wh.rows() != 4 * h || xp.rows() != 4 * h) {
    throw ContractViolation("lstm_sequence: expected 4H rows in projections, got " +
                            shape_str(xp) + " and recurrent " + shape_str(wh));
  }
  if (len < 1) throw ContractViolation("lstm_sequence: empty sequence");

  // Per-step caches: activated gates (4H), cell state (H), tanh(cell) (H).
  auto gates = std::make_shared<Tensor>(4 * h, len);
  auto cells = std::make_shared<Tensor>(h, len);
  auto cell_tanh = std::make_shared<Tensor>(h, len);
  Tensor out(h, len);

  Vector h_prev = Vector::Zero(h);
  Vector c_prev = Vector::Zero(h);
  for (Eigen::Index step = 0; step < len; ++step) {
    const Eigen::Index t = reverse ? len - 1 - step : step;
    Vector pre = xp.col(t);
    pre.noalias() += wh * h_prev;
    auto gcol = gates->col(t);
    for (Eigen::Index k = 0; k < h; ++k) {
      gcol(k) = stable_sigmoid(pre(k));
      gcol(h + k) = stable_sigmoid(pre(h + k));
      gcol(2 * h + k) = std::tanh(pre(2 * h + k));
      gcol(3 * h + k) = stable_sigmoid(pre(3 * h + k));
    }
    for (Eigen::Index k = 0; k < h; ++k) {
      const double c = gcol(h + k) * c_prev(k) + gcol(k) * gcol(2 * h + k);
      (*cells)(k, t) = c;
      (*cell_tanh)(k, t) = std::tanh(c);
      out(k, t) = gcol(3 * h + k) * (*cell_tanh)(k, t);
    }
    h_prev = out.col(t);
    c_prev = cells->col(t);
  }

  const Tensor* whv = &wh;
  return input_proj.tape().record(
      std::move(out), {input_proj, recurrent},
      [gates, cells, cell_tanh, whv, h, len, reverse](const Tensor& hs, const Tensor& g,
                                                      std::span<Tensor* const> gi) {
        Vector dh_next = Vector::Zero(h);
        Vector dc_next = Vector::Zero(h);
        Vector da(4 * h);
        for (Eigen::Index step = len; step-- > 0;) {
          const Eigen::Index t = reverse ? len - 1 - step : step;
          const bool first = step == 0;
          const Eigen::Index prev = reverse ? t + 1 : t - 1;
          auto gcol = gates->col(t);
          for (Eigen::Index k = 0; k < h; ++k) {
            const double i = gcol(k), f = gcol(h + k), gg = gcol(2 * h + k), o = gcol(3 * h + k);
            const double tc = (*cell_tanh)(k, t);
            const double dh = g(k, t) + dh_next(k);
            const double dc = dh * o * (1.0 - tc * tc) + dc_next(k);
            const double c_prev = first ? 0.0 : (*cells)(k, prev);
            da(k) = dc * gg * i * (1.0 - i);
            da(h + k) = dc * c_prev * f * (1.0 - f);
            da(2 * h + k) = dc * i * (1.0 - gg * gg);
            da(3 * h + k) = dh * tc * o * (1.0 - o);
            dc_next(k) = dc * f;
          }
          if (gi[0]) gi[0]->col(t) += da;
          if (!first) {
            if (gi[1]) gi[1]->noalias() += da * hs.col(prev).transpose();
            dh_next.noalias() = whv->transpose() * da;
          }
        }
      });
}

}  // namespace canex::numerics
