// Copyright 2026 The OpenIME Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "openime/embedding.h"

#include <map>

#include "openime/error.h"

namespace openime {
inline namespace OPENIME_NN_NS {
namespace {

// Word-table rows start near 1 so CWE starts near CE.
constexpr double kWordJitter = 0.08;

Parameter Uniform(const std::string& name, Shape shape, Rng& rng, double range, double center = 0) {
  Tensor t(std::move(shape));
  rng.FillUniform(t, center - range, center + range);
  return Parameter(name, std::move(t));
}

struct GruWeights {
  const Parameter& x;
  const Parameter& h;
  const Parameter& b;
  const Parameter& bh;
};

// One GRU step over a batch of rows.
Var GruStep(Tape& tape, const GruWeights& w, const Var& x, const Var& h, std::size_t g) {
  Var gx = Add(Matmul(x, tape.Param(w.x)), tape.Param(w.b));
  Var gh = Add(Matmul(h, tape.Param(w.h)), tape.Param(w.bh));
  Var r = Sigmoid(Add(Slice(gx, 0, g), Slice(gh, 0, g)));
  Var z = Sigmoid(Add(Slice(gx, g, 2 * g), Slice(gh, g, 2 * g)));
  Var n = Tanh(Add(Slice(gx, 2 * g, 3 * g), Mul(r, Slice(gh, 2 * g, 3 * g))));
  return Add(n, Mul(z, Sub(h, n)));
}

}  // namespace

EmbeddingBank::EmbeddingBank(const std::string& prefix, std::size_t units, std::size_t words,
                             std::size_t embed, std::size_t hidden, Rng& rng, double init_range) {
  if (units == 0 || embed == 0 || hidden == 0) {
    throw ContractError("embedding bank " + prefix + ": empty dimension");
  }
  const std::size_t g3 = 3 * hidden;
  unit_table = Uniform(prefix + ".unit_table", {units, embed}, rng, init_range);
  word_table = Uniform(prefix + ".word_table", {words, embed}, rng, kWordJitter, 1.0);
  fwd_x = Uniform(prefix + ".gru_fwd.wx", {embed, g3}, rng, init_range);
  fwd_h = Uniform(prefix + ".gru_fwd.wh", {hidden, g3}, rng, init_range);
  fwd_b = Uniform(prefix + ".gru_fwd.bx", {g3}, rng, init_range);
  fwd_bh = Uniform(prefix + ".gru_fwd.bh", {g3}, rng, init_range);
  bwd_x = Uniform(prefix + ".gru_bwd.wx", {embed, g3}, rng, init_range);
  bwd_h = Uniform(prefix + ".gru_bwd.wh", {hidden, g3}, rng, init_range);
  bwd_b = Uniform(prefix + ".gru_bwd.bx", {g3}, rng, init_range);
  bwd_bh = Uniform(prefix + ".gru_bwd.bh", {g3}, rng, init_range);
  proj = Uniform(prefix + ".proj.w", {2 * hidden, embed}, rng, init_range);
  proj_b = Uniform(prefix + ".proj.b", {embed}, rng, init_range);
}

Var EmbeddingBank::ComposeChars(Tape& tape, std::span<const std::vector<std::int32_t>> units) const {
  if (units.empty()) throw ContractError("compose: no words");
  const std::size_t g = hidden();
  const std::size_t n_units = unit_count();
  // Words of equal length run as one batch.
  std::map<std::size_t, std::vector<std::size_t>> by_length;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (units[i].empty()) throw ContractError("compose: empty word");
    by_length[units[i].size()].push_back(i);
  }
  Var table = tape.Param(unit_table);
  const GruWeights fwd{fwd_x, fwd_h, fwd_b, fwd_bh};
  const GruWeights bwd{bwd_x, bwd_h, bwd_b, bwd_bh};
  std::vector<Var> rows(units.size());
  for (const auto& [length, members] : by_length) {
    std::vector<Var> inputs;
    for (std::size_t pos = 0; pos < length; ++pos) {
      std::vector<std::int64_t> ids;
      for (std::size_t m : members) {
        const std::int32_t u = units[m][pos];
        ids.push_back(u < 0 || static_cast<std::size_t>(u) >= n_units ? 0 : u);
      }
      inputs.push_back(GatherRows(table, ids));
    }
    Var hf = tape.Constant(Tensor({members.size(), g}));
    Var hb = hf;
    for (std::size_t pos = 0; pos < length; ++pos) {
      hf = GruStep(tape, fwd, inputs[pos], hf, g);
      hb = GruStep(tape, bwd, inputs[length - 1 - pos], hb, g);
    }
    const Var both[] = {hf, hb};
    Var ce = Add(Matmul(Concat(both), tape.Param(proj)), tape.Param(proj_b));
    if (by_length.size() == 1) {
      // Rows already in input order.
      return ce;
    }
    for (std::size_t k = 0; k < members.size(); ++k) rows[members[k]] = Row(ce, k);
  }
  return Stack(rows);
}

Var EmbeddingBank::Compose(Tape& tape, std::span<const std::vector<std::int32_t>> units,
                           std::span<const std::int64_t> word_rows) const {
  if (word_rows.size() != units.size()) throw ContractError("compose: word_rows length mismatch");
  Var ce = ComposeChars(tape, units);
  bool any = false;
  for (std::int64_t r : word_rows) any = any || r >= 0;
  if (!any) return ce;
  Var we = GatherRows(tape.Param(word_table), word_rows, Real(1));
  return Mul(we, ce);
}

std::vector<Parameter*> EmbeddingBank::Parameters() {
  return {&unit_table, &word_table, &fwd_x, &fwd_h, &fwd_b, &fwd_bh,
          &bwd_x, &bwd_h, &bwd_b, &bwd_bh, &proj, &proj_b};
}

std::vector<const Parameter*> EmbeddingBank::Parameters() const {
  return {&unit_table, &word_table, &fwd_x, &fwd_h, &fwd_b, &fwd_bh,
          &bwd_x, &bwd_h, &bwd_b, &bwd_bh, &proj, &proj_b};
}

}  // namespace OPENIME_NN_NS
}  // namespace openime
