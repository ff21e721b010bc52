// Copyright 2026 The smc Authors.
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

#include "smc/harness.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

#include "smc/errors.hpp"
#include "smc/linalg.hpp"
#include "smc/rng.hpp"
#include "smc/stream_io.hpp"
#include "smc/truncated_svd.hpp"

namespace smc {
namespace {

// Orthonormal basis of a's column span; dependent columns are dropped
// greedily (the QR names each failure). Width 0 when a is (near) zero.
DenseMatrix orthonormal_basis(const DenseMatrix& a) {
  std::vector<std::size_t> kept(a.cols);
  for (std::size_t j = 0; j < a.cols; ++j) {
    kept[j] = j;
  }
  while (!kept.empty()) {
    DenseMatrix sub(a.rows, kept.size());
    for (std::size_t i = 0; i < a.rows; ++i) {
      for (std::size_t j = 0; j < kept.size(); ++j) {
        sub.at(i, j) = a.at(i, kept[j]);
      }
    }
    try {
      return qr_decompose(sub).q;
    } catch (const RankDeficiencyError& e) {
      kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(e.column()));
    }
  }
  return DenseMatrix(a.rows, 0);
}

std::filesystem::path unique_temp_path(std::uint64_t tag) {
  static std::atomic<std::uint64_t> counter{0};
  const std::uint64_t nonce =
      static_cast<std::uint64_t>(
          std::chrono::steady_clock::now().time_since_epoch().count()) ^
      (++counter << 40) ^ (tag << 20);
  return std::filesystem::temp_directory_path() /
         ("smc-sweep-" + std::to_string(nonce) + ".smcs");
}

std::size_t resolve_ell(const ExperimentConfig& c) {
  if (c.ell != 0) {
    return c.ell;
  }
  return std::min(suggest_ell(c.k, c.delta, c.m), c.n);
}

}  // namespace

DenseMatrix oracle_complete(const SparseColMatrix& a, double delta,
                            std::size_t k) {
  if (!(delta > 0.0) || delta > 1.0) {
    throw InvalidArgumentError("oracle_complete: delta must be in (0, 1]");
  }
  if (k < 1 || k > std::min(a.rows, a.cols)) {
    throw InvalidArgumentError("oracle_complete: need 1 <= k <= min(m, n)");
  }
  SvdResult svd = truncated_svd(a, k);
  const double scale = 1.0 / delta;
  DenseMatrix out(a.rows, a.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < a.cols; ++j) {
      double acc = 0.0;
      for (std::size_t b = 0; b < k; ++b) {
        acc += svd.u.at(i, b) * svd.s[b] * svd.v.at(j, b);
      }
      out.at(i, j) = std::min(1.0, std::max(0.0, scale * acc));
    }
  }
  return out;
}

EvalReport evaluate(const GroundTruth& gt, const DenseMatrix& m_hat,
                    const CompletionResult* result) {
  if (m_hat.rows != gt.m || m_hat.cols != gt.n) {
    throw InvalidArgumentError("evaluate: estimate shape mismatch");
  }
  if (gt.matrix.rows != gt.m || gt.matrix.cols != gt.n) {
    throw InvalidArgumentError("evaluate: ground truth shape mismatch");
  }
  double diff_sq = 0.0;
  for (std::size_t i = 0; i < gt.m; ++i) {
    for (std::size_t j = 0; j < gt.n; ++j) {
      const double d = m_hat.at(i, j) - gt.matrix.at(i, j);
      diff_sq += d * d;
    }
  }
  const double denom = frobenius_norm_sq(gt.matrix);
  if (denom == 0.0) {
    throw DegenerateInputError("evaluate: ground truth is identically zero");
  }
  EvalReport rep;
  rep.rel_mse = diff_sq / denom;
  rep.abs_mse =
      diff_sq / (static_cast<double>(gt.m) * static_cast<double>(gt.n));
  if (result != nullptr) {
    rep.resources = result->resources;
    if (result->vhat.rows != gt.n || gt.svd.v.rows != gt.n) {
      throw InvalidArgumentError("evaluate: right-factor shape mismatch");
    }
    DenseMatrix basis = orthonormal_basis(result->vhat);
    rep.v_subspace_error =
        basis.cols == 0 ? 1.0 : subspace_distance(basis, gt.svd.v);
  }
  return rep;
}

std::vector<std::string> regime_warnings(const ExperimentConfig& c) {
  std::vector<std::string> warnings;
  if (c.m < 2 || c.n < 1 || c.k < 1 || !(c.delta > 0.0)) {
    return warnings;  // hard validation happens elsewhere
  }
  const double ln_m = std::log(static_cast<double>(c.m));
  const double kd = static_cast<double>(c.k);
  const double bound =
      4.0 * kd *
      std::max({kd / static_cast<double>(c.n), ln_m * ln_m / c.m,
                kd * ln_m / static_cast<double>(c.m)});
  if (c.delta < bound) {
    std::ostringstream os;
    os << "sampling rate delta=" << format_double(c.delta)
       << " is below the sufficiency level "
       << format_double(bound)
       << " (= 4k max(k/n, ln(m)^2/m, k ln(m)/m)); recovery quality is "
          "not covered by the analysis at this scale";
    warnings.push_back(os.str());
  }
  return warnings;
}

std::vector<SweepRow> sweep(const std::vector<ExperimentConfig>& configs) {
  if (configs.empty()) {
    throw InvalidArgumentError("sweep: config list is empty");
  }
  std::vector<SweepRow> rows;
  rows.reserve(configs.size());
  for (const ExperimentConfig& cfg : configs) {
    SweepRow row;
    row.config = cfg;
    const std::filesystem::path path = unique_temp_path(cfg.seed);
    try {
      GroundTruth gt = gen_low_rank(cfg.m, cfg.n, cfg.k, cfg.seed);
      DenseMatrix observed =
          apply_noise(gt, NoiseSpec{cfg.noise, derive_seed(cfg.seed, 1)});
      SparseColMatrix sampled =
          sample_entries(observed, cfg.delta, derive_seed(cfg.seed, 2));
      stream_write(sampled, path.string());
      sampled = SparseColMatrix();
      observed = DenseMatrix();

      SmcConfig sc;
      sc.k = cfg.k;
      sc.ell = resolve_ell(cfg);
      sc.seed = cfg.seed;
      ColumnStream stream(path.string());
      CompletionResult result = run_one_pass(stream, sc);
      DenseMatrix m_hat = materialize(result);
      row.report = evaluate(gt, m_hat, &result);
      m_hat = DenseMatrix();

      SparseColMatrix for_oracle = read_stream_matrix(path.string());
      DenseMatrix oracle = oracle_complete(for_oracle, cfg.delta, cfg.k);
      row.report.oracle_rel_mse = evaluate(gt, oracle).rel_mse;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    std::error_code ec;
    std::filesystem::remove(path, ec);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_factors(const std::string& path, const CompletionResult& r) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InvalidArgumentError("cannot open for writing: " + path);
  }
  out << "smcf 1\n";
  auto block = [&out](const char* name, const DenseMatrix& a) {
    out << name << ' ' << a.rows << ' ' << a.cols << '\n';
    for (std::size_t i = 0; i < a.rows; ++i) {
      for (std::size_t j = 0; j < a.cols; ++j) {
        if (j > 0) out << ' ';
        out << format_double(a.at(i, j));
      }
      out << '\n';
    }
  };
  block("uhat", r.uhat);
  block("vhat", r.vhat);
  block("rhat", r.rhat);
  out << "resources\n";
  out << "delta_hat " << format_double(r.delta_hat) << '\n';
  out << "effective_rank " << r.effective_rank << '\n';
  out << "quality_warning " << (r.quality_warning ? 1 : 0) << '\n';
  out << "peak_dense_values " << r.resources.peak_dense_values << '\n';
  out << "peak_sparse_entries " << r.resources.peak_sparse_entries << '\n';
  out << "flops_batch " << r.resources.flops_batch << '\n';
  out << "flops_stream " << r.resources.flops_stream << '\n';
  out << "flops_finalize " << r.resources.flops_finalize << '\n';
  out << "columns_consumed " << r.resources.columns_consumed << '\n';
  out << "phi_dense_values " << r.resources.phi_dense_values << '\n';
  out << "phi_sparse_equivalent " << r.resources.phi_sparse_equivalent
      << '\n';
  out << "index_bits_estimate " << r.resources.index_bits_estimate << '\n';
  out << "end\n";
  if (!out) {
    throw NumericalError("write failed: " + path);
  }
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= line.size()) {
    std::size_t sp = line.find(' ', start);
    if (sp == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, sp - start));
    start = sp + 1;
  }
  return out;
}

std::size_t to_size(const std::string& s, std::size_t line_no) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("expected an integer", line_no);
  }
  return static_cast<std::size_t>(v);
}

double to_real(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ParseError("expected a finite real", line_no);
  }
  return v;
}

}  // namespace

CompletionResult read_factors(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidArgumentError("cannot open factors file: " + path);
  }
  std::size_t line_no = 0;
  auto next_line = [&in, &line_no]() {
    std::string line;
    if (!std::getline(in, line)) {
      throw ParseError("unexpected end of file", line_no + 1);
    }
    ++line_no;
    return line;
  };
  if (next_line() != "smcf 1") {
    throw ParseError("not a factors file (expected \"smcf 1\")", line_no);
  }
  auto matrix_block = [&](const char* name) {
    auto head = split_ws(next_line());
    if (head.size() != 3 || head[0] != name) {
      throw ParseError(std::string("expected \"") + name + " <rows> <cols>\"",
                       line_no);
    }
    std::size_t rows = to_size(head[1], line_no);
    std::size_t cols = to_size(head[2], line_no);
    DenseMatrix a(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      auto fields = split_ws(next_line());
      if (fields.size() != cols) {
        throw ParseError("expected " + std::to_string(cols) + " values",
                         line_no);
      }
      for (std::size_t j = 0; j < cols; ++j) {
        a.at(i, j) = to_real(fields[j], line_no);
      }
    }
    return a;
  };
  CompletionResult r;
  r.uhat = matrix_block("uhat");
  r.vhat = matrix_block("vhat");
  r.rhat = matrix_block("rhat");
  const std::size_t k = r.uhat.cols;
  if (r.vhat.cols != k || r.rhat.rows != k || r.rhat.cols != k) {
    throw ParseError("factor shapes disagree on k", line_no);
  }
  if (next_line() != "resources") {
    throw ParseError("expected \"resources\"", line_no);
  }
  auto named = [&](const char* name) {
    auto fields = split_ws(next_line());
    if (fields.size() != 2 || fields[0] != name) {
      throw ParseError(std::string("expected \"") + name + " <value>\"",
                       line_no);
    }
    return fields[1];
  };
  r.delta_hat = to_real(named("delta_hat"), line_no);
  r.effective_rank = to_size(named("effective_rank"), line_no);
  r.quality_warning = to_size(named("quality_warning"), line_no) != 0;
  r.resources.peak_dense_values = to_size(named("peak_dense_values"), line_no);
  r.resources.peak_sparse_entries =
      to_size(named("peak_sparse_entries"), line_no);
  r.resources.flops_batch = to_size(named("flops_batch"), line_no);
  r.resources.flops_stream = to_size(named("flops_stream"), line_no);
  r.resources.flops_finalize = to_size(named("flops_finalize"), line_no);
  r.resources.columns_consumed = to_size(named("columns_consumed"), line_no);
  r.resources.phi_dense_values = to_size(named("phi_dense_values"), line_no);
  r.resources.phi_sparse_equivalent =
      to_size(named("phi_sparse_equivalent"), line_no);
  r.resources.index_bits_estimate =
      to_size(named("index_bits_estimate"), line_no);
  if (next_line() != "end") {
    throw ParseError("expected \"end\"", line_no);
  }
  if (r.effective_rank > k) {
    throw ParseError("effective_rank exceeds k", line_no);
  }
  return r;
}

}  // namespace smc
