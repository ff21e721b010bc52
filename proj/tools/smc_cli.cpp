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

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "smc/errors.hpp"
#include "smc/harness.hpp"
#include "smc/linalg.hpp"
#include "smc/observe.hpp"
#include "smc/rng.hpp"
#include "smc/smc.hpp"
#include "smc/stream_io.hpp"
#include "smc/truncated_svd.hpp"

namespace {

using nlohmann::ordered_json;

// Stdout is byte-stable for a fixed command line: no timestamps, no wall
// times, no pointers. Timing is opt-in via --timing precisely so default
// runs can be compared bit for bit.

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) {
    std::cerr << "warning: " << w << '\n';
  }
}

std::size_t parse_ell(const std::string& text) {
  if (text == "auto") {
    return 0;
  }
  try {
    std::size_t pos = 0;
    unsigned long long v = std::stoull(text, &pos);
    if (pos != text.size() || v == 0) {
      throw std::invalid_argument(text);
    }
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw smc::InvalidArgumentError("--ell must be a positive integer or "
                                    "\"auto\", got \"" + text + "\"");
  }
}

ordered_json resources_to_json(const smc::ResourceReport& r) {
  ordered_json j;
  j["peak_dense_values"] = r.peak_dense_values;
  j["peak_sparse_entries"] = r.peak_sparse_entries;
  j["flops_batch"] = r.flops_batch;
  j["flops_stream"] = r.flops_stream;
  j["flops_finalize"] = r.flops_finalize;
  j["columns_consumed"] = r.columns_consumed;
  j["phi_dense_values"] = r.phi_dense_values;
  j["phi_sparse_equivalent"] = r.phi_sparse_equivalent;
  j["index_bits_estimate"] = r.index_bits_estimate;
  return j;
}

ordered_json report_to_json(const smc::EvalReport& rep, bool timing) {
  ordered_json j;
  j["rel_mse"] = rep.rel_mse;
  j["abs_mse"] = rep.abs_mse;
  if (rep.v_subspace_error) {
    j["v_subspace_error"] = *rep.v_subspace_error;
  }
  if (rep.oracle_rel_mse) {
    j["oracle_rel_mse"] = *rep.oracle_rel_mse;
  }
  if (rep.resources) {
    j["resources"] = resources_to_json(*rep.resources);
  }
  if (timing && rep.wall_time_seconds) {
    j["wall_time_seconds"] = *rep.wall_time_seconds;
  }
  return j;
}

const char* kReportCsvColumns =
    "rel_mse,abs_mse,v_subspace_error,oracle_rel_mse,peak_dense_values,"
    "peak_sparse_entries,flops_batch,flops_stream,flops_finalize,"
    "columns_consumed,phi_dense_values,phi_sparse_equivalent,"
    "index_bits_estimate";

std::string report_to_csv_row(const smc::EvalReport& rep, bool timing) {
  std::ostringstream os;
  os << smc::format_double(rep.rel_mse) << ','
     << smc::format_double(rep.abs_mse) << ',';
  if (rep.v_subspace_error) {
    os << smc::format_double(*rep.v_subspace_error);
  }
  os << ',';
  if (rep.oracle_rel_mse) {
    os << smc::format_double(*rep.oracle_rel_mse);
  }
  if (rep.resources) {
    const smc::ResourceReport& r = *rep.resources;
    os << ',' << r.peak_dense_values << ',' << r.peak_sparse_entries << ','
       << r.flops_batch << ',' << r.flops_stream << ',' << r.flops_finalize
       << ',' << r.columns_consumed << ',' << r.phi_dense_values << ','
       << r.phi_sparse_equivalent << ',' << r.index_bits_estimate;
  } else {
    os << ",,,,,,,,,";
  }
  if (timing) {
    os << ',';
    if (rep.wall_time_seconds) {
      os << smc::format_double(*rep.wall_time_seconds);
    }
  }
  return os.str();
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

int cmd_gen(std::size_t m, std::size_t n, std::size_t k, double delta,
            double noise, std::uint64_t seed, const std::string& out) {
  smc::ExperimentConfig cfg;
  cfg.m = m;
  cfg.n = n;
  cfg.k = k;
  cfg.delta = delta;
  cfg.noise = noise;
  cfg.seed = seed;
  print_warnings(smc::regime_warnings(cfg));

  smc::GroundTruth gt = smc::gen_low_rank(m, n, k, seed);
  smc::DenseMatrix observed =
      smc::apply_noise(gt, smc::NoiseSpec{noise, smc::derive_seed(seed, 1)});
  smc::SparseColMatrix sampled =
      smc::sample_entries(observed, delta, smc::derive_seed(seed, 2));
  smc::stream_write(sampled, out);
  smc::write_dense(out + ".truth", gt.matrix, k);
  return 0;
}

int cmd_complete(const std::string& stream_path, std::size_t k,
                 const std::string& ell_text, std::uint64_t seed,
                 const std::string& out) {
  const std::size_t ell = parse_ell(ell_text);
  smc::ColumnStream stream(stream_path);
  const smc::StreamHeader header = stream.header();
  smc::CompletionResult result = [&]() {
    if (ell != 0) {
      smc::SmcConfig config;
      config.k = k;
      config.ell = ell;
      config.seed = seed;
      return smc::run_one_pass(stream, config);
    }
    // auto: grow the batch until it is wide enough for the running rate
    // estimate; the batch then continues into the normal streaming run,
    // still one pass.
    std::vector<smc::SparseColumn> batch;
    std::size_t entries = 0;
    while (true) {
      auto item = stream.next();
      if (!item) {
        break;  // whole stream became the batch
      }
      entries += item->second.nnz();
      batch.push_back(std::move(item->second));
      if (entries == 0) {
        continue;  // no rate estimate yet
      }
      const double rate =
          static_cast<double>(entries) /
          (static_cast<double>(header.m) * static_cast<double>(batch.size()));
      const std::size_t want =
          std::max(k, smc::suggest_ell(k, rate, header.m));
      if (batch.size() >= want) {
        break;
      }
    }
    smc::SmcConfig config;
    config.k = k;
    config.ell = batch.size();
    config.seed = seed;
    smc::SmcState state =
        smc::SmcState::init_batch(header.m, header.n, batch, config);
    batch.clear();
    while (auto item = stream.next()) {
      state.ingest_column(item->second, item->first);
    }
    return state.finalize();
  }();
  if (result.quality_warning) {
    std::cerr << "warning: completion quality is degraded (degenerate "
                 "spectrum or rank-deficient factors)\n";
  }
  smc::write_factors(out, result);
  return 0;
}

int cmd_oracle(const std::string& stream_path, double delta, std::size_t k,
               const std::string& out) {
  smc::SparseColMatrix a = smc::read_stream_matrix(stream_path);
  smc::DenseMatrix estimate = smc::oracle_complete(a, delta, k);
  smc::write_dense(out, estimate, k);
  return 0;
}

int cmd_shuffle(const std::string& stream_path, std::uint64_t seed,
                const std::string& out) {
  // Utility for externally produced streams whose column order carries
  // structure: a seeded Fisher-Yates pass over whole columns. Reads the
  // file fully (this is offline preprocessing, not the one-pass path).
  smc::SparseColMatrix a = smc::read_stream_matrix(stream_path);
  smc::Rng rng(seed);
  for (std::size_t i = a.cols; i > 1; --i) {
    const std::size_t j =
        static_cast<std::size_t>(rng.uniform_below(static_cast<std::uint64_t>(i)));
    std::swap(a.columns[i - 1], a.columns[j]);
  }
  smc::stream_write(a, out);
  return 0;
}

int cmd_eval(const std::string& truth_path, const std::string& estimate_path,
             const std::string& format, bool timing) {
  const auto start = std::chrono::steady_clock::now();
  smc::DenseFile truth = smc::read_dense(truth_path);
  smc::GroundTruth gt;
  gt.m = truth.matrix.rows;
  gt.n = truth.matrix.cols;
  gt.k = truth.k;
  gt.matrix = std::move(truth.matrix);

  smc::EvalReport rep;
  const std::string tag = smc::peek_format_tag(estimate_path);
  if (tag == "smcf") {
    if (gt.k < 1) {
      throw smc::InvalidArgumentError(
          "eval: truth file records no rank; cannot compare subspaces");
    }
    gt.svd = smc::truncated_svd(gt.matrix, gt.k);
    smc::CompletionResult result = smc::read_factors(estimate_path);
    smc::DenseMatrix m_hat = smc::materialize(result);
    rep = smc::evaluate(gt, m_hat, &result);
  } else if (tag == "smcd") {
    smc::DenseFile estimate = smc::read_dense(estimate_path);
    rep = smc::evaluate(gt, estimate.matrix);
  } else {
    throw smc::ParseError(
        "estimate file is neither a factors file (smcf) nor a dense "
        "matrix file (smcd)", 1);
  }
  if (timing) {
    rep.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
  }
  if (format == "json") {
    std::cout << report_to_json(rep, timing).dump(2) << '\n';
  } else {
    std::cout << kReportCsvColumns;
    if (timing) std::cout << ",wall_time_seconds";
    std::cout << '\n' << report_to_csv_row(rep, timing) << '\n';
  }
  return 0;
}

std::vector<smc::ExperimentConfig> parse_sweep_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw smc::InvalidArgumentError("cannot open sweep spec: " + path);
  }
  std::vector<smc::ExperimentConfig> configs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') {
      continue;
    }
    std::istringstream is(line);
    std::string m, n, k, delta, noise, ell, seed, extra;
    if (!(is >> m >> n >> k >> delta >> noise >> ell >> seed) ||
        (is >> extra)) {
      throw smc::ParseError(
          "expected \"m n k delta noise ell seed\"", line_no);
    }
    try {
      smc::ExperimentConfig cfg;
      cfg.m = std::stoull(m);
      cfg.n = std::stoull(n);
      cfg.k = std::stoull(k);
      cfg.delta = std::stod(delta);
      cfg.noise = std::stod(noise);
      cfg.ell = parse_ell(ell);
      cfg.seed = std::stoull(seed);
      configs.push_back(cfg);
    } catch (const smc::InvalidArgumentError&) {
      throw smc::ParseError("bad ell field (positive integer or \"auto\")",
                            line_no);
    } catch (const std::exception&) {
      throw smc::ParseError("malformed numeric field", line_no);
    }
  }
  return configs;
}

std::string ell_text(std::size_t ell) {
  return ell == 0 ? std::string("auto") : std::to_string(ell);
}

int cmd_sweep(const std::string& spec_path, const std::string& format,
              bool timing) {
  std::vector<smc::ExperimentConfig> configs = parse_sweep_spec(spec_path);
  for (const smc::ExperimentConfig& cfg : configs) {
    print_warnings(smc::regime_warnings(cfg));
  }
  std::vector<smc::SweepRow> rows;
  if (timing) {
    rows.reserve(configs.size());
    for (const smc::ExperimentConfig& cfg : configs) {
      const auto start = std::chrono::steady_clock::now();
      std::vector<smc::SweepRow> one = smc::sweep({cfg});
      one[0].report.wall_time_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                        start)
              .count();
      rows.push_back(std::move(one[0]));
    }
  } else {
    rows = smc::sweep(configs);
  }

  if (format == "json") {
    ordered_json out = ordered_json::array();
    for (const smc::SweepRow& row : rows) {
      ordered_json j;
      j["config"] = {{"m", row.config.m},
                     {"n", row.config.n},
                     {"k", row.config.k},
                     {"delta", row.config.delta},
                     {"noise", row.config.noise},
                     {"ell", ell_text(row.config.ell)},
                     {"seed", row.config.seed}};
      if (row.error.empty()) {
        j["report"] = report_to_json(row.report, timing);
      } else {
        j["error"] = row.error;
      }
      out.push_back(std::move(j));
    }
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << "m,n,k,delta,noise,ell,seed," << kReportCsvColumns;
    if (timing) std::cout << ",wall_time_seconds";
    std::cout << ",error\n";
    for (const smc::SweepRow& row : rows) {
      std::cout << row.config.m << ',' << row.config.n << ',' << row.config.k
                << ',' << smc::format_double(row.config.delta) << ','
                << smc::format_double(row.config.noise) << ','
                << ell_text(row.config.ell) << ',' << row.config.seed << ',';
      if (row.error.empty()) {
        std::cout << report_to_csv_row(row.report, timing) << ',';
      } else {
        // 13 report columns, plus the timing column when enabled
        for (int i = 0; i < 13 + (timing ? 1 : 0); ++i) std::cout << ',';
      }
      std::cout << (row.error.empty() ? "" : csv_quote(row.error)) << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming low-rank matrix completion: one pass over sparsely "
               "sampled columns under an O(k(m+n)) memory budget, with a "
               "synthetic-data harness and a full-memory spectral baseline"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand(
      "gen", "Generate a synthetic sampled column stream and its ground "
             "truth (written to OUT and OUT.truth)");
  std::size_t g_m = 0, g_n = 0, g_k = 0;
  double g_delta = 0.0, g_noise = 0.0;
  std::uint64_t g_seed = 0;
  std::string g_out;
  gen->add_option("--m", g_m, "Rows")->required();
  gen->add_option("--n", g_n, "Columns")->required();
  gen->add_option("--k", g_k, "Rank")->required();
  gen->add_option("--delta", g_delta, "Sampling rate in (0,1]")->required();
  gen->add_option("--noise", g_noise, "Noise amplitude in [0,1)")
      ->default_val(0.0);
  gen->add_option("--seed", g_seed, "Seed")->default_val(0);
  gen->add_option("--out", g_out, "Stream file path")->required();

  // complete
  auto* complete = app.add_subcommand(
      "complete", "Run the one-pass completion over a stream file");
  std::string c_stream, c_ell = "auto", c_out;
  std::size_t c_k = 0;
  std::uint64_t c_seed = 0;
  complete->add_option("--stream", c_stream, "Input stream file")->required();
  complete->add_option("--k", c_k, "Target rank")->required();
  complete->add_option("--ell", c_ell,
                       "Batch width (positive integer or \"auto\")")
      ->default_val("auto");
  complete->add_option("--seed", c_seed, "Seed")->default_val(0);
  complete->add_option("--out", c_out, "Output factors file")->required();

  // oracle
  auto* oracle = app.add_subcommand(
      "oracle", "Full-memory spectral baseline over the same stream file");
  std::string o_stream, o_out;
  double o_delta = 0.0;
  std::size_t o_k = 0;
  oracle->add_option("--stream", o_stream, "Input stream file")->required();
  oracle->add_option("--delta", o_delta, "Sampling rate used to rescale")
      ->required();
  oracle->add_option("--k", o_k, "Truncation rank")->required();
  oracle->add_option("--out", o_out, "Output dense matrix file")->required();

  // shuffle
  auto* shuffle = app.add_subcommand(
      "shuffle", "Permute the columns of a stream file (seeded), for "
                 "externally supplied matrices whose column order carries "
                 "structure");
  std::string sh_stream, sh_out;
  std::uint64_t sh_seed = 0;
  shuffle->add_option("--stream", sh_stream, "Input stream file")->required();
  shuffle->add_option("--seed", sh_seed, "Seed")->default_val(0);
  shuffle->add_option("--out", sh_out, "Output stream file")->required();

  // eval
  auto* eval = app.add_subcommand(
      "eval", "Compare an estimate (factors or dense file) to the truth");
  std::string e_truth, e_estimate, e_format = "json";
  bool e_timing = false;
  eval->add_option("--truth", e_truth, "Ground-truth dense file")->required();
  eval->add_option("--estimate", e_estimate, "Factors or dense estimate file")
      ->required();
  eval->add_option("--format", e_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->default_val("json");
  eval->add_flag("--timing", e_timing,
                 "Include wall time (breaks byte-for-byte reproducibility)");

  // sweep
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Run experiment rows from a spec file (one \"m n k delta "
               "noise ell seed\" per line; # comments allowed)");
  std::string s_spec, s_format = "csv";
  bool s_timing = false;
  sweep_cmd->add_option("--spec", s_spec, "Spec file")->required();
  sweep_cmd->add_option("--format", s_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->default_val("csv");
  sweep_cmd->add_flag("--timing", s_timing,
                      "Include per-row wall time (breaks byte-for-byte "
                      "reproducibility)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(gen)) {
      return cmd_gen(g_m, g_n, g_k, g_delta, g_noise, g_seed, g_out);
    }
    if (app.got_subcommand(complete)) {
      return cmd_complete(c_stream, c_k, c_ell, c_seed, c_out);
    }
    if (app.got_subcommand(oracle)) {
      return cmd_oracle(o_stream, o_delta, o_k, o_out);
    }
    if (app.got_subcommand(shuffle)) {
      return cmd_shuffle(sh_stream, sh_seed, sh_out);
    }
    if (app.got_subcommand(eval)) {
      return cmd_eval(e_truth, e_estimate, e_format, e_timing);
    }
    if (app.got_subcommand(sweep_cmd)) {
      return cmd_sweep(s_spec, s_format, s_timing);
    }
  } catch (const smc::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const smc::NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const smc::InvalidArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 2;
}
