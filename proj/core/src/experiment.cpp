#include "sudonet/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "sudonet/report.hpp"

namespace sudonet {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

/// Forward in row chunks to keep eval memory flat.
template <typename Visit>
void forward_chunked(const Network& net, const Matrix& inputs, std::size_t chunk,
                     Visit&& visit) {
  for (std::size_t start = 0; start < inputs.rows(); start += chunk) {
    const std::size_t stop = std::min(start + chunk, inputs.rows());
    Matrix block(stop - start, inputs.cols());
    std::copy(inputs.data() + start * inputs.cols(), inputs.data() + stop * inputs.cols(),
              block.data());
    visit(start, net.forward(block));
  }
}

double accuracy_sign(const Network& net, const Dataset& ds) {
  std::size_t hits = 0;
  forward_chunked(net, ds.inputs, 16384, [&](std::size_t start, const Matrix& out) {
    for (std::size_t r = 0; r < out.rows(); ++r) {
      const double want = ds.targets(start + r, 0);
      const double got = out(r, 0) >= 0.0 ? 1.0 : -1.0;
      if (got == want) ++hits;
    }
  });
  return static_cast<double>(hits) / static_cast<double>(ds.inputs.rows());
}

double accuracy_argmax(const Network& net, const Dataset& ds) {
  std::size_t hits = 0;
  forward_chunked(net, ds.inputs, 8192, [&](std::size_t start, const Matrix& out) {
    for (std::size_t r = 0; r < out.rows(); ++r) {
      std::size_t best = 0, truth = 0;
      for (std::size_t c = 1; c < out.cols(); ++c) {
        if (out(r, c) > out(r, best)) best = c;
        if (ds.targets(start + r, c) > ds.targets(start + r, truth)) truth = c;
      }
      if (best == truth) ++hits;
    }
  });
  return static_cast<double>(hits) / static_cast<double>(ds.inputs.rows());
}

double sse_metric(const Network& net, const Dataset& ds) {
  double total = 0.0;
  forward_chunked(net, ds.inputs, 8192, [&](std::size_t start, const Matrix& out) {
    for (std::size_t r = 0; r < out.rows(); ++r) {
      for (std::size_t c = 0; c < out.cols(); ++c) {
        const double d = out(r, c) - ds.targets(start + r, c);
        total += d * d;
      }
    }
  });
  return total;
}

Dataset split_rows(const Dataset& src, bool take_every_fifth) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < src.inputs.rows(); ++i) {
    if ((i % 5 == 4) == take_every_fifth) keep.push_back(i);
  }
  Dataset out;
  out.kind = src.kind;
  out.grid_rows = src.grid_rows;
  out.grid_cols = src.grid_cols;
  out.inputs = Matrix(keep.size(), src.inputs.cols());
  out.targets = Matrix(keep.size(), src.targets.cols());
  for (std::size_t r = 0; r < keep.size(); ++r) {
    std::copy(src.inputs.data() + keep[r] * src.inputs.cols(),
              src.inputs.data() + (keep[r] + 1) * src.inputs.cols(),
              out.inputs.data() + r * src.inputs.cols());
    std::copy(src.targets.data() + keep[r] * src.targets.cols(),
              src.targets.data() + (keep[r] + 1) * src.targets.cols(),
              out.targets.data() + r * src.targets.cols());
  }
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (const char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

std::string task_name(TaskKind task) {
  switch (task) {
    case TaskKind::Parabola: return "parabola";
    case TaskKind::Checkerboard: return "checkerboard";
    case TaskKind::Regression: return "regression";
    case TaskKind::Memorize: return "memorize";
    case TaskKind::Autoencode: return "autoencode";
    case TaskKind::Mnist: return "mnist";
  }
  return "?";
}

TaskKind parse_task(const std::string& name) {
  for (const TaskKind t :
       {TaskKind::Parabola, TaskKind::Checkerboard, TaskKind::Regression, TaskKind::Memorize,
        TaskKind::Autoencode, TaskKind::Mnist}) {
    if (task_name(t) == name) return t;
  }
  throw ConfigError("unknown task '" + name + "'");
}

void apply_task_defaults(SweepSpec& spec) {
  if (!spec.epochs) {
    switch (spec.task) {
      case TaskKind::Parabola: spec.epochs = 2000; break;
      case TaskKind::Checkerboard: spec.epochs = 1000; break;
      case TaskKind::Regression: spec.epochs = 2000; break;
      case TaskKind::Memorize: spec.epochs = 500; break;
      case TaskKind::Autoencode: spec.epochs = 200; break;
      case TaskKind::Mnist: spec.epochs = 30; break;
    }
  }
  if (!spec.optimizer) {
    spec.optimizer = spec.task == TaskKind::Parabola ? OptimizerKind::SgdMomentum
                                                     : OptimizerKind::Adam;
  }
  if (!spec.batch_size) {
    switch (spec.task) {
      case TaskKind::Mnist:
      case TaskKind::Autoencode: spec.batch_size = 64; break;
      case TaskKind::Memorize: spec.batch_size = 256; break;
      default: spec.batch_size = 0; break;  // full batch
    }
  }
}

std::string CellKey::to_string() const {
  return task_name(task) + "/" + activation.name() + "/d" + std::to_string(depth) + "/w" +
         std::to_string(width);
}

std::uint64_t cell_seed(std::uint64_t seed_base, const CellKey& key, int replicate) {
  return seed_base + fnv1a(key.to_string()) + static_cast<std::uint64_t>(replicate);
}

TaskData prepare_task_data(const SweepSpec& spec) {
  TaskData data;
  switch (spec.task) {
    case TaskKind::Parabola:
      data.train = gen_parabola(200);
      data.eval = data.train;
      break;
    case TaskKind::Checkerboard:
      data.train = gen_checkerboard(spec.checkerboard_train, spec.board, spec.seed_base);
      data.eval = gen_checkerboard_testgrid(spec.board);
      break;
    case TaskKind::Regression:
      data.train = gen_sincos(100);
      data.eval = gen_sincos(101);
      break;
    case TaskKind::Memorize: {
      if (spec.image_path.empty()) throw ConfigError("memorize requires an input image");
      data.train = gen_memorization(read_pgm(spec.image_path));
      data.eval = data.train;
      break;
    }
    case TaskKind::Autoencode: {
      if (spec.corpus_path.empty()) throw ConfigError("autoencode requires an image corpus");
      const Dataset all = load_image_dir(spec.corpus_path, 32);
      data.train = split_rows(all, false);
      data.eval = split_rows(all, true);
      if (data.train.inputs.rows() == 0 || data.eval.inputs.rows() == 0) {
        throw ConfigError("autoencode corpus too small to split");
      }
      break;
    }
    case TaskKind::Mnist: {
      if (spec.mnist_train_images.empty() || spec.mnist_train_labels.empty() ||
          spec.mnist_test_images.empty() || spec.mnist_test_labels.empty()) {
        throw ConfigError("mnist requires train and test image/label files");
      }
      data.train = load_mnist(spec.mnist_train_images, spec.mnist_train_labels);
      data.eval = load_mnist(spec.mnist_test_images, spec.mnist_test_labels);
      break;
    }
  }
  return data;
}

NetworkSpec make_network_spec(TaskKind task, const Activation& act, int depth, int width,
                              std::size_t input_dim, std::size_t output_dim) {
  if (depth < 1 && task != TaskKind::Autoencode) {
    throw ConfigError("network depth must be >= 1");
  }
  if (width < 1) throw ConfigError("network width must be >= 1");
  NetworkSpec spec;
  if (task == TaskKind::Autoencode) {
    // width acts as the scale factor of the fixed encoder/decoder stack.
    const int base[] = {50, 50, 40, 20, 40, 50, 50};
    std::size_t prev = input_dim;
    for (const int h : base) {
      const std::size_t units = static_cast<std::size_t>(h) * static_cast<std::size_t>(width);
      spec.layers.push_back({prev, units, act});
      prev = units;
    }
    spec.layers.push_back({prev, output_dim, Activation::tanh()});
    spec.loss = Loss::SumSquaredError;
    return spec;
  }

  std::size_t prev = input_dim;
  for (int d = 0; d < depth; ++d) {
    spec.layers.push_back({prev, static_cast<std::size_t>(width), act});
    prev = static_cast<std::size_t>(width);
  }
  switch (task) {
    case TaskKind::Checkerboard:
    case TaskKind::Memorize:
      spec.layers.push_back({prev, output_dim, Activation::tanh()});
      spec.loss = Loss::SumSquaredError;
      break;
    case TaskKind::Parabola:
    case TaskKind::Regression:
      spec.layers.push_back({prev, output_dim, Activation::linear()});
      spec.loss = Loss::SumSquaredError;
      break;
    case TaskKind::Mnist:
      spec.layers.push_back({prev, output_dim, Activation::linear()});
      spec.loss = Loss::SoftmaxCrossEntropy;
      break;
    case TaskKind::Autoencode:
      break;  // handled above
  }
  return spec;
}

bool metric_higher_is_better(TaskKind task) {
  return task == TaskKind::Checkerboard || task == TaskKind::Mnist;
}

std::string metric_name(TaskKind task) {
  return metric_higher_is_better(task) ? "accuracy" : "sse";
}

double evaluate_metric(TaskKind task, const Network& net, const TaskData& data) {
  switch (task) {
    case TaskKind::Checkerboard: return accuracy_sign(net, data.eval);
    case TaskKind::Mnist: return accuracy_argmax(net, data.eval);
    default: return sse_metric(net, data.eval);
  }
}

namespace {

struct RunJob {
  std::size_t cell_index = 0;
  std::size_t lr_index = 0;
  int replicate = 0;
};

struct CellGrid {
  std::vector<CellKey> keys;
};

/// Shared runner behind run_cell and run_task. Records land in canonical
/// (cell, lr, replicate) order regardless of the number of worker threads.
struct Runner {
  const SweepSpec& spec;
  const TaskData& data;
  std::vector<CellKey> cells;
  bool keep_networks = false;

  std::vector<RunRecord> records;
  // Best run per (cell, lr): metric and network.
  std::vector<std::vector<double>> best_metric;
  std::vector<std::vector<Network>> best_net;
  std::mutex best_mutex;

  explicit Runner(const SweepSpec& s, const TaskData& d) : spec(s), data(d) {}

  std::size_t flat(std::size_t cell, std::size_t lr, int rep) const {
    return (cell * spec.learning_rates.size() + lr) * static_cast<std::size_t>(spec.replicates) +
           static_cast<std::size_t>(rep);
  }

  void execute() {
    const std::size_t total =
        cells.size() * spec.learning_rates.size() * static_cast<std::size_t>(spec.replicates);
    records.assign(total, RunRecord{});
    if (keep_networks) {
      best_metric.assign(cells.size(),
                         std::vector<double>(spec.learning_rates.size(), kNan));
      best_net.assign(cells.size(), std::vector<Network>(spec.learning_rates.size()));
    }

    std::vector<RunJob> jobs;
    jobs.reserve(total);
    for (std::size_t c = 0; c < cells.size(); ++c)
      for (std::size_t l = 0; l < spec.learning_rates.size(); ++l)
        for (int r = 0; r < spec.replicates; ++r) jobs.push_back({c, l, r});

    const int workers = std::max(1, std::min<int>(spec.jobs, static_cast<int>(jobs.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        const std::size_t j = next.fetch_add(1);
        if (j >= jobs.size()) return;
        run_one(jobs[j]);
      }
    };
    if (workers == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }
  }

  void run_one(const RunJob& job) {
    const CellKey& key = cells[job.cell_index];
    const double lr = spec.learning_rates[job.lr_index];
    const std::uint64_t seed = cell_seed(spec.seed_base, key, job.replicate);

    RunRecord rec;
    rec.key = key;
    rec.lr = lr;
    rec.replicate = job.replicate;
    rec.seed = seed;
    rec.epochs = *spec.epochs;
    rec.metric_name = metric_name(spec.task);

    const auto t0 = std::chrono::steady_clock::now();
    const NetworkSpec nspec =
        make_network_spec(spec.task, key.activation, key.depth, key.width,
                          data.train.inputs.cols(), data.train.targets.cols());
    Network net = Network::init(nspec, seed);

    TrainConfig config;
    config.optimizer = *spec.optimizer;
    config.learning_rate = lr;
    config.epochs = *spec.epochs;
    config.batch_size = *spec.batch_size;
    config.seed = seed;
    const TrainResult tr = train(net, data.train.inputs, data.train.targets, config);

    if (tr.diverged) {
      rec.metric_value = kNan;
      std::cerr << "warning: run diverged, excluding: " << key.to_string() << " lr=" << lr
                << " replicate=" << job.replicate << "\n";
    } else {
      rec.metric_value = evaluate_metric(spec.task, net, data);
    }
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    records[flat(job.cell_index, job.lr_index, job.replicate)] = std::move(rec);

    if (keep_networks && !tr.diverged) {
      const bool higher = metric_higher_is_better(spec.task);
      std::lock_guard<std::mutex> lock(best_mutex);
      double& best = best_metric[job.cell_index][job.lr_index];
      const double metric = records[flat(job.cell_index, job.lr_index, job.replicate)].metric_value;
      if (std::isnan(best) || (higher ? metric > best : metric < best)) {
        best = metric;
        best_net[job.cell_index][job.lr_index] = std::move(net);
      }
    }
  }

  ExperimentResult aggregate(std::size_t cell_index) const {
    const CellKey& key = cells[cell_index];
    ExperimentResult result;
    result.key = key;
    result.learning_rates = spec.learning_rates;
    result.metric_name = metric_name(spec.task);
    result.metrics.assign(spec.learning_rates.size(), {});

    const bool higher = metric_higher_is_better(spec.task);
    std::size_t best_lr = spec.learning_rates.size();
    double best_mean = kNan;
    for (std::size_t l = 0; l < spec.learning_rates.size(); ++l) {
      double sum = 0.0;
      int ok = 0;
      for (int r = 0; r < spec.replicates; ++r) {
        const double m = records[flat(cell_index, l, r)].metric_value;
        result.metrics[l].push_back(m);
        if (!std::isnan(m)) {
          sum += m;
          ++ok;
        }
      }
      if (ok == 0) continue;
      const double mean = sum / ok;
      if (best_lr == spec.learning_rates.size() || (higher ? mean > best_mean : mean < best_mean)) {
        best_lr = l;
        best_mean = mean;
      }
    }
    if (best_lr == spec.learning_rates.size()) {
      throw std::runtime_error("cell failed, every run diverged: " + key.to_string());
    }
    result.selected_lr = spec.learning_rates[best_lr];
    result.cell_metric = best_mean;
    return result;
  }
};

void validate_sweep(const SweepSpec& spec) {
  if (spec.activations.empty()) throw ConfigError("sweep needs at least one activation");
  if (spec.depths.empty()) throw ConfigError("sweep needs at least one depth");
  if (spec.widths.empty()) throw ConfigError("sweep needs at least one width");
  if (spec.learning_rates.empty()) throw ConfigError("sweep needs at least one learning rate");
  if (spec.replicates < 1) throw ConfigError("sweep needs replicates >= 1");
  for (const Activation& a : spec.activations) {
    if (a.discretized() && a.levels < 2) throw ConfigError("discretized activation with levels < 2");
  }
}

}  // namespace

CellOutcome run_cell(const SweepSpec& raw_spec, const TaskData& data, const Activation& act,
                     int depth, int width, bool keep_network) {
  SweepSpec spec = raw_spec;
  apply_task_defaults(spec);
  if (spec.learning_rates.empty()) throw ConfigError("run_cell needs a learning rate");
  if (spec.replicates < 1) throw ConfigError("run_cell needs replicates >= 1");

  Runner runner(spec, data);
  runner.cells = {CellKey{spec.task, act, depth, width}};
  runner.keep_networks = keep_network;
  runner.execute();

  CellOutcome outcome;
  outcome.result = runner.aggregate(0);
  outcome.runs = std::move(runner.records);
  if (keep_network) {
    const auto it = std::find(spec.learning_rates.begin(), spec.learning_rates.end(),
                              outcome.result.selected_lr);
    const std::size_t lr_index =
        static_cast<std::size_t>(it - spec.learning_rates.begin());
    if (!std::isnan(runner.best_metric[0][lr_index])) {
      outcome.best_network = std::move(runner.best_net[0][lr_index]);
      outcome.has_network = true;
    }
  }
  return outcome;
}

SweepOutcome run_task(const SweepSpec& raw_spec, const std::filesystem::path& out_dir) {
  SweepSpec spec = raw_spec;
  apply_task_defaults(spec);
  validate_sweep(spec);
  std::filesystem::create_directories(out_dir);

  const TaskData data = prepare_task_data(spec);

  Runner runner(spec, data);
  for (const int depth : spec.depths)
    for (const Activation& act : spec.activations)
      for (const int width : spec.widths)
        runner.cells.push_back(CellKey{spec.task, act, depth, width});
  runner.execute();

  SweepOutcome outcome;
  for (std::size_t c = 0; c < runner.cells.size(); ++c) {
    outcome.results.push_back(runner.aggregate(c));
  }
  outcome.runs = std::move(runner.records);

  write_run_log_csv(out_dir / "runs.csv", outcome.runs);

  // One table per depth, rows in activation order, columns in width order.
  const std::size_t per_depth = spec.activations.size() * spec.widths.size();
  for (std::size_t d = 0; d < spec.depths.size(); ++d) {
    std::ofstream out(out_dir / ("table_" + task_name(spec.task) + "_depth" +
                                 std::to_string(spec.depths[d]) + ".csv"));
    out << "activation";
    for (const int w : spec.widths) out << "," << w;
    out << "\n";
    for (std::size_t a = 0; a < spec.activations.size(); ++a) {
      out << spec.activations[a].name();
      for (std::size_t w = 0; w < spec.widths.size(); ++w) {
        const ExperimentResult& r =
            outcome.results[d * per_depth + a * spec.widths.size() + w];
        out << "," << fmt_double(r.cell_metric);
      }
      out << "\n";
    }
  }

  if (spec.task == TaskKind::Autoencode) {
    // Table values relative to the tanh / scale-1 cell of the same depth.
    for (std::size_t d = 0; d < spec.depths.size(); ++d) {
      double baseline = kNan;
      for (std::size_t i = 0; i < per_depth; ++i) {
        const ExperimentResult& r = outcome.results[d * per_depth + i];
        if (r.key.activation == Activation::tanh() && r.key.width == 1) {
          baseline = r.cell_metric;
        }
      }
      if (std::isnan(baseline)) {
        throw ConfigError("autoencode relative table needs the tanh/scale-1 baseline cell");
      }
      std::ofstream out(out_dir / ("table_autoencode_relative_depth" +
                                   std::to_string(spec.depths[d]) + ".csv"));
      out << "activation";
      for (const int w : spec.widths) out << "," << w;
      out << "\n";
      for (std::size_t a = 0; a < spec.activations.size(); ++a) {
        out << spec.activations[a].name();
        for (std::size_t w = 0; w < spec.widths.size(); ++w) {
          const ExperimentResult& r =
              outcome.results[d * per_depth + a * spec.widths.size() + w];
          out << "," << fmt_double(r.cell_metric / baseline);
        }
        out << "\n";
      }
    }
  }
  return outcome;
}

void write_run_log_csv(const std::filesystem::path& path, const std::vector<RunRecord>& runs) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open " + path.string() + " for writing");
  out << "task,activation,levels,depth,width,lr,replicate,seed,epochs,metric_name,"
         "metric_value,wall_seconds\n";
  for (const RunRecord& r : runs) {
    const Activation& a = r.key.activation;
    std::string family = a.name();
    if (a.discretized()) family = family.substr(0, family.rfind('-'));
    out << task_name(r.key.task) << "," << family << "," << a.levels << "," << r.key.depth
        << "," << r.key.width << "," << fmt_double(r.lr) << "," << r.replicate << "," << r.seed
        << "," << r.epochs << "," << r.metric_name << "," << fmt_double(r.metric_value) << ","
        << fmt_double(r.wall_seconds) << "\n";
  }
}

std::vector<RunRecord> read_run_log_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty run log " + path.string());
  std::vector<RunRecord> runs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 12) throw ParseError("bad run log row: " + line);
    RunRecord r;
    r.key.task = parse_task(f[0]);
    const int levels = std::stoi(f[2]);
    r.key.activation = levels > 0 ? Activation::parse(f[1] + "-" + f[2]) : Activation::parse(f[1]);
    r.key.depth = std::stoi(f[3]);
    r.key.width = std::stoi(f[4]);
    r.lr = std::strtod(f[5].c_str(), nullptr);
    r.replicate = std::stoi(f[6]);
    r.seed = std::stoull(f[7]);
    r.epochs = std::stoi(f[8]);
    r.metric_name = f[9];
    r.metric_value = std::strtod(f[10].c_str(), nullptr);
    r.wall_seconds = std::strtod(f[11].c_str(), nullptr);
    runs.push_back(std::move(r));
  }
  return runs;
}

double recount_cell_metric(const std::vector<RunRecord>& runs, const CellKey& key,
                           double selected_lr) {
  double sum = 0.0;
  int n = 0;
  for (const RunRecord& r : runs) {
    if (r.key == key && r.lr == selected_lr && !r.failed()) {
      sum += r.metric_value;
      ++n;
    }
  }
  if (n == 0) throw std::runtime_error("no usable runs for " + key.to_string());
  return sum / n;
}

ActivationHistogram collect_activation_histogram(const Network& net, const Matrix& inputs,
                                                 int bins) {
  if (bins < 1) throw ConfigError("histogram needs bins >= 1");
  if (net.layer_count() < 2) throw ConfigError("histogram needs at least one hidden layer");

  const std::size_t hidden_layers = net.layer_count() - 1;
  bool exact = true;
  Activation first = net.spec().layers[0].activation;
  for (std::size_t l = 0; l < hidden_layers; ++l) {
    const Activation& a = net.spec().layers[l].activation;
    if (!a.discretized() || !(a == first) || a.levels > bins) exact = false;
  }

  ActivationHistogram hist;
  if (exact) {
    hist.exact_levels = true;
    if (first.kind == Act::Sudo) {
      for (int j = 0; j < first.levels; ++j) hist.levels.push_back(sudo_level(j, first.levels));
    } else {
      hist.levels.push_back(0.0);
      for (int j = 0; j < first.levels; ++j) {
        const double v = sudo_level(j, first.levels);
        if (v > 0.0) hist.levels.push_back(v);
      }
    }
    hist.counts.assign(hist.levels.size(), 0);
  }

  // One pass over the hidden activations; unbounded activations need a
  // preliminary range pass.
  bool bounded = true;
  for (std::size_t l = 0; l < hidden_layers; ++l) {
    const Act k = net.spec().layers[l].activation.kind;
    if (k == Act::Relu || k == Act::Linear) bounded = false;
  }

  double lo = -1.0, hi = 1.0;
  ForwardTrace trace;
  if (!exact && !bounded) {
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (std::size_t start = 0; start < inputs.rows(); start += 4096) {
      const std::size_t stop = std::min(start + 4096, inputs.rows());
      Matrix block(stop - start, inputs.cols());
      std::copy(inputs.data() + start * inputs.cols(), inputs.data() + stop * inputs.cols(),
                block.data());
      net.forward(block, trace);
      for (std::size_t l = 0; l < hidden_layers; ++l) {
        for (std::size_t i = 0; i < trace.post[l].size(); ++i) {
          lo = std::min(lo, trace.post[l].data()[i]);
          hi = std::max(hi, trace.post[l].data()[i]);
        }
      }
    }
    if (!(hi > lo)) hi = lo + 1.0;
  }

  if (!exact) {
    hist.counts.assign(static_cast<std::size_t>(bins), 0);
    for (int b = 0; b <= bins; ++b) {
      hist.edges.push_back(lo + (hi - lo) * static_cast<double>(b) / bins);
    }
  }

  for (std::size_t start = 0; start < inputs.rows(); start += 4096) {
    const std::size_t stop = std::min(start + 4096, inputs.rows());
    Matrix block(stop - start, inputs.cols());
    std::copy(inputs.data() + start * inputs.cols(), inputs.data() + stop * inputs.cols(),
              block.data());
    net.forward(block, trace);
    for (std::size_t l = 0; l < hidden_layers; ++l) {
      const Matrix& acts = trace.post[l];
      for (std::size_t i = 0; i < acts.size(); ++i) {
        const double v = acts.data()[i];
        if (exact) {
          const auto it = std::lower_bound(hist.levels.begin(), hist.levels.end(), v - 1e-9);
          if (it == hist.levels.end() || std::abs(*it - v) > 1e-9) {
            throw std::logic_error("activation output off the level grid");
          }
          ++hist.counts[static_cast<std::size_t>(it - hist.levels.begin())];
        } else {
          int b = static_cast<int>((v - lo) / (hi - lo) * bins);
          if (b < 0) b = 0;
          if (b >= bins) b = bins - 1;
          ++hist.counts[static_cast<std::size_t>(b)];
        }
        ++hist.total;
      }
    }
  }
  return hist;
}

ParabolaDemoResult run_parabola_demo(const Activation& act, int units, int epochs, double lr,
                                     std::uint64_t seed, int dump_every,
                                     const std::filesystem::path& out_dir) {
  if (units < 1) throw ConfigError("parabola demo needs units >= 1");
  if (dump_every < 1) throw ConfigError("parabola demo needs dump_every >= 1");
  std::filesystem::create_directories(out_dir);

  const Dataset ds = gen_parabola(200);
  const NetworkSpec nspec = make_network_spec(TaskKind::Parabola, act, 1, units, 1, 1);
  Network net = Network::init(nspec, seed);

  ParabolaDemoResult result;
  result.initial_loss = loss_sse(net.forward(ds.inputs), ds.targets);

  TrainConfig config;
  config.optimizer = OptimizerKind::SgdMomentum;
  config.learning_rate = lr;
  config.epochs = epochs;
  config.batch_size = 0;
  config.seed = seed;

  auto dump = [&](int epoch, const Network& n) {
    if (epoch != 0 && epoch != epochs && epoch % dump_every != 0) return;
    char name[48];
    std::snprintf(name, sizeof name, "parabola_epoch%05d.csv", epoch);
    const std::filesystem::path path = out_dir / name;
    emit_fit_curve_csv(path, ds.inputs, n.forward(ds.inputs));
    result.dumps.push_back(path);
  };
  train(net, ds.inputs, ds.targets, config, dump);
  result.final_loss = loss_sse(net.forward(ds.inputs), ds.targets);
  return result;
}

}  // namespace sudonet
