#ifndef SUDONET_EXPERIMENT_HPP
#define SUDONET_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sudonet/dataset.hpp"
#include "sudonet/network.hpp"
#include "sudonet/train.hpp"

namespace sudonet {

enum class TaskKind { Parabola, Checkerboard, Regression, Memorize, Autoencode, Mnist };

std::string task_name(TaskKind task);
TaskKind parse_task(const std::string& name);

/// One sweep grid. Every cell (activation x depth x width) is trained at
/// each candidate learning rate, `replicates` times each; the reported cell
/// metric is the replicate mean at the best learning rate. For the
/// autoencoding task `widths` holds network scale factors instead of unit
/// counts.
struct SweepSpec {
  TaskKind task = TaskKind::Checkerboard;
  std::vector<Activation> activations;
  std::vector<int> depths{1};
  std::vector<int> widths{50};
  std::vector<double> learning_rates{1e-3, 1e-4, 1e-5};
  int replicates = 3;
  std::optional<int> epochs;                  // task default when unset
  std::optional<OptimizerKind> optimizer;     // task default when unset
  std::optional<std::size_t> batch_size;      // task default when unset (0 = full batch)
  std::uint64_t seed_base = 1;
  int jobs = 1;

  // Task inputs.
  int board = 4;
  std::size_t checkerboard_train = 5000;
  std::filesystem::path image_path;   // memorize
  std::filesystem::path corpus_path;  // autoencode
  std::filesystem::path mnist_train_images, mnist_train_labels;
  std::filesystem::path mnist_test_images, mnist_test_labels;
};

/// Fills the task-dependent defaults left unset: epochs (parabola 2000,
/// checkerboard 1000, regression 2000, memorize 500, autoencode 200, mnist
/// 30), optimizer (SGD+momentum for parabola, Adam otherwise) and batch size
/// (64 for mnist/autoencode, 256 for memorize, full batch otherwise).
void apply_task_defaults(SweepSpec& spec);

struct CellKey {
  TaskKind task = TaskKind::Checkerboard;
  Activation activation;
  int depth = 0;
  int width = 0;

  std::string to_string() const;
  bool operator==(const CellKey&) const = default;
};

/// Replicate seeds depend only on the cell key and replicate index, so the
/// runs of one cell never shift when another cell is added or removed.
std::uint64_t cell_seed(std::uint64_t seed_base, const CellKey& key, int replicate);

/// One row of the per-run log. A diverged (excluded) run carries a NaN
/// metric value.
struct RunRecord {
  CellKey key;
  double lr = 0.0;
  int replicate = 0;
  std::uint64_t seed = 0;
  int epochs = 0;
  std::string metric_name;
  double metric_value = 0.0;
  double wall_seconds = 0.0;

  bool failed() const { return !(metric_value == metric_value); }
};

struct ExperimentResult {
  CellKey key;
  std::vector<double> learning_rates;
  std::vector<std::vector<double>> metrics;  // [lr][replicate], NaN = failed run
  double selected_lr = 0.0;
  double cell_metric = 0.0;
  std::string metric_name;
};

/// Train/eval data prepared once per sweep.
struct TaskData {
  Dataset train;
  Dataset eval;
};

TaskData prepare_task_data(const SweepSpec& spec);

/// The layer stack a task uses for one cell: `depth` hidden layers of
/// `width` units (checkerboard/memorize end in a tanh unit, regression and
/// parabola in a linear unit, mnist in 10 linear outputs under
/// cross-entropy). Autoencoding ignores depth/width counts and scales its
/// fixed 50-50-40-20-40-50-50 encoder/decoder stack by `width`.
NetworkSpec make_network_spec(TaskKind task, const Activation& act, int depth, int width,
                              std::size_t input_dim, std::size_t output_dim);

/// Higher-is-better for accuracy tasks, lower for error tasks.
bool metric_higher_is_better(TaskKind task);
std::string metric_name(TaskKind task);

/// The reported metric for a trained network: classification accuracy on
/// the evaluation set (checkerboard grid / mnist test set) or SSE
/// (regression test grid, memorization training image, autoencode test
/// split).
double evaluate_metric(TaskKind task, const Network& net, const TaskData& data);

struct CellOutcome {
  ExperimentResult result;
  std::vector<RunRecord> runs;
  Network best_network;  // best replicate at the selected learning rate
  bool has_network = false;
};

/// Runs one cell: replicates x learning-rate candidates trainings. Throws
/// if every run diverges.
CellOutcome run_cell(const SweepSpec& spec, const TaskData& data, const Activation& act,
                     int depth, int width, bool keep_network = true);

struct SweepOutcome {
  std::vector<ExperimentResult> results;  // depth-major, then activation, then width
  std::vector<RunRecord> runs;
};

/// Runs the full grid and writes runs.csv plus one table CSV per depth
/// (mirroring the row=activation, column=width layout) under out_dir. The
/// autoencoding task additionally writes relative tables against the
/// tanh/scale-1 cell.
SweepOutcome run_task(const SweepSpec& spec, const std::filesystem::path& out_dir);

// Per-run log round-trip.
void write_run_log_csv(const std::filesystem::path& path, const std::vector<RunRecord>& runs);
std::vector<RunRecord> read_run_log_csv(const std::filesystem::path& path);

/// Re-aggregates a cell metric from its log rows: mean of the non-failed
/// replicate metrics at the selected learning rate.
double recount_cell_metric(const std::vector<RunRecord>& runs, const CellKey& key,
                           double selected_lr);

struct ActivationHistogram {
  bool exact_levels = false;
  std::vector<double> levels;  // exact mode: one entry per bucket
  std::vector<double> edges;   // binned mode: counts.size()+1 edges
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
};

/// Histogram of every hidden-unit output over all hidden layers and all
/// rows of `inputs`. When every hidden layer uses the same discretized
/// activation with at most `bins` levels, buckets are the exact output
/// levels; otherwise `bins` equal bins span [-1,1] for bounded activations
/// or the observed range for unbounded ones.
ActivationHistogram collect_activation_histogram(const Network& net, const Matrix& inputs,
                                                 int bins = 8);

struct ParabolaDemoResult {
  double initial_loss = 0.0;
  double final_loss = 0.0;
  std::vector<std::filesystem::path> dumps;
};

/// Single hidden layer of `units`, linear output, SGD+momentum; writes an
/// (x, prediction) CSV before training and every `dump_every` epochs.
ParabolaDemoResult run_parabola_demo(const Activation& act, int units, int epochs, double lr,
                                     std::uint64_t seed, int dump_every,
                                     const std::filesystem::path& out_dir);

}  // namespace sudonet

#endif  // SUDONET_EXPERIMENT_HPP
