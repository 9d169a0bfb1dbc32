// Copyright 2026 The hqtn Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Batch CLI for the hybrid speech-emotion pipeline: preprocess, synth,
// train, eval, ablate. Configuration precedence is command-line flags over
// config-file entries over per-dataset defaults.

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "hqtn/dataset.hpp"
#include "hqtn/errors.hpp"
#include "hqtn/hybrid_model.hpp"
#include "hqtn/mel.hpp"
#include "hqtn/metrics.hpp"
#include "hqtn/pca.hpp"
#include "hqtn/serialize.hpp"
#include "hqtn/synthetic.hpp"
#include "hqtn/trainer.hpp"
#include "hqtn/wav.hpp"

namespace fs = std::filesystem;
using namespace hqtn;

namespace {

// Exit codes: 0 success, 2 usage/config, 3 I/O, 4 file format, 5 numeric.
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitFormat = 4;
constexpr int kExitNumeric = 5;

struct RunConfig {
    std::string dataset = "synthetic";
    std::string audio_root;
    std::string manifest;
    std::string cache;
    std::string out_dir = ".";
    std::string checkpoint = "";
    std::string mode = "hybrid";

    int n_qubits = 3;
    int n_layers = 1;
    int k = 32;
    int t_max = 216;
    int sample_rate = 22050;
    int n_mels = 128;
    double max_seconds = 5.0;

    double train_ratio = 0.6;
    double val_ratio = 0.2;
    double test_ratio = 0.2;
    std::string split_mode = "stratified";

    int max_epochs = 50;
    int batch_size = 8;
    double lr_mps = 0.05;
    double lr_classic = 1e-3;
    double weight_decay = 0.01;
    int patience = 10;
    std::uint64_t seed = 42;
    std::string encoder_dims = "64,16";

    int shots = 0;
    int shot_seeds = 5;

    int classes = 5;
    int per_class = 200;
    int dim = 32;
    double separation = 5.0;
};

/// Per-dataset training defaults. RAVDESS: 70/15/15, 50 epochs, n=4, L=2,
/// batch 16, lr_mps 0.1. SAVEE: 60/20/20, 75 epochs, n=3, L=1, batch 8,
/// lr_mps 0.05, speaker-independent. MDER: 60/20/20, 40 epochs, n=3, L=1,
/// batch 8, lr_mps 0.05.
void apply_dataset_defaults(RunConfig &config) {
    if (config.dataset == "ravdess") {
        config.train_ratio = 0.70;
        config.val_ratio = 0.15;
        config.test_ratio = 0.15;
        config.max_epochs = 50;
        config.n_qubits = 4;
        config.n_layers = 2;
        config.batch_size = 16;
        config.lr_mps = 0.1;
        config.split_mode = "stratified";
    } else if (config.dataset == "savee") {
        config.train_ratio = 0.60;
        config.val_ratio = 0.20;
        config.test_ratio = 0.20;
        config.max_epochs = 75;
        config.n_qubits = 3;
        config.n_layers = 1;
        config.batch_size = 8;
        config.lr_mps = 0.05;
        config.split_mode = "speaker";
    } else if (config.dataset == "mder") {
        config.train_ratio = 0.60;
        config.val_ratio = 0.20;
        config.test_ratio = 0.20;
        config.max_epochs = 40;
        config.n_qubits = 3;
        config.n_layers = 1;
        config.batch_size = 8;
        config.lr_mps = 0.05;
        config.split_mode = "stratified";
    } else if (config.dataset == "synthetic") {
        config.train_ratio = 0.60;
        config.val_ratio = 0.20;
        config.test_ratio = 0.20;
        config.max_epochs = 50;
        config.n_qubits = 3;
        config.n_layers = 1;
        config.batch_size = 8;
        config.lr_mps = 0.05;
        config.split_mode = "stratified";
    } else {
        throw ArgumentError("unknown dataset '" + config.dataset + "'");
    }
    config.lr_classic = 1e-3;
}

std::string trim(const std::string &s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])) != 0) {
        ++b;
    }
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])) != 0) {
        --e;
    }
    return s.substr(b, e - b);
}

/// key = value file with optional [section] headers (sections are cosmetic;
/// keys are global).
std::map<std::string, std::string> parse_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file: " + path);
    }
    std::map<std::string, std::string> entries;
    std::string line;
    while (std::getline(in, line)) {
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#' || text[0] == ';' || text[0] == '[') {
            continue;
        }
        const std::size_t eq = text.find('=');
        if (eq == std::string::npos) {
            throw FormatError("config line is not 'key = value': " + text);
        }
        entries[trim(text.substr(0, eq))] = trim(text.substr(eq + 1));
    }
    return entries;
}

std::vector<int> parse_int_list(const std::string &csv) {
    std::vector<int> values;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        std::size_t comma = csv.find(',', pos);
        if (comma == std::string::npos) {
            comma = csv.size();
        }
        const std::string token = trim(csv.substr(pos, comma - pos));
        if (!token.empty()) {
            values.push_back(std::stoi(token));
        }
        if (comma == csv.size()) {
            break;
        }
        pos = comma + 1;
    }
    return values;
}

/// Three-layer resolution: Table II defaults for the dataset, then config
/// file entries, then explicitly passed command-line flags.
class ConfigResolver {
  public:
    ConfigResolver(CLI::App *cmd, std::map<std::string, std::string> file_entries)
        : cmd_(cmd), file_(std::move(file_entries)) {}

    void resolve(RunConfig &config) const {
        // The dataset choice itself obeys the same precedence.
        if (cmd_->count("--dataset") == 0) {
            if (const auto it = file_.find("dataset"); it != file_.end()) {
                config.dataset = it->second;
            }
        }
        RunConfig defaults = config;
        apply_dataset_defaults(defaults);

        apply_field(config.train_ratio, defaults.train_ratio, "--train-ratio",
                    "train_ratio");
        apply_field(config.val_ratio, defaults.val_ratio, "--val-ratio", "val_ratio");
        apply_field(config.test_ratio, defaults.test_ratio, "--test-ratio", "test_ratio");
        apply_field(config.split_mode, defaults.split_mode, "--split-mode", "split_mode");
        apply_field(config.max_epochs, defaults.max_epochs, "--max-epochs", "max_epochs");
        apply_field(config.n_qubits, defaults.n_qubits, "--n-qubits", "n_qubits");
        apply_field(config.n_layers, defaults.n_layers, "--n-layers", "n_layers");
        apply_field(config.batch_size, defaults.batch_size, "--batch-size", "batch_size");
        apply_field(config.lr_mps, defaults.lr_mps, "--lr-mps", "lr_mps");
        apply_field(config.lr_classic, defaults.lr_classic, "--lr-classic", "lr_classic");
        apply_field(config.weight_decay, defaults.weight_decay, "--weight-decay",
                    "weight_decay");
        apply_field(config.patience, defaults.patience, "--patience", "patience");
        apply_field(config.seed, defaults.seed, "--seed", "seed");
        apply_field(config.k, defaults.k, "--pca-k", "pca_k");
        apply_field(config.t_max, defaults.t_max, "--t-max", "t_max");
        apply_field(config.mode, defaults.mode, "--mode", "mode");
        apply_field(config.encoder_dims, defaults.encoder_dims, "--encoder-dims",
                    "encoder_dims");
        apply_field(config.shots, defaults.shots, "--shots", "shots");
        apply_field(config.shot_seeds, defaults.shot_seeds, "--shot-seeds", "shot_seeds");
    }

  private:
    template <class T>
    void apply_field(T &value, const T &fallback, const char *flag, const char *key) const {
        if (cmd_->get_option_no_throw(flag) != nullptr && cmd_->count(flag) > 0) {
            return; // explicit flag wins; CLI11 already stored it
        }
        const auto it = file_.find(key);
        if (it == file_.end()) {
            value = fallback;
            return;
        }
        if constexpr (std::is_same_v<T, std::string>) {
            value = it->second;
        } else if constexpr (std::is_same_v<T, double>) {
            value = std::stod(it->second);
        } else if constexpr (std::is_same_v<T, std::uint64_t>) {
            value = std::stoull(it->second);
        } else {
            value = std::stoi(it->second);
        }
    }

    CLI::App *cmd_;
    std::map<std::string, std::string> file_;
};

void print_resolved_config(const RunConfig &config) {
    fmt::print("dataset = {}\n", config.dataset);
    fmt::print("mode = {}\n", config.mode);
    fmt::print("n_qubits = {}\n", config.n_qubits);
    fmt::print("n_layers = {}\n", config.n_layers);
    fmt::print("pca_k = {}\n", config.k);
    fmt::print("t_max = {}\n", config.t_max);
    fmt::print("train_ratio = {}\n", config.train_ratio);
    fmt::print("val_ratio = {}\n", config.val_ratio);
    fmt::print("test_ratio = {}\n", config.test_ratio);
    fmt::print("split_mode = {}\n", config.split_mode);
    fmt::print("max_epochs = {}\n", config.max_epochs);
    fmt::print("batch_size = {}\n", config.batch_size);
    fmt::print("lr_mps = {}\n", config.lr_mps);
    fmt::print("lr_classic = {}\n", config.lr_classic);
    fmt::print("weight_decay = {}\n", config.weight_decay);
    fmt::print("patience = {}\n", config.patience);
    fmt::print("seed = {}\n", config.seed);
    fmt::print("encoder_dims = {}\n", config.encoder_dims);
}

data::SplitConfig split_config_from(const RunConfig &config) {
    data::SplitConfig split;
    split.train_ratio = config.train_ratio;
    split.val_ratio = config.val_ratio;
    split.test_ratio = config.test_ratio;
    split.mode = config.split_mode == "speaker" ? data::SplitMode::SpeakerIndependent
                                                : data::SplitMode::StratifiedRandom;
    split.seed = config.seed;
    return split;
}

Eigen::VectorXd to_eigen(const std::vector<double> &v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// ---------------------------------------------------------------------------
// preprocess

struct LabeledFile {
    fs::path path;
    int label;
    int speaker;
};

std::vector<fs::path> sorted_wav_files(const fs::path &root) {
    std::vector<fs::path> files;
    for (const auto &entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) {
            continue;
        }
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (ext == ".wav") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::vector<LabeledFile> collect_ravdess(const fs::path &root) {
    std::vector<LabeledFile> out;
    for (const fs::path &p : sorted_wav_files(root)) {
        if (const auto parsed = data::parse_ravdess_name(p.stem().string())) {
            out.push_back({p, parsed->first, parsed->second});
        }
    }
    return out;
}

std::vector<LabeledFile> collect_savee(const fs::path &root) {
    // Speaker comes from the filename prefix or the parent directory name.
    std::vector<std::pair<fs::path, std::pair<int, std::string>>> parsed_files;
    std::set<std::string> speaker_codes;
    for (const fs::path &p : sorted_wav_files(root)) {
        auto parsed = data::parse_savee_name(p.stem().string());
        if (!parsed) {
            continue;
        }
        if (parsed->second.empty()) {
            parsed->second = p.parent_path().filename().string();
        }
        speaker_codes.insert(parsed->second);
        parsed_files.emplace_back(p, *parsed);
    }
    std::map<std::string, int> speaker_ids;
    int next = 0;
    for (const std::string &code : speaker_codes) {
        speaker_ids[code] = next++;
    }
    std::vector<LabeledFile> out;
    for (const auto &[p, lab] : parsed_files) {
        out.push_back({p, lab.first, speaker_ids[lab.second]});
    }
    return out;
}

/// Manifest rows: path,label[,speaker]. Labels and speakers may be names or
/// integers; names are mapped in sorted order.
std::vector<LabeledFile> collect_manifest(const fs::path &manifest_path,
                                          const fs::path &root, int &n_classes) {
    std::ifstream in(manifest_path);
    if (!in) {
        throw IoError("cannot open manifest: " + manifest_path.string());
    }
    struct Row {
        std::string path;
        std::string label;
        std::string speaker;
    };
    std::vector<Row> rows;
    std::string line;
    while (std::getline(in, line)) {
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#') {
            continue;
        }
        Row row;
        std::size_t first = text.find(',');
        if (first == std::string::npos) {
            throw FormatError("manifest row needs at least path,label: " + text);
        }
        row.path = trim(text.substr(0, first));
        std::size_t second = text.find(',', first + 1);
        if (second == std::string::npos) {
            row.label = trim(text.substr(first + 1));
        } else {
            row.label = trim(text.substr(first + 1, second - first - 1));
            row.speaker = trim(text.substr(second + 1));
        }
        if (row.path == "path") {
            continue; // header row
        }
        rows.push_back(std::move(row));
    }

    auto is_number = [](const std::string &s) {
        return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
            return std::isdigit(c) != 0;
        });
    };
    std::set<std::string> label_names;
    std::set<std::string> speaker_names;
    for (const Row &row : rows) {
        if (!is_number(row.label)) {
            label_names.insert(row.label);
        }
        if (!row.speaker.empty() && !is_number(row.speaker)) {
            speaker_names.insert(row.speaker);
        }
    }
    std::map<std::string, int> label_ids;
    int next_label = 0;
    for (const std::string &name : label_names) {
        label_ids[name] = next_label++;
    }
    std::map<std::string, int> speaker_ids;
    int next_speaker = 0;
    for (const std::string &name : speaker_names) {
        speaker_ids[name] = next_speaker++;
    }

    std::vector<LabeledFile> out;
    int max_label = -1;
    for (const Row &row : rows) {
        LabeledFile file;
        fs::path p(row.path);
        file.path = p.is_absolute() ? p : root / p;
        file.label = is_number(row.label) ? std::stoi(row.label) : label_ids[row.label];
        file.speaker = row.speaker.empty()
                           ? -1
                           : (is_number(row.speaker) ? std::stoi(row.speaker)
                                                     : speaker_ids[row.speaker]);
        max_label = std::max(max_label, file.label);
        out.push_back(std::move(file));
    }
    n_classes = max_label + 1;
    return out;
}

int cmd_preprocess(const RunConfig &config) {
    if (config.audio_root.empty()) {
        throw ArgumentError("--audio-root (or HQTN_DATA_ROOT) is required");
    }
    const fs::path root(config.audio_root);
    if (!fs::exists(root)) {
        throw IoError("audio root does not exist: " + config.audio_root);
    }

    int n_classes = 0;
    std::vector<LabeledFile> files;
    if (config.dataset == "ravdess") {
        files = collect_ravdess(root);
        n_classes = 8;
    } else if (config.dataset == "savee") {
        files = collect_savee(root);
        n_classes = 7;
    } else if (config.dataset == "mder") {
        if (config.manifest.empty()) {
            throw ArgumentError("mder preprocessing requires --manifest");
        }
        files = collect_manifest(config.manifest, root, n_classes);
    } else {
        throw ArgumentError("preprocess supports ravdess, savee, and mder; use 'synth' "
                            "for synthetic data");
    }
    if (files.empty()) {
        throw IoError("no usable audio files under " + config.audio_root);
    }

    audio::MelParams mel_params;
    mel_params.sample_rate = config.sample_rate;
    mel_params.n_mels = config.n_mels;
    const audio::MelExtractor extractor(mel_params);

    data::FeatureTable table;
    table.dim = config.t_max * config.n_mels;
    table.n_classes = n_classes;

    std::size_t skipped = 0;
    for (const LabeledFile &file : files) {
        try {
            audio::Waveform w = audio::load_wav(file.path.string());
            w = audio::resample(w, config.sample_rate);
            w = audio::pad_or_truncate(w, config.max_seconds);
            const audio::MelMatrix db = audio::power_to_db(extractor.mel_spectrogram(w));
            const audio::VectorizedFeature feature = audio::fix_time_and_vectorize(
                db, static_cast<std::size_t>(config.t_max));

            data::FeatureRecord record;
            record.features = feature.values;
            record.label = file.label;
            record.speaker = file.speaker;
            record.dataset_tag = config.dataset;
            table.records.push_back(std::move(record));
        } catch (const Error &e) {
            ++skipped;
            fmt::print(stderr, "warning: skipping {}: {}\n", file.path.string(), e.what());
        }
    }
    if (table.records.empty()) {
        throw IoError("every input file failed to preprocess");
    }

    io::write_feature_cache(config.cache, table);

    std::vector<std::int64_t> counts(static_cast<std::size_t>(n_classes), 0);
    for (const auto &record : table.records) {
        ++counts[static_cast<std::size_t>(record.label)];
    }
    const std::vector<std::string> names = data::class_names(config.dataset);
    fmt::print("wrote {} records (dim {}) to {}\n", table.records.size(), table.dim,
               config.cache);
    fmt::print("{:<12} {:>8}\n", "class", "count");
    for (int c = 0; c < n_classes; ++c) {
        const std::string name = c < static_cast<int>(names.size())
                                     ? names[static_cast<std::size_t>(c)]
                                     : fmt::format("class_{}", c);
        fmt::print("{:<12} {:>8}\n", name, counts[static_cast<std::size_t>(c)]);
    }
    if (skipped > 0) {
        fmt::print("skipped {} unreadable files\n", skipped);
    }
    return 0;
}

int cmd_synth(const RunConfig &config) {
    const data::FeatureTable table = data::make_blobs(
        config.classes, config.per_class, config.dim, config.separation, config.seed);
    io::write_feature_cache(config.cache, table);
    fmt::print("wrote {} synthetic records (dim {}, {} classes) to {}\n",
               table.records.size(), table.dim, table.n_classes, config.cache);
    return 0;
}

// ---------------------------------------------------------------------------
// train / eval / ablate

struct PreparedData {
    data::SplitPlan plan;
    std::vector<data::FeatureRecord> train;
    std::vector<data::FeatureRecord> val;
    std::vector<data::FeatureRecord> test;
    std::optional<pca::PcaModel> pca;
    int input_dim = 0;
    int n_classes = 0;
};

/// Splits the cache and, when the cached dimension exceeds k, fits PCA on
/// the training rows only and projects every record.
PreparedData prepare_data(const data::FeatureTable &table, const RunConfig &config) {
    PreparedData prepared;
    prepared.n_classes = table.n_classes;

    std::vector<std::string> warnings;
    prepared.plan = data::make_split(table.records, split_config_from(config), &warnings);
    for (const std::string &w : warnings) {
        fmt::print(stderr, "warning: {}\n", w);
    }

    if (table.dim < config.k) {
        throw ArgumentError(fmt::format("cache dimension {} is below k = {}", table.dim,
                                        config.k));
    }
    if (table.dim == config.k) {
        prepared.input_dim = table.dim;
        prepared.train = data::gather(table.records, prepared.plan.train);
        prepared.val = data::gather(table.records, prepared.plan.val);
        prepared.test = data::gather(table.records, prepared.plan.test);
        return prepared;
    }

    Eigen::MatrixXd train_matrix(static_cast<Eigen::Index>(prepared.plan.train.size()),
                                 table.dim);
    for (std::size_t i = 0; i < prepared.plan.train.size(); ++i) {
        train_matrix.row(static_cast<Eigen::Index>(i)) =
            to_eigen(table.records[prepared.plan.train[i]].features).transpose();
    }
    std::vector<std::string> pca_warnings;
    prepared.pca = pca::fit_pca(train_matrix, config.k, &pca_warnings);
    for (const std::string &w : pca_warnings) {
        fmt::print(stderr, "warning: {}\n", w);
    }
    prepared.input_dim = config.k;

    auto project_records = [&](const std::vector<std::size_t> &indices) {
        std::vector<data::FeatureRecord> out;
        out.reserve(indices.size());
        for (const std::size_t i : indices) {
            data::FeatureRecord record = table.records[i];
            const Eigen::VectorXd projected =
                pca::pca_transform(*prepared.pca, to_eigen(record.features));
            record.features.assign(projected.data(), projected.data() + projected.size());
            out.push_back(std::move(record));
        }
        return out;
    };
    prepared.train = project_records(prepared.plan.train);
    prepared.val = project_records(prepared.plan.val);
    prepared.test = project_records(prepared.plan.test);
    return prepared;
}

model::ModelConfig model_config_from(const RunConfig &config, int input_dim,
                                     int n_classes) {
    model::ModelConfig mc;
    mc.input_dim = input_dim;
    mc.n_classes = n_classes;
    mc.n_qubits = config.n_qubits;
    mc.n_layers = config.n_layers;
    mc.encoder_dims = parse_int_list(config.encoder_dims);
    mc.mode = model::mode_from_string(config.mode);
    mc.seed = config.seed;
    return mc;
}

data::TrainConfig train_config_from(const RunConfig &config) {
    data::TrainConfig tc;
    tc.max_epochs = config.max_epochs;
    tc.batch_size = config.batch_size;
    tc.lr_mps = config.lr_mps;
    tc.lr_classic = config.lr_classic;
    tc.weight_decay = config.weight_decay;
    tc.patience = config.patience;
    tc.seed = config.seed;
    return tc;
}

std::map<std::string, std::string> config_echo_from(const RunConfig &config) {
    return {
        {"dataset", config.dataset},
        {"mode", config.mode},
        {"n_qubits", std::to_string(config.n_qubits)},
        {"n_layers", std::to_string(config.n_layers)},
        {"pca_k", std::to_string(config.k)},
        {"t_max", std::to_string(config.t_max)},
        {"train_ratio", fmt::format("{:.17g}", config.train_ratio)},
        {"val_ratio", fmt::format("{:.17g}", config.val_ratio)},
        {"test_ratio", fmt::format("{:.17g}", config.test_ratio)},
        {"split_mode", config.split_mode},
        {"max_epochs", std::to_string(config.max_epochs)},
        {"batch_size", std::to_string(config.batch_size)},
        {"lr_mps", fmt::format("{:.17g}", config.lr_mps)},
        {"lr_classic", fmt::format("{:.17g}", config.lr_classic)},
        {"weight_decay", fmt::format("{:.17g}", config.weight_decay)},
        {"patience", std::to_string(config.patience)},
        {"seed", std::to_string(config.seed)},
        {"encoder_dims", config.encoder_dims},
    };
}

int cmd_train(const RunConfig &config) {
    const data::FeatureTable table = io::read_feature_cache(config.cache, config.dataset);
    const PreparedData prepared = prepare_data(table, config);

    model::HybridModel model(
        model_config_from(config, prepared.input_dim, prepared.n_classes));
    const data::TrainLog log =
        data::train(model, prepared.train, prepared.val, train_config_from(config));

    const data::MetricsReport report = data::evaluate(model, prepared.test);
    const model::ParamCount params = model.count_params();

    fs::create_directories(config.out_dir);
    const fs::path out(config.out_dir);

    io::Checkpoint checkpoint;
    checkpoint.config_echo = config_echo_from(config);
    checkpoint.pca = prepared.pca;
    checkpoint.model_config = model.config();
    checkpoint.params = model.params();
    io::write_checkpoint((out / "checkpoint.hqtn").string(), checkpoint);

    data::export_curves(log, (out / "curves.csv").string());

    const std::string table_text =
        data::format_metrics(report, data::class_names(config.dataset));
    {
        std::ofstream metrics_file(out / "metrics.txt");
        metrics_file << table_text;
    }
    {
        std::ofstream kv_file(out / "metrics.kv");
        kv_file << data::metrics_key_values(report);
        kv_file << fmt::format("quantum_params = {}\n", params.quantum);
        kv_file << fmt::format("classical_params = {}\n", params.classical);
        kv_file << fmt::format("total_params = {}\n", params.total());
        kv_file << fmt::format("best_epoch = {}\n", log.best_epoch + 1);
        kv_file << fmt::format("stop_reason = {}\n", log.stop_reason);
        kv_file << fmt::format("split_hash = {:016x}\n", data::split_hash(prepared.plan));
    }

    fmt::print("trained {} epochs ({}), best epoch {}\n", log.train_loss.size(),
               log.stop_reason, log.best_epoch + 1);
    fmt::print("parameters: quantum {} + classical {} = {}\n", params.quantum,
               params.classical, params.total());
    fmt::print("{}", table_text);
    fmt::print("artifacts written to {}\n", config.out_dir);
    return 0;
}

int cmd_eval(const RunConfig &config) {
    const io::Checkpoint checkpoint = io::read_checkpoint(config.checkpoint);

    // Rebuild the split exactly as training did, from the config echo.
    RunConfig replay = config;
    const auto &echo = checkpoint.config_echo;
    auto fetch = [&](const char *key) -> std::string {
        const auto it = echo.find(key);
        if (it == echo.end()) {
            throw FormatError(fmt::format("checkpoint config echo misses '{}'", key));
        }
        return it->second;
    };
    replay.dataset = fetch("dataset");
    replay.train_ratio = std::stod(fetch("train_ratio"));
    replay.val_ratio = std::stod(fetch("val_ratio"));
    replay.test_ratio = std::stod(fetch("test_ratio"));
    replay.split_mode = fetch("split_mode");
    replay.seed = std::stoull(fetch("seed"));
    replay.k = std::stoi(fetch("pca_k"));

    const data::FeatureTable table = io::read_feature_cache(config.cache, replay.dataset);
    std::vector<std::string> warnings;
    const data::SplitPlan plan =
        data::make_split(table.records, split_config_from(replay), &warnings);

    std::vector<data::FeatureRecord> test_set = data::gather(table.records, plan.test);
    if (checkpoint.pca.has_value()) {
        if (table.dim != checkpoint.pca->input_dim()) {
            throw FormatError(fmt::format(
                "cache dimension {} does not match the checkpoint's PCA input {}",
                table.dim, checkpoint.pca->input_dim()));
        }
        for (data::FeatureRecord &record : test_set) {
            const Eigen::VectorXd projected =
                pca::pca_transform(*checkpoint.pca, to_eigen(record.features));
            record.features.assign(projected.data(), projected.data() + projected.size());
        }
    } else if (table.dim != checkpoint.model_config.input_dim) {
        throw FormatError(fmt::format(
            "cache dimension {} does not match the checkpoint input dimension {}",
            table.dim, checkpoint.model_config.input_dim));
    }

    const model::HybridModel model(checkpoint.model_config, checkpoint.params);
    const std::vector<std::string> names = data::class_names(replay.dataset);

    if (config.shots <= 0) {
        const data::MetricsReport report = data::evaluate(model, test_set);
        fmt::print("{}", data::format_metrics(report, names));
        return 0;
    }

    data::ShotConfig shot_config;
    shot_config.shots = static_cast<std::size_t>(config.shots);
    shot_config.n_seeds = config.shot_seeds;
    shot_config.base_seed = replay.seed;
    const data::ShotEvalResult result =
        data::evaluate_with_shots(model, test_set, shot_config);

    fmt::print("shot-mode evaluation: {} shots, {} seeds\n", config.shots,
               config.shot_seeds);
    for (std::size_t s = 0; s < result.per_seed.size(); ++s) {
        fmt::print("  run {}: accuracy {:.4f}\n", s, result.per_seed[s].accuracy);
    }
    fmt::print("mean accuracy {:.4f} +- {:.4f}, run range {:.4f}-{:.4f}\n",
               result.mean_accuracy, result.std_accuracy, result.min_accuracy,
               result.max_accuracy);
    fmt::print("{}", data::format_metrics(result.per_seed.front(), names));
    return 0;
}

int cmd_ablate(const RunConfig &config) {
    const data::FeatureTable table = io::read_feature_cache(config.cache, config.dataset);
    const PreparedData prepared = prepare_data(table, config);

    // run_ablation needs the already-projected records with the plan's
    // indexing, so rebuild a combined list in plan order.
    std::vector<data::FeatureRecord> projected(table.records.size());
    auto scatter = [&](const std::vector<std::size_t> &indices,
                       const std::vector<data::FeatureRecord> &records) {
        for (std::size_t i = 0; i < indices.size(); ++i) {
            projected[indices[i]] = records[i];
        }
    };
    scatter(prepared.plan.train, prepared.train);
    scatter(prepared.plan.val, prepared.val);
    scatter(prepared.plan.test, prepared.test);

    RunConfig hybrid_config = config;
    hybrid_config.mode = "hybrid";
    const data::AblationResult result = data::run_ablation(
        projected, prepared.plan,
        model_config_from(hybrid_config, prepared.input_dim, prepared.n_classes),
        train_config_from(config));

    fmt::print("{:<16} {:>10} {:>10} {:>10} {:>18}\n", "variant", "accuracy", "quantum",
               "classical", "split_hash");
    for (const data::AblationRow &row : result.rows) {
        fmt::print("{:<16} {:>10.4f} {:>10} {:>10} {:>18}\n", model::to_string(row.mode),
                   row.test_accuracy, row.params.quantum, row.params.classical,
                   fmt::format("{:016x}", result.split_hash));
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Hybrid quantum tensor network speech emotion pipeline"};
    app.require_subcommand(1);

    RunConfig config;
    std::string config_file;
    bool print_config = false;

    auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("--config", config_file, "key = value config file");
        cmd->add_option("--dataset", config.dataset,
                        "ravdess | savee | mder | synthetic (sets Table-style defaults)");
        cmd->add_option("--seed", config.seed, "global RNG seed (default 42)");
    };
    auto add_model_flags = [&](CLI::App *cmd) {
        cmd->add_option("--n-qubits", config.n_qubits,
                        "circuit width (ravdess default 4, savee/mder 3)");
        cmd->add_option("--n-layers", config.n_layers,
                        "MPS layers (ravdess default 2, savee/mder 1)");
        cmd->add_option("--pca-k", config.k, "PCA components (default 32)");
        cmd->add_option("--mode", config.mode, "hybrid | classical_only | quantum_only");
        cmd->add_option("--encoder-dims", config.encoder_dims,
                        "encoder widths, comma separated (default 64,16)");
    };
    auto add_train_flags = [&](CLI::App *cmd) {
        cmd->add_option("--train-ratio", config.train_ratio,
                        "train fraction (ravdess 0.70, savee/mder 0.60)");
        cmd->add_option("--val-ratio", config.val_ratio,
                        "validation fraction (ravdess 0.15, savee/mder 0.20)");
        cmd->add_option("--test-ratio", config.test_ratio,
                        "test fraction (ravdess 0.15, savee/mder 0.20)");
        cmd->add_option("--split-mode", config.split_mode,
                        "stratified | speaker (savee default: speaker)");
        cmd->add_option("--max-epochs", config.max_epochs,
                        "epoch budget (ravdess 50, savee 75, mder 40)");
        cmd->add_option("--batch-size", config.batch_size,
                        "batch size (ravdess 16, savee/mder 8)");
        cmd->add_option("--lr-mps", config.lr_mps,
                        "circuit learning rate (ravdess 0.1, savee/mder 0.05)");
        cmd->add_option("--lr-classic", config.lr_classic,
                        "classical learning rate (default 1e-3)");
        cmd->add_option("--weight-decay", config.weight_decay,
                        "AdamW weight decay on classical weights (default 0.01)");
        cmd->add_option("--patience", config.patience,
                        "early-stopping patience in epochs (default 10)");
        cmd->add_flag("--print-config", print_config,
                      "print the resolved configuration and exit");
    };

    CLI::App *preprocess = app.add_subcommand("preprocess", "extract features into a cache");
    add_common(preprocess);
    preprocess->add_option("--audio-root", config.audio_root, "dataset root directory")
        ->envname("HQTN_DATA_ROOT");
    preprocess->add_option("--manifest", config.manifest,
                           "label manifest CSV for mder (path,label[,speaker])");
    preprocess->add_option("--out", config.cache, "output cache path")->required();
    preprocess->add_option("--t-max", config.t_max, "fixed frame budget (default 216)");
    preprocess->add_option("--max-seconds", config.max_seconds,
                           "clip duration budget (default 5)");

    CLI::App *synth = app.add_subcommand("synth", "write a synthetic blob cache");
    add_common(synth);
    synth->add_option("--out", config.cache, "output cache path")->required();
    synth->add_option("--classes", config.classes, "class count (default 5)");
    synth->add_option("--per-class", config.per_class, "records per class (default 200)");
    synth->add_option("--dim", config.dim, "feature dimension (default 32)");
    synth->add_option("--separation", config.separation,
                      "center separation in sigmas (default 5)");

    CLI::App *train = app.add_subcommand("train", "fit PCA + model from a cache");
    add_common(train);
    add_model_flags(train);
    add_train_flags(train);
    train->add_option("--cache", config.cache, "feature cache")->required();
    train->add_option("--out-dir", config.out_dir,
                      "directory for checkpoint.hqtn, curves.csv, metrics.*");

    CLI::App *eval = app.add_subcommand("eval", "evaluate a checkpoint");
    add_common(eval);
    eval->add_option("--checkpoint", config.checkpoint, "model checkpoint")->required();
    eval->add_option("--cache", config.cache, "feature cache")->required();
    eval->add_option("--shots", config.shots,
                     "finite-shot evaluation with this many shots (0 = exact)");
    eval->add_option("--shot-seeds", config.shot_seeds,
                     "independent shot evaluations (default 5)");

    CLI::App *ablate = app.add_subcommand("ablate",
                                          "train classical/quantum/hybrid on one split");
    add_common(ablate);
    add_model_flags(ablate);
    add_train_flags(ablate);
    ablate->add_option("--cache", config.cache, "feature cache")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        std::map<std::string, std::string> file_entries;
        if (!config_file.empty()) {
            file_entries = parse_config_file(config_file);
        }
        CLI::App *active = app.get_subcommands().front();
        ConfigResolver(active, file_entries).resolve(config);

        if (config.shots < 0) {
            throw ArgumentError("--shots must be >= 0");
        }
        if (active == eval && eval->count("--shots") > 0 && config.shots == 0) {
            throw ArgumentError("--shots must be >= 1 for shot-mode evaluation");
        }
        if (print_config) {
            print_resolved_config(config);
            return 0;
        }

        if (active == preprocess) {
            return cmd_preprocess(config);
        }
        if (active == synth) {
            return cmd_synth(config);
        }
        if (active == train) {
            return cmd_train(config);
        }
        if (active == eval) {
            return cmd_eval(config);
        }
        if (active == ablate) {
            return cmd_ablate(config);
        }
        return kExitUsage;
    } catch (const IoError &e) {
        fmt::print(stderr, "io error: {}\n", e.what());
        return kExitIo;
    } catch (const FormatError &e) {
        fmt::print(stderr, "format error: {}\n", e.what());
        return kExitFormat;
    } catch (const UnsupportedError &e) {
        fmt::print(stderr, "format error: {}\n", e.what());
        return kExitFormat;
    } catch (const NumericError &e) {
        fmt::print(stderr, "numeric error: {}\n", e.what());
        return kExitNumeric;
    } catch (const Error &e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitUsage;
    } catch (const std::exception &e) {
        fmt::print(stderr, "unexpected error: {}\n", e.what());
        return 1;
    }
}
