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

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "hqtn/errors.hpp"
#include "hqtn/pca.hpp"
#include "hqtn/serialize.hpp"
#include "hqtn/synthetic.hpp"

using namespace hqtn;
using Catch::Approx;

namespace {

std::vector<unsigned char> slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) {}
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("feature cache round trip", "[serialize]") {
    data::FeatureTable table;
    table.dim = 3;
    table.n_classes = 4;
    table.records.push_back({{1.5, -2.25, 0.125}, 2, 7, "x"});
    table.records.push_back({{0.0, 1.0, -1.0}, 0, -1, "x"});

    TempFile tmp("cache_tmp.hqtn");
    io::write_feature_cache(tmp.path, table);
    const data::FeatureTable loaded = io::read_feature_cache(tmp.path, "roundtrip");

    REQUIRE(loaded.dim == 3);
    REQUIRE(loaded.n_classes == 4);
    REQUIRE(loaded.records.size() == 2);
    REQUIRE(loaded.records[0].label == 2);
    REQUIRE(loaded.records[0].speaker == 7);
    REQUIRE(loaded.records[0].dataset_tag == "roundtrip");
    REQUIRE(loaded.records[1].speaker == -1);
    // 1.5, -2.25, 0.125 are exact in f32.
    REQUIRE(loaded.records[0].features == std::vector<double>{1.5, -2.25, 0.125});
}

TEST_CASE("feature cache byte layout is pinned", "[serialize]") {
    data::FeatureTable table;
    table.dim = 1;
    table.n_classes = 2;
    table.records.push_back({{1.0}, 1, -1, ""});

    TempFile tmp("cache_layout_tmp.hqtn");
    io::write_feature_cache(tmp.path, table);
    const std::vector<unsigned char> bytes = slurp(tmp.path);

    REQUIRE(bytes.size() == 4 + 2 + 4 + 2 + 2 + (2 + 4 + 4));
    REQUIRE(bytes[0] == 'H');
    REQUIRE(bytes[1] == 'Q');
    REQUIRE(bytes[2] == 'T');
    REQUIRE(bytes[3] == 'N');
    REQUIRE(bytes[4] == 1); // version lo
    REQUIRE(bytes[5] == 0); // version hi
    REQUIRE(bytes[6] == 1); // count = 1
    REQUIRE(bytes[10] == 1); // dim = 1
    REQUIRE(bytes[12] == 2); // classes = 2
    REQUIRE(bytes[14] == 1); // label = 1
    // speaker -1 as little-endian two's complement
    REQUIRE(bytes[16] == 0xFF);
    REQUIRE(bytes[19] == 0xFF);
    // 1.0f = 0x3F800000 little-endian
    REQUIRE(bytes[20] == 0x00);
    REQUIRE(bytes[23] == 0x3F);
}

TEST_CASE("cache rejects bad magic, version, and truncation", "[serialize]") {
    TempFile tmp("cache_bad_tmp.hqtn");
    {
        std::ofstream out(tmp.path, std::ios::binary);
        out << "NOPE";
    }
    REQUIRE_THROWS_AS(io::read_feature_cache(tmp.path), FormatError);

    data::FeatureTable table;
    table.dim = 1;
    table.n_classes = 1;
    table.records.push_back({{0.5}, 0, -1, ""});
    io::write_feature_cache(tmp.path, table);

    std::vector<unsigned char> bytes = slurp(tmp.path);
    bytes[4] = 99; // future version
    {
        std::ofstream out(tmp.path, std::ios::binary);
        out.write(reinterpret_cast<const char *>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
    }
    REQUIRE_THROWS_AS(io::read_feature_cache(tmp.path), FormatError);

    bytes[4] = 1;
    bytes.resize(bytes.size() - 3); // cut into the f32 payload
    {
        std::ofstream out(tmp.path, std::ios::binary);
        out.write(reinterpret_cast<const char *>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
    }
    REQUIRE_THROWS_AS(io::read_feature_cache(tmp.path), FormatError);

    REQUIRE_THROWS_AS(io::read_feature_cache("missing_file.hqtn"), IoError);
}

TEST_CASE("cache writes are byte-identical across reruns", "[serialize]") {
    const data::FeatureTable table = data::make_blobs(3, 10, 6, 4.0, 42);
    TempFile a("cache_rerun_a.hqtn");
    TempFile b("cache_rerun_b.hqtn");
    io::write_feature_cache(a.path, table);
    io::write_feature_cache(b.path, table);
    REQUIRE(slurp(a.path) == slurp(b.path));
}

TEST_CASE("checkpoint round trip preserves everything", "[serialize]") {
    model::ModelConfig config;
    config.input_dim = 6;
    config.n_classes = 3;
    config.n_qubits = 3;
    config.n_layers = 2;
    config.encoder_dims = {10, 5};
    config.mode = model::Mode::Hybrid;
    config.seed = 123;
    model::HybridModel model(config);

    io::Checkpoint checkpoint;
    checkpoint.config_echo["dataset"] = "savee";
    checkpoint.config_echo["seed"] = "123";
    checkpoint.model_config = config;
    checkpoint.params = model.params();

    // Attach a PCA block.
    Eigen::MatrixXd data = Eigen::MatrixXd::Random(20, 6);
    checkpoint.pca = pca::fit_pca(data, 4);

    TempFile tmp("checkpoint_tmp.hqtn");
    io::write_checkpoint(tmp.path, checkpoint);
    const io::Checkpoint loaded = io::read_checkpoint(tmp.path);

    REQUIRE(loaded.config_echo.at("dataset") == "savee");
    REQUIRE(loaded.config_echo.at("seed") == "123");
    REQUIRE(loaded.model_config.n_qubits == 3);
    REQUIRE(loaded.model_config.n_layers == 2);
    REQUIRE(loaded.model_config.encoder_dims == std::vector<int>{10, 5});
    REQUIRE(loaded.model_config.mode == model::Mode::Hybrid);

    REQUIRE(loaded.params.projection.weight == model.params().projection.weight);
    REQUIRE(loaded.params.theta == model.params().theta);
    REQUIRE(loaded.params.head.weight == model.params().head.weight);
    REQUIRE(loaded.params.encoder[1].bias == model.params().encoder[1].bias);

    REQUIRE(loaded.pca.has_value());
    REQUIRE(loaded.pca->mean == checkpoint.pca->mean);
    REQUIRE(loaded.pca->components == checkpoint.pca->components);
    REQUIRE(loaded.pca->explained_variance == checkpoint.pca->explained_variance);

    // A model rebuilt from the loaded checkpoint answers identically.
    model::HybridModel restored(loaded.model_config, loaded.params);
    const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(6, -1.0, 1.0);
    REQUIRE(restored.forward(x).probs == model.forward(x).probs);
}

TEST_CASE("checkpoint without pca and with ablation modes", "[serialize]") {
    model::ModelConfig config;
    config.input_dim = 4;
    config.n_classes = 2;
    config.n_qubits = 2;
    config.n_layers = 1;
    config.encoder_dims = {5};
    config.mode = model::Mode::QuantumOnly;
    model::HybridModel model(config);

    io::Checkpoint checkpoint;
    checkpoint.model_config = config;
    checkpoint.params = model.params();

    TempFile tmp("checkpoint_qonly_tmp.hqtn");
    io::write_checkpoint(tmp.path, checkpoint);
    const io::Checkpoint loaded = io::read_checkpoint(tmp.path);
    REQUIRE_FALSE(loaded.pca.has_value());
    REQUIRE(loaded.model_config.mode == model::Mode::QuantumOnly);
    REQUIRE(loaded.params.head.in_dim() == 2);

    REQUIRE_THROWS_AS(io::read_checkpoint("missing_ckpt.hqtn"), IoError);
}
