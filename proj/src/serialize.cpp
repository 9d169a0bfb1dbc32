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

#include "hqtn/serialize.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include "hqtn/errors.hpp"

namespace hqtn::io {

namespace {

// Little-endian scalar writer/reader working on byte buffers. The in-memory
// layout of f32/f64 is IEEE-754 on all supported targets; only byte order
// needs normalizing.

class ByteWriter {
  public:
    void u8(std::uint8_t v) { bytes_.push_back(v); }
    void u16(std::uint16_t v) {
        bytes_.push_back(v & 0xFF);
        bytes_.push_back((v >> 8) & 0xFF);
    }
    void u32(std::uint32_t v) {
        for (int b = 0; b < 4; ++b) {
            bytes_.push_back((v >> (8 * b)) & 0xFF);
        }
    }
    void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
    void u64(std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            bytes_.push_back((v >> (8 * b)) & 0xFF);
        }
    }
    void f32(float v) {
        std::uint32_t bits;
        std::memcpy(&bits, &v, 4);
        u32(bits);
    }
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        u64(bits);
    }
    void tag(const char *t) { bytes_.insert(bytes_.end(), t, t + 4); }
    void raw(const std::string &s) { bytes_.insert(bytes_.end(), s.begin(), s.end()); }

    [[nodiscard]] const std::vector<unsigned char> &bytes() const { return bytes_; }

  private:
    std::vector<unsigned char> bytes_;
};

class ByteReader {
  public:
    ByteReader(const unsigned char *data, std::size_t size) : data_(data), size_(size) {}

    void require(std::size_t n) const {
        if (pos_ + n > size_) {
            throw FormatError("unexpected end of file");
        }
    }
    std::uint8_t u8() {
        require(1);
        return data_[pos_++];
    }
    std::uint16_t u16() {
        require(2);
        std::uint16_t v = static_cast<std::uint16_t>(data_[pos_] | data_[pos_ + 1] << 8);
        pos_ += 2;
        return v;
    }
    std::uint32_t u32() {
        require(4);
        std::uint32_t v = 0;
        for (int b = 0; b < 4; ++b) {
            v |= static_cast<std::uint32_t>(data_[pos_ + b]) << (8 * b);
        }
        pos_ += 4;
        return v;
    }
    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    std::uint64_t u64() {
        require(8);
        std::uint64_t v = 0;
        for (int b = 0; b < 8; ++b) {
            v |= static_cast<std::uint64_t>(data_[pos_ + b]) << (8 * b);
        }
        pos_ += 8;
        return v;
    }
    float f32() {
        const std::uint32_t bits = u32();
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }
    double f64() {
        const std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
    bool tag_is(const char *t) {
        require(4);
        const bool match = std::memcmp(data_ + pos_, t, 4) == 0;
        pos_ += 4;
        return match;
    }
    std::string raw(std::size_t n) {
        require(n);
        std::string s(reinterpret_cast<const char *>(data_ + pos_), n);
        pos_ += n;
        return s;
    }

  private:
    const unsigned char *data_;
    std::size_t size_;
    std::size_t pos_ = 0;
};

/// Writes a byte buffer under an exclusive advisory flock.
void write_locked(const std::string &path, const std::vector<unsigned char> &bytes) {
    const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fd < 0) {
        throw IoError("cannot open for writing: " + path);
    }
    ::flock(fd, LOCK_EX);
    std::size_t written = 0;
    bool ok = true;
    while (written < bytes.size()) {
        const ::ssize_t n = ::write(fd, bytes.data() + written, bytes.size() - written);
        if (n <= 0) {
            ok = false;
            break;
        }
        written += static_cast<std::size_t>(n);
    }
    ::flock(fd, LOCK_UN);
    ::close(fd);
    if (!ok) {
        throw IoError("failed writing: " + path);
    }
}

std::vector<unsigned char> read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open: " + path);
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_matrix(ByteWriter &w, const Eigen::MatrixXd &m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            w.f64(m(r, c));
        }
    }
}

void read_matrix(ByteReader &r, Eigen::MatrixXd &m) {
    for (Eigen::Index row = 0; row < m.rows(); ++row) {
        for (Eigen::Index col = 0; col < m.cols(); ++col) {
            m(row, col) = r.f64();
        }
    }
}

void write_vector(ByteWriter &w, const Eigen::VectorXd &v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        w.f64(v(i));
    }
}

void read_vector(ByteReader &r, Eigen::VectorXd &v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v(i) = r.f64();
    }
}

} // namespace

void write_feature_cache(const std::string &path, const data::FeatureTable &table) {
    ByteWriter w;
    w.tag("HQTN");
    w.u16(kCacheVersion);
    w.u32(static_cast<std::uint32_t>(table.records.size()));
    w.u16(static_cast<std::uint16_t>(table.dim));
    w.u16(static_cast<std::uint16_t>(table.n_classes));
    for (const data::FeatureRecord &record : table.records) {
        if (record.features.size() != static_cast<std::size_t>(table.dim)) {
            throw DimensionError("record feature length differs from table dim");
        }
        w.u16(static_cast<std::uint16_t>(record.label));
        w.i32(record.speaker);
        for (const double v : record.features) {
            w.f32(static_cast<float>(v));
        }
    }
    write_locked(path, w.bytes());
}

data::FeatureTable read_feature_cache(const std::string &path, const std::string &tag) {
    const std::vector<unsigned char> bytes = read_file(path);
    ByteReader r(bytes.data(), bytes.size());
    if (!r.tag_is("HQTN")) {
        throw FormatError("not a feature cache (bad magic): " + path);
    }
    const std::uint16_t version = r.u16();
    if (version != kCacheVersion) {
        throw FormatError("unsupported cache version " + std::to_string(version));
    }
    data::FeatureTable table;
    const std::uint32_t count = r.u32();
    table.dim = r.u16();
    table.n_classes = r.u16();
    table.records.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        data::FeatureRecord record;
        record.label = r.u16();
        record.speaker = r.i32();
        record.dataset_tag = tag;
        record.features.resize(static_cast<std::size_t>(table.dim));
        for (int d = 0; d < table.dim; ++d) {
            record.features[static_cast<std::size_t>(d)] = static_cast<double>(r.f32());
        }
        table.records.push_back(std::move(record));
    }
    return table;
}

void write_checkpoint(const std::string &path, const Checkpoint &checkpoint) {
    ByteWriter w;
    w.tag("HQTM");
    w.u16(kCheckpointVersion);

    std::ostringstream echo;
    for (const auto &[key, value] : checkpoint.config_echo) {
        echo << key << " = " << value << "\n";
    }
    const std::string echo_str = echo.str();
    w.u32(static_cast<std::uint32_t>(echo_str.size()));
    w.raw(echo_str);

    if (checkpoint.pca.has_value()) {
        const pca::PcaModel &pca_model = *checkpoint.pca;
        w.u8(1);
        w.u32(static_cast<std::uint32_t>(pca_model.input_dim()));
        w.u16(static_cast<std::uint16_t>(pca_model.k()));
        write_vector(w, pca_model.mean);
        write_matrix(w, pca_model.components);
        write_vector(w, pca_model.explained_variance);
    } else {
        w.u8(0);
    }

    const model::ModelConfig &config = checkpoint.model_config;
    const model::HybridParams &params = checkpoint.params;
    w.u8(static_cast<std::uint8_t>(config.mode));
    w.u16(static_cast<std::uint16_t>(config.n_qubits));
    w.u16(static_cast<std::uint16_t>(config.n_layers));
    w.u16(static_cast<std::uint16_t>(config.input_dim));
    w.u16(static_cast<std::uint16_t>(config.n_classes));
    w.u16(static_cast<std::uint16_t>(config.encoder_dims.size()));
    for (std::size_t i = 0; i < config.encoder_dims.size(); ++i) {
        w.u16(static_cast<std::uint16_t>(params.encoder[i].out_dim()));
        w.u16(static_cast<std::uint16_t>(params.encoder[i].in_dim()));
    }

    write_matrix(w, params.projection.weight);
    write_vector(w, params.projection.bias);
    for (const double angle : params.theta) {
        w.f64(angle);
    }
    for (const nn::DenseLayer &layer : params.encoder) {
        write_matrix(w, layer.weight);
        write_vector(w, layer.bias);
    }
    write_matrix(w, params.head.weight);
    write_vector(w, params.head.bias);

    write_locked(path, w.bytes());
}

Checkpoint read_checkpoint(const std::string &path) {
    const std::vector<unsigned char> bytes = read_file(path);
    ByteReader r(bytes.data(), bytes.size());
    if (!r.tag_is("HQTM")) {
        throw FormatError("not a model checkpoint (bad magic): " + path);
    }
    const std::uint16_t version = r.u16();
    if (version != kCheckpointVersion) {
        throw FormatError("unsupported checkpoint version " + std::to_string(version));
    }

    Checkpoint checkpoint;
    const std::uint32_t echo_len = r.u32();
    const std::string echo = r.raw(echo_len);
    std::istringstream lines(echo);
    std::string line;
    while (std::getline(lines, line)) {
        const std::size_t eq = line.find(" = ");
        if (eq != std::string::npos) {
            checkpoint.config_echo[line.substr(0, eq)] = line.substr(eq + 3);
        }
    }

    if (r.u8() == 1) {
        pca::PcaModel pca_model;
        const std::uint32_t dim = r.u32();
        const std::uint16_t k = r.u16();
        pca_model.mean.resize(dim);
        pca_model.components.resize(dim, k);
        pca_model.explained_variance.resize(k);
        read_vector(r, pca_model.mean);
        read_matrix(r, pca_model.components);
        read_vector(r, pca_model.explained_variance);
        checkpoint.pca = std::move(pca_model);
    }

    model::ModelConfig &config = checkpoint.model_config;
    config.mode = static_cast<model::Mode>(r.u8());
    config.n_qubits = r.u16();
    config.n_layers = r.u16();
    config.input_dim = r.u16();
    config.n_classes = r.u16();
    const std::uint16_t depth = r.u16();
    config.encoder_dims.clear();
    std::vector<std::pair<int, int>> layer_shapes;
    for (std::uint16_t i = 0; i < depth; ++i) {
        const int out = r.u16();
        const int in = r.u16();
        layer_shapes.emplace_back(out, in);
        config.encoder_dims.push_back(out);
    }

    model::HybridParams &params = checkpoint.params;
    params.projection.weight.resize(config.n_qubits, config.input_dim);
    params.projection.bias.resize(config.n_qubits);
    read_matrix(r, params.projection.weight);
    read_vector(r, params.projection.bias);

    params.theta.resize(2 * static_cast<std::size_t>(config.n_qubits) *
                        static_cast<std::size_t>(config.n_layers));
    for (double &angle : params.theta) {
        angle = r.f64();
    }
    for (const auto &[out, in] : layer_shapes) {
        nn::DenseLayer layer;
        layer.weight.resize(out, in);
        layer.bias.resize(out);
        layer.activation = nn::Activation::Relu;
        read_matrix(r, layer.weight);
        read_vector(r, layer.bias);
        params.encoder.push_back(std::move(layer));
    }

    int fused = config.encoder_dims.empty() ? config.input_dim : config.encoder_dims.back();
    if (config.mode == model::Mode::Hybrid) {
        fused += config.n_qubits;
    } else if (config.mode == model::Mode::QuantumOnly) {
        fused = config.n_qubits;
    }
    params.head.weight.resize(config.n_classes, fused);
    params.head.bias.resize(config.n_classes);
    params.head.activation = nn::Activation::None;
    read_matrix(r, params.head.weight);
    read_vector(r, params.head.bias);

    return checkpoint;
}

} // namespace hqtn::io
