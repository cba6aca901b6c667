// Copyright (c) 2026, smoe-bounds contributors
// SPDX-License-Identifier: Apache-2.0

#include "smoe/model_io.hpp"

#include "smoe/error.hpp"

namespace smoe {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::vector<double>(m.data().begin(), m.data().end())}};
}

Matrix matrix_from_json(const json& j) {
    try {
        const auto rows = j.at("rows").get<std::size_t>();
        const auto cols = j.at("cols").get<std::size_t>();
        return Matrix(rows, cols, j.at("data").get<std::vector<double>>());
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed matrix: ") + e.what());
    }
}

namespace {

json net_to_json(const DenseNet& net) {
    json layers = json::array();
    for (const auto& w : net.layers()) {
        layers.push_back(matrix_to_json(w));
    }
    return layers;
}

DenseNet net_from_json(const json& j) {
    if (!j.is_array()) {
        throw InputError("network must be an array of matrices");
    }
    std::vector<Matrix> layers;
    for (const auto& m : j) {
        layers.push_back(matrix_from_json(m));
    }
    return DenseNet(std::move(layers));
}

}  // namespace

json model_to_json(const SMoEModel& model) {
    json experts = json::array();
    for (const auto& e : model.experts()) {
        experts.push_back(net_to_json(e));
    }
    return json{{"d", model.input_dim()},
                {"T", model.expert_count()},
                {"k", model.k()},
                {"router", net_to_json(model.router())},
                {"experts", std::move(experts)}};
}

SMoEModel model_from_json(const json& j) {
    try {
        std::vector<DenseNet> experts;
        for (const auto& e : j.at("experts")) {
            experts.push_back(net_from_json(e));
        }
        SMoEModel model(std::move(experts), net_from_json(j.at("router")), j.at("k").get<std::size_t>());
        if (model.input_dim() != j.at("d").get<std::size_t>() || model.expert_count() != j.at("T").get<std::size_t>()) {
            throw InputError("model header (d, T) disagrees with its matrices");
        }
        return model;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed model JSON: ") + e.what());
    }
}

std::string dump_model(const SMoEModel& model) { return model_to_json(model).dump(); }

SMoEModel parse_model(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("model JSON does not parse: ") + e.what());
    }
    return model_from_json(j);
}

}  // namespace smoe
