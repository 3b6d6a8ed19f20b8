/**
 * This code is part of petzrec.
 *
 * (C) Copyright petzrec developers 2026.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "petzrec/serialization.hpp"

#include <fstream>
#include <sstream>

namespace petzrec {

namespace {

Json matrix_to_json(const Matrix &m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) {
      row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json &j, int rows, int cols) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows) {
    throw ConfigError("matrix_from_json: bad row count");
  }
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const Json &row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      throw ConfigError("matrix_from_json: bad column count");
    }
    for (int c = 0; c < cols; ++c) {
      const Json &entry = row[c];
      if (!entry.is_array() || entry.size() != 2) {
        throw ConfigError("matrix_from_json: entry is not [re, im]");
      }
      m(r, c) = Complex(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  return m;
}

}  // namespace

Json algebra_to_json(const TracialAlgebra &algebra) {
  return Json{{"block_dims", algebra.block_dims()},
              {"trace_weights", algebra.trace_weights()}};
}

AlgebraPtr algebra_from_json(const Json &j) {
  try {
    return TracialAlgebra::make(j.at("block_dims").get<std::vector<int>>(),
                                j.at("trace_weights").get<std::vector<double>>());
  } catch (const Json::exception &e) {
    throw ConfigError(std::string("algebra_from_json: ") + e.what());
  }
}

Json element_to_json(const AlgebraElement &x) {
  Json blocks = Json::array();
  for (const auto &b : x.blocks()) blocks.push_back(matrix_to_json(b));
  return Json{{"algebra", algebra_to_json(*x.algebra())},
              {"blocks", std::move(blocks)}};
}

AlgebraElement element_from_json(const Json &j) {
  try {
    AlgebraPtr alg = algebra_from_json(j.at("algebra"));
    const Json &blocks = j.at("blocks");
    if (!blocks.is_array() ||
        static_cast<int>(blocks.size()) != alg->num_blocks()) {
      throw ConfigError("element_from_json: block count mismatch");
    }
    std::vector<Matrix> mats;
    for (int i = 0; i < alg->num_blocks(); ++i) {
      const int n = alg->block_dim(i);
      mats.push_back(matrix_from_json(blocks[i], n, n));
    }
    return AlgebraElement(alg, std::move(mats));
  } catch (const Json::exception &e) {
    throw ConfigError(std::string("element_from_json: ") + e.what());
  }
}

Json channel_to_json(const Channel &phi) {
  Json kraus = Json::array();
  for (const auto &k : phi.kraus()) kraus.push_back(matrix_to_json(k));
  return Json{{"source", algebra_to_json(*phi.source())},
              {"target", algebra_to_json(*phi.target())},
              {"kraus", std::move(kraus)}};
}

Channel channel_from_json(const Json &j) {
  try {
    AlgebraPtr source = algebra_from_json(j.at("source"));
    AlgebraPtr target = algebra_from_json(j.at("target"));
    const Json &kraus_json = j.at("kraus");
    if (!kraus_json.is_array() || kraus_json.empty()) {
      throw ConfigError("channel_from_json: missing Kraus list");
    }
    std::vector<Matrix> kraus;
    for (const auto &kj : kraus_json) {
      kraus.push_back(
          matrix_from_json(kj, target->total_dim(), source->total_dim()));
    }
    return Channel(source, target, std::move(kraus));
  } catch (const Json::exception &e) {
    throw ConfigError(std::string("channel_from_json: ") + e.what());
  }
}

Json instance_to_json(const TrialInstance &inst) {
  Json j{{"schema_version", 1},
         {"kind", inst.kind},
         {"family", inst.family},
         {"trial_id", inst.trial_id},
         {"seed", inst.seed},
         {"floor_delta", inst.floor_delta},
         {"algebra", algebra_to_json(*inst.algebra)}};
  if (inst.a) j["a"] = element_to_json(*inst.a);
  if (inst.b) j["b"] = element_to_json(*inst.b);
  if (inst.channel) j["channel"] = channel_to_json(*inst.channel);
  return j;
}

TrialInstance instance_from_json(const Json &j) {
  TrialInstance inst;
  try {
    inst.kind = j.at("kind").get<std::string>();
    inst.family = j.at("family").get<std::string>();
    inst.trial_id = j.at("trial_id").get<std::uint64_t>();
    inst.seed = j.at("seed").get<std::uint64_t>();
    inst.floor_delta = j.at("floor_delta").get<double>();
    inst.algebra = algebra_from_json(j.at("algebra"));
    if (j.contains("a")) inst.a = StateElement(element_from_json(j["a"]));
    if (j.contains("b")) {
      inst.b = ReferenceState(element_from_json(j["b"]), inst.floor_delta);
    }
    if (j.contains("channel")) inst.channel = channel_from_json(j["channel"]);
  } catch (const Json::exception &e) {
    throw ConfigError(std::string("instance_from_json: ") + e.what());
  }
  return inst;
}

void write_json_file(const std::string &path, const Json &j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

Json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open: " + path);
  try {
    Json j;
    in >> j;
    return j;
  } catch (const Json::exception &e) {
    throw ConfigError("malformed JSON in " + path + ": " + e.what());
  }
}

}  // namespace petzrec
