#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ivote/data/instance.hpp"

namespace ivote {

// Line-oriented text format, one record per line, # for comments:
//
//   IVOTE 1
//   MODEL <tag> <d> <k>
//   SPACE <d> <lo...> <hi...>
//   SEED <u64>
//   NOISE <double>
//   CFG <key> <value>            (0 or more)
//   GT <d doubles>               (optional planted point, normalized)
//   GTID <count> <ids...>        (optional planted item ids)
//   P|C|R|M <id> <doubles...>    (items; letter and arity fixed per model)
//
// Doubles are written with %.17g so reload is bit-exact.

namespace detail {

inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct LineError : std::runtime_error {
  LineError(const std::string& path, std::size_t line, const std::string& what)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + what) {}
};

}  // namespace detail

inline void save_instance(const ProblemInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "IVOTE 1\n";
  out << "# " << inst.model << " instance, " << inst.items.size() << " items\n";
  out << "MODEL " << inst.model << ' ' << inst.d << ' ' << inst.k << '\n';
  out << "SPACE " << inst.space.dim();
  for (int j = 0; j < inst.space.dim(); ++j) out << ' ' << detail::fmt_double(inst.space.lo[j]);
  for (int j = 0; j < inst.space.dim(); ++j) out << ' ' << detail::fmt_double(inst.space.hi[j]);
  out << '\n';
  out << "SEED " << inst.seed << '\n';
  out << "NOISE " << detail::fmt_double(inst.noise) << '\n';
  for (const auto& [key, value] : inst.config) out << "CFG " << key << ' ' << value << '\n';
  if (!inst.truth.empty()) {
    out << "GT";
    for (double v : inst.truth) out << ' ' << detail::fmt_double(v);
    out << '\n';
  }
  if (!inst.truth_ids.empty()) {
    out << "GTID " << inst.truth_ids.size();
    for (auto id : inst.truth_ids) out << ' ' << id;
    out << '\n';
  }
  for (const Item& it : inst.items) {
    out << it.kind << ' ' << it.id;
    for (double v : it.v) out << ' ' << detail::fmt_double(v);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline ProblemInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  ProblemInstance inst;
  std::string line, tok;
  std::size_t ln = 0;
  bool saw_magic = false, saw_model = false;
  while (std::getline(in, line)) {
    ++ln;
    std::istringstream ss(line);
    if (!(ss >> tok) || tok[0] == '#') continue;
    if (!saw_magic) {
      int ver = 0;
      if (tok != "IVOTE" || !(ss >> ver) || ver != 1)
        throw detail::LineError(path, ln, "expected header 'IVOTE 1'");
      saw_magic = true;
      continue;
    }
    if (tok == "MODEL") {
      if (!(ss >> inst.model >> inst.d >> inst.k))
        throw detail::LineError(path, ln, "MODEL needs <tag> <d> <k>");
      if (!known_model_tag(inst.model))
        throw detail::LineError(path, ln, "unknown model tag: " + inst.model);
      const ModelDims dims = model_dims(inst.model, inst.d);
      if (dims.d != inst.d || dims.k != inst.k)
        throw detail::LineError(path, ln, "dimensions do not match model " + inst.model);
      saw_model = true;
      continue;
    }
    if (tok == "SPACE") {
      int d = 0;
      if (!(ss >> d) || d < 1 || d > kMaxDim)
        throw detail::LineError(path, ln, "SPACE needs a dimension in [1, 7]");
      std::vector<double> lo(d), hi(d);
      for (int j = 0; j < d; ++j)
        if (!(ss >> lo[j])) throw detail::LineError(path, ln, "SPACE: too few bounds");
      for (int j = 0; j < d; ++j)
        if (!(ss >> hi[j])) throw detail::LineError(path, ln, "SPACE: too few bounds");
      try {
        inst.space = SpaceMap(std::move(lo), std::move(hi));
      } catch (const std::exception& e) {
        throw detail::LineError(path, ln, e.what());
      }
      continue;
    }
    if (tok == "SEED") {
      if (!(ss >> inst.seed)) throw detail::LineError(path, ln, "SEED needs an integer");
      continue;
    }
    if (tok == "NOISE") {
      if (!(ss >> inst.noise)) throw detail::LineError(path, ln, "NOISE needs a number");
      continue;
    }
    if (tok == "CFG") {
      std::string key, value;
      if (!(ss >> key >> value)) throw detail::LineError(path, ln, "CFG needs <key> <value>");
      inst.config.emplace_back(std::move(key), std::move(value));
      continue;
    }
    if (tok == "GT") {
      double v;
      inst.truth.clear();
      while (ss >> v) inst.truth.push_back(v);
      if (inst.truth.empty()) throw detail::LineError(path, ln, "GT needs coordinates");
      continue;
    }
    if (tok == "GTID") {
      std::size_t n = 0;
      if (!(ss >> n)) throw detail::LineError(path, ln, "GTID needs a count");
      inst.truth_ids.resize(n);
      for (std::size_t i = 0; i < n; ++i)
        if (!(ss >> inst.truth_ids[i]))
          throw detail::LineError(path, ln, "GTID: too few ids");
      continue;
    }
    if (tok.size() == 1 && (tok[0] == 'P' || tok[0] == 'C' || tok[0] == 'R' || tok[0] == 'M')) {
      if (!saw_model) throw detail::LineError(path, ln, "item before MODEL line");
      Item it;
      it.kind = tok[0];
      if (!(ss >> it.id)) throw detail::LineError(path, ln, "item needs an id");
      const int arity = item_arity_for(inst.model, inst.d);
      it.v.resize(arity);
      for (int j = 0; j < arity; ++j)
        if (!(ss >> it.v[j]))
          throw detail::LineError(path, ln, "item needs " + std::to_string(arity) + " values");
      inst.items.push_back(std::move(it));
      continue;
    }
    throw detail::LineError(path, ln, "unrecognized record: " + tok);
  }
  if (!saw_magic) throw std::runtime_error(path + ": empty or not an IVOTE file");
  if (!saw_model) throw std::runtime_error(path + ": missing MODEL line");
  if (inst.space.dim() == 0)
    throw std::runtime_error(path + ": missing SPACE line");
  if (inst.space.dim() != inst.d)
    throw std::runtime_error(path + ": SPACE dimension does not match model");
  if (!inst.truth.empty() && static_cast<int>(inst.truth.size()) != inst.d)
    throw std::runtime_error(path + ": GT dimension does not match model");
  return inst;
}

}  // namespace ivote
