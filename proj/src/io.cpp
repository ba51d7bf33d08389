#include "rspolar/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace rspolar {

using nlohmann::json;

namespace {

json meta_json(const DesignMetadata& m) {
  return {{"method", m.method},     {"ebn0_db", m.ebn0_db},         {"estimate_rate", m.estimate_rate},
          {"trials", m.trials},     {"seed", m.seed},               {"target_rate", m.target_rate},
          {"pe", m.pe}};
}

DesignMetadata meta_from(const json& j) {
  DesignMetadata m;
  if (!j.is_object()) return m;
  m.method = j.value("method", "");
  m.ebn0_db = j.value("ebn0_db", 0.0);
  m.estimate_rate = j.value("estimate_rate", 0.0);
  m.trials = j.value("trials", std::uint64_t{0});
  m.seed = j.value("seed", std::uint64_t{0});
  m.target_rate = j.value("target_rate", 0.0);
  m.pe = j.value("pe", 0.0);
  return m;
}

void check_version(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("expected a JSON object");
  const int v = doc.value("format_version", -1);
  if (v != kFormatVersion)
    throw std::invalid_argument("unsupported format_version " + std::to_string(v));
}

PolarCode polar_from(const json& doc) {
  const auto n = doc.at("n").get<std::size_t>();
  const auto k = doc.at("k").get<std::size_t>();
  const auto frozen = doc.at("frozen").get<std::vector<std::size_t>>();
  std::vector<std::uint8_t> is_frozen(n, 0);
  for (std::size_t f : frozen) {
    if (f >= n) throw std::invalid_argument("frozen position out of range");
    is_frozen[f] = 1;
  }
  std::vector<std::size_t> info;
  for (std::size_t i = 0; i < n; ++i)
    if (!is_frozen[i]) info.push_back(i);
  if (info.size() != k) throw std::invalid_argument("frozen set inconsistent with k");
  std::vector<double> rel;
  if (doc.contains("reliabilities")) rel = doc.at("reliabilities").get<std::vector<double>>();
  return PolarCode(n, std::move(info), std::move(rel));
}

}  // namespace

json to_json(const ConcatCode& code, const DesignMetadata& meta) {
  json doc = {{"format_version", kFormatVersion},
              {"kind", "concat"},
              {"n", code.polar().length()},
              {"k", code.polar().dimension()},
              {"t", code.symbol_bits()},
              {"m", code.blocks()},
              {"prim_poly", code.field().polynomial()},
              {"frozen", code.polar().frozen_positions()},
              {"taus", code.taus()},
              {"payload_bits", code.payload_bits()},
              {"total_rate", code.total_rate()},
              {"design", meta_json(meta)}};
  if (!code.polar().reliabilities().empty()) doc["reliabilities"] = code.polar().reliabilities();
  return doc;
}

json to_json(const PolarCode& code, const DesignMetadata& meta) {
  json doc = {{"format_version", kFormatVersion},
              {"kind", "polar"},
              {"n", code.length()},
              {"k", code.dimension()},
              {"frozen", code.frozen_positions()},
              {"design", meta_json(meta)}};
  if (!code.reliabilities().empty()) doc["reliabilities"] = code.reliabilities();
  return doc;
}

CodeFile code_from_json(const json& doc) {
  check_version(doc);
  CodeFile out;
  out.design = meta_from(doc.value("design", json::object()));
  const std::string kind = doc.at("kind").get<std::string>();
  if (kind == "polar") {
    out.polar.emplace(polar_from(doc));
  } else if (kind == "concat") {
    const auto t = doc.at("t").get<unsigned>();
    const auto prim = doc.value("prim_poly", GaloisField::default_polynomial(t));
    auto field = std::make_shared<const GaloisField>(t, prim);
    out.concat.emplace(polar_from(doc), std::move(field), doc.at("m").get<std::size_t>(),
                       doc.at("taus").get<std::vector<std::size_t>>());
  } else {
    throw std::invalid_argument("unknown code kind '" + kind + "'");
  }
  return out;
}

CodeFile load_code(const std::filesystem::path& path) { return code_from_json(read_json(path)); }

json to_json(const ReliabilityFile& rel) {
  return {{"format_version", kFormatVersion},
          {"kind", "reliability"},
          {"method", rel.method},
          {"n", rel.values.size()},
          {"channel",
           {{"kind", to_string(rel.channel.kind)},
            {"ebn0_db", rel.channel.ebn0_db},
            {"rate", rel.channel.rate},
            {"eps", rel.channel.eps}}},
          {"trials", rel.trials},
          {"seed", rel.seed},
          {"values", rel.values}};
}

ReliabilityFile reliability_from_json(const json& doc) {
  check_version(doc);
  if (doc.value("kind", "") != "reliability") throw std::invalid_argument("not a reliability file");
  ReliabilityFile out;
  out.values = doc.at("values").get<std::vector<double>>();
  out.method = doc.value("method", "");
  out.trials = doc.value("trials", std::uint64_t{0});
  out.seed = doc.value("seed", std::uint64_t{0});
  if (doc.contains("channel")) {
    const json& c = doc.at("channel");
    out.channel.kind = channel_kind_from_string(c.value("kind", "awgn"));
    out.channel.ebn0_db = c.value("ebn0_db", 0.0);
    out.channel.rate = c.value("rate", 1.0);
    out.channel.eps = c.value("eps", 0.0);
  }
  if (out.values.size() != doc.value("n", out.values.size()))
    throw std::invalid_argument("reliability vector length disagrees with n");
  return out;
}

ReliabilityFile load_reliabilities(const std::filesystem::path& path) {
  return reliability_from_json(read_json(path));
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp);
      throw std::runtime_error("short write to " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace rspolar
