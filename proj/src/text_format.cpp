#include "orbicert/text_format.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "orbicert/error.hpp"

namespace orbicert {

std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

Json to_json(const Rational& q) { return to_string(q); }

Json to_json(const RationalMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Covector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

Json to_json(const Multiplicity& m) {
  if (m.is_infinite()) return "inf";
  return m.value();
}

Json to_json(const MPoly& f) {
  Json out = Json::array();
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    Json exps = Json::object();
    for (const auto& [key, e] : it->first.entries()) exps[Variable::from_key(key).name()] = e;
    out.push_back({{"coefficient", to_string(it->second)}, {"exponents", exps}});
  }
  return out;
}

Json to_json(const Arrangement& arr) {
  Json out;
  out["n"] = arr.n();
  Json hs = Json::array();
  for (const auto& h : arr.covectors()) hs.push_back(to_json(h));
  out["covectors"] = hs;
  if (arr.multiplicities()) {
    Json ms = Json::array();
    for (const auto& m : *arr.multiplicities()) ms.push_back(to_json(m));
    out["multiplicities"] = ms;
  }
  return out;
}

Json to_json(const NormalizedArrangement& na) {
  return {{"arrangement", to_json(na.base)},
          {"pivot", na.pivot},
          {"others", na.others},
          {"change", to_json(na.change)},
          {"A", to_json(na.A)},
          {"n", na.n()},
          {"k", na.k()}};
}

Json to_json(const FermatCover& cov) {
  Json eqs = Json::array();
  for (std::size_t j = 1; j <= cov.k(); ++j) eqs.push_back(to_string(cov.equation(j)));
  return {{"n", cov.n}, {"k", cov.k()}, {"m", cov.m}, {"A", to_json(cov.A)}, {"equations", eqs}};
}

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw InputError("expected a rational string, got " + j.dump());
}

RationalMatrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("expected a matrix (array of rows)");
  std::vector<std::vector<Rational>> rows;
  for (const auto& row : j) {
    if (!row.is_array()) throw InputError("matrix row is not an array");
    std::vector<Rational> r;
    for (const auto& x : row) r.push_back(rational_from_json(x));
    if (!rows.empty() && r.size() != rows.front().size())
      throw InputError("ragged matrix rows");
    rows.push_back(std::move(r));
  }
  return RationalMatrix::from_rows(rows);
}

Multiplicity multiplicity_from_json(const Json& j) {
  if (j.is_string() && (j == "inf" || j == "infinity")) return Multiplicity::infinite();
  if (j.is_number_integer()) {
    const auto v = j.get<long long>();
    if (v >= 2 && v <= 1000000) return Multiplicity::finite(static_cast<std::uint32_t>(v));
  }
  throw InputError("multiplicity must be an integer >= 2 or \"inf\", got " + j.dump());
}

Arrangement arrangement_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("arrangement must be an object");
  if (!j.contains("n") || !j["n"].is_number_unsigned())
    throw InputError("field \"n\" must be a nonnegative integer");
  if (!j.contains("covectors") || !j["covectors"].is_array())
    throw InputError("field \"covectors\" must be an array");
  const auto n = j["n"].get<std::size_t>();
  std::vector<Covector> hs;
  for (const auto& row : j["covectors"]) {
    if (!row.is_array() || row.size() != n + 1)
      throw InputError("covector " + std::to_string(hs.size()) + " must have n + 1 = " +
                       std::to_string(n + 1) + " entries");
    Covector h;
    bool nonzero = false;
    for (const auto& x : row) {
      h.push_back(rational_from_json(x));
      nonzero = nonzero || !is_zero(h.back());
    }
    if (!nonzero) throw InputError("covector " + std::to_string(hs.size()) + " is zero");
    hs.push_back(std::move(h));
  }
  if (hs.empty()) throw InputError("arrangement needs at least one covector");
  std::optional<std::vector<Multiplicity>> ms;
  if (j.contains("multiplicities") && !j["multiplicities"].is_null()) {
    if (!j["multiplicities"].is_array() || j["multiplicities"].size() != hs.size())
      throw InputError("\"multiplicities\" must list one value per covector");
    ms.emplace();
    for (const auto& m : j["multiplicities"]) ms->push_back(multiplicity_from_json(m));
  }
  return Arrangement(n, std::move(hs), std::move(ms));
}

FermatCover cover_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("m") || !j.contains("A"))
    throw InputError("cover needs fields n, m, A");
  if (!j["n"].is_number_unsigned() || !j["m"].is_number_unsigned())
    throw InputError("cover n and m must be nonnegative integers");
  const auto n = j["n"].get<std::size_t>();
  const auto m = j["m"].get<std::uint32_t>();
  RationalMatrix A = matrix_from_json(j["A"]);
  if (A.rows() > 0 && A.cols() != n + 1) throw InputError("cover A must have n + 1 columns");
  if (m < 2) throw InputError("cover m must be >= 2");
  return build_cover(n, A, m);
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("write failed: " + path.string());
}

Arrangement read_arrangement(const std::filesystem::path& path) {
  const Json j = read_json_file(path);
  try {
    return arrangement_from_json(j);
  } catch (const PreconditionError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace orbicert
